#include "wavelab/shallow.hpp"

#include <atomic>
#include <cmath>
#include <thread>

namespace wavelab {

DisturbanceProfile DisturbanceProfile::gaussian_traveling(Real speed, Real width) {
  DisturbanceProfile p;
  p.kind = Kind::traveling;
  p.speed = speed;
  const Real w2 = width * width;
  p.f0 = [w2](Real y) { return std::exp(-0.5 * y * y / w2); };
  p.f0_dx = [w2](Real y) { return -(y / w2) * std::exp(-0.5 * y * y / w2); };
  return p;
}

namespace {

Real simpson(const std::function<Real(Real)>& g, Real a, Real b, Index panels) {
  if (panels < 2) throw ConfigError("quadrature needs at least 2 panels");
  if (panels % 2 == 1) ++panels;
  const Real h = (b - a) / static_cast<Real>(panels);
  Real s = g(a) + g(b);
  for (Index i = 1; i < panels; ++i) s += g(a + h * i) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3;
}

}  // namespace

Real dalembert_hR(const DisturbanceProfile& f, Real t, Real x, Index quadrature_n) {
  if (t < 0) throw ConfigError("dalembert_hR: t must be nonnegative");
  if (t == 0) return 0;
  if (f.kind == DisturbanceProfile::Kind::traveling) {
    const Real u = f.speed;
    if (std::abs(1 - u) < 1e-12) return 0.5 * t * f.f0_dx(x - t);
    return (f.f0(x - u * t) - f.f0(x - t)) / (2 * (1 - u));
  }
  return 0.5 * simpson([&](Real tau) { return f.slope(tau, x - t + tau); }, 0, t, quadrature_n);
}

Real dalembert_hL(const DisturbanceProfile& f, Real t, Real x, Index quadrature_n) {
  if (t < 0) throw ConfigError("dalembert_hL: t must be nonnegative");
  if (t == 0) return 0;
  if (f.kind == DisturbanceProfile::Kind::traveling) {
    const Real u = f.speed;
    return (f.f0(x + t) - f.f0(x - u * t)) / (2 * (1 + u));
  }
  return 0.5 * simpson([&](Real tau) { return f.slope(tau, x + t - tau); }, 0, t, quadrature_n);
}

Real dalembert_h(const DisturbanceProfile& f, Real t, Real x, Index quadrature_n) {
  return dalembert_hL(f, t, x, quadrature_n) - dalembert_hR(f, t, x, quadrature_n);
}

ArrayXr second_difference(const ArrayXr& u, Real dx) {
  const Index n = u.size();
  ArrayXr d(n);
  const Real s = Real(1) / (dx * dx);
  // difference-of-differences association matches the variable-coefficient
  // flux stencil exactly when h0 = 1
  for (Index i = 0; i < n; ++i) {
    const Index im = i == 0 ? n - 1 : i - 1;
    const Index ip = i == n - 1 ? 0 : i + 1;
    d[i] = ((u[ip] - u[i]) - (u[i] - u[im])) * s;
  }
  return d;
}

namespace {

ArrayXr sample_forcing(const DisturbanceProfile& f, Real t, const Grid1D& g) {
  ArrayXr out(g.n);
  for (Index i = 0; i < g.n; ++i) out[i] = f.value(t, g.node(i));
  return out;
}

void check_cfl(Real dt, const Grid1D& grid) {
  if (!(dt > 0)) throw ConfigError("dt must be positive");
  if (dt > grid.dx() + 1e-15)
    throw ConfigError("CFL violation: dt = " + std::to_string(dt) + " exceeds dx = " +
                      std::to_string(grid.dx()) + " (unit wave speed)");
}

}  // namespace

ShallowState initial_shallow_state(const Grid1D& grid, const DisturbanceProfile& forcing,
                                   Real dt, const std::optional<Field1D>& b0) {
  grid.validate();
  check_cfl(dt, grid);
  Field1D h0 = b0 ? Field1D{grid, -b0->v} : zero_field(grid);
  // Taylor ghost level h(-dt) = h(0) + (dt^2/2)(h_XX + f_XX); dh/dt(0) = 0.
  const ArrayXr acc =
      second_difference(h0.v, grid.dx()) + second_difference(sample_forcing(forcing, 0, grid), grid.dx());
  Field1D ghost{grid, h0.v + 0.5 * dt * dt * acc};
  return ShallowState{h0, ghost, 0.0};
}

ShallowState step_fd(const ShallowState& state, const DisturbanceProfile& forcing, Real dt,
                     const Grid1D& grid) {
  check_cfl(dt, grid);
  require_same_grid(state.h.grid, grid, "step_fd");
  const ArrayXr lap_h = second_difference(state.h.v, grid.dx());
  const ArrayXr lap_f = second_difference(sample_forcing(forcing, state.t, grid), grid.dx());
  ShallowState next;
  next.h = Field1D{grid, 2 * state.h.v - state.h_prev.v + dt * dt * (lap_h + lap_f)};
  next.h_prev = state.h;
  next.t = state.t + dt;
  return next;
}

void ShallowRunConfig::validate() const {
  grid.validate();
  check_cfl(dt, grid);
  if (!(t_end > 0)) throw ConfigError("t_end must be positive");
  if (record_stride < 1) throw ConfigError("record_stride must be >= 1");
}

namespace {

void record_max(MaxSeries& out, const Field1D& h, Real t, Real window_halfwidth) {
  const Grid1D& g = h.grid;
  Index lo = 0, hi = g.n - 1;
  if (window_halfwidth > 0) {
    lo = static_cast<Index>(std::floor((t - window_halfwidth - g.x_min) / g.dx()));
    hi = static_cast<Index>(std::ceil((t + window_halfwidth - g.x_min) / g.dx()));
    lo = std::max<Index>(lo, 0);
    hi = std::min<Index>(hi, g.n - 1);
    if (hi < lo) {
      lo = 0;
      hi = g.n - 1;
    }
  }
  Real best = -1, bx = g.node(lo);
  for (Index i = lo; i <= hi; ++i) {
    const Real a = std::abs(h.v[i]);
    if (a > best) {
      best = a;
      bx = g.node(i);
    }
  }
  out.push(t, best, bx);
}

}  // namespace

MaxSeries run_shallow(const DisturbanceProfile& forcing, const ShallowRunConfig& cfg,
                      const std::optional<Field1D>& b0) {
  cfg.validate();
  ShallowState s = initial_shallow_state(cfg.grid, forcing, cfg.dt, b0);
  MaxSeries series;
  record_max(series, s.h, s.t, cfg.window_halfwidth);
  const Index steps = static_cast<Index>(std::llround(cfg.t_end / cfg.dt));
  for (Index k = 1; k <= steps; ++k) {
    s = step_fd(s, forcing, cfg.dt, cfg.grid);
    if (k % cfg.record_stride == 0 || k == steps)
      record_max(series, s.h, s.t, cfg.window_halfwidth);
  }
  if (!s.h.v.isFinite().all()) throw NumericalError("run_shallow: non-finite state");
  return series;
}

Field1D run_shallow_final_field(const DisturbanceProfile& forcing, const ShallowRunConfig& cfg,
                                const std::optional<Field1D>& b0) {
  cfg.validate();
  ShallowState s = initial_shallow_state(cfg.grid, forcing, cfg.dt, b0);
  const Index steps = static_cast<Index>(std::llround(cfg.t_end / cfg.dt));
  for (Index k = 1; k <= steps; ++k) s = step_fd(s, forcing, cfg.dt, cfg.grid);
  return s.h;
}

std::vector<MaxSeries> run_proudman_sweep(const std::vector<Real>& speeds,
                                          const DisturbanceProfile& base_profile,
                                          const ShallowRunConfig& cfg, int jobs) {
  if (speeds.empty()) throw ConfigError("run_proudman_sweep: speed list is empty");
  cfg.validate();
  std::vector<MaxSeries> results(speeds.size());
  const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(speeds.size())));

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= speeds.size()) return;
      DisturbanceProfile p = base_profile;
      p.speed = speeds[i];
      results[i] = run_shallow(p, cfg);
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return results;
}

}  // namespace wavelab
