#include "wavelab/topo.hpp"

#include <cmath>

namespace wavelab {

namespace {

// C-infinity step: 0 below 0, 1 above 1.
Real smoothstep(Real x) {
  if (x <= 0) return 0;
  if (x >= 1) return 1;
  const Real a = std::exp(-1 / x);
  const Real b = std::exp(-1 / (1 - x));
  return a / (a + b);
}

}  // namespace

Bathymetry make_bathymetry(const Grid1D& grid, const std::function<Real(Real)>& b0_fn, Real beta,
                           Real blend_fraction) {
  grid.validate();
  if (blend_fraction < 0 || blend_fraction > 0.4)
    throw ConfigError("bathymetry blend_fraction must lie in [0, 0.4]");

  // Taper the profile to zero over the outer band on each side so the
  // periodic seam is continuous.
  const Real span = grid.length();
  const Real band = blend_fraction * span;
  auto blended = [&](Real x) {
    if (band == 0) return b0_fn(x);
    const Real from_left = x - grid.x_min;
    const Real from_right = grid.x_max - x;
    const Real w = smoothstep(std::min(from_left, from_right) / band);
    return w * b0_fn(x);
  };

  Bathymetry b;
  b.grid = grid;
  b.beta = beta;
  b.b0 = make_field(grid, blended);
  b.h0 = 1 - beta * b.b0.v;
  b.h0_mid = ArrayXr(grid.n);
  for (Index i = 0; i < grid.n; ++i)
    b.h0_mid[i] = 1 - beta * blended(grid.node(i) + 0.5 * grid.dx());
  b.h_min = std::min(b.h0.minCoeff(), b.h0_mid.minCoeff());
  b.validate();
  return b;
}

Bathymetry flat_bathymetry(const Grid1D& grid) {
  return make_bathymetry(grid, [](Real) { return 0.0; }, 0.0, 0.0);
}

LandslideMotion LandslideMotion::from_profile(std::function<Real(Real)> f_slope) {
  LandslideMotion m;
  m.kind = Kind::constructed;
  m.profile_slope = std::move(f_slope);
  m.which = "profile";
  return m;
}

LandslideMotion LandslideMotion::from_rate(std::function<Real(Real)> rate) {
  LandslideMotion m;
  m.kind = Kind::constructed;
  m.initial_rate = std::move(rate);
  m.which = "rate";
  return m;
}

LandslideMotion LandslideMotion::none() {
  LandslideMotion m;
  m.kind = Kind::tabulated;
  m.which = "none";
  m.d2bm_dt2 = [](Real, Real) { return 0.0; };
  return m;
}

ArrayXr flux_laplacian(const ArrayXr& u, const Bathymetry& bathy) {
  const Index n = u.size();
  const Real s = Real(1) / (bathy.grid.dx() * bathy.grid.dx());
  ArrayXr d(n);
  for (Index i = 0; i < n; ++i) {
    const Index im = i == 0 ? n - 1 : i - 1;
    const Index ip = i == n - 1 ? 0 : i + 1;
    d[i] = (bathy.h0_mid[i] * (u[ip] - u[i]) - bathy.h0_mid[im] * (u[i] - u[im])) * s;
  }
  return d;
}

void check_topo_cfl(Real dt, const Grid1D& grid, const Bathymetry& bathy) {
  if (!(dt > 0)) throw ConfigError("dt must be positive");
  const Real cmax = std::sqrt(std::max(bathy.h0.maxCoeff(), bathy.h0_mid.maxCoeff()));
  if (dt * cmax > grid.dx() + 1e-15)
    throw ConfigError("CFL violation: dt*sqrt(max h0) = " + std::to_string(dt * cmax) +
                      " exceeds dx = " + std::to_string(grid.dx()));
}

TopoState step_topo_fd(const TopoState& state, const Bathymetry& bathy, const ArrayXr& forcing,
                       Real dt) {
  check_topo_cfl(dt, bathy.grid, bathy);
  bathy.validate();
  TopoState next;
  next.zeta1 = Field1D{bathy.grid, 2 * state.zeta1.v - state.zeta1_prev.v +
                                       dt * dt * (flux_laplacian(state.zeta1.v, bathy) + forcing)};
  next.zeta1_prev = state.zeta1;
  next.t = state.t + dt;
  return next;
}

CompanionState initial_companion_state(const Bathymetry& bathy, const LandslideMotion& motion,
                                       Real dt) {
  if (motion.kind != LandslideMotion::Kind::constructed)
    throw ConfigError("companion system requires a constructed landslide motion");
  const Grid1D& g = bathy.grid;
  CompanionState s;
  s.zeta3 = ArrayXr::Zero(g.n);
  s.v3_half = ArrayXr(g.n);
  s.t = 0;

  if (motion.profile_slope) {
    // (zeta3, V3)(0) = (0, f'): sample f' at midpoints.
    for (Index i = 0; i < g.n; ++i) s.v3_half[i] = (*motion.profile_slope)(g.node(i) + 0.5 * g.dx());
  } else if (motion.initial_rate) {
    // d zeta3/dt(0) = g means h0 V3(0) = -int g; the cumulative integral is
    // accumulated with the midpoint rule so that the staggered divergence
    // reproduces g exactly at t = 0.
    ArrayXr rate(g.n);
    Real mean = 0;
    for (Index i = 0; i < g.n; ++i) {
      rate[i] = (*motion.initial_rate)(g.node(i));
      mean += rate[i];
    }
    mean /= static_cast<Real>(g.n);
    if (std::abs(mean) > 1e-8 * std::max(rate.abs().maxCoeff(), Real(1e-300)))
      throw ConfigError("constructed landslide: initial rate must have zero mean");
    Real acc = 0;
    for (Index i = 0; i < g.n; ++i) {
      acc += (rate[i] - mean) * g.dx();
      s.v3_half[i] = -acc / bathy.h0_mid[i];
    }
  } else {
    throw ConfigError("constructed landslide needs a profile or an initial rate");
  }
  // Half-step start: V3(dt/2) = V3(0) - (dt/2) d zeta3/dX with zeta3(0) = 0.
  return s;
}

CompanionState step_companion(const CompanionState& s, const Bathymetry& bathy, Real dt) {
  const Grid1D& g = bathy.grid;
  const Index n = g.n;
  const Real r = dt / g.dx();
  CompanionState next;
  next.zeta3 = ArrayXr(n);
  next.v3_half = ArrayXr(n);
  // zeta update with the current half-level flux.
  for (Index i = 0; i < n; ++i) {
    const Index im = i == 0 ? n - 1 : i - 1;
    next.zeta3[i] =
        s.zeta3[i] - r * (bathy.h0_mid[i] * s.v3_half[i] - bathy.h0_mid[im] * s.v3_half[im]);
  }
  // velocity update to the next half level.
  for (Index i = 0; i < n; ++i) {
    const Index ip = i == n - 1 ? 0 : i + 1;
    next.v3_half[i] = s.v3_half[i] - r * (next.zeta3[ip] - next.zeta3[i]);
  }
  next.t = s.t + dt;
  return next;
}

void TopoRunConfig::validate(const Bathymetry& bathy) const {
  check_topo_cfl(dt, bathy.grid, bathy);
  if (!(t_end > 0)) throw ConfigError("t_end must be positive");
  if (record_stride < 1) throw ConfigError("record_stride must be >= 1");
}

namespace {

void push_max(MaxSeries& out, const ArrayXr& v, const Grid1D& g, Real t) {
  Index where = 0;
  const Real m = v.abs().maxCoeff(&where);
  out.push(t, m, g.node(where));
}

}  // namespace

ConstructedResonance build_constructed_resonance(const Bathymetry& bathy,
                                                 const LandslideMotion& motion,
                                                 const TopoRunConfig& cfg) {
  cfg.validate(bathy);
  const Grid1D& g = bathy.grid;
  const Index steps = static_cast<Index>(std::llround(cfg.t_end / cfg.dt));

  CompanionState s = initial_companion_state(bathy, motion, cfg.dt);
  ArrayXr bm = ArrayXr::Zero(g.n);
  ArrayXr zeta3_prev = s.zeta3;

  ConstructedResonance out;
  out.initial_data_kind = motion.which;
  push_max(out.zeta1_max, s.zeta3, g, 0);  // zeta1(0) = 0
  push_max(out.bm_max, bm, g, 0);
  if (cfg.snapshot_stride > 0) {
    out.times.push_back(0);
    out.zeta1.push_back(ArrayXr::Zero(g.n));
    out.b_m.push_back(bm);
  }

  for (Index k = 1; k <= steps; ++k) {
    zeta3_prev = s.zeta3;
    s = step_companion(s, bathy, cfg.dt);
    // b_m = 2 int zeta3 ds, trapezoid per step.
    bm += cfg.dt * (zeta3_prev + s.zeta3);
    const bool rec = (k % cfg.record_stride == 0) || k == steps;
    const bool snap = cfg.snapshot_stride > 0 && ((k % cfg.snapshot_stride == 0) || k == steps);
    if (rec || snap) {
      ArrayXr zeta1_now = s.t * s.zeta3;
      if (rec) {
        push_max(out.zeta1_max, zeta1_now, g, s.t);
        push_max(out.bm_max, bm, g, s.t);
      }
      if (snap) {
        out.times.push_back(s.t);
        out.zeta1.push_back(zeta1_now);
        out.b_m.push_back(bm);
      }
    }
  }
  if (!s.zeta3.isFinite().all()) throw NumericalError("constructed resonance: non-finite state");
  return out;
}

AmplifiedWaveResult run_amplified_wave(const Bathymetry& bathy, const LandslideMotion& landslide,
                                       const std::function<Real(Real)>& incident,
                                       const TopoRunConfig& cfg, Real landslide_scale) {
  cfg.validate(bathy);
  const Grid1D& g = bathy.grid;
  const Index steps = static_cast<Index>(std::llround(cfg.t_end / cfg.dt));

  // Forcing d''b_m/dt^2 = 2 d zeta3/dt from the companion run (or the
  // tabulated forcing), with the time derivative centered over the levels
  // t - dt, t + dt. zeta3 is odd in t about 0, which supplies the ghost
  // level below t = 0.
  const bool constructed = landslide.kind == LandslideMotion::Kind::constructed;
  CompanionState comp_curr, comp_ahead;
  ArrayXr zeta3_behind;
  if (constructed) {
    comp_curr = initial_companion_state(bathy, landslide, cfg.dt);
    comp_ahead = step_companion(comp_curr, bathy, cfg.dt);
    zeta3_behind = -comp_ahead.zeta3;
  }

  auto tabulated_forcing = [&](Real t) -> ArrayXr {
    ArrayXr f(g.n);
    for (Index i = 0; i < g.n; ++i) f[i] = landslide.d2bm_dt2(t, g.node(i));
    return ArrayXr(landslide_scale * f);
  };

  // Incident rightward pulse: zeta1(0) = a(X), d zeta1/dt(0) = -d(sqrt(h0) a)/dX.
  Field1D z0 = make_field(g, incident);
  ArrayXr flux(g.n);
  for (Index i = 0; i < g.n; ++i)
    flux[i] = std::sqrt(bathy.h0[i]) * z0.v[i];
  ArrayXr v0(g.n);
  for (Index i = 0; i < g.n; ++i) {
    const Index im = i == 0 ? g.n - 1 : i - 1;
    const Index ip = i == g.n - 1 ? 0 : i + 1;
    v0[i] = -(flux[ip] - flux[im]) / (2 * g.dx());
  }

  auto forcing_now = [&]() -> ArrayXr {
    if (!constructed) return tabulated_forcing(0);
    return ArrayXr(landslide_scale * (comp_ahead.zeta3 - zeta3_behind) / cfg.dt);
  };

  // Taylor ghost level encoding the initial velocity.
  TopoState st;
  st.zeta1 = z0;
  const ArrayXr acc0 = flux_laplacian(z0.v, bathy) + forcing_now();
  st.zeta1_prev = Field1D{g, z0.v - cfg.dt * v0 + 0.5 * cfg.dt * cfg.dt * acc0};
  st.t = 0;

  AmplifiedWaveResult out;
  ArrayXr bm = ArrayXr::Zero(g.n);
  push_max(out.zeta1_max, st.zeta1.v, g, 0);
  push_max(out.bm_max, bm, g, 0);
  if (cfg.snapshot_stride > 0) {
    out.times.push_back(0);
    out.zeta1.push_back(st.zeta1.v);
  }

  for (Index k = 1; k <= steps; ++k) {
    const ArrayXr f = constructed ? forcing_now() : tabulated_forcing(st.t);
    st = step_topo_fd(st, bathy, f, cfg.dt);
    if (constructed) {
      bm += landslide_scale * cfg.dt * (comp_curr.zeta3 + comp_ahead.zeta3);
      zeta3_behind = comp_curr.zeta3;
      comp_curr = comp_ahead;
      comp_ahead = step_companion(comp_ahead, bathy, cfg.dt);
    }
    if (k % cfg.record_stride == 0 || k == steps) {
      push_max(out.zeta1_max, st.zeta1.v, g, st.t);
      push_max(out.bm_max, bm, g, st.t);
    }
    if (cfg.snapshot_stride > 0 && (k % cfg.snapshot_stride == 0 || k == steps)) {
      out.times.push_back(st.t);
      out.zeta1.push_back(st.zeta1.v);
    }
  }
  if (!st.zeta1.v.isFinite().all()) throw NumericalError("amplified wave: non-finite state");
  return out;
}

Real staggered_energy(const TopoState& s, const Bathymetry& bathy, Real dt) {
  // s holds z^{n+1} in zeta1 and z^n in zeta1_prev.
  const Grid1D& g = bathy.grid;
  const ArrayXr dz = (s.zeta1.v - s.zeta1_prev.v) / dt;
  Real e = dz.square().sum();
  for (Index i = 0; i < g.n; ++i) {
    const Index ip = i == g.n - 1 ? 0 : i + 1;
    const Real a = (s.zeta1.v[ip] - s.zeta1.v[i]) / g.dx();
    const Real b = (s.zeta1_prev.v[ip] - s.zeta1_prev.v[i]) / g.dx();
    e += bathy.h0_mid[i] * a * b;
  }
  return e * g.dx();
}

Real trajectory_residual(const std::vector<Real>& times, const std::vector<ArrayXr>& zeta1,
                         const std::vector<ArrayXr>& b_m, const Bathymetry& bathy,
                         const std::function<Real(Real)>& h0_fn,
                         const std::function<Real(Real)>& dh0_fn) {
  if (times.size() < 5 || zeta1.size() != times.size() || b_m.size() != times.size())
    throw ConfigError("trajectory_residual: need >= 5 aligned snapshots");
  const Grid1D& g = bathy.grid;
  const Real dts = times[1] - times[0];
  const Real dx = g.dx();

  auto d1x = [&](const ArrayXr& u, Index i) {
    const Index n = u.size();
    auto at = [&](Index j) { return u[((j % n) + n) % n]; };
    return (-at(i + 2) + 8 * at(i + 1) - 8 * at(i - 1) + at(i - 2)) / (12 * dx);
  };
  auto d2x = [&](const ArrayXr& u, Index i) {
    const Index n = u.size();
    auto at = [&](Index j) { return u[((j % n) + n) % n]; };
    return (-at(i + 2) + 16 * at(i + 1) - 30 * at(i) + 16 * at(i - 1) - at(i - 2)) /
           (12 * dx * dx);
  };

  Real worst = 0;
  for (std::size_t m = 2; m + 2 < times.size(); ++m) {
    Real ss = 0;
    for (Index i = 0; i < g.n; ++i) {
      const Real ztt = (-zeta1[m - 2][i] + 16 * zeta1[m - 1][i] - 30 * zeta1[m][i] +
                        16 * zeta1[m + 1][i] - zeta1[m + 2][i]) /
                       (12 * dts * dts);
      const Real btt = (-b_m[m - 2][i] + 16 * b_m[m - 1][i] - 30 * b_m[m][i] +
                        16 * b_m[m + 1][i] - b_m[m + 2][i]) /
                       (12 * dts * dts);
      const Real x = g.node(i);
      const Real flux = h0_fn(x) * d2x(zeta1[m], i) + dh0_fn(x) * d1x(zeta1[m], i);
      const Real r = ztt - flux - btt;
      ss += r * r;
    }
    worst = std::max(worst, std::sqrt(dx * ss));
  }
  return worst;
}

}  // namespace wavelab
