// Acceptance suite: runs every quantitative criterion at its stated
// tolerance and prints one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "wavelab/dispersive.hpp"
#include "wavelab/experiments.hpp"
#include "wavelab/shallow.hpp"
#include "wavelab/strip.hpp"
#include "wavelab/topo.hpp"

using namespace wavelab;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Check {
  std::string id;
  std::string title;
  std::function<Outcome()> run;
};

std::string fmt(Real x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

// ---------------------------------------------------------------------------
// C1: resonant linear growth, slope (1/2) e^{-1/2} within 2% at
//     dx = 0.01, dt = 0.005, fit window [10, 40].
// ---------------------------------------------------------------------------
Outcome c1_proudman_growth() {
  ShallowRunConfig rc;
  rc.grid = Grid1D{-81.92, 81.92, 16384};
  rc.dt = 0.005;
  rc.t_end = 40;
  rc.window_halfwidth = 8;
  rc.record_stride = 10;
  MaxSeries s = run_shallow(DisturbanceProfile::gaussian_traveling(1.0), rc);
  const Real slope = fit_linear_slope(s, 10, 40);
  const Real target = 0.5 * std::exp(-0.5);
  const Real rel = std::abs(slope / target - 1);
  return {rel < 0.02, "slope " + fmt(slope) + " vs " + fmt(target) + " (rel " + fmt(rel) + ")"};
}

// ---------------------------------------------------------------------------
// C2: saturation for U in {0.5, 2.0} up to t = 100; both branches of
//     min(|f0|/|1-U|, (t/2)|f0'|) witnessed.
// ---------------------------------------------------------------------------
Outcome c2_saturation() {
  const Real slope_max = std::exp(-0.5);  // |f0'|_inf of the unit gaussian
  Outcome out;
  std::ostringstream detail;
  for (Real u : {0.5, 2.0}) {
    DisturbanceProfile p = DisturbanceProfile::gaussian_traveling(u);
    const Real amp_bound = 1.0 / std::abs(1 - u);
    Real sup_all = 0;
    bool below_min = true;
    bool early_branch_tight = false;
    for (Real t = 0.05; t <= 100.0; t += 0.05) {
      Real sup_t = 0;
      const Real lo = std::min(u, 1.0) * t - 8, hi = std::max(u, 1.0) * t + 8;
      for (Real x = lo; x <= hi; x += 0.02)
        sup_t = std::max(sup_t, std::abs(dalembert_hR(p, t, x)));
      sup_all = std::max(sup_all, sup_t);
      const Real branch = std::min(amp_bound, 0.5 * t * slope_max);
      if (sup_t > branch + 1e-3) below_min = false;
      // early-time branch is active and within 10% of saturation
      if (t <= 1.0 && 0.5 * t * slope_max < amp_bound && sup_t > 0.9 * 0.5 * t * slope_max)
        early_branch_tight = true;
    }
    const bool ok = sup_all <= amp_bound + 1e-3 && below_min && early_branch_tight;
    if (!ok) out.pass = false;
    detail << "U=" << u << " sup " << fmt(sup_all) << " bound " << fmt(amp_bound)
           << (early_branch_tight ? " (both branches witnessed) " : " (early branch missed) ");
  }
  out.detail = detail.str();
  return out;
}

// ---------------------------------------------------------------------------
// C3: finite differences vs the d'Alembert oracle: L_inf error < 1e-3 at
//     dx = 0.01 for t <= 20 and error ratio in [3.5, 4.5] under dx -> dx/2,
//     for U in {0.9, 1.0, 1.1}.
// ---------------------------------------------------------------------------
Outcome c3_fd_oracle() {
  Outcome out;
  std::ostringstream detail;
  for (Real u : {0.9, 1.0, 1.1}) {
    DisturbanceProfile p = DisturbanceProfile::gaussian_traveling(u);
    Real errs[2];
    for (int r = 0; r < 2; ++r) {
      ShallowRunConfig rc;
      rc.grid = Grid1D{-40.96, 40.96, r == 0 ? 8192 : 16384};
      rc.dt = rc.grid.dx() / 2;
      rc.t_end = 20;
      Real err = 0;
      for (Real t_check : {5.0, 10.0, 20.0}) {
        ShallowRunConfig rcc = rc;
        rcc.t_end = t_check;
        Field1D h = run_shallow_final_field(p, rcc);
        for (Index i = 0; i < rc.grid.n; ++i)
          err = std::max(err, std::abs(h.v[i] - dalembert_h(p, t_check, rc.grid.node(i))));
      }
      errs[r] = err;
    }
    const Real ratio = errs[0] / errs[1];
    const bool ok = errs[0] < 1e-3 && ratio >= 3.5 && ratio <= 4.5;
    if (!ok) out.pass = false;
    detail << "U=" << u << " err " << fmt(errs[0]) << " ratio " << fmt(ratio) << "; ";
  }
  out.detail = detail.str();
  return out;
}

// ---------------------------------------------------------------------------
// C4: constructed landslide: growth exponent 1.0 +- 0.1, second-order
//     residual decay, |b_m| plateau ratio in [0.9, 1.1].
// ---------------------------------------------------------------------------
Outcome c4_constructed_landslide() {
  Grid1D g{-80, 80, 8000};
  Bathymetry bathy = make_bathymetry(g, [](Real x) { return -std::tanh(x); }, 0.5, 0.05);
  LandslideMotion m =
      LandslideMotion::from_rate([](Real x) { return (4 * x * x - 2) * std::exp(-x * x); });
  TopoRunConfig rc;
  rc.dt = 0.01;
  rc.t_end = 50;
  rc.record_stride = 10;
  ConstructedResonance run = build_constructed_resonance(bathy, m, rc);
  const GrowthFit fit = fit_growth(run.zeta1_max, 25, 50);

  Real half_max = 0, full_max = 0;
  for (std::size_t i = 0; i < run.bm_max.size(); ++i) {
    full_max = std::max(full_max, run.bm_max.sup_norm[i]);
    if (run.bm_max.times[i] <= 25) half_max = std::max(half_max, run.bm_max.sup_norm[i]);
  }
  const Real plateau = full_max / half_max;

  Real residuals[3];
  int idx = 0;
  for (Index n : {1000, 2000, 4000}) {
    Grid1D gr{-40, 40, n};
    Bathymetry br = make_bathymetry(gr, [](Real x) { return -std::tanh(x); }, 0.5, 0.05);
    TopoRunConfig rr;
    rr.dt = gr.dx() / 2;
    rr.t_end = 10;
    rr.record_stride = 1000000;
    rr.snapshot_stride = 1;
    ConstructedResonance res_run = build_constructed_resonance(br, m, rr);
    residuals[idx++] = trajectory_residual(
        res_run.times, res_run.zeta1, res_run.b_m, br,
        [](Real x) { return 1 + 0.5 * std::tanh(x); },
        [](Real x) {
          const Real c = std::cosh(x);
          return 0.5 / (c * c);
        });
  }
  const Real ord1 = std::log2(residuals[0] / residuals[1]);
  const Real ord2 = std::log2(residuals[1] / residuals[2]);

  const bool ok = std::abs(fit.exponent - 1.0) < 0.1 && plateau >= 0.9 && plateau <= 1.1 &&
                  ord1 > 1.7 && ord1 < 2.3 && ord2 > 1.7 && ord2 < 2.3;
  return {ok, "exponent " + fmt(fit.exponent) + ", plateau " + fmt(plateau) +
                  ", residual orders " + fmt(ord1) + "/" + fmt(ord2)};
}

// ---------------------------------------------------------------------------
// C5: unforced energy conservation: finite differences < 1e-4 over t = 50
//     at dx = 0.02; spectral integrator < 1e-10 over 1e4 steps.
// ---------------------------------------------------------------------------
Outcome c5_energy() {
  // finite-difference side
  Grid1D g{-80, 80, 8000};
  Bathymetry bathy = make_bathymetry(g, [](Real x) { return -std::tanh(x); }, 0.5, 0.05);
  const Real dt = 0.01;
  TopoState st;
  st.zeta1 = make_field(g, [](Real x) { return std::exp(-x * x); });
  st.zeta1_prev = Field1D{g, st.zeta1.v + 0.5 * dt * dt * flux_laplacian(st.zeta1.v, bathy)};
  const ArrayXr zero = ArrayXr::Zero(g.n);
  Real e0 = -1, lo = 1e300, hi = -1e300;
  const Index steps = static_cast<Index>(std::llround(50.0 / dt));
  for (Index k = 0; k < steps; ++k) {
    TopoState next = step_topo_fd(st, bathy, zero, dt);
    const Real e = staggered_energy(TopoState{next.zeta1, st.zeta1, next.t}, bathy, dt);
    if (e0 < 0) e0 = e;
    lo = std::min(lo, e);
    hi = std::max(hi, e);
    st = next;
  }
  const Real fd_drift = (hi - lo) / e0;

  // spectral side
  Grid1D gs{-pi, pi, 1024};
  DispersiveRun run;
  run.grid = gs;
  run.mu = 1;
  run.kind = PressureKind::none;
  const Real dts = 0.002;
  run.t_samples = {10000 * dts};
  Field1D z0 = random_band_limited(gs, 7, 12, 0.25);
  Field1D p0 = random_band_limited(gs, 8, 12, 0.25);
  DispersiveTrajectory traj = evolve_spectral(run, z0, p0, dts);
  DispersiveState s0;
  s0.zeta = forward(z0);
  s0.psi = forward(p0);
  const Real sp_drift = std::abs(traj.energy[0] / homogeneous_energy(s0, run.mu) - 1);

  const bool ok = fd_drift < 1e-4 && sp_drift < 1e-10;
  return {ok, "fd drift " + fmt(fd_drift) + ", spectral drift " + fmt(sp_drift)};
}

// ---------------------------------------------------------------------------
// C6: resonant pressure sqrt(t) law at n = 2^14: exponent 0.50 +- 0.05 over
//     [50, 500]; sup|zeta_L| <= |P0^|_L1 throughout.
// ---------------------------------------------------------------------------
Outcome c6_sqrt_t_law() {
  const auto t0 = std::chrono::steady_clock::now();
  DispersiveRun run;
  run.grid = Grid1D{-150, 1150, 16384};
  run.mu = 1;
  run.kind = PressureKind::resonant;
  run.P0 = gaussian_pressure(run.grid, -1, 1);
  run.t_samples = log_spaced(1, 500, 80);

  const Real bound = pressure_spectrum_l1(run);
  MaxSeries series;
  Real worst_l = 0;
  for (Real t : run.t_samples) {
    series.push(t, sup_norm(zeta_R_resonant(run, t)), 0);
    worst_l = std::max(worst_l, sup_norm(zeta_L_resonant(run, t)));
  }
  const GrowthFit fit = fit_growth(series, 50, 500);
  const auto t1 = std::chrono::steady_clock::now();
  const Real secs = std::chrono::duration<double>(t1 - t0).count();
  const bool ok =
      std::abs(fit.exponent - 0.5) < 0.05 && worst_l <= bound * (1 + 1e-10) && secs < 60;
  return {ok, "exponent " + fmt(fit.exponent) + ", sup|zeta_L| " + fmt(worst_l) + " <= " +
                  fmt(bound) + ", " + fmt(secs) + "s"};
}

// ---------------------------------------------------------------------------
// C7: unit-speed pressure t^{1/3} law: exponent 1/3 +- 0.05 over [50, 500];
//     front-ray value within 5% of the frozen stationary-phase oracle.
// ---------------------------------------------------------------------------
Outcome c7_cbrt_t_law() {
  DispersiveRun run;
  run.grid = Grid1D{-150, 1150, 16384};
  run.mu = 1;
  run.kind = PressureKind::traveling_unit_speed;
  run.P0 = gaussian_pressure(run.grid, -1, 1);
  run.t_samples = log_spaced(1, 500, 80);

  MaxSeries series;
  for (Real t : run.t_samples) series.push(t, sup_norm(zeta_R_unit_speed(run, t)), 0);
  const GrowthFit fit = fit_growth(series, 50, 500);

  const Real limit = unit_speed_cbrt_limit(run);
  const Real t_front = 32000;
  const Real front = std::abs(zeta_R_unit_speed_at_front(run, t_front)) / std::cbrt(t_front);
  const Real rel = std::abs(front / limit - 1);

  const bool ok = std::abs(fit.exponent - 1.0 / 3.0) < 0.05 && rel < 0.05;
  return {ok, "exponent " + fmt(fit.exponent) + ", front/limit " + fmt(front) + "/" + fmt(limit) +
                  " (rel " + fmt(rel) + " at t=" + fmt(t_front) + ")"};
}

// ---------------------------------------------------------------------------
// C8: dispersion decay envelope: sup stays below K/sqrt(t) for t >= 5 with
//     K from the two weighted-L1 norms; fitted exponent <= -0.45 on
//     [20, 200].
// ---------------------------------------------------------------------------
Outcome c8_decay_envelope() {
  Grid1D g{-250, 250, 8192};
  Field1D f = make_field(g, [](Real x) { return -x * std::exp(-0.5 * x * x); });
  std::vector<Real> ts;
  for (Real t = 5; t <= 200; t *= 1.2) ts.push_back(t);
  ts.push_back(200);
  DecayReport rep = dispersion_decay_check(f, 1.0, ts, 5.0, 1.0);
  const GrowthFit fit = fit_growth(rep.sup_series, 20, 200);
  const bool ok = rep.envelope_ok && fit.exponent <= -0.45;
  return {ok, "worst sup*sqrt(t)/K " + fmt(rep.worst_ratio) + ", exponent " + fmt(fit.exponent)};
}

// ---------------------------------------------------------------------------
// C9: strip operators vs flat multipliers: rel L2 error < 1e-2 at
//     (512, 64) and convergence order in [1.7, 2.3] over three resolutions.
// ---------------------------------------------------------------------------
Outcome c9_strip_vs_multipliers() {
  const Real mu = 1.0;
  const Real smu = std::sqrt(mu);
  std::vector<std::array<Real, 4>> errors;
  for (int r = 0; r < 3; ++r) {
    StripGrid2D g2;
    g2.x = Grid1D{-pi, pi, 128 << r};
    g2.n_z = 16 << r;
    StripOperators ops(g2, flat_coefficients(g2, mu));
    Field1D psi = strip_probe_field(g2.x);
    Field1D B = strip_probe_field(g2.x);
    BoundaryOperators bo = ops.boundary_operators(ops.solve_surface(psi), ops.solve_bottom(B));
    auto rel = [&](const Field1D& got, const Field1D& want) {
      return l2_norm(Field1D{g2.x, got.v - want.v}) / l2_norm(want);
    };
    errors.push_back(
        {rel(bo.g_dn,
             strip_probe_with_symbol(g2.x, [&](Real k) { return mu * k * k * tanhc(smu * k); })),
         rel(bo.g_nn, strip_probe_with_symbol(g2.x, [&](Real k) { return sech(smu * k); })),
         rel(bo.g_dd, strip_probe_with_symbol(g2.x, [&](Real k) { return sech(smu * k); })),
         rel(bo.g_nd, strip_probe_with_symbol(g2.x, [&](Real k) { return -tanhc(smu * k); }))});
  }
  bool ok = true;
  std::ostringstream detail;
  const char* names[4] = {"dn", "nn", "dd", "nd"};
  for (int w = 0; w < 4; ++w) {
    if (errors[2][w] >= 1e-2) ok = false;
    detail << names[w] << " err " << fmt(errors[2][w]) << " orders";
    for (int r = 0; r + 1 < 3; ++r) {
      const Real order = std::log2(errors[r][w] / errors[r + 1][w]);
      if (order < 1.7 || order > 2.3) ok = false;
      detail << " " << fmt(order);
    }
    detail << "; ";
  }
  return {ok, detail.str()};
}

// ---------------------------------------------------------------------------
// C10: adjointness |<Gnn B, phi> - <B, Gdd phi>| < 1e-8 |B||phi| and
//      negativity <Gnd B, B> <= 1e-10, 20 random smooth pairs, nonflat
//      shapes at eps = beta = 0.05.
// ---------------------------------------------------------------------------
Outcome c10_adjointness() {
  StripGrid2D g2;
  g2.x = Grid1D{-pi, pi, 256};
  g2.n_z = 32;
  PhysicalParams params;
  params.epsilon = 0.05;
  params.beta = 0.05;
  params.lambda = 1.0;
  params.mu = 1.0;
  Field1D zeta = random_band_limited(g2.x, 11, 6, 0.4);
  Field1D b = random_band_limited(g2.x, 12, 6, 0.4);
  StripOperators ops(g2, build_coefficients(build_diffeo(zeta, b, params, 0.1, g2), params.mu));

  Real worst_adj = 0, worst_neg = -1e300;
  for (int r = 0; r < 20; ++r) {
    Field1D B = random_band_limited(g2.x, 100 + 2 * r, 8, 0.35);
    Field1D phi = random_band_limited(g2.x, 101 + 2 * r, 8, 0.35);
    StripSolution sb = ops.solve_bottom(B);
    StripSolution sp = ops.solve_surface(phi);
    const Real lhs = inner(ops.surface_flux(sb), phi);
    const Real rhs = inner(B, ops.bottom_trace(sp));
    worst_adj = std::max(worst_adj, std::abs(lhs - rhs) / (l2_norm(B) * l2_norm(phi)));
    worst_neg = std::max(worst_neg, inner(ops.bottom_trace(sb), B));
  }
  const bool ok = worst_adj < 1e-8 && worst_neg <= 1e-10;
  return {ok, "adjointness residual " + fmt(worst_adj) + ", max <Gnd B, B> " + fmt(worst_neg)};
}

// ---------------------------------------------------------------------------
// C11: shape-derivative formulas: finite differences match the closed forms
//      with error-halving ratio in [0.4, 0.6] as tau halves, surface and
//      bottom directions separately.
// ---------------------------------------------------------------------------
Outcome c11_shape_derivative() {
  StripGrid2D g2;
  g2.x = Grid1D{-pi, pi, 1024};
  g2.n_z = 128;
  PhysicalParams params;
  params.epsilon = 0.05;
  params.beta = 0.05;
  params.lambda = 1.0;
  params.mu = 1.0;
  Field1D zeta = random_band_limited(g2.x, 21, 5, 0.5);
  Field1D b = random_band_limited(g2.x, 22, 5, 0.5);
  Field1D psi = random_band_limited(g2.x, 23, 5, 0.5);
  Field1D B = random_band_limited(g2.x, 24, 5, 0.5);
  Field1D h = random_band_limited(g2.x, 25, 5, 0.5);
  Field1D k = random_band_limited(g2.x, 26, 5, 0.5);
  ShapeDerivativeReport rep =
      shape_derivative_check(psi, B, zeta, b, h, k, params, g2, 0.1, {0.08, 0.04, 0.02});

  bool ok = true;
  std::ostringstream detail;
  detail << "surface ratios";
  for (std::size_t i = 1; i < rep.taus.size(); ++i) {
    const Real r = rep.err_surface[i] / rep.err_surface[i - 1];
    if (r < 0.4 || r > 0.6) ok = false;
    detail << " " << fmt(r);
  }
  detail << ", bottom ratios";
  for (std::size_t i = 1; i < rep.taus.size(); ++i) {
    const Real r = rep.err_bottom[i] / rep.err_bottom[i - 1];
    if (r < 0.4 || r > 0.6) ok = false;
    detail << " " << fmt(r);
  }
  detail << ", dd ratios";
  for (std::size_t i = 1; i < rep.taus.size(); ++i)
    detail << " " << fmt(rep.err_dd[i] / rep.err_dd[i - 1]);
  return {ok, detail.str()};
}

// ---------------------------------------------------------------------------
// C12: shallow-limit consistency: mu = 1e-4 resonant run reproduces the
//      criterion-1 slope within 5%; flat_nn at mu = 1e-8 is the identity on
//      band-limited fields within 1e-6.
// ---------------------------------------------------------------------------
Outcome c12_shallow_limit() {
  DispersiveRun run;
  run.grid = Grid1D{-50, 50, 4096};
  run.mu = 1e-4;
  run.kind = PressureKind::resonant;
  run.P0 = gaussian_pressure(run.grid, -1, std::sqrt(2.0));  // |P0'|_inf = e^{-1/2}
  MaxSeries series;
  for (Real t = 5; t <= 30; t += 1) series.push(t, sup_norm(zeta_R_resonant(run, t)), 0);
  const Real slope = fit_linear_slope(series, 5, 30);
  const Real target = 0.5 * std::exp(-0.5);
  const Real rel = std::abs(slope / target - 1);

  Grid1D g{-pi, pi, 512};
  Field1D f = make_field(g, [](Real x) { return std::cos(3 * x) - 0.4 * std::sin(9 * x); });
  Field1D out = flat_nn(f, 1e-8);
  const Real nn_err = sup_norm(Field1D{g, out.v - f.v}) / sup_norm(f);

  const bool ok = rel < 0.05 && nn_err < 1e-6;
  return {ok, "slope " + fmt(slope) + " (rel " + fmt(rel) + "), flat_nn identity err " +
                  fmt(nn_err)};
}

}  // namespace

int main() {
  std::vector<Check> checks = {
      {"C01", "resonant growth slope (flat shallow water)", c1_proudman_growth},
      {"C02", "saturation bounds for off-speed disturbances", c2_saturation},
      {"C03", "finite differences vs d'Alembert oracle", c3_fd_oracle},
      {"C04", "constructed landslide resonance", c4_constructed_landslide},
      {"C05", "unforced energy conservation", c5_energy},
      {"C06", "sqrt(t) resonance law (full dispersion)", c6_sqrt_t_law},
      {"C07", "t^(1/3) unit-speed law and front-ray limit", c7_cbrt_t_law},
      {"C08", "dispersion decay envelope", c8_decay_envelope},
      {"C09", "strip operators vs flat multipliers", c9_strip_vs_multipliers},
      {"C10", "adjointness and negativity of the bottom operators", c10_adjointness},
      {"C11", "shape-derivative formulas", c11_shape_derivative},
      {"C12", "shallow-limit consistency", c12_shallow_limit},
  };

  int failures = 0;
  for (const auto& c : checks) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const auto t1 = std::chrono::steady_clock::now();
    if (!o.pass) ++failures;
    std::printf("%s %s %s [%.1fs] %s\n", c.id.c_str(), o.pass ? "PASS" : "FAIL", c.title.c_str(),
                std::chrono::duration<double>(t1 - t0).count(), o.detail.c_str());
    std::fflush(stdout);
  }
  if (failures)
    std::printf("%d criterion(s) failed\n", failures);
  else
    std::printf("all %zu criteria passed\n", checks.size());
  return failures;
}
