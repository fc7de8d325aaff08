#include <doctest.h>

#include <cmath>

#include "wavelab/shallow.hpp"

using namespace wavelab;

namespace {

// composite Simpson oracle, independent of the solver path
Real simpson_hr(const DisturbanceProfile& f, Real t, Real x, Index panels) {
  if (panels % 2) ++panels;
  const Real h = t / panels;
  auto g = [&](Real tau) { return f.slope(tau, x - t + tau); };
  Real s = g(0) + g(t);
  for (Index i = 1; i < panels; ++i) s += g(h * i) * (i % 2 ? 4.0 : 2.0);
  return 0.5 * s * h / 3;
}

}  // namespace

TEST_CASE("d'Alembert right-moving component: traveling closed forms") {
  DisturbanceProfile p = DisturbanceProfile::gaussian_traveling(1.0);
  SUBCASE("speed one: (t/2) f0'(X - t)") {
    // at X - t = 1 the slope is f0'(1) = -exp(-1/2)
    const Real t = 7.0;
    CHECK(dalembert_hR(p, t, t + 1.0) ==
          doctest::Approx(-0.5 * t * std::exp(-0.5)).epsilon(1e-14));
    CHECK(std::abs(dalembert_hR(p, t, t + 1.0)) ==
          doctest::Approx(0.5 * t * std::exp(-0.5)).epsilon(1e-14));
  }
  SUBCASE("zero disturbance gives zero") {
    DisturbanceProfile z;
    z.kind = DisturbanceProfile::Kind::traveling;
    z.speed = 0.7;
    z.f0 = [](Real) { return 0.0; };
    z.f0_dx = [](Real) { return 0.0; };
    for (Real t : {0.0, 1.0, 10.0})
      for (Real x : {-3.0, 0.0, 5.0}) CHECK(dalembert_hR(z, t, x) == 0.0);
  }
  SUBCASE("speed two: saturation bound |f0|_inf / |1-U|") {
    DisturbanceProfile p2 = DisturbanceProfile::gaussian_traveling(2.0);
    Real sup = 0;
    for (Real t = 0; t <= 60; t += 0.25)
      for (Real x = -10; x <= 130; x += 0.05)
        sup = std::max(sup, std::abs(dalembert_hR(p2, t, x)));
    CHECK(sup <= 1.0 + 1e-12);
  }
  SUBCASE("static disturbance: same bound with |1-U| = 1") {
    DisturbanceProfile p0 = DisturbanceProfile::gaussian_traveling(0.0);
    Real sup = 0;
    for (Real t = 0; t <= 40; t += 0.25)
      for (Real x = -10; x <= 50; x += 0.05)
        sup = std::max(sup, std::abs(dalembert_hR(p0, t, x)));
    CHECK(sup <= 1.0 + 1e-12);
  }
  SUBCASE("resonance bound (t/2)|df/dX|_inf for several speeds") {
    for (Real u : {0.5, 0.9, 1.0, 1.1, 2.0}) {
      DisturbanceProfile pu = DisturbanceProfile::gaussian_traveling(u);
      const Real slope_max = std::exp(-0.5);
      for (Real t : {0.5, 2.0, 8.0, 25.0}) {
        Real sup = 0;
        for (Real x = -10 + t * std::min(u, 1.0); x <= t * std::max(u, 1.0) + 10; x += 0.05)
          sup = std::max(sup, std::abs(dalembert_hR(pu, t, x)));
        CHECK(sup <= 0.5 * t * slope_max + 1e-9);
      }
    }
  }
  SUBCASE("quadrature path matches the closed form") {
    DisturbanceProfile tab;
    tab.kind = DisturbanceProfile::Kind::tabulated;
    tab.f = [](Real t, Real x) { return std::exp(-0.5 * (x - 1.3 * t) * (x - 1.3 * t)); };
    tab.f_x = [](Real t, Real x) {
      const Real y = x - 1.3 * t;
      return -y * std::exp(-0.5 * y * y);
    };
    DisturbanceProfile trav = DisturbanceProfile::gaussian_traveling(1.3);
    const Real got = dalembert_hR(tab, 6.0, 7.0, 512);
    CHECK(got == doctest::Approx(dalembert_hR(trav, 6.0, 7.0)).epsilon(1e-8));
    CHECK(got == doctest::Approx(simpson_hr(trav, 6.0, 7.0, 2048)).epsilon(1e-8));
  }
  SUBCASE("too few quadrature panels is a parameter error") {
    DisturbanceProfile tab;
    tab.kind = DisturbanceProfile::Kind::tabulated;
    tab.f = [](Real, Real) { return 0.0; };
    tab.f_x = [](Real, Real) { return 0.0; };
    CHECK_THROWS_AS(dalembert_hR(tab, 1.0, 0.0, 1), ConfigError);
  }
}

TEST_CASE("leapfrog solver") {
  Grid1D g{-20.48, 20.48, 2048};
  DisturbanceProfile zero;
  zero.kind = DisturbanceProfile::Kind::tabulated;
  zero.f = [](Real, Real) { return 0.0; };
  zero.f_x = [](Real, Real) { return 0.0; };

  SUBCASE("zero data and zero forcing stay zero") {
    ShallowState s = initial_shallow_state(g, zero, 0.01);
    for (int i = 0; i < 50; ++i) s = step_fd(s, zero, 0.01, g);
    CHECK(sup_norm(s.h) == 0.0);
  }
  SUBCASE("CFL violation rejected before stepping") {
    CHECK_THROWS_AS(initial_shallow_state(g, zero, 10 * g.dx()), ConfigError);
  }
  SUBCASE("solver is linear in the forcing") {
    auto gaussian = [](Real c) {
      return [c](Real t, Real x) {
        const Real y = x - c - t;
        return std::exp(-0.5 * y * y);
      };
    };
    DisturbanceProfile f1, f2, combo;
    f1.kind = f2.kind = combo.kind = DisturbanceProfile::Kind::tabulated;
    f1.f = gaussian(0.0);
    f2.f = gaussian(2.0);
    combo.f = [&](Real t, Real x) { return 2.0 * f1.f(t, x) - 0.5 * f2.f(t, x); };
    f1.f_x = f2.f_x = combo.f_x = [](Real, Real) { return 0.0; };  // slope unused by the stepper

    ShallowRunConfig rc;
    rc.grid = g;
    rc.dt = g.dx() / 2;
    rc.t_end = 5.0;
    rc.window_halfwidth = -1;
    Field1D a = run_shallow_final_field(f1, rc);
    Field1D b = run_shallow_final_field(f2, rc);
    Field1D c = run_shallow_final_field(combo, rc);
    Field1D mix{g, 2.0 * a.v - 0.5 * b.v};
    CHECK(sup_norm(Field1D{g, c.v - mix.v}) < 1e-10 * std::max(sup_norm(c), Real(1)));
  }
  SUBCASE("time reversal of the homogeneous problem is exact") {
    Field1D b0 = make_field(g, [](Real x) { return std::exp(-x * x); });
    ShallowState s = initial_shallow_state(g, zero, 0.005, b0);
    const Field1D h_initial = s.h;
    for (int i = 0; i < 400; ++i) s = step_fd(s, zero, 0.005, g);
    // swap levels and march back
    ShallowState r{s.h_prev, s.h, 0.0};
    for (int i = 0; i < 399; ++i) r = step_fd(r, zero, 0.005, g);
    CHECK(sup_norm(Field1D{g, r.h.v - h_initial.v}) < 1e-10);
  }
}

TEST_CASE("FD solution matches the d'Alembert oracle at every sweep speed") {
  // short-horizon version; the acceptance suite runs the fine-resolution
  // variant with the convergence ratios
  for (Real u : {0.5, 0.9, 1.0, 1.1, 2.0}) {
    DisturbanceProfile p = DisturbanceProfile::gaussian_traveling(u);
    ShallowRunConfig rc;
    rc.grid = Grid1D{-20.48, 20.48, 2048};
    rc.dt = rc.grid.dx() / 2;
    rc.t_end = 8.0;
    Field1D h = run_shallow_final_field(p, rc);
    Real err = 0;
    for (Index i = 0; i < rc.grid.n; ++i)
      err = std::max(err, std::abs(h.v[i] - dalembert_h(p, rc.t_end, rc.grid.node(i))));
    CHECK(err < 2e-3);
  }
}

TEST_CASE("proudman sweep growth and saturation") {
  ShallowRunConfig rc;
  rc.grid = Grid1D{-40.96, 40.96, 4096};
  rc.dt = 0.005;
  rc.t_end = 20;
  rc.window_halfwidth = 8;
  DisturbanceProfile base = DisturbanceProfile::gaussian_traveling(1.0);
  auto series = run_proudman_sweep({1.0, 2.0}, base, rc, 2);

  // resonant run: linear growth at slope exp(-1/2)/2 (fit over [8, 20])
  const Real slope = fit_linear_slope(series[0], 8, 20);
  CHECK(slope == doctest::Approx(0.5 * std::exp(-0.5)).epsilon(0.02));

  // u = 2 run: saturation below |f0|_inf / |1 - U| = 1
  Real sup = 0;
  for (Real v : series[1].sup_norm) sup = std::max(sup, v);
  CHECK(sup <= 1.0 + 1e-3);

  CHECK_THROWS_AS(run_proudman_sweep({}, base, rc), ConfigError);
}
