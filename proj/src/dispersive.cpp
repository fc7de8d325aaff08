#include "wavelab/dispersive.hpp"

#include <algorithm>
#include <cmath>

namespace wavelab {

namespace {

// (exp(z) - 1)/z, series below |z| < 1e-6.
Complex phi1(Complex z) {
  if (std::abs(z) < 1e-6) return Complex(1, 0) + z / 2.0 + z * z / 6.0 + z * z * z / 24.0;
  return (std::exp(z) - Complex(1, 0)) / z;
}

// omega(x) - 1 without cancellation for small x.
Real omega_minus_one(Real x) {
  const Real a = std::abs(x);
  if (a < 1e-3) {
    const Real a2 = a * a;
    return a2 * (-Real(1) / 6 + a2 * (Real(19) / 360 - a2 * Real(55) / 3024));
  }
  return omega(a) - 1;
}

Complex expi(Real phase) { return Complex(std::cos(phase), std::sin(phase)); }

}  // namespace

Real DispersiveRun::forcing_phase_speed_symbol(Real xi) const {
  switch (kind) {
    case PressureKind::resonant:
      return dispersion_frequency(xi, mu);
    case PressureKind::traveling_unit_speed:
      return xi;
    case PressureKind::general:
      return a_symbol(xi);
    case PressureKind::none:
      return 0;
  }
  return 0;
}

void DispersiveRun::validate() const {
  grid.validate();
  if (!(mu > 0)) throw ConfigError("dispersive run: mu must be positive");
  if (kind != PressureKind::none) {
    if (P0.v.size() != grid.n) throw ConfigError("dispersive run: P0 missing or wrong length");
  }
  if (kind == PressureKind::general) {
    if (!a_symbol) throw ConfigError("dispersive run: general kind needs a symbol a(xi)");
    for (Index k = 1; k < std::min<Index>(grid.n / 2, 64); ++k) {
      const Real xi = grid.wavenumber(k);
      const Real plus = a_symbol(xi), minus = a_symbol(-xi);
      if (std::abs(plus + minus) > 1e-10 * std::max(Real(1), std::abs(plus)))
        throw ConfigError("dispersive run: a(xi) must be odd");
      if (plus / xi < -1e-12) throw ConfigError("dispersive run: a(xi)/xi must be >= 0");
    }
  }
  for (Real t : t_samples)
    if (!(t >= 0)) throw ConfigError("dispersive run: sample times must be nonnegative");
}

DispersiveState initial_rest_state(const Grid1D& grid) {
  DispersiveState s;
  s.zeta = SpectralField{grid, ArrayXc::Zero(grid.n)};
  s.psi = SpectralField{grid, ArrayXc::Zero(grid.n)};
  s.t = 0;
  return s;
}

namespace {

DispersiveState step_with_spectrum(const DispersiveState& s, const DispersiveRun& run, Real dt,
                                   const ArrayXc* p0_ptr) {
  const Grid1D& g = run.grid;
  DispersiveState next;
  next.zeta = SpectralField{g, ArrayXc(g.n)};
  next.psi = SpectralField{g, ArrayXc(g.n)};
  next.t = s.t + dt;

  const bool forced = run.kind != PressureKind::none;
  const ArrayXc& p0 = *p0_ptr;

  for (Index k = 0; k < g.n; ++k) {
    const Real xi = g.wavenumber(k);
    const Real om = std::abs(dispersion_frequency(xi, run.mu));
    const Complex z = s.zeta.c[k];
    const Complex q = s.psi.c[k];

    Complex zn, qn;
    if (om * dt < 1e-8) {
      zn = z;
      qn = q - dt * z;
      if (forced) {
        const Real a = run.forcing_phase_speed_symbol(xi);
        const Complex p = p0[k] * expi(-a * s.t);
        qn -= p * dt * phi1(Complex(0, -a * dt));
      }
    } else {
      const Real c = std::cos(om * dt);
      const Real sn = std::sin(om * dt);
      zn = c * z + om * sn * q;
      qn = -(sn / om) * z + c * q;
      if (forced) {
        const Real a = run.forcing_phase_speed_symbol(xi);
        const Complex p = p0[k] * expi(-a * s.t);
        const Complex jp = expi(om * dt) * dt * phi1(Complex(0, -(a + om) * dt));
        const Complex jm = expi(-om * dt) * dt * phi1(Complex(0, -(a - om) * dt));
        const Complex is = (jp - jm) / Complex(0, 2);
        const Complex ic = (jp + jm) / 2.0;
        zn -= om * p * is;
        qn -= p * ic;
      }
    }
    next.zeta.c[k] = zn;
    next.psi.c[k] = qn;
  }
  return next;
}

}  // namespace

DispersiveState step_exact(const DispersiveState& s, const DispersiveRun& run, Real dt) {
  ArrayXc p0 = ArrayXc::Zero(run.grid.n);
  if (run.kind != PressureKind::none) p0 = forward(run.P0).c;
  return step_with_spectrum(s, run, dt, &p0);
}

Real homogeneous_energy(const DispersiveState& s, Real mu) {
  Real e = 0;
  for (Index k = 0; k < s.zeta.grid.n; ++k) {
    const Real om = std::abs(dispersion_frequency(s.zeta.grid.wavenumber(k), mu));
    e += 0.5 * (std::norm(s.zeta.c[k]) + om * om * std::norm(s.psi.c[k]));
  }
  return e * s.zeta.grid.length();
}

DispersiveTrajectory evolve_spectral(const DispersiveRun& run, const Field1D& zeta0,
                                     const Field1D& psi0, Real dt_max) {
  run.validate();
  const Grid1D& g = run.grid;
  require_same_grid(zeta0.grid, g, "evolve_spectral");
  require_same_grid(psi0.grid, g, "evolve_spectral");
  if (run.t_samples.empty()) throw ConfigError("evolve_spectral: no sample times");

  const Real xi_max = pi / g.dx();
  Real dt = dt_max > 0 ? dt_max : 0.5 / xi_max;

  DispersiveState s;
  s.zeta = forward(zeta0);
  s.psi = forward(psi0);
  s.t = 0;

  ArrayXc p0 = ArrayXc::Zero(g.n);
  if (run.kind != PressureKind::none) p0 = forward(run.P0).c;

  DispersiveTrajectory traj;
  for (Real target : run.t_samples) {
    if (target < s.t - 1e-12) throw ConfigError("evolve_spectral: sample times must ascend");
    const Real span = target - s.t;
    if (span > 1e-14) {
      const Index nsub = std::max<Index>(1, static_cast<Index>(std::ceil(span / dt - 1e-12)));
      const Real h = span / static_cast<Real>(nsub);
      for (Index i = 0; i < nsub; ++i) s = step_with_spectrum(s, run, h, &p0);
    }
    s.t = target;  // suppress drift accumulation
    Field1D zf = inverse(s.zeta);
    Index where = 0;
    const Real m = zf.v.abs().maxCoeff(&where);
    traj.times.push_back(target);
    traj.zeta.push_back(zf);
    traj.zeta_max.push(target, m, g.node(where));
    traj.energy.push_back(homogeneous_energy(s, run.mu));
  }
  return traj;
}

namespace {

Field1D synthesize(const Grid1D& g, const ArrayXc& coeffs) {
  return inverse(SpectralField{g, coeffs});
}

}  // namespace

Field1D zeta_L_resonant(const DispersiveRun& run, Real t) {
  if (run.kind != PressureKind::resonant)
    throw ConfigError("zeta_L_resonant: run must use the resonant pressure kind");
  const Grid1D& g = run.grid;
  const ArrayXc c = forward(run.P0).c;
  ArrayXc out(g.n);
  for (Index k = 0; k < g.n; ++k) {
    const Real om_s = dispersion_frequency(g.wavenumber(k), run.mu);
    out[k] = Complex(0, 0.5) * c[k] * std::sin(t * om_s);
  }
  return synthesize(g, out);
}

Field1D zeta_R_resonant(const DispersiveRun& run, Real t) {
  if (run.kind != PressureKind::resonant)
    throw ConfigError("zeta_R_resonant: run must use the resonant pressure kind");
  const Grid1D& g = run.grid;
  const ArrayXc c = forward(run.P0).c;
  ArrayXc out(g.n);
  for (Index k = 0; k < g.n; ++k) {
    const Real om_s = dispersion_frequency(g.wavenumber(k), run.mu);
    out[k] = Complex(0, 0.5 * t) * om_s * c[k] * expi(-t * om_s);
  }
  return synthesize(g, out);
}

namespace {

Complex unit_speed_coeff(Real xi, Real mu, Real t, Complex c) {
  const Real om_s = dispersion_frequency(xi, mu);
  const Real gap = xi * omega_minus_one(std::sqrt(mu) * xi);  // om_s - xi
  return Complex(0, 0.5) * om_s * c * expi(-t * om_s) * t * phi1(Complex(0, t * gap));
}

}  // namespace

Field1D zeta_R_unit_speed(const DispersiveRun& run, Real t) {
  if (run.kind != PressureKind::traveling_unit_speed)
    throw ConfigError("zeta_R_unit_speed: run must use the unit-speed pressure kind");
  const Grid1D& g = run.grid;
  const ArrayXc c = forward(run.P0).c;
  ArrayXc out(g.n);
  for (Index k = 0; k < g.n; ++k)
    out[k] = unit_speed_coeff(g.wavenumber(k), run.mu, t, c[k]);
  return synthesize(g, out);
}

Field1D zeta_L_unit_speed(const DispersiveRun& run, Real t) {
  if (run.kind != PressureKind::traveling_unit_speed)
    throw ConfigError("zeta_L_unit_speed: run must use the unit-speed pressure kind");
  const Grid1D& g = run.grid;
  const ArrayXc c = forward(run.P0).c;
  ArrayXc out(g.n);
  for (Index k = 0; k < g.n; ++k) {
    const Real xi = g.wavenumber(k);
    const Real om_s = dispersion_frequency(xi, run.mu);
    out[k] = Complex(0, 0.5) * om_s * c[k] * expi(t * om_s) * t * phi1(Complex(0, -t * (xi + om_s)));
  }
  return synthesize(g, out);
}

Real zeta_R_unit_speed_at_front(const DispersiveRun& run, Real t) {
  const Grid1D& g = run.grid;
  const ArrayXc c = forward(run.P0).c;
  Complex acc(0, 0);
  for (Index k = 0; k < g.n; ++k) {
    const Real xi = g.wavenumber(k);
    // zeta_R^(t,xi) e^{i xi t}: the transport and dispersion phases combine
    // into e^{-it gap} phi1(it gap) = phi1(-it gap), gap = om_s - xi.
    const Real om_s = dispersion_frequency(xi, run.mu);
    const Real gap = xi * omega_minus_one(std::sqrt(run.mu) * xi);
    acc += Complex(0, 0.5) * om_s * c[k] * t * phi1(Complex(0, -t * gap));
  }
  if (std::abs(acc.imag()) > 1e-8 * std::max(std::abs(acc.real()), Real(1e-30)))
    throw NumericalError("zeta_R_unit_speed_at_front: synthesis not real");
  return acc.real();
}

Real pressure_spectrum_l1(const DispersiveRun& run) {
  const ArrayXc c = forward(run.P0).c;
  return c.abs().sum();
}

Real resonant_envelope_norms(const DispersiveRun& run) {
  const Grid1D& g = run.grid;
  const Real dxi = g.dxi();
  const ArrayXc c = forward(run.P0).c;
  Field1D xp{g, ArrayXr(g.n)};
  for (Index i = 0; i < g.n; ++i) xp.v[i] = g.node(i) * run.P0.v[i];
  const ArrayXc cx = forward(xp).c;

  // Parseval with f^(xi) = c_k/dxi: |f|_{H^3}^2 = 2 pi int (1+xi^2)^3 |f^|^2
  Real h3 = 0, h3x = 0;
  for (Index k = 0; k < g.n; ++k) {
    const Real xi = g.wavenumber(k);
    const Real w = std::pow(1 + xi * xi, 3) * 2 * pi / dxi;
    h3 += w * std::norm(c[k]);
    h3x += w * std::norm(cx[k]);
  }
  const Real l1 = g.dx() * run.P0.v.abs().sum();
  return std::sqrt(h3) + l1 + std::sqrt(h3x);
}

DecayReport dispersion_decay_check(const Field1D& f, Real mu, const std::vector<Real>& t_samples,
                                   Real t_min_envelope, Real envelope_constant, Real mean_tol) {
  const Grid1D& g = f.grid;
  SpectralField s = forward(f);
  const Real mag = std::max(f.v.abs().maxCoeff(), Real(1e-300));
  if (std::abs(s.c[0]) > mean_tol * mag)
    throw ConfigError("dispersion_decay_check: field mean exceeds tolerance");
  s.c[0] = 0;  // enforce exactly

  // f^'(xi) is the spectrum of -i X f(X).
  Field1D xf{g, ArrayXr(g.n)};
  for (Index i = 0; i < g.n; ++i) xf.v[i] = g.node(i) * f.v[i];
  const ArrayXc d = forward(xf).c;  // spectrum of X f; f^' = -i * (this)/dxi

  const Real dxi = g.dxi();
  Real n1 = 0, n2 = 0;
  for (Index k = 0; k < g.n; ++k) {
    const Real xi = g.wavenumber(k);
    const Real fp = std::abs(d[k]) / dxi;  // |f^'(xi_k)|
    if (k == 0) {
      // integrable 1/sqrt|xi| singularity: exact local integral over the
      // central cell of width dxi.
      n1 += fp * 4 * std::sqrt(dxi / 2);
      continue;
    }
    n1 += fp / std::sqrt(std::abs(xi)) * dxi;
    n2 += std::pow(std::abs(xi), 0.75) * fp * dxi;
  }

  DecayReport rep;
  rep.K = n1 / std::sqrt(mu) + std::pow(mu, 0.125) * n2;
  rep.envelope_constant = envelope_constant;

  for (Real t : t_samples) {
    ArrayXc evolved(g.n);
    for (Index k = 0; k < g.n; ++k)
      evolved[k] = s.c[k] * expi(-t * dispersion_frequency(g.wavenumber(k), mu));
    Field1D u = inverse(SpectralField{g, evolved});
    Index where = 0;
    const Real m = u.v.abs().maxCoeff(&where);
    rep.sup_series.push(t, m, g.node(where));
  }

  rep.envelope_ok = true;
  rep.worst_ratio = 0;
  for (std::size_t i = 0; i < rep.sup_series.size(); ++i) {
    const Real t = rep.sup_series.times[i];
    if (t < t_min_envelope) continue;
    const Real ratio = rep.sup_series.sup_norm[i] * std::sqrt(t) / rep.K;
    rep.worst_ratio = std::max(rep.worst_ratio, ratio);
    if (ratio > envelope_constant) rep.envelope_ok = false;
  }

  const Real tmin = *std::min_element(t_samples.begin(), t_samples.end());
  const Real tmax = *std::max_element(t_samples.begin(), t_samples.end());
  bool positive = true;
  for (Real v : rep.sup_series.sup_norm) positive = positive && v > 0;
  if (tmax > tmin && tmin > 0 && positive)
    rep.fitted_exponent = fit_growth(rep.sup_series, tmin, tmax).exponent;
  return rep;
}

Real airy_cubic_moment() {
  // sqrt(3) * int_0^inf r exp(-r^3) dr, Simpson on [0, 6].
  const Index n = 6000;
  const Real h = 6.0 / n;
  auto g = [](Real r) { return r * std::exp(-r * r * r); };
  Real s = g(0) + g(6.0);
  for (Index i = 1; i < n; ++i) s += g(h * i) * (i % 2 ? 4.0 : 2.0);
  return std::sqrt(3.0) * s * h / 3;
}

namespace {

// Continuum transform P0^(xi) = (1/2pi) int P0 e^{-i xi X} dX by direct
// trapezoid over the grid nodes (periodic, so spectrally accurate).
Complex continuum_transform(const Field1D& f, Real xi) {
  Complex acc(0, 0);
  for (Index i = 0; i < f.grid.n; ++i) {
    const Real x = f.grid.node(i);
    acc += f.v[i] * Complex(std::cos(xi * x), -std::sin(xi * x));
  }
  return acc * f.grid.dx() / (2 * pi);
}

// Second derivative of x -> x*omega(x) by Richardson-extrapolated central
// differences (independent of any series for omega).
Real phase_second_derivative(Real x) {
  auto f = [](Real y) { return y * omega(y); };
  const Real h = 1e-3 * std::max(Real(1), std::abs(x));
  const Real d2h = (f(x + h) - 2 * f(x) + f(x - h)) / (h * h);
  const Real d2h2 = (f(x + h / 2) - 2 * f(x) + f(x - h / 2)) / (h * h / 4);
  return (4 * d2h2 - d2h) / 3;
}

}  // namespace

Real resonant_sqrt_t_limit(const DispersiveRun& run) {
  const Real rmu = std::sqrt(run.mu);
  Real best = 0;
  const Real xi_hi = std::min(pi / run.grid.dx(), Real(64) / rmu);
  const Index samples = 4000;
  for (Index i = 1; i <= samples; ++i) {
    const Real xi = xi_hi * static_cast<Real>(i) / samples;
    const Real x = rmu * xi;
    const Real curv = rmu * phase_second_derivative(x);
    if (std::abs(curv) < 1e-14) continue;
    const Real amp = std::abs(dispersion_frequency(xi, run.mu)) *
                     std::abs(continuum_transform(run.P0, xi)) *
                     std::sqrt(2 * pi / std::abs(curv));
    best = std::max(best, amp);
  }
  return best;
}

Real unit_speed_cbrt_limit(const DispersiveRun& run) {
  const Real p00 = std::abs(continuum_transform(run.P0, 0));
  if (p00 < 1e-14)
    throw ConfigError("unit_speed_cbrt_limit: P0^(0) vanishes; the cubic law does not apply");
  return 1.5 * std::pow(6.0, 2.0 / 3.0) * std::pow(run.mu, -2.0 / 3.0) * p00 *
         airy_cubic_moment();
}

}  // namespace wavelab
