#include "wavelab/spectral.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>

namespace wavelab {

namespace {

// Phase factor exp(-i xi x_min) moving FFT coefficients to the convention
// f(x) = sum c_k exp(i xi_k x) with x the physical coordinate.
Complex origin_phase(const Grid1D& g, Index k, int sign) {
  const Real arg = static_cast<Real>(sign) * g.wavenumber(k) * g.x_min;
  return Complex(std::cos(arg), std::sin(arg));
}

}  // namespace

SpectralField forward(const Field1D& f) {
  f.grid.validate();
  if (f.v.size() != f.grid.n) throw ConfigError("forward: field length differs from grid.n");

  Eigen::FFT<Real> fft;
  Eigen::VectorXcd in(f.grid.n), out(f.grid.n);
  for (Index i = 0; i < f.grid.n; ++i) in[i] = Complex(f.v[i], 0);
  fft.fwd(out, in);

  SpectralField s{f.grid, ArrayXc(f.grid.n)};
  const Real scale = Real(1) / static_cast<Real>(f.grid.n);
  for (Index k = 0; k < f.grid.n; ++k) s.c[k] = out[k] * scale * origin_phase(f.grid, k, -1);
  return s;
}

ArrayXc inverse_complex(const SpectralField& s) {
  Eigen::FFT<Real> fft;
  Eigen::VectorXcd in(s.grid.n), out(s.grid.n);
  for (Index k = 0; k < s.grid.n; ++k)
    in[k] = s.c[k] * static_cast<Real>(s.grid.n) * origin_phase(s.grid, k, +1);
  fft.inv(out, in);
  ArrayXc res(s.grid.n);
  for (Index i = 0; i < s.grid.n; ++i) res[i] = out[i];
  return res;
}

Field1D inverse(const SpectralField& s, Real imag_tol) {
  const ArrayXc z = inverse_complex(s);
  const Real mag = std::max(z.abs().maxCoeff(), Real(1e-300));
  const Real residue = z.imag().abs().maxCoeff();
  if (residue > imag_tol * mag)
    throw NumericalError("inverse: imaginary residue " + std::to_string(residue) +
                         " exceeds tolerance; symbol parity is suspect");
  return Field1D{s.grid, z.real()};
}

SpectralField apply(const SpectralField& s, const Multiplier& m) {
  SpectralField out{s.grid, ArrayXc(s.grid.n)};
  for (Index k = 0; k < s.grid.n; ++k) {
    const Real xi = s.grid.wavenumber(k);
    Complex sym = m.symbol(xi);
    // The Nyquist bin has no conjugate partner and represents a pure
    // cosine; only the even (real) part of the symbol acts on it.
    if (s.grid.n % 2 == 0 && k == s.grid.n / 2) sym = Complex(sym.real(), 0);
    if (!std::isfinite(sym.real()) || !std::isfinite(sym.imag()))
      throw NumericalError("multiplier '" + m.name + "' is singular at xi = " + std::to_string(xi));
    out.c[k] = sym * s.c[k];
  }
  return out;
}

Field1D apply(const Field1D& f, const Multiplier& m, Real imag_tol) {
  return inverse(apply(forward(f), m), imag_tol);
}

Real tanhc(Real x) {
  const Real a = std::abs(x);
  if (a < 1e-8) {
    const Real x2 = x * x;
    return 1 - x2 / 3 + 2 * x2 * x2 / 15;
  }
  return std::tanh(a) / a;
}

Real sech(Real x) {
  const Real a = std::abs(x);
  if (a > 350) {
    const Real e = std::exp(-a);
    return 2 * e / (1 + e * e);
  }
  return Real(1) / std::cosh(a);
}

Real omega(Real xi) {
  const Real a = std::abs(xi);
  if (a < 1e-8) {
    const Real a2 = a * a;
    return 1 - a2 / 6 + 19 * a2 * a2 / 360;
  }
  return std::sqrt(std::tanh(a) / a);
}

Real dispersion_frequency(Real xi, Real mu) {
  return xi * omega(std::sqrt(mu) * xi);
}

Real sinh_ratio(Real a, Real z) {
  if (z < -1 || z > 0) throw ConfigError("sinh_ratio: z must lie in [-1,0]");
  if (a < 0) throw ConfigError("sinh_ratio: nonnegative argument expected");
  if (a < 1e-8) {
    const Real w = z + 1;
    return w * (1 + (w * w - 1) * a * a / 6);
  }
  // exp form: stable for large a (z <= 0 keeps every factor bounded).
  const Real num = 1 - std::exp(-2 * a * (z + 1));
  const Real den = 1 - std::exp(-2 * a);
  return std::exp(a * z) * num / den;
}

Real sqrt_dn_symbol(Real xi, Real mu) {
  const Real a = std::abs(xi);
  return a / std::sqrt(1 + std::sqrt(mu) * a);
}

Field1D flat_dn(const Field1D& psi, Real mu) {
  if (!(mu > 0)) throw ConfigError("flat_dn: mu must be positive");
  Multiplier m{[mu](Real xi) {
                 return Complex(xi * xi * tanhc(std::sqrt(mu) * xi), 0);
               },
               "flat_dn"};
  return apply(psi, m);
}

Field1D flat_nn(const Field1D& B, Real mu) {
  if (!(mu > 0)) throw ConfigError("flat_nn: mu must be positive");
  Multiplier m{[mu](Real xi) { return Complex(sech(std::sqrt(mu) * xi), 0); }, "flat_nn"};
  return apply(B, m);
}

Field1D extension_kernel(const Field1D& phi, Real z, Real mu) {
  if (!(mu > 0)) throw ConfigError("extension_kernel: mu must be positive");
  if (z < -1 || z > 0) throw ConfigError("extension_kernel: z must lie in [-1,0]");
  Multiplier m{[mu, z](Real xi) {
                 return Complex(sinh_ratio(std::sqrt(mu) * std::abs(xi), z), 0);
               },
               "extension_kernel"};
  return apply(phi, m);
}

Field1D spectral_derivative(const Field1D& f) {
  Multiplier m{[](Real xi) { return Complex(0, xi); }, "d/dx"};
  return apply(f, m);
}

Field1D spectral_antiderivative(const Field1D& f, Real mean_tol) {
  SpectralField s = forward(f);
  const Real mag = std::max(f.v.abs().maxCoeff(), Real(1e-300));
  if (std::abs(s.c[0]) > mean_tol * mag)
    throw ConfigError("spectral_antiderivative: input mean " + std::to_string(std::abs(s.c[0])) +
                      " is not negligible");
  SpectralField out{s.grid, ArrayXc(s.grid.n)};
  out.c[0] = 0;
  for (Index k = 1; k < s.grid.n; ++k) {
    if (s.grid.n % 2 == 0 && k == s.grid.n / 2) {
      out.c[k] = 0;
      continue;
    }
    out.c[k] = s.c[k] / Complex(0, s.grid.wavenumber(k));
  }
  return inverse(out);
}

Real spectral_energy(const SpectralField& s) {
  return s.grid.length() * s.c.abs2().sum();
}

}  // namespace wavelab
