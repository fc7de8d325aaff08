#pragma once

#include <string>

#include "wavelab/grid.hpp"

namespace wavelab {

// ---------------------------------------------------------------------------
// Discrete Fourier transform layer.
//
// forward/inverse use the convention f(x) = sum_k c_k exp(i xi_k x), so the
// coefficients of a field supported away from the box seam approximate the
// line transform f^(xi) = (1/2pi) integral f(x) exp(-i xi x) dx through
// f^(xi_k) ~= c_k / dxi.
// ---------------------------------------------------------------------------

SpectralField forward(const Field1D& f);

/// Inverse transform for data expected to synthesize a real field. The
/// imaginary residue must stay below tol * max|f| or a symbol-parity error
/// is raised.
Field1D inverse(const SpectralField& s, Real imag_tol = 1e-10);

/// Inverse transform keeping the complex synthesis (diagnostics only).
ArrayXc inverse_complex(const SpectralField& s);

// ---------------------------------------------------------------------------
// Fourier multipliers f(D).
// ---------------------------------------------------------------------------

/// A multiplier is a symbol xi -> m(xi), finite on every grid wavenumber
/// (removable singularities must be evaluated by their limit), plus a label
/// used in error messages.
struct Multiplier {
  std::function<Complex(Real)> symbol;
  std::string name = "multiplier";
};

SpectralField apply(const SpectralField& s, const Multiplier& m);
Field1D apply(const Field1D& f, const Multiplier& m, Real imag_tol = 1e-10);

// ---------------------------------------------------------------------------
// Scalar symbols of the flat-bottom theory. All handle the xi = 0 limit by
// a short Taylor series below |x| < 1e-8.
// ---------------------------------------------------------------------------

/// tanh(x)/x, value 1 at x = 0.
Real tanhc(Real x);

/// 1/cosh(x), overflow-safe for large |x|.
Real sech(Real x);

/// Phase-speed law omega(xi) = sqrt(tanh|xi| / |xi|); even, omega(0) = 1,
/// strictly decreasing on xi > 0 with omega ~ |xi|^{-1/2} at infinity.
Real omega(Real xi);

/// Signed dispersion frequency xi * omega(sqrt(mu) xi); odd in xi.
Real dispersion_frequency(Real xi, Real mu);

/// sinh((z+1)a)/sinh(a) for a >= 0, z in [-1,0]; value z+1 at a = 0.
Real sinh_ratio(Real a, Real z);

/// Energy-space weight |xi| / sqrt(1 + sqrt(mu)|xi|).
Real sqrt_dn_symbol(Real xi, Real mu);

// ---------------------------------------------------------------------------
// Flat-strip operators (exact multipliers).
// ---------------------------------------------------------------------------

/// Scaled Dirichlet-Neumann operator of the flat strip:
/// psi -> |D|^2 tanh(sqrt(mu)|D|)/(sqrt(mu)|D|) psi. Symmetric positive
/// semi-definite, annihilates constants.
Field1D flat_dn(const Field1D& psi, Real mu);

/// Neumann-Neumann operator of the flat strip: B -> sech(sqrt(mu)|D|) B.
/// An L2 contraction that preserves the mean and tends to the identity as
/// mu -> 0.
Field1D flat_nn(const Field1D& B, Real mu);

/// Harmonic extension into the strip that vanishes at the bottom:
/// phi -> sinh((z+1) sqrt(mu)|D|)/sinh(sqrt(mu)|D|) phi, for z in [-1,0].
Field1D extension_kernel(const Field1D& phi, Real z, Real mu);

// ---------------------------------------------------------------------------
// Convenience spectral calculus.
// ---------------------------------------------------------------------------

Field1D spectral_derivative(const Field1D& f);

/// Antiderivative with zero mean; requires the input mean to vanish within
/// mean_tol * max|f|.
Field1D spectral_antiderivative(const Field1D& f, Real mean_tol = 1e-8);

/// Parseval energy dx * sum f^2 == L * sum |c_k|^2 (used by tests).
Real spectral_energy(const SpectralField& s);

}  // namespace wavelab
