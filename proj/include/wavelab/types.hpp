#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace wavelab {

using Real = double;
using Complex = std::complex<Real>;
using Index = Eigen::Index;

using ArrayXr = Eigen::ArrayX<Real>;
using ArrayXc = Eigen::ArrayX<Complex>;

inline constexpr Real pi = 3.14159265358979323846;

/// Invalid run configuration (bad key, CFL violation caught before the
/// run, parameter out of domain). Maps to CLI exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Numerical failure while a run is in progress (solver breakdown,
/// degenerate Jacobian, non-finite state). Maps to CLI exit code 3.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Dimensionless parameters of the hydrodynamic scaling: epsilon is the
/// surface amplitude over the mean depth, beta the bathymetry amplitude,
/// lambda the moving-bottom share of the bathymetry, mu the squared
/// depth-to-wavelength ratio.
struct PhysicalParams {
  Real epsilon = 0.1;
  Real beta = 0.1;
  Real lambda = 1.0;
  Real mu = 1.0;

  void validate() const {
    if (!(epsilon > 0 && epsilon <= 1.0))
      throw ConfigError("physical.epsilon must lie in (0,1], got " + std::to_string(epsilon));
    if (!(beta > 0 && beta <= 1.0))
      throw ConfigError("physical.beta must lie in (0,1], got " + std::to_string(beta));
    if (!(beta * lambda > 0 && beta * lambda <= 1.0))
      throw ConfigError("physical.beta*lambda must lie in (0,1]");
    if (!(mu > 0))
      throw ConfigError("physical.mu must be positive, got " + std::to_string(mu));
  }

  // Moving bottom and surface amplitudes matched (beta*lambda = epsilon);
  // the propagation experiments assume this scaling.
  bool landslide_matches_surface(Real tol = 1e-12) const {
    return std::abs(beta * lambda - epsilon) <= tol * std::max({Real(1), epsilon, beta * lambda});
  }
};

}  // namespace wavelab
