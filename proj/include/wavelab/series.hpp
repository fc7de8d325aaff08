#pragma once

#include <vector>

#include "wavelab/types.hpp"

namespace wavelab {

/// Time series of sup-norms with the location of the maximum.
struct MaxSeries {
  std::vector<Real> times;
  std::vector<Real> sup_norm;
  std::vector<Real> argmax_x;

  void push(Real t, Real s, Real x) {
    times.push_back(t);
    sup_norm.push_back(s);
    argmax_x.push_back(x);
  }
  std::size_t size() const { return times.size(); }
};

/// Power-law fit sup ~ prefactor * t^exponent over [t1, t2], least squares
/// in log-log coordinates. residual is the RMS of the log misfit.
struct GrowthFit {
  Real t1 = 0, t2 = 0;
  Real exponent = 0;
  Real prefactor = 0;
  Real residual = 0;
};

GrowthFit fit_growth(const MaxSeries& series, Real t1, Real t2);

/// Plain least-squares line y = a + b x; returns {a, b}.
std::pair<Real, Real> linear_fit(const std::vector<Real>& x, const std::vector<Real>& y);

/// Slope of sup_norm vs t over [t1, t2] (linear, not log-log).
Real fit_linear_slope(const MaxSeries& series, Real t1, Real t2);

}  // namespace wavelab
