#include "wavelab/series.hpp"

#include <cmath>

namespace wavelab {

std::pair<Real, Real> linear_fit(const std::vector<Real>& x, const std::vector<Real>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw ConfigError("linear_fit: need at least two matched samples");
  const Real n = static_cast<Real>(x.size());
  Real sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const Real det = n * sxx - sx * sx;
  if (det == 0) throw ConfigError("linear_fit: degenerate abscissae");
  const Real b = (n * sxy - sx * sy) / det;
  const Real a = (sy - b * sx) / n;
  return {a, b};
}

GrowthFit fit_growth(const MaxSeries& series, Real t1, Real t2) {
  if (!(t2 > t1) || !(t1 > 0)) throw ConfigError("fit_growth: need 0 < t1 < t2");
  std::vector<Real> lt, ls;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const Real t = series.times[i];
    if (t < t1 || t > t2) continue;
    if (!(series.sup_norm[i] > 0))
      throw ConfigError("fit_growth: sup_norm must be positive on the fit window");
    lt.push_back(std::log(t));
    ls.push_back(std::log(series.sup_norm[i]));
  }
  if (lt.size() < 3) throw ConfigError("fit_growth: fewer than three samples in window");
  auto [a, b] = linear_fit(lt, ls);
  Real ss = 0;
  for (std::size_t i = 0; i < lt.size(); ++i) {
    const Real r = ls[i] - (a + b * lt[i]);
    ss += r * r;
  }
  GrowthFit fit;
  fit.t1 = t1;
  fit.t2 = t2;
  fit.exponent = b;
  fit.prefactor = std::exp(a);
  fit.residual = std::sqrt(ss / static_cast<Real>(lt.size()));
  return fit;
}

Real fit_linear_slope(const MaxSeries& series, Real t1, Real t2) {
  std::vector<Real> t, s;
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (series.times[i] < t1 || series.times[i] > t2) continue;
    t.push_back(series.times[i]);
    s.push_back(series.sup_norm[i]);
  }
  if (t.size() < 3) throw ConfigError("fit_linear_slope: fewer than three samples in window");
  return linear_fit(t, s).second;
}

}  // namespace wavelab
