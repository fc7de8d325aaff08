#pragma once

#include <functional>

#include "wavelab/types.hpp"

namespace wavelab {

/// Uniform periodic grid on [x_min, x_max): n nodes, node n would alias
/// node 0. Wavenumbers follow the usual FFT layout, xi_k = 2*pi*k~/L with
/// k~ = k for k < n/2 and k - n otherwise.
struct Grid1D {
  Real x_min = -pi;
  Real x_max = pi;
  Index n = 0;

  Real length() const { return x_max - x_min; }
  Real dx() const { return length() / static_cast<Real>(n); }
  Real node(Index i) const { return x_min + static_cast<Real>(i) * dx(); }

  ArrayXr nodes() const {
    ArrayXr x(n);
    for (Index i = 0; i < n; ++i) x[i] = node(i);
    return x;
  }

  // Fundamental spectral spacing 2*pi/L.
  Real dxi() const { return 2 * pi / length(); }

  Index signed_index(Index k) const { return k < n / 2 ? k : k - n; }
  Real wavenumber(Index k) const { return dxi() * static_cast<Real>(signed_index(k)); }

  ArrayXr wavenumbers() const {
    ArrayXr xi(n);
    for (Index k = 0; k < n; ++k) xi[k] = wavenumber(k);
    return xi;
  }

  void validate() const {
    if (n < 4) throw ConfigError("grid.n must be at least 4, got " + std::to_string(n));
    if (!(x_max > x_min)) throw ConfigError("grid requires x_max > x_min");
  }

  bool operator==(const Grid1D& o) const {
    return x_min == o.x_min && x_max == o.x_max && n == o.n;
  }
};

/// Real samples on a Grid1D.
struct Field1D {
  Grid1D grid;
  ArrayXr v;
};

/// Fourier coefficients c_k on the grid's wavenumber set, normalized so
/// that f(x) = sum_k c_k exp(i xi_k x) pointwise at the nodes.
struct SpectralField {
  Grid1D grid;
  ArrayXc c;
};

inline Field1D make_field(const Grid1D& g, const std::function<Real(Real)>& f) {
  Field1D out{g, ArrayXr(g.n)};
  for (Index i = 0; i < g.n; ++i) out.v[i] = f(g.node(i));
  return out;
}

inline Field1D zero_field(const Grid1D& g) { return Field1D{g, ArrayXr::Zero(g.n)}; }

inline Real sup_norm(const ArrayXr& v) { return v.abs().maxCoeff(); }
inline Real sup_norm(const Field1D& f) { return sup_norm(f.v); }

inline Real l2_norm(const Field1D& f) {
  return std::sqrt(f.grid.dx() * f.v.square().sum());
}

// L2 pairing dx * sum(u v).
inline Real inner(const Field1D& a, const Field1D& b) {
  return a.grid.dx() * (a.v * b.v).sum();
}

inline void require_same_grid(const Grid1D& a, const Grid1D& b, const char* where) {
  if (!(a == b)) throw ConfigError(std::string(where) + ": grids differ");
}

}  // namespace wavelab
