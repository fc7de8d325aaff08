#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "wavelab/grid.hpp"
#include "wavelab/series.hpp"

namespace wavelab {

// ---------------------------------------------------------------------------
// Flat-bottom shallow-water model: d''h/dt^2 - d''h/dX^2 = d''(P+b)/dX^2 for
// h = zeta - b, with h(0) = -b(0,.), dh/dt(0) = 0. The forcing f = P + b is
// a traveling or tabulated disturbance.
// ---------------------------------------------------------------------------

/// Disturbance f(t,X). Traveling profiles carry an analytic f0 and slope
/// f0'; tabulated disturbances supply f and its X-slope directly.
struct DisturbanceProfile {
  enum class Kind { traveling, tabulated };
  Kind kind = Kind::traveling;

  // traveling: f(t,X) = f0(X - U t)
  std::function<Real(Real)> f0;
  std::function<Real(Real)> f0_dx;
  Real speed = 1.0;

  // tabulated: f(t,X) and slope df/dX(t,X)
  std::function<Real(Real, Real)> f;
  std::function<Real(Real, Real)> f_x;

  Real value(Real t, Real x) const {
    return kind == Kind::traveling ? f0(x - speed * t) : f(t, x);
  }
  Real slope(Real t, Real x) const {
    return kind == Kind::traveling ? f0_dx(x - speed * t) : f_x(t, x);
  }

  static DisturbanceProfile gaussian_traveling(Real speed, Real width = 1.0);
};

/// Right-moving forced component of the d'Alembert solution,
/// h_R(t,X) = (1/2) * integral_0^t df/dX(tau, X - t + tau) dtau.
/// Traveling disturbances evaluate in closed form; tabulated ones use
/// composite Simpson quadrature with quadrature_n panels.
Real dalembert_hR(const DisturbanceProfile& f, Real t, Real x, Index quadrature_n = 64);

/// Left-moving counterpart h_L(t,X) = (1/2) integral df/dX(tau, X + t - tau).
Real dalembert_hL(const DisturbanceProfile& f, Real t, Real x, Index quadrature_n = 64);

/// Full d'Alembert solution h = h_T + h_L - h_R for zero initial bottom
/// (h_T = 0). Oracle for the finite-difference path.
Real dalembert_h(const DisturbanceProfile& f, Real t, Real x, Index quadrature_n = 64);

/// Three-level leapfrog state: h at the current time plus the previous
/// level. The initial state encodes dh/dt(0) = 0 through a Taylor ghost
/// level, so every subsequent step is plain leapfrog.
struct ShallowState {
  Field1D h;
  Field1D h_prev;
  Real t = 0;
};

/// Periodic centered second difference (divided by dx^2).
ArrayXr second_difference(const ArrayXr& u, Real dx);

/// Build the t = 0 state for initial bottom b0 (h = -b0, dh/dt = 0).
ShallowState initial_shallow_state(const Grid1D& grid, const DisturbanceProfile& forcing,
                                   Real dt, const std::optional<Field1D>& b0 = std::nullopt);

/// One leapfrog step of d''h/dt^2 - d''h/dX^2 = d''f/dX^2 with the forcing
/// Laplacian evaluated by the same centered stencil. Requires dt <= dx.
ShallowState step_fd(const ShallowState& state, const DisturbanceProfile& forcing, Real dt,
                     const Grid1D& grid);

struct ShallowRunConfig {
  Grid1D grid;
  Real dt = 0;
  Real t_end = 0;
  // sup-norm recorded over |x - t| <= window_halfwidth when tracking the
  // right-moving response, or over the whole box when <= 0.
  Real window_halfwidth = 8.0;
  Index record_stride = 10;

  void validate() const;
};

/// Run the solver for one disturbance and record the max series.
MaxSeries run_shallow(const DisturbanceProfile& forcing, const ShallowRunConfig& cfg,
                      const std::optional<Field1D>& b0 = std::nullopt);

/// Proudman sweep: one run per speed, f(t,X) = f0(X - U t). Runs execute
/// concurrently up to `jobs` threads; results keep the input order.
std::vector<MaxSeries> run_proudman_sweep(const std::vector<Real>& speeds,
                                          const DisturbanceProfile& base_profile,
                                          const ShallowRunConfig& cfg, int jobs = 1);

/// Final-state field of a run (for oracle comparisons).
Field1D run_shallow_final_field(const DisturbanceProfile& forcing, const ShallowRunConfig& cfg,
                                const std::optional<Field1D>& b0 = std::nullopt);

}  // namespace wavelab
