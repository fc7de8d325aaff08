#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "wavelab/grid.hpp"
#include "wavelab/series.hpp"

namespace wavelab {

// ---------------------------------------------------------------------------
// Shallow-water model over variable topography:
//   d''zeta1/dt^2 - d/dX( h0 d zeta1/dX ) = d''b_m/dt^2,
// h0 = 1 - beta*b0 >= h_min > 0, zeta1(0) = d zeta1/dt(0) = 0.
// ---------------------------------------------------------------------------

/// Still-water depth profile. h0 is sampled both at nodes and at cell
/// midpoints (the flux form uses the midpoint values), from the blended
/// analytic profile so both samplings are consistent.
struct Bathymetry {
  Grid1D grid;
  Real beta = 0;
  Field1D b0;       // blended bottom at nodes
  ArrayXr h0;       // 1 - beta*b0 at nodes
  ArrayXr h0_mid;   // 1 - beta*b0 at midpoints x_i + dx/2
  Real h_min = 0;   // realized minimum of h0

  void validate() const {
    if (!(h_min > 0)) throw ConfigError("bathymetry: water depth must stay positive");
  }
};

/// Build a bathymetry from an analytic bottom profile. The profile is
/// blended to zero over the outer `blend_fraction` of the box on each side
/// so that non-decaying profiles (tanh slopes) become periodic.
Bathymetry make_bathymetry(const Grid1D& grid, const std::function<Real(Real)>& b0_fn, Real beta,
                           Real blend_fraction = 0.05);

Bathymetry flat_bathymetry(const Grid1D& grid);

/// Moving-bottom description. `constructed` landslides are generated by the
/// companion system below; `tabulated` carries d''b_m/dt^2 directly.
struct LandslideMotion {
  enum class Kind { constructed, tabulated };
  Kind kind = Kind::constructed;

  // constructed: either an initial profile f (V3(0) = f') or an initial
  // rate g = d zeta3/dt(0); exactly one is set. `which` records the choice.
  std::optional<std::function<Real(Real)>> profile_slope;  // f'
  std::optional<std::function<Real(Real)>> initial_rate;   // g
  std::string which;

  // tabulated: forcing d''b_m/dt^2(t, X)
  std::function<Real(Real, Real)> d2bm_dt2;

  static LandslideMotion from_profile(std::function<Real(Real)> f_slope);
  static LandslideMotion from_rate(std::function<Real(Real)> rate);
  static LandslideMotion none();
};

/// Discrete flux-form operator L u = D^-( h0_mid D^+ u ), self-adjoint in
/// the plain dx-weighted inner product.
ArrayXr flux_laplacian(const ArrayXr& u, const Bathymetry& bathy);

/// Leapfrog state for zeta1.
struct TopoState {
  Field1D zeta1;
  Field1D zeta1_prev;
  Real t = 0;
};

void check_topo_cfl(Real dt, const Grid1D& grid, const Bathymetry& bathy);

/// One leapfrog step with external forcing F = d''b_m/dt^2 sampled at the
/// current time.
TopoState step_topo_fd(const TopoState& state, const Bathymetry& bathy, const ArrayXr& forcing,
                       Real dt);

/// Staggered companion system d zeta3/dt + d(h0 V3)/dX = 0,
/// d V3/dt + d zeta3/dX = 0 with (zeta3, V3)(0) = (0, V0). V3 lives at cell
/// midpoints and half time levels; eliminating V3 reproduces the flux-form
/// leapfrog exactly.
struct CompanionState {
  ArrayXr zeta3;     // nodes, integer times
  ArrayXr v3_half;   // midpoints, time t + dt/2
  Real t = 0;
};

CompanionState initial_companion_state(const Bathymetry& bathy, const LandslideMotion& motion,
                                       Real dt);
CompanionState step_companion(const CompanionState& s, const Bathymetry& bathy, Real dt);

/// Trajectories of the constructed resonance. Snapshots are stored every
/// `snapshot_stride` steps; zeta1 = t * zeta3 and b_m = 2*int_0^t zeta3 ds
/// (trapezoidal accumulation).
struct ConstructedResonance {
  std::vector<Real> times;
  std::vector<ArrayXr> zeta1;
  std::vector<ArrayXr> b_m;
  MaxSeries zeta1_max;   // sup |zeta1| over the box
  MaxSeries bm_max;      // sup |b_m| over the box
  std::string initial_data_kind;
};

struct TopoRunConfig {
  Real dt = 0;
  Real t_end = 0;
  Index record_stride = 10;
  Index snapshot_stride = 0;  // 0: keep no snapshots

  void validate(const Bathymetry& bathy) const;
};

ConstructedResonance build_constructed_resonance(const Bathymetry& bathy,
                                                 const LandslideMotion& motion,
                                                 const TopoRunConfig& cfg);

/// Forced run with nontrivial initial data: an incident pulse shaped by
/// `incident` riding over the landslide forcing of a constructed motion.
/// Returns the sup series of zeta1 over the box.
struct AmplifiedWaveResult {
  MaxSeries zeta1_max;
  MaxSeries bm_max;
  std::vector<Real> times;
  std::vector<ArrayXr> zeta1;
};

AmplifiedWaveResult run_amplified_wave(const Bathymetry& bathy, const LandslideMotion& landslide,
                                       const std::function<Real(Real)>& incident,
                                       const TopoRunConfig& cfg, Real landslide_scale = 1.0);

/// Discrete energy of the unforced equation, conserved by the leapfrog
/// scheme up to roundoff: the product form at staggered times
///   E^{n+1/2} = sum dx [ ((z^{n+1}-z^n)/dt)^2 + h_mid D+z^{n+1} D+z^n ].
Real staggered_energy(const TopoState& prev_and_current, const Bathymetry& bathy, Real dt);

/// Independent PDE residual of stored trajectories, evaluated with
/// fourth-order centered stencils in t and X (never the solver's own
/// stencils). Returns max over interior sampled times of the spatial L2
/// norm of d''z/dt^2 - d(h0 dz/dX)/dX - d''b/dt^2.
Real trajectory_residual(const std::vector<Real>& times, const std::vector<ArrayXr>& zeta1,
                         const std::vector<ArrayXr>& b_m, const Bathymetry& bathy,
                         const std::function<Real(Real)>& h0_fn,
                         const std::function<Real(Real)>& dh0_fn);

}  // namespace wavelab
