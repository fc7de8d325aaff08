#pragma once

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <memory>
#include <vector>

#include "wavelab/grid.hpp"
#include "wavelab/spectral.hpp"

namespace wavelab {

// ---------------------------------------------------------------------------
// Elliptic problems on the flat strip S = (periodic x) x [-1, 0]. The fluid
// domain is pulled back through a regularizing diffeomorphism; the pulled
// back operator is div( P(Sigma) grad ) with the anisotropic gradient
// (sqrt(mu) d/dX, d/dz). Discretization: Q1 elements on the tensor grid,
// 2x2 Gauss quadrature, so the discrete bilinear form is exactly symmetric.
// Boundary operators are defined algebraically from the discrete form
// (weak conormal traces), which makes the adjoint identities hold to solver
// precision rather than to discretization order.
// ---------------------------------------------------------------------------

struct StripGrid2D {
  Grid1D x;
  Index n_z = 0;  // number of levels including both ends

  Real dz() const { return Real(1) / static_cast<Real>(n_z - 1); }
  Real z(Index j) const { return -1 + static_cast<Real>(j) * dz(); }
  Index dof(Index i, Index j) const { return j * x.n + i; }
  Index size() const { return x.n * n_z; }

  void validate() const {
    x.validate();
    if (n_z < 8) throw ConfigError("strip grid: n_z must be at least 8");
  }
};

using ArrayXXr = Eigen::ArrayXX<Real>;

/// Regularizing diffeomorphism data: sigma(X,z) and its first derivatives
/// at the grid nodes, plus the realized Jacobian bound min(1 + dsigma/dz).
struct Diffeo {
  StripGrid2D grid;
  Real delta = 0.1;
  ArrayXXr sigma;     // (n_x, n_z)
  ArrayXXr sigma_x;   // spectral in X
  ArrayXXr sigma_z;   // centered in z (one-sided at the ends)
  Real jacobian_min = 0;
};

/// Smooth even plateau cutoff: 1 on [-1/2, 1/2], 0 outside (-2, 2).
Real theta_cutoff(Real r);

/// Assemble sigma for surface epsilon*zeta and bottom beta*b. delta is
/// halved automatically (down to delta_floor) until 1 + dsigma/dz >= k0.
Diffeo build_diffeo(const Field1D& zeta, const Field1D& b, const PhysicalParams& params,
                    Real delta, const StripGrid2D& grid, Real k0 = 0.1, Real delta_floor = 1e-4,
                    bool allow_delta_halving = true);

/// Per-node symmetric coefficient matrix P(Sigma) = I + Q(Sigma) (entries
/// p11, p12, p22) and its pointwise coercivity constant.
struct CoeffField {
  StripGrid2D grid;
  Real mu = 1;
  ArrayXXr p11, p12, p22;
  Real coercivity = 0;  // min over nodes of the smaller eigenvalue of P
};

CoeffField build_coefficients(const Diffeo& diffeo, Real mu);
CoeffField flat_coefficients(const StripGrid2D& grid, Real mu);

enum class StripProblem { surface, bottom };

struct StripSolution {
  StripProblem which = StripProblem::surface;
  ArrayXXr phi;  // (n_x, n_z), level n_z-1 is z = 0
};

struct BoundaryOperators {
  Field1D g_dn;  // e_z . P grad^mu phi^h at z = 0   (Dirichlet-Neumann, unscaled)
  Field1D g_nn;  // e_z . P grad^mu phi^B at z = 0   (Neumann-Neumann)
  Field1D g_dd;  // phi^h at z = -1                  (Dirichlet-Dirichlet)
  Field1D g_nd;  // phi^B at z = -1                  (Neumann-Dirichlet)
};

/// Assembled discrete problems for one coefficient field: the full
/// stiffness matrix, the factorization of its non-surface block, and the
/// weak-trace machinery. All solves behind one factorization.
class StripOperators {
 public:
  StripOperators(const StripGrid2D& grid, const CoeffField& coeffs);

  const StripGrid2D& grid() const { return grid_; }
  const CoeffField& coeffs() const { return coeffs_; }

  /// Dirichlet data psi at z = 0, homogeneous conormal flux at z = -1.
  StripSolution solve_surface(const Field1D& psi) const;

  /// Zero trace at z = 0, weak conormal flux B at z = -1.
  StripSolution solve_bottom(const Field1D& B) const;

  /// Weak conormal trace at the surface: (K u)|surface rows / dx.
  Field1D surface_flux(const StripSolution& sol) const;

  /// Nodal trace at the bottom line.
  Field1D bottom_trace(const StripSolution& sol) const;

  BoundaryOperators boundary_operators(const StripSolution& sol_surface,
                                       const StripSolution& sol_bottom) const;

  /// Discrete energy a(u, u) = int grad^mu u . P grad^mu u.
  Real energy(const StripSolution& a, const StripSolution& b) const;

  /// Assembled form over all dofs (exactly symmetric by construction).
  const Eigen::SparseMatrix<Real>& stiffness() const { return full_; }

  Real mu() const { return coeffs_.mu; }

 private:
  ArrayXXr solve_reduced(const ArrayXr& surface_values, const ArrayXr& bottom_load) const;

  StripGrid2D grid_;
  CoeffField coeffs_;
  Eigen::SparseMatrix<Real> full_;            // all dofs
  Eigen::SparseMatrix<Real> interior_;        // non-surface block
  Eigen::SparseMatrix<Real> interior_surface_;  // coupling block
  std::shared_ptr<Eigen::SimplicialLDLT<Eigen::SparseMatrix<Real>>> ldlt_;
  bool use_cg_ = false;
};

/// Gradient energy int |grad^mu u|^2 over the strip by direct Q1
/// quadrature (flat metric); used by the trace-inequality check.
Real strip_gradient_energy(const StripGrid2D& grid, Real mu, const ArrayXXr& u);

/// Discrete trace-lemma ratio |sqrt(1+sqrt(mu)|D|) u(.,-1)|_L2 divided by
/// |grad^mu u|_L2(S) for a member of the zero-surface-trace space.
Real trace_inequality_ratio(const StripGrid2D& grid, Real mu, const ArrayXXr& u);

struct VelocityTraces {
  Field1D w_surf;
  Field1D v_surf;
  Field1D w_bott;
  Field1D v_bott;
};

/// Surface and bottom velocity traces built from the four boundary
/// operators; B enters unscaled (callers fold in the landslide ratio).
VelocityTraces velocity_traces(const StripOperators& ops, const StripSolution& sol_surface,
                               const StripSolution& sol_bottom, const Field1D& psi,
                               const Field1D& B, const Field1D& zeta, const Field1D& b,
                               const PhysicalParams& params);

struct ShapeDerivativeReport {
  std::vector<Real> taus;
  std::vector<Real> err_surface;  // relative error, d(G + mu Gnn).(h,0)
  std::vector<Real> err_bottom;   // relative error, d(G + mu Gnn).(0,k)
  std::vector<Real> err_dd;       // relative error, d(Gdd + mu Gnd).(h,0)
};

/// One-sided finite-difference directional derivatives of the boundary
/// operators against their closed-form shape-derivative expressions,
/// evaluated for a decreasing ladder of perturbation sizes tau.
ShapeDerivativeReport shape_derivative_check(const Field1D& psi, const Field1D& B,
                                             const Field1D& zeta, const Field1D& b,
                                             const Field1D& h, const Field1D& k,
                                             const PhysicalParams& params,
                                             const StripGrid2D& grid, Real delta,
                                             const std::vector<Real>& taus);

/// Kinetic functional both ways: volume quadratic form vs boundary pairing
/// form. Returns {volume, boundary}.
std::pair<Real, Real> kinetic_energy_two_ways(const StripOperators& ops, const Field1D& psi,
                                              const Field1D& dtb, const PhysicalParams& params);

}  // namespace wavelab
