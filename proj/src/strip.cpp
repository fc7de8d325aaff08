#include "wavelab/strip.hpp"

#include <Eigen/IterativeLinearSolvers>

#include <cmath>
#include <limits>

namespace wavelab {

namespace {

Real smoothstep01(Real x) {
  if (x <= 0) return 0;
  if (x >= 1) return 1;
  const Real a = std::exp(-1 / x);
  const Real b = std::exp(-1 / (1 - x));
  return a / (a + b);
}

}  // namespace

Real theta_cutoff(Real r) {
  // plateau on [-1/2, 1/2], support (-2, 2)
  return smoothstep01((2 - std::abs(r)) / Real(1.5));
}

Diffeo build_diffeo(const Field1D& zeta, const Field1D& b, const PhysicalParams& params,
                    Real delta, const StripGrid2D& grid, Real k0, Real delta_floor,
                    bool allow_delta_halving) {
  grid.validate();
  params.validate();
  require_same_grid(zeta.grid, grid.x, "build_diffeo");
  require_same_grid(b.grid, grid.x, "build_diffeo");

  // depth condition: eps*zeta + 1 - beta*b bounded away from zero
  const ArrayXr depth = 1 + params.epsilon * zeta.v - params.beta * b.v;
  if (depth.minCoeff() <= 1e-6)
    throw ConfigError("build_diffeo: water depth degenerates (eps*zeta + 1 - beta*b <= 0)");

  const Index nx = grid.x.n;
  const Index nz = grid.n_z;
  Field1D ez{grid.x, params.epsilon * zeta.v};
  Field1D bb{grid.x, params.beta * b.v};

  Diffeo d;
  d.grid = grid;

  Real cur = delta;
  for (;;) {
    d.delta = cur;
    d.sigma.resize(nx, nz);
    for (Index j = 0; j < nz; ++j) {
      const Real zj = grid.z(j);
      Multiplier th_surf{[&, zj](Real xi) {
                           return Complex(theta_cutoff(cur * std::abs(zj) * std::abs(xi)), 0);
                         },
                         "theta(delta z |D|)"};
      Multiplier th_bott{[&, zj](Real xi) {
                           return Complex(theta_cutoff(cur * (zj + 1) * std::abs(xi)), 0);
                         },
                         "theta(delta (z+1) |D|)"};
      const Field1D s1 = apply(ez, th_surf);
      const Field1D s2 = apply(bb, th_bott);
      d.sigma.col(j) = (zj + 1) * s1.v - zj * s2.v;
    }

    // derivatives: spectral in X, second-order differences in z
    d.sigma_x.resize(nx, nz);
    d.sigma_z.resize(nx, nz);
    for (Index j = 0; j < nz; ++j) {
      Field1D level{grid.x, d.sigma.col(j)};
      d.sigma_x.col(j) = spectral_derivative(level).v;
    }
    const Real dz = grid.dz();
    for (Index j = 0; j < nz; ++j) {
      if (j == 0)
        d.sigma_z.col(j) = (-3 * d.sigma.col(0) + 4 * d.sigma.col(1) - d.sigma.col(2)) / (2 * dz);
      else if (j == nz - 1)
        d.sigma_z.col(j) =
            (3 * d.sigma.col(nz - 1) - 4 * d.sigma.col(nz - 2) + d.sigma.col(nz - 3)) / (2 * dz);
      else
        d.sigma_z.col(j) = (d.sigma.col(j + 1) - d.sigma.col(j - 1)) / (2 * dz);
    }
    d.jacobian_min = (1 + d.sigma_z).minCoeff();

    if (d.jacobian_min >= k0) return d;
    if (!allow_delta_halving || cur / 2 < delta_floor)
      throw NumericalError("build_diffeo: Jacobian bound 1 + dsigma/dz >= " + std::to_string(k0) +
                           " failed (min " + std::to_string(d.jacobian_min) +
                           "); use a smaller delta or smaller amplitudes");
    cur /= 2;
  }
}

CoeffField build_coefficients(const Diffeo& diffeo, Real mu) {
  if (!(mu > 0)) throw ConfigError("build_coefficients: mu must be positive");
  const Index nx = diffeo.grid.x.n;
  const Index nz = diffeo.grid.n_z;
  CoeffField c;
  c.grid = diffeo.grid;
  c.mu = mu;
  c.p11.resize(nx, nz);
  c.p12.resize(nx, nz);
  c.p22.resize(nx, nz);
  Real k = std::numeric_limits<Real>::max();
  for (Index j = 0; j < nz; ++j) {
    for (Index i = 0; i < nx; ++i) {
      const Real sz = diffeo.sigma_z(i, j);
      const Real sx = diffeo.sigma_x(i, j);
      const Real jac = 1 + sz;
      const Real p11 = jac;
      const Real p12 = -std::sqrt(mu) * sx;
      const Real p22 = (1 + mu * sx * sx) / jac;
      c.p11(i, j) = p11;
      c.p12(i, j) = p12;
      c.p22(i, j) = p22;
      const Real tr = p11 + p22;
      const Real det = p11 * p22 - p12 * p12;  // identically 1 for this Q
      const Real disc = std::sqrt(std::max(tr * tr - 4 * det, Real(0)));
      k = std::min(k, (tr - disc) / 2);
    }
  }
  c.coercivity = k;
  if (!(k > 0)) throw NumericalError("build_coefficients: P(Sigma) lost coercivity");
  return c;
}

CoeffField flat_coefficients(const StripGrid2D& grid, Real mu) {
  grid.validate();
  CoeffField c;
  c.grid = grid;
  c.mu = mu;
  c.p11 = ArrayXXr::Ones(grid.x.n, grid.n_z);
  c.p12 = ArrayXXr::Zero(grid.x.n, grid.n_z);
  c.p22 = ArrayXXr::Ones(grid.x.n, grid.n_z);
  c.coercivity = 1;
  return c;
}

namespace {

struct GaussData {
  // reference shape values and gradients at the 4 Gauss points
  Real N[4][4];
  Real dNdxi[4][4];
  Real dNdeta[4][4];
};

GaussData make_gauss() {
  GaussData g{};
  const Real q = 1 / std::sqrt(Real(3));
  const Real pts[4][2] = {{-q, -q}, {q, -q}, {-q, q}, {q, q}};
  for (int p = 0; p < 4; ++p) {
    const Real xi = pts[p][0], eta = pts[p][1];
    const Real nx[4] = {(1 - xi) / 2, (1 + xi) / 2, (1 - xi) / 2, (1 + xi) / 2};
    const Real nz[4] = {(1 - eta) / 2, (1 - eta) / 2, (1 + eta) / 2, (1 + eta) / 2};
    const Real dx[4] = {-0.5, 0.5, -0.5, 0.5};
    const Real dzq[4] = {-0.5, -0.5, 0.5, 0.5};
    for (int a = 0; a < 4; ++a) {
      g.N[p][a] = nx[a] * nz[a];
      g.dNdxi[p][a] = dx[a] * nz[a];
      g.dNdeta[p][a] = nx[a] * dzq[a];
    }
  }
  return g;
}

}  // namespace

StripOperators::StripOperators(const StripGrid2D& grid, const CoeffField& coeffs)
    : grid_(grid), coeffs_(coeffs) {
  grid_.validate();
  const Index nx = grid.x.n;
  const Index nz = grid.n_z;
  const Index ntot = nx * nz;
  const Index nint = nx * (nz - 1);  // all non-surface dofs (surface block is last)
  const Real dx = grid.x.dx();
  const Real dz = grid.dz();
  const Real mu = coeffs.mu;
  const Real smu = std::sqrt(mu);

  const GaussData gd = make_gauss();

  std::vector<Eigen::Triplet<Real>> trips;
  trips.reserve(static_cast<std::size_t>(16 * nx * (nz - 1)));

  for (Index j = 0; j + 1 < nz; ++j) {
    for (Index i = 0; i < nx; ++i) {
      const Index ip = (i + 1) % nx;
      const Index n0 = grid.dof(i, j), n1 = grid.dof(ip, j), n2 = grid.dof(i, j + 1),
                  n3 = grid.dof(ip, j + 1);
      const Index nodes[4] = {n0, n1, n2, n3};
      const Real q11[4] = {coeffs.p11(i, j), coeffs.p11(ip, j), coeffs.p11(i, j + 1),
                           coeffs.p11(ip, j + 1)};
      const Real q12[4] = {coeffs.p12(i, j), coeffs.p12(ip, j), coeffs.p12(i, j + 1),
                           coeffs.p12(ip, j + 1)};
      const Real q22[4] = {coeffs.p22(i, j), coeffs.p22(ip, j), coeffs.p22(i, j + 1),
                           coeffs.p22(ip, j + 1)};

      Real ke[4][4] = {};
      for (int p = 0; p < 4; ++p) {
        Real a11 = 0, a12 = 0, a22 = 0;
        for (int a = 0; a < 4; ++a) {
          a11 += gd.N[p][a] * q11[a];
          a12 += gd.N[p][a] * q12[a];
          a22 += gd.N[p][a] * q22[a];
        }
        // anisotropic gradient (sqrt(mu) d/dx, d/dz) folded into the matrix
        const Real t11 = mu * a11, t12 = smu * a12, t22 = a22;
        Real gx[4], gz[4];
        for (int a = 0; a < 4; ++a) {
          gx[a] = gd.dNdxi[p][a] * 2 / dx;
          gz[a] = gd.dNdeta[p][a] * 2 / dz;
        }
        const Real w = dx * dz / 4;
        // grouping keeps ke[a][b] bitwise equal to ke[b][a]
        for (int a = 0; a < 4; ++a)
          for (int bq = 0; bq < 4; ++bq)
            ke[a][bq] += w * (t11 * (gx[a] * gx[bq]) + t12 * (gx[a] * gz[bq] + gz[a] * gx[bq]) +
                              t22 * (gz[a] * gz[bq]));
      }
      for (int a = 0; a < 4; ++a)
        for (int bq = 0; bq < 4; ++bq) trips.emplace_back(nodes[a], nodes[bq], ke[a][bq]);
    }
  }

  full_.resize(ntot, ntot);
  full_.setFromTriplets(trips.begin(), trips.end());

  std::vector<Eigen::Triplet<Real>> ti, tis;
  for (const auto& t : trips) {
    if (t.row() < nint && t.col() < nint)
      ti.emplace_back(t.row(), t.col(), t.value());
    else if (t.row() < nint && t.col() >= nint)
      tis.emplace_back(t.row(), t.col() - nint, t.value());
  }
  interior_.resize(nint, nint);
  interior_.setFromTriplets(ti.begin(), ti.end());
  interior_surface_.resize(nint, nx);
  interior_surface_.setFromTriplets(tis.begin(), tis.end());

  use_cg_ = nint > 1000000;
  if (!use_cg_) {
    ldlt_ = std::make_shared<Eigen::SimplicialLDLT<Eigen::SparseMatrix<Real>>>();
    ldlt_->compute(interior_);
    if (ldlt_->info() != Eigen::Success)
      throw NumericalError("strip solver: factorization failed (coercivity " +
                           std::to_string(coeffs.coercivity) + ")");
  }
}

ArrayXXr StripOperators::solve_reduced(const ArrayXr& surface_values,
                                       const ArrayXr& bottom_load) const {
  const Index nx = grid_.x.n;
  const Index nz = grid_.n_z;
  const Index nint = nx * (nz - 1);

  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nint);
  if (bottom_load.size() == nx)
    for (Index i = 0; i < nx; ++i) rhs[i] = bottom_load[i];
  if (surface_values.size() == nx) {
    Eigen::VectorXd psi(nx);
    for (Index i = 0; i < nx; ++i) psi[i] = surface_values[i];
    rhs -= interior_surface_ * psi;
  }

  Eigen::VectorXd u;
  if (use_cg_) {
    Eigen::ConjugateGradient<Eigen::SparseMatrix<Real>, Eigen::Lower | Eigen::Upper> cg;
    cg.setTolerance(1e-12);
    cg.compute(interior_);
    u = cg.solve(rhs);
    if (cg.info() != Eigen::Success)
      throw NumericalError("strip solver: CG failed, estimated error " +
                           std::to_string(cg.error()) + ", coercivity " +
                           std::to_string(coeffs_.coercivity));
  } else {
    u = ldlt_->solve(rhs);
  }
  const Real rel = (interior_ * u - rhs).norm() / std::max(rhs.norm(), Real(1e-300));
  if (rel > 1e-10)
    throw NumericalError("strip solver: weak-form residual " + std::to_string(rel) +
                         " exceeds 1e-10 (coercivity " + std::to_string(coeffs_.coercivity) + ")");

  ArrayXXr phi = ArrayXXr::Zero(nx, nz);
  for (Index j = 0; j + 1 < nz; ++j)
    for (Index i = 0; i < nx; ++i) phi(i, j) = u[grid_.dof(i, j)];
  if (surface_values.size() == nx)
    for (Index i = 0; i < nx; ++i) phi(i, nz - 1) = surface_values[i];
  return phi;
}

StripSolution StripOperators::solve_surface(const Field1D& psi) const {
  require_same_grid(psi.grid, grid_.x, "solve_surface");
  StripSolution s;
  s.which = StripProblem::surface;
  s.phi = solve_reduced(psi.v, ArrayXr());
  return s;
}

StripSolution StripOperators::solve_bottom(const Field1D& B) const {
  require_same_grid(B.grid, grid_.x, "solve_bottom");
  // a(phi, v) = -<B, v(-1)> with the lumped bottom pairing dx*sum.
  ArrayXr load = -grid_.x.dx() * B.v;
  StripSolution s;
  s.which = StripProblem::bottom;
  s.phi = solve_reduced(ArrayXr(), load);
  return s;
}

Field1D StripOperators::surface_flux(const StripSolution& sol) const {
  const Index nx = grid_.x.n;
  const Index nz = grid_.n_z;
  Eigen::VectorXd u(nx * nz);
  for (Index j = 0; j < nz; ++j)
    for (Index i = 0; i < nx; ++i) u[grid_.dof(i, j)] = sol.phi(i, j);
  Eigen::VectorXd r = full_ * u;
  Field1D out{grid_.x, ArrayXr(nx)};
  const Index base = (nz - 1) * nx;
  for (Index i = 0; i < nx; ++i) out.v[i] = r[base + i] / grid_.x.dx();
  return out;
}

Field1D StripOperators::bottom_trace(const StripSolution& sol) const {
  Field1D out{grid_.x, ArrayXr(grid_.x.n)};
  for (Index i = 0; i < grid_.x.n; ++i) out.v[i] = sol.phi(i, 0);
  return out;
}

BoundaryOperators StripOperators::boundary_operators(const StripSolution& sol_surface,
                                                     const StripSolution& sol_bottom) const {
  if (sol_surface.which != StripProblem::surface || sol_bottom.which != StripProblem::bottom)
    throw ConfigError("boundary_operators: pass (surface, bottom) solutions in that order");
  BoundaryOperators ops;
  ops.g_dn = surface_flux(sol_surface);
  ops.g_nn = surface_flux(sol_bottom);
  ops.g_dd = bottom_trace(sol_surface);
  ops.g_nd = bottom_trace(sol_bottom);
  return ops;
}

Real StripOperators::energy(const StripSolution& a, const StripSolution& b) const {
  const Index nx = grid_.x.n;
  const Index nz = grid_.n_z;
  Eigen::VectorXd ua(nx * nz), ub(nx * nz);
  for (Index j = 0; j < nz; ++j)
    for (Index i = 0; i < nx; ++i) {
      ua[grid_.dof(i, j)] = a.phi(i, j);
      ub[grid_.dof(i, j)] = b.phi(i, j);
    }
  return ua.dot(full_ * ub);
}

Real strip_gradient_energy(const StripGrid2D& grid, Real mu, const ArrayXXr& u) {
  const GaussData gd = make_gauss();
  const Index nx = grid.x.n;
  const Index nz = grid.n_z;
  const Real dx = grid.x.dx();
  const Real dz = grid.dz();
  Real e = 0;
  for (Index j = 0; j + 1 < nz; ++j) {
    for (Index i = 0; i < nx; ++i) {
      const Index ip = (i + 1) % nx;
      const Real vals[4] = {u(i, j), u(ip, j), u(i, j + 1), u(ip, j + 1)};
      for (int p = 0; p < 4; ++p) {
        Real gx = 0, gz = 0;
        for (int a = 0; a < 4; ++a) {
          gx += gd.dNdxi[p][a] * 2 / dx * vals[a];
          gz += gd.dNdeta[p][a] * 2 / dz * vals[a];
        }
        e += (dx * dz / 4) * (mu * gx * gx + gz * gz);
      }
    }
  }
  return e;
}

Real trace_inequality_ratio(const StripGrid2D& grid, Real mu, const ArrayXXr& u) {
  Field1D bottom{grid.x, ArrayXr(grid.x.n)};
  for (Index i = 0; i < grid.x.n; ++i) bottom.v[i] = u(i, 0);
  Multiplier m{[mu](Real xi) {
                 return Complex(std::sqrt(1 + std::sqrt(mu) * std::abs(xi)), 0);
               },
               "sqrt(1+sqrt(mu)|D|)"};
  const Real num = l2_norm(apply(bottom, m));
  const Real den = std::sqrt(strip_gradient_energy(grid, mu, u));
  return num / den;
}

VelocityTraces velocity_traces(const StripOperators& ops, const StripSolution& sol_surface,
                               const StripSolution& sol_bottom, const Field1D& psi,
                               const Field1D& B, const Field1D& zeta, const Field1D& b,
                               const PhysicalParams& params) {
  const Real mu = ops.mu();
  const Real eps = params.epsilon;
  const Real beta = params.beta;
  BoundaryOperators bo = ops.boundary_operators(sol_surface, sol_bottom);
  const ArrayXr zx = spectral_derivative(zeta).v;
  const ArrayXr bx = spectral_derivative(b).v;
  const ArrayXr px = spectral_derivative(psi).v;

  VelocityTraces tr;
  const ArrayXr denom_s = 1 + eps * eps * mu * zx.square();
  if (denom_s.minCoeff() < 1)
    throw NumericalError("velocity_traces: surface denominator dropped below one");
  tr.w_surf = Field1D{psi.grid, (bo.g_dn.v + mu * bo.g_nn.v + eps * mu * zx * px) / denom_s};
  tr.v_surf = Field1D{psi.grid, px - eps * tr.w_surf.v * zx};

  Field1D bottom_pot{psi.grid, bo.g_dd.v + mu * bo.g_nd.v};
  const ArrayXr tbx = spectral_derivative(bottom_pot).v;
  const ArrayXr denom_b = 1 + beta * beta * mu * bx.square();
  if (denom_b.minCoeff() < 1)
    throw NumericalError("velocity_traces: bottom denominator dropped below one");
  tr.w_bott = Field1D{psi.grid, (mu * B.v + beta * mu * bx * tbx) / denom_b};
  tr.v_bott = Field1D{psi.grid, tbx - beta * tr.w_bott.v * bx};
  return tr;
}

ShapeDerivativeReport shape_derivative_check(const Field1D& psi, const Field1D& B,
                                             const Field1D& zeta, const Field1D& b,
                                             const Field1D& h, const Field1D& k,
                                             const PhysicalParams& params,
                                             const StripGrid2D& grid, Real delta,
                                             const std::vector<Real>& taus) {
  const Real mu = params.mu;
  const Real eps = params.epsilon;
  const Real beta = params.beta;

  Diffeo base_diffeo = build_diffeo(zeta, b, params, delta, grid);
  const Real delta_used = base_diffeo.delta;
  StripOperators base(grid, build_coefficients(base_diffeo, mu));

  StripSolution ss = base.solve_surface(psi);
  StripSolution sb = base.solve_bottom(B);
  BoundaryOperators bo = base.boundary_operators(ss, sb);
  VelocityTraces vt = velocity_traces(base, ss, sb, psi, B, zeta, b, params);

  // closed-form right-hand sides at the base shape
  Field1D hw{psi.grid, h.v * vt.w_surf.v};
  StripSolution sol_hw = base.solve_surface(hw);
  Field1D g_hw = base.surface_flux(sol_hw);
  Field1D hv{psi.grid, h.v * vt.v_surf.v};
  const ArrayXr div_hv = spectral_derivative(hv).v;
  const ArrayXr rhs_surface = -eps * g_hw.v - eps * mu * div_hv;

  Field1D kv{psi.grid, k.v * vt.v_bott.v};
  Field1D div_kv{psi.grid, spectral_derivative(kv).v};
  StripSolution sol_kv = base.solve_bottom(div_kv);
  const ArrayXr rhs_bottom = beta * mu * base.surface_flux(sol_kv).v;

  const ArrayXr rhs_dd = -eps * base.bottom_trace(sol_hw).v;

  const ArrayXr f0 = bo.g_dn.v + mu * bo.g_nn.v;
  const ArrayXr d0 = bo.g_dd.v + mu * bo.g_nd.v;

  auto l2 = [&](const ArrayXr& v) { return std::sqrt(grid.x.dx() * v.square().sum()); };

  ShapeDerivativeReport rep;
  for (Real tau : taus) {
    // surface direction (h, 0): delta frozen at the base value
    Field1D zeta_p{zeta.grid, zeta.v + tau * h.v};
    Diffeo dsu = build_diffeo(zeta_p, b, params, delta_used, grid, 0.05, 1e-4, false);
    StripOperators osu(grid, build_coefficients(dsu, mu));
    StripSolution pss = osu.solve_surface(psi);
    StripSolution psb = osu.solve_bottom(B);
    BoundaryOperators pbo = osu.boundary_operators(pss, psb);
    const ArrayXr lhs_s = ((pbo.g_dn.v + mu * pbo.g_nn.v) - f0) / tau;
    const ArrayXr lhs_dd = ((pbo.g_dd.v + mu * pbo.g_nd.v) - d0) / tau;

    // bottom direction (0, k)
    Field1D b_p{b.grid, b.v + tau * k.v};
    Diffeo dbo = build_diffeo(zeta, b_p, params, delta_used, grid, 0.05, 1e-4, false);
    StripOperators obo(grid, build_coefficients(dbo, mu));
    StripSolution bss = obo.solve_surface(psi);
    StripSolution bsb = obo.solve_bottom(B);
    BoundaryOperators bbo = obo.boundary_operators(bss, bsb);
    const ArrayXr lhs_b = ((bbo.g_dn.v + mu * bbo.g_nn.v) - f0) / tau;

    rep.taus.push_back(tau);
    rep.err_surface.push_back(l2(lhs_s - rhs_surface) / std::max(l2(rhs_surface), Real(1e-300)));
    rep.err_bottom.push_back(l2(lhs_b - rhs_bottom) / std::max(l2(rhs_bottom), Real(1e-300)));
    rep.err_dd.push_back(l2(lhs_dd - rhs_dd) / std::max(l2(rhs_dd), Real(1e-300)));
  }
  return rep;
}

std::pair<Real, Real> kinetic_energy_two_ways(const StripOperators& ops, const Field1D& psi,
                                              const Field1D& dtb, const PhysicalParams& params) {
  const Real mu = ops.mu();
  const Real c1 = params.beta * params.lambda / params.epsilon;
  const Real c2 = c1 * mu;

  StripSolution ss = ops.solve_surface(psi);
  StripSolution sb = ops.solve_bottom(dtb);
  BoundaryOperators bo = ops.boundary_operators(ss, sb);

  StripSolution total;
  total.which = StripProblem::surface;
  total.phi = ss.phi + c2 * sb.phi;
  const Real t_volume = ops.energy(total, total) / (2 * mu) +
                        inner(dtb, Field1D{psi.grid, c1 * (bo.g_dd.v + c2 * bo.g_nd.v)});

  const Real t_boundary =
      0.5 * inner(psi, Field1D{psi.grid, bo.g_dn.v / mu + c1 * bo.g_nn.v}) +
      0.5 * c1 * inner(dtb, Field1D{psi.grid, bo.g_dd.v + c2 * bo.g_nd.v});
  return {t_volume, t_boundary};
}

}  // namespace wavelab
