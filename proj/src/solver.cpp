#include "elscat/solver.hpp"

#include <Eigen/UmfPackSupport>
#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "elscat/errors.hpp"

namespace elscat {

struct SolverContext::Factor {
  Eigen::UmfPackLU<Eigen::SparseMatrix<cplx>> lu;
};

namespace {

int pick_truncation(const BackgroundMedium& medium, double omega, int truncation) {
  return truncation > 0 ? truncation : default_truncation(wave_numbers(medium, omega));
}

}  // namespace

SolverContext::SolverContext(const DiskMesh& mesh, const BackgroundMedium& medium, double omega,
                             int truncation)
    : mesh_(&mesh),
      medium_(medium),
      dtn_(medium, omega, pick_truncation(medium, omega, truncation), mesh.boundary_points()) {
  if (std::abs(medium.radius - mesh.radius) > 1e-12 * mesh.radius) {
    throw DimensionMismatch("solver: medium radius does not match the mesh radius");
  }
}

SolverContext::~SolverContext() = default;
SolverContext::SolverContext(SolverContext&&) noexcept = default;
SolverContext& SolverContext::operator=(SolverContext&&) noexcept = default;

void SolverContext::set_material(const MaterialField& q) {
  q_ = q;
  system_ = assemble_system(*mesh_, q_, medium_, dtn_);
  factor_ = std::make_unique<Factor>();
  factor_->lu.compute(system_.matrix);
  if (factor_->lu.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "factorization failed at omega=" << omega() << " (|q|_max="
        << std::max({q_.lambda.cwiseAbs().maxCoeff(), q_.mu.cwiseAbs().maxCoeff(),
                     q_.rho.cwiseAbs().maxCoeff()})
        << ")";
    factor_.reset();
    throw SolverFailure(msg.str());
  }
  ++factorizations_;
}

Eigen::VectorXcd SolverContext::solve(const Eigen::VectorXcd& f, double* residual) const {
  if (!factor_) throw SolverFailure("solve called before set_material");
  if (f.size() != system_.matrix.rows()) throw DimensionMismatch("solve: load vector size");
  const double fnorm = f.norm();
  if (fnorm == 0.0) {
    if (residual) *residual = 0.0;
    return Eigen::VectorXcd::Zero(f.size());
  }
  Eigen::VectorXcd x = factor_->lu.solve(f);
  double rel = (f - system_.matrix * x).norm() / fnorm;
  for (int pass = 0; pass < 3 && rel > kSolveTolerance; ++pass) {
    const Eigen::VectorXcd r = f - system_.matrix * x;
    x += factor_->lu.solve(r);
    rel = (f - system_.matrix * x).norm() / fnorm;
  }
  if (!(rel <= kSolveTolerance)) {
    std::ostringstream msg;
    msg << "linear solve residual " << rel << " exceeds " << kSolveTolerance
        << " at omega=" << omega();
    throw SolverFailure(msg.str());
  }
  if (residual) *residual = rel;
  return x;
}

FieldSolution solve_with_datum(const SolverContext& ctx, const Eigen::VectorXcd& g) {
  FieldSolution s;
  s.omega = ctx.omega();
  s.u = ctx.solve(boundary_load_vector(ctx.mesh(), g), &s.residual);
  s.trace = boundary_trace(ctx.mesh(), s.u);
  return s;
}

FieldSolution solve_forward(const SolverContext& ctx, const Incidence& incidence) {
  FieldSolution s =
      solve_with_datum(ctx, boundary_load(incidence.kind, incidence.angle, ctx.dtn()));
  s.incidence = incidence;
  return s;
}

const Eigen::VectorXcd& near_field(const FieldSolution& solution) { return solution.trace; }

Eigen::VectorXd phaseless(const Eigen::VectorXcd& trace) {
  const Eigen::Index p = trace.size() / 2;
  Eigen::VectorXd out(p);
  for (Eigen::Index m = 0; m < p; ++m) {
    out(m) = std::norm(trace(2 * m)) + std::norm(trace(2 * m + 1));
  }
  return out;
}

AdjointSolution solve_adjoint(const SolverContext& ctx, const Eigen::VectorXcd& h) {
  AdjointSolution s;
  s.datum = h;
  const Eigen::VectorXcd z =
      ctx.solve(boundary_load_vector(ctx.mesh(), h.conjugate()), &s.residual);
  s.phi = z.conjugate();
  return s;
}

Eigen::VectorXcd derivative_apply(const SolverContext& ctx, const Eigen::VectorXcd& u,
                                  const MaterialField& dq) {
  const Eigen::VectorXcd f =
      -perturbation_apply(ctx.mesh(), ctx.medium(), ctx.omega(), dq, u);
  return boundary_trace(ctx.mesh(), ctx.solve(f));
}

Eigen::VectorXd phaseless_derivative(const Eigen::VectorXcd& trace,
                                     const Eigen::VectorXcd& dtrace) {
  if (trace.size() != dtrace.size()) throw DimensionMismatch("phaseless_derivative: sizes");
  const Eigen::Index p = trace.size() / 2;
  Eigen::VectorXd out(p);
  for (Eigen::Index m = 0; m < p; ++m) {
    out(m) = 2.0 * (std::conj(trace(2 * m)) * dtrace(2 * m) +
                    std::conj(trace(2 * m + 1)) * dtrace(2 * m + 1))
                       .real();
  }
  return out;
}

ComplexGradient adjoint_gradient(const SolverContext& ctx, const Eigen::VectorXcd& u,
                                 const Eigen::VectorXcd& phi, bool density_only) {
  const DiskMesh& mesh = ctx.mesh();
  auto pair = perturbation_pairing(mesh, ctx.medium(), ctx.omega(), u.conjugate(), phi);
  ComplexGradient g;
  for (int c = 0; c < 3; ++c) {
    if (density_only && c < 2) {
      g.c[c] = Eigen::VectorXcd::Zero(mesh.num_nodes());
    } else {
      g.c[c] = -pair[c].cwiseQuotient(mesh.lumped_mass.cast<cplx>());
    }
  }
  return g;
}

ComplexGradient near_field_adjoint(const SolverContext& ctx, const Eigen::VectorXcd& u,
                                   const Eigen::VectorXcd& h, bool density_only) {
  return adjoint_gradient(ctx, u, solve_adjoint(ctx, h).phi, density_only);
}

ComplexGradient phaseless_adjoint(const SolverContext& ctx, const FieldSolution& base,
                                  const Eigen::VectorXd& hbar, bool density_only) {
  const Eigen::Index p = hbar.size();
  if (base.trace.size() != 2 * p) throw DimensionMismatch("phaseless_adjoint: datum size");
  Eigen::VectorXcd h(2 * p);
  for (Eigen::Index m = 0; m < p; ++m) {
    h(2 * m) = hbar(m) * base.trace(2 * m);
    h(2 * m + 1) = hbar(m) * base.trace(2 * m + 1);
  }
  ComplexGradient g = near_field_adjoint(ctx, base.u, h, density_only);
  for (auto& v : g.c) v = (2.0 * v.real()).cast<cplx>();
  return g;
}

cplx boundary_inner(const DiskMesh& mesh, const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  if (a.size() != b.size()) throw DimensionMismatch("boundary_inner: sizes");
  return mesh.boundary_weight() * b.dot(a);
}

double boundary_inner(const DiskMesh& mesh, const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size()) throw DimensionMismatch("boundary_inner: sizes");
  return mesh.boundary_weight() * a.dot(b);
}

double boundary_norm(const DiskMesh& mesh, const Eigen::VectorXcd& a) {
  return std::sqrt(mesh.boundary_weight()) * a.norm();
}

double boundary_norm(const DiskMesh& mesh, const Eigen::VectorXd& a) {
  return std::sqrt(mesh.boundary_weight()) * a.norm();
}

cplx parameter_inner(const DiskMesh& mesh, const MaterialField& dq, const ComplexGradient& g) {
  cplx s = 0.0;
  for (int c = 0; c < 3; ++c) {
    const Eigen::VectorXd& d = dq.component(c);
    for (int i = 0; i < mesh.num_nodes(); ++i) {
      s += mesh.lumped_mass(i) * d(i) * std::conj(g.c[c](i));
    }
  }
  return s;
}

}  // namespace elscat
