#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <array>
#include <memory>

#include "elscat/dtn.hpp"
#include "elscat/fem.hpp"
#include "elscat/material.hpp"
#include "elscat/mesh.hpp"

namespace elscat {

// Relative residual accepted from a direct solve before refinement is attempted.
inline constexpr double kSolveTolerance = 1e-10;

// One (mesh, medium, omega) problem with a factorized system for the current q.
// Forward and adjoint solves share the factorization because the assembled
// matrix is complex symmetric.
class SolverContext {
 public:
  SolverContext(const DiskMesh& mesh, const BackgroundMedium& medium, double omega,
                int truncation = 0);
  ~SolverContext();
  SolverContext(SolverContext&&) noexcept;
  SolverContext& operator=(SolverContext&&) noexcept;

  // Assembles and factorizes K(q, omega).  Throws SolverFailure if the factorization fails.
  void set_material(const MaterialField& q);

  const DiskMesh& mesh() const { return *mesh_; }
  const BackgroundMedium& medium() const { return medium_; }
  const DtnOperator& dtn() const { return dtn_; }
  double omega() const { return dtn_.waves().omega; }
  const MaterialField& material() const { return q_; }
  const Eigen::SparseMatrix<cplx>& matrix() const { return system_.matrix; }
  int factorizations() const { return factorizations_; }

  // K x = f, checked to kSolveTolerance.  Writes the achieved relative residual.
  Eigen::VectorXcd solve(const Eigen::VectorXcd& f, double* residual = nullptr) const;

 private:
  struct Factor;
  const DiskMesh* mesh_;
  BackgroundMedium medium_;
  DtnOperator dtn_;
  MaterialField q_;
  FemSystem system_;
  std::unique_ptr<Factor> factor_;
  int factorizations_ = 0;
};

struct FieldSolution {
  Eigen::VectorXcd u;      // nodal total field
  Eigen::VectorXcd trace;  // u on the boundary ring
  double omega = 0.0;
  Incidence incidence;
  double residual = 0.0;
};

struct AdjointSolution {
  Eigen::VectorXcd phi;    // nodal adjoint field
  Eigen::VectorXcd datum;  // boundary datum h
  double residual = 0.0;
};

// Total field for a plane incident wave.
FieldSolution solve_forward(const SolverContext& ctx, const Incidence& incidence);

// Total field for an arbitrary boundary datum g (T u - B u = g on the ring).
FieldSolution solve_with_datum(const SolverContext& ctx, const Eigen::VectorXcd& g);

const Eigen::VectorXcd& near_field(const FieldSolution& solution);

// |u|^2 per boundary sample.
Eigen::VectorXd phaseless(const Eigen::VectorXcd& trace);

// Solves the conjugated problem with datum h and returns phi = conj(z).
AdjointSolution solve_adjoint(const SolverContext& ctx, const Eigen::VectorXcd& h);

// N'_q(dq): trace of w with K w = -dK[dq] u.
Eigen::VectorXcd derivative_apply(const SolverContext& ctx, const Eigen::VectorXcd& u,
                                  const MaterialField& dq);

// F'_q(dq) = 2 Re(conj(u) . N'_q(dq)) per boundary sample.
Eigen::VectorXd phaseless_derivative(const Eigen::VectorXcd& trace, const Eigen::VectorXcd& dtrace);

// Nodal complex gradient (N'_q)^* h assembled from the forward and adjoint fields:
// components {-lambda0 div(conj u) div(phi), -2 mu0 E(conj u):E(phi), rho0 omega^2 conj(u).phi},
// projected onto the nodes with the lumped mass.
struct ComplexGradient {
  std::array<Eigen::VectorXcd, 3> c;
};

ComplexGradient adjoint_gradient(const SolverContext& ctx, const Eigen::VectorXcd& u,
                                 const Eigen::VectorXcd& phi, bool density_only = false);

// (N'_q)^* h in one call (forward field given).
ComplexGradient near_field_adjoint(const SolverContext& ctx, const Eigen::VectorXcd& u,
                                   const Eigen::VectorXcd& h, bool density_only = false);

// (F'_q)^* hbar = 2 Re (N'_q)^*(hbar u); returned in the real part of a ComplexGradient.
ComplexGradient phaseless_adjoint(const SolverContext& ctx, const FieldSolution& base,
                                  const Eigen::VectorXd& hbar, bool density_only = false);

// Trapezoidal L^2(Gamma_R) pairing sum_m w a_m . conj(b_m) and the matching norm.
cplx boundary_inner(const DiskMesh& mesh, const Eigen::VectorXcd& a, const Eigen::VectorXcd& b);
double boundary_inner(const DiskMesh& mesh, const Eigen::VectorXd& a, const Eigen::VectorXd& b);
double boundary_norm(const DiskMesh& mesh, const Eigen::VectorXcd& a);
double boundary_norm(const DiskMesh& mesh, const Eigen::VectorXd& a);

// Parameter pairing sum_c sum_i m_i dq_{c,i} conj(g_{c,i}) with the lumped mass m_i.
cplx parameter_inner(const DiskMesh& mesh, const MaterialField& dq, const ComplexGradient& g);

}  // namespace elscat
