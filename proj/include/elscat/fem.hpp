#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <array>
#include <span>

#include "elscat/dtn.hpp"
#include "elscat/material.hpp"
#include "elscat/mesh.hpp"

namespace elscat {

// Nodal vector fields are interleaved: dof 2i is the x-component at node i, 2i+1 the y-component.

enum class WaveKind { Pressure, Shear };

struct Incidence {
  WaveKind kind = WaveKind::Pressure;
  double angle = 0.0;
};

// Plane wave d e^{i kp x.d} (pressure) or d^perp e^{i ks x.d} (shear), d = (cos a, sin a).
Eigen::VectorXcd incident_field(WaveKind kind, double angle, const WaveNumbers& waves,
                                std::span<const Eigen::Vector2d> points);

// Traction 2 mu0 d_nu u + lambda0 nu div u - mu0 nu^perp curl u of the plane wave on the
// P uniform points of the circle of radius medium.radius.
Eigen::VectorXcd incident_traction(WaveKind kind, double angle, const WaveNumbers& waves,
                                   const BackgroundMedium& medium, int boundary_points);

// g = T u_in - B u_in on the DtN grid.
Eigen::VectorXcd boundary_load(WaveKind kind, double angle, const DtnOperator& dtn);

// Selects which volume terms assemble_volume includes.
struct VolumeTerms {
  bool lambda = true;
  bool mu = true;
  bool rho = true;
};

// Real sparse matrix of A_{q_lambda} + B_{q_mu} + C_{q_rho} on the P1 vector space.
// Coefficients (1 + q) are interpolated linearly; all element integrals are exact.
Eigen::SparseMatrix<double> assemble_volume(const DiskMesh& mesh, const MaterialField& q,
                                            const BackgroundMedium& medium, double omega,
                                            VolumeTerms terms = {});

// Assembled complex system for a_q(u, v) - <B u, v>_{Gamma_R}.
struct FemSystem {
  Eigen::SparseMatrix<cplx> matrix;
  int boundary_points = 0;
  double boundary_weight = 0.0;
};

FemSystem assemble_system(const DiskMesh& mesh, const MaterialField& q,
                          const BackgroundMedium& medium, const DtnOperator& dtn);

// Load vector of int_{Gamma_R} g . conj(v) ds for a datum sampled on the boundary ring.
Eigen::VectorXcd boundary_load_vector(const DiskMesh& mesh, const Eigen::VectorXcd& datum);

// Restriction of a nodal vector field to the boundary ring.
Eigen::VectorXcd boundary_trace(const DiskMesh& mesh, const Eigen::VectorXcd& nodal);

// dK[dq] u, where dK[dq] is the volume matrix with coefficients (lambda0 dq_lambda,
// 2 mu0 dq_mu, -rho0 omega^2 dq_rho) in place of the (1 + q) factors.
Eigen::VectorXcd perturbation_apply(const DiskMesh& mesh, const BackgroundMedium& medium,
                                    double omega, const MaterialField& dq,
                                    const Eigen::VectorXcd& u);

// Per node i and component c: a^T (dK / dq_{c,i}) b, bilinear (no conjugation).
std::array<Eigen::VectorXcd, 3> perturbation_pairing(const DiskMesh& mesh,
                                                     const BackgroundMedium& medium, double omega,
                                                     const Eigen::VectorXcd& a,
                                                     const Eigen::VectorXcd& b);

}  // namespace elscat
