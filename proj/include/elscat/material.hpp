#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>

#include "elscat/mesh.hpp"

namespace elscat {

// Lower bound enforced on every component: q > -1 + kMaterialFloor.
inline constexpr double kMaterialFloor = 1e-6;

// Nodal P1 samples of the relative perturbations (q_lambda, q_mu, q_rho).
struct MaterialField {
  Eigen::VectorXd lambda;
  Eigen::VectorXd mu;
  Eigen::VectorXd rho;

  static MaterialField zeros(int nodes);

  int size() const { return static_cast<int>(rho.size()); }
  bool is_zero() const;

  MaterialField& operator+=(const MaterialField& other);
  MaterialField& operator*=(double s);
  friend MaterialField operator+(MaterialField a, const MaterialField& b) { return a += b; }
  friend MaterialField operator*(double s, MaterialField a) { return a *= s; }

  Eigen::VectorXd& component(int c);
  const Eigen::VectorXd& component(int c) const;
};

// Smooth radial window: 1 for r <= inner * R, 0 for r >= outer * R, C^1 in between.
struct SupportCutoff {
  double inner = 0.8;
  double outer = 0.9;

  double operator()(double r, double radius) const;
};

// Multiplies every component by the window at the mesh nodes.
void apply_support_cutoff(MaterialField& q, const DiskMesh& mesh, const SupportCutoff& cutoff);

// Raises every value below -1 + kMaterialFloor to that bound.
void clamp_lower(MaterialField& q);

// L^2(B_R) norm of a nodal P1 field using the consistent mass matrix.
double l2_norm(const DiskMesh& mesh, const Eigen::VectorXd& field);

// ||truth - approx|| / ||truth||; NaN when the truth vanishes identically.
double relative_error(const DiskMesh& mesh, const Eigen::VectorXd& truth,
                      const Eigen::VectorXd& approx);

// x,y,value per node for one nodal field.
void write_nodal_csv(std::ostream& os, const DiskMesh& mesh, const Eigen::VectorXd& values);

// x,y,q_lambda,q_mu,q_rho per node.
void write_field_csv(std::ostream& os, const DiskMesh& mesh, const MaterialField& q);

}  // namespace elscat
