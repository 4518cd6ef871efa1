#include "elscat/material.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "elscat/errors.hpp"

namespace elscat {

MaterialField MaterialField::zeros(int nodes) {
  MaterialField q;
  q.lambda = Eigen::VectorXd::Zero(nodes);
  q.mu = Eigen::VectorXd::Zero(nodes);
  q.rho = Eigen::VectorXd::Zero(nodes);
  return q;
}

bool MaterialField::is_zero() const {
  return lambda.isZero(0.0) && mu.isZero(0.0) && rho.isZero(0.0);
}

MaterialField& MaterialField::operator+=(const MaterialField& other) {
  if (other.size() != size()) throw DimensionMismatch("MaterialField: size mismatch");
  lambda += other.lambda;
  mu += other.mu;
  rho += other.rho;
  return *this;
}

MaterialField& MaterialField::operator*=(double s) {
  lambda *= s;
  mu *= s;
  rho *= s;
  return *this;
}

Eigen::VectorXd& MaterialField::component(int c) {
  return c == 0 ? lambda : (c == 1 ? mu : rho);
}

const Eigen::VectorXd& MaterialField::component(int c) const {
  return c == 0 ? lambda : (c == 1 ? mu : rho);
}

double SupportCutoff::operator()(double r, double radius) const {
  const double s = r / radius;
  if (s <= inner) return 1.0;
  if (s >= outer) return 0.0;
  const double x = (outer - s) / (outer - inner);
  return x * x * (3.0 - 2.0 * x);
}

void apply_support_cutoff(MaterialField& q, const DiskMesh& mesh, const SupportCutoff& cutoff) {
  if (q.size() != mesh.num_nodes()) throw DimensionMismatch("support cutoff: field/mesh mismatch");
  for (int i = 0; i < mesh.num_nodes(); ++i) {
    const double w = cutoff(mesh.nodes[i].norm(), mesh.radius);
    q.lambda(i) *= w;
    q.mu(i) *= w;
    q.rho(i) *= w;
  }
}

void clamp_lower(MaterialField& q) {
  const double floor = -1.0 + kMaterialFloor;
  for (int c = 0; c < 3; ++c) {
    q.component(c) = q.component(c).cwiseMax(floor);
  }
}

double l2_norm(const DiskMesh& mesh, const Eigen::VectorXd& field) {
  if (field.size() != mesh.num_nodes()) throw DimensionMismatch("l2_norm: field/mesh mismatch");
  double s = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    const double a = field(tri[0]);
    const double b = field(tri[1]);
    const double c = field(tri[2]);
    const double sum = a + b + c;
    s += mesh.areas[t] / 12.0 * (a * a + b * b + c * c + sum * sum);
  }
  return std::sqrt(std::max(s, 0.0));
}

double relative_error(const DiskMesh& mesh, const Eigen::VectorXd& truth,
                      const Eigen::VectorXd& approx) {
  const double denom = l2_norm(mesh, truth);
  if (denom == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return l2_norm(mesh, truth - approx) / denom;
}

void write_nodal_csv(std::ostream& os, const DiskMesh& mesh, const Eigen::VectorXd& values) {
  os << "x,y,value\n";
  os.precision(17);
  for (int i = 0; i < mesh.num_nodes(); ++i) {
    os << mesh.nodes[i].x() << ',' << mesh.nodes[i].y() << ',' << values(i) << '\n';
  }
}

void write_field_csv(std::ostream& os, const DiskMesh& mesh, const MaterialField& q) {
  os << "x,y,q_lambda,q_mu,q_rho\n";
  os.precision(17);
  for (int i = 0; i < mesh.num_nodes(); ++i) {
    os << mesh.nodes[i].x() << ',' << mesh.nodes[i].y() << ',' << q.lambda(i) << ',' << q.mu(i)
       << ',' << q.rho(i) << '\n';
  }
}

}  // namespace elscat
