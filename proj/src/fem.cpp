#include "elscat/fem.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "elscat/errors.hpp"

namespace elscat {
namespace {

constexpr cplx kI(0.0, 1.0);

using Grad = Eigen::Matrix<double, 3, 2>;
using Local = Eigen::Matrix<cplx, 6, 1>;

// int_T phi_a phi_b phi_k for P1 barycentric functions.
double triple_mass(double area, int a, int b, int k) {
  const int ab = a == b;
  const int ak = a == k;
  const int bk = b == k;
  return area / 60.0 * (1 + ab + ak + bk + 2 * ab * bk);
}

Local gather(const Eigen::VectorXcd& u, const std::array<int, 3>& tri) {
  Local out;
  for (int a = 0; a < 3; ++a) {
    out(2 * a) = u(2 * tri[a]);
    out(2 * a + 1) = u(2 * tri[a] + 1);
  }
  return out;
}

// Displacement gradient G_ij = d u_i / d x_j of the P1 interpolant on one element.
Eigen::Matrix2cd displacement_gradient(const Local& u, const Grad& g) {
  Eigen::Matrix2cd grad = Eigen::Matrix2cd::Zero();
  for (int a = 0; a < 3; ++a) {
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) grad(i, j) += u(2 * a + i) * g(a, j);
    }
  }
  return grad;
}

Eigen::Matrix2cd strain(const Eigen::Matrix2cd& grad) { return 0.5 * (grad + grad.transpose()); }

cplx contract(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
  return (a.array() * b.array()).sum();
}

void check_sizes(const DiskMesh& mesh, const MaterialField& q) {
  if (q.size() != mesh.num_nodes() || q.lambda.size() != q.rho.size() ||
      q.mu.size() != q.rho.size()) {
    throw DimensionMismatch("material field has " + std::to_string(q.size()) +
                            " nodes, mesh has " + std::to_string(mesh.num_nodes()));
  }
}

}  // namespace

Eigen::VectorXcd incident_field(WaveKind kind, double angle, const WaveNumbers& waves,
                                std::span<const Eigen::Vector2d> points) {
  const Eigen::Vector2d d(std::cos(angle), std::sin(angle));
  const Eigen::Vector2d dperp(-std::sin(angle), std::cos(angle));
  const double k = kind == WaveKind::Pressure ? waves.kp : waves.ks;
  const Eigen::Vector2d& pol = kind == WaveKind::Pressure ? d : dperp;
  Eigen::VectorXcd u(2 * static_cast<Eigen::Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) {
    const cplx phase = std::exp(kI * k * points[i].dot(d));
    u(2 * i) = pol.x() * phase;
    u(2 * i + 1) = pol.y() * phase;
  }
  return u;
}

Eigen::VectorXcd incident_traction(WaveKind kind, double angle, const WaveNumbers& waves,
                                   const BackgroundMedium& medium, int boundary_points) {
  const Eigen::Vector2d d(std::cos(angle), std::sin(angle));
  const Eigen::Vector2d dperp(-std::sin(angle), std::cos(angle));
  Eigen::VectorXcd t(2 * boundary_points);
  for (int m = 0; m < boundary_points; ++m) {
    const double theta = 2.0 * M_PI * m / boundary_points;
    const Eigen::Vector2d nu(std::cos(theta), std::sin(theta));
    const Eigen::Vector2d nuperp(-nu.y(), nu.x());
    const Eigen::Vector2d x = medium.radius * nu;
    Eigen::Vector2cd value;
    if (kind == WaveKind::Pressure) {
      const cplx e = std::exp(kI * waves.kp * x.dot(d));
      const cplx ik = kI * waves.kp;
      // d_nu u = ik (d.nu) u, div u = ik e, curl u = 0
      value = 2.0 * medium.mu0 * ik * d.dot(nu) * e * d.cast<cplx>() +
              medium.lambda0 * ik * e * nu.cast<cplx>();
    } else {
      const cplx e = std::exp(kI * waves.ks * x.dot(d));
      const cplx ik = kI * waves.ks;
      // d_nu u = ik (d.nu) u, div u = 0, curl u = ik e
      value = 2.0 * medium.mu0 * ik * d.dot(nu) * e * dperp.cast<cplx>() -
              medium.mu0 * ik * e * nuperp.cast<cplx>();
    }
    t(2 * m) = value(0);
    t(2 * m + 1) = value(1);
  }
  return t;
}

Eigen::VectorXcd boundary_load(WaveKind kind, double angle, const DtnOperator& dtn) {
  const int p = dtn.boundary_points();
  const double r = dtn.medium().radius;
  std::vector<Eigen::Vector2d> ring(p);
  for (int m = 0; m < p; ++m) {
    ring[m] = r * Eigen::Vector2d(std::cos(dtn.angle(m)), std::sin(dtn.angle(m)));
  }
  const Eigen::VectorXcd trace = incident_field(kind, angle, dtn.waves(), ring);
  return incident_traction(kind, angle, dtn.waves(), dtn.medium(), p) - dtn.apply(trace);
}

Eigen::SparseMatrix<double> assemble_volume(const DiskMesh& mesh, const MaterialField& q,
                                            const BackgroundMedium& medium, double omega,
                                            VolumeTerms terms) {
  check_sizes(mesh, q);
  const double w2 = omega * omega;
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(36 * mesh.triangles.size());

  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    const Grad& g = mesh.gradients[t];
    const double area = mesh.areas[t];
    const double lam = medium.lambda0 * area *
                       (1.0 + (q.lambda(tri[0]) + q.lambda(tri[1]) + q.lambda(tri[2])) / 3.0);
    const double mu = 2.0 * medium.mu0 * area *
                      (1.0 + (q.mu(tri[0]) + q.mu(tri[1]) + q.mu(tri[2])) / 3.0);

    Eigen::Matrix<double, 6, 6> ke = Eigen::Matrix<double, 6, 6>::Zero();
    for (int a = 0; a < 3; ++a) {
      for (int c = 0; c < 2; ++c) {
        for (int b = 0; b < 3; ++b) {
          for (int d = 0; d < 2; ++d) {
            double v = 0.0;
            if (terms.lambda) v += lam * g(a, c) * g(b, d);
            if (terms.mu) {
              // E(e_c phi_a) : E(e_d phi_b)
              const double ee = 0.5 * ((c == d ? g.row(a).dot(g.row(b)) : 0.0) + g(a, d) * g(b, c));
              v += mu * ee;
            }
            if (terms.rho && c == d) {
              double m = 0.0;
              for (int k = 0; k < 3; ++k) m += (1.0 + q.rho(tri[k])) * triple_mass(area, a, b, k);
              v -= medium.rho0 * w2 * m;
            }
            ke(2 * a + c, 2 * b + d) = v;
          }
        }
      }
    }
    for (int r = 0; r < 6; ++r) {
      for (int s = 0; s < 6; ++s) {
        trip.emplace_back(2 * tri[r / 2] + r % 2, 2 * tri[s / 2] + s % 2, ke(r, s));
      }
    }
  }
  const int n = 2 * mesh.num_nodes();
  Eigen::SparseMatrix<double> k(n, n);
  k.setFromTriplets(trip.begin(), trip.end());
  return k;
}

FemSystem assemble_system(const DiskMesh& mesh, const MaterialField& q,
                          const BackgroundMedium& medium, const DtnOperator& dtn) {
  const int p = mesh.boundary_points();
  if (dtn.boundary_points() != p) {
    throw DimensionMismatch("DtN grid has " + std::to_string(dtn.boundary_points()) +
                            " points, mesh boundary ring has " + std::to_string(p));
  }
  if (std::abs(dtn.medium().radius - mesh.radius) > 1e-12 * mesh.radius) {
    throw DimensionMismatch("DtN radius does not match the mesh radius");
  }

  const Eigen::SparseMatrix<double> vol = assemble_volume(mesh, q, medium, dtn.waves().omega);
  const Eigen::MatrixXcd dense = dtn.dense_matrix();
  const double weight = mesh.boundary_weight();

  std::vector<Eigen::Triplet<cplx>> trip;
  trip.reserve(vol.nonZeros() + dense.size());
  for (int col = 0; col < vol.outerSize(); ++col) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(vol, col); it; ++it) {
      trip.emplace_back(it.row(), it.col(), cplx(it.value(), 0.0));
    }
  }
  for (int m = 0; m < p; ++m) {
    for (int mp = 0; mp < p; ++mp) {
      for (int c = 0; c < 2; ++c) {
        for (int d = 0; d < 2; ++d) {
          trip.emplace_back(2 * mesh.boundary_ring[m] + c, 2 * mesh.boundary_ring[mp] + d,
                            -weight * dense(2 * m + c, 2 * mp + d));
        }
      }
    }
  }

  FemSystem sys;
  sys.matrix.resize(vol.rows(), vol.cols());
  sys.matrix.setFromTriplets(trip.begin(), trip.end());
  sys.matrix.makeCompressed();
  sys.boundary_points = p;
  sys.boundary_weight = weight;
  return sys;
}

Eigen::VectorXcd boundary_load_vector(const DiskMesh& mesh, const Eigen::VectorXcd& datum) {
  const int p = mesh.boundary_points();
  if (datum.size() != 2 * p) {
    throw DimensionMismatch("boundary datum has " + std::to_string(datum.size()) +
                            " entries, expected " + std::to_string(2 * p));
  }
  Eigen::VectorXcd f = Eigen::VectorXcd::Zero(2 * mesh.num_nodes());
  const double w = mesh.boundary_weight();
  for (int m = 0; m < p; ++m) {
    f(2 * mesh.boundary_ring[m]) = w * datum(2 * m);
    f(2 * mesh.boundary_ring[m] + 1) = w * datum(2 * m + 1);
  }
  return f;
}

Eigen::VectorXcd boundary_trace(const DiskMesh& mesh, const Eigen::VectorXcd& nodal) {
  if (nodal.size() != 2 * mesh.num_nodes()) {
    throw DimensionMismatch("nodal field does not match the mesh");
  }
  const int p = mesh.boundary_points();
  Eigen::VectorXcd trace(2 * p);
  for (int m = 0; m < p; ++m) {
    trace(2 * m) = nodal(2 * mesh.boundary_ring[m]);
    trace(2 * m + 1) = nodal(2 * mesh.boundary_ring[m] + 1);
  }
  return trace;
}

Eigen::VectorXcd perturbation_apply(const DiskMesh& mesh, const BackgroundMedium& medium,
                                    double omega, const MaterialField& dq,
                                    const Eigen::VectorXcd& u) {
  check_sizes(mesh, dq);
  if (u.size() != 2 * mesh.num_nodes()) throw DimensionMismatch("perturbation_apply: field size");
  const double w2 = omega * omega;
  Eigen::VectorXcd f = Eigen::VectorXcd::Zero(u.size());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    const Grad& g = mesh.gradients[t];
    const double area = mesh.areas[t];
    const Local ue = gather(u, tri);
    const Eigen::Matrix2cd grad = displacement_gradient(ue, g);
    const cplx div = grad.trace();
    const Eigen::Matrix2cd eps = strain(grad);
    const double lam = medium.lambda0 * area * (dq.lambda(tri[0]) + dq.lambda(tri[1]) + dq.lambda(tri[2])) / 3.0;
    const double mu = 2.0 * medium.mu0 * area * (dq.mu(tri[0]) + dq.mu(tri[1]) + dq.mu(tri[2])) / 3.0;

    for (int b = 0; b < 3; ++b) {
      for (int d = 0; d < 2; ++d) {
        cplx v = lam * div * g(b, d) + mu * (g(b, 0) * eps(d, 0) + g(b, 1) * eps(d, 1));
        cplx m = 0.0;
        for (int a = 0; a < 3; ++a) {
          double coeff = 0.0;
          for (int k = 0; k < 3; ++k) coeff += dq.rho(tri[k]) * triple_mass(area, a, b, k);
          m += coeff * ue(2 * a + d);
        }
        v -= medium.rho0 * w2 * m;
        f(2 * tri[b] + d) += v;
      }
    }
  }
  return f;
}

std::array<Eigen::VectorXcd, 3> perturbation_pairing(const DiskMesh& mesh,
                                                     const BackgroundMedium& medium, double omega,
                                                     const Eigen::VectorXcd& a,
                                                     const Eigen::VectorXcd& b) {
  const int n = mesh.num_nodes();
  if (a.size() != 2 * n || b.size() != 2 * n) {
    throw DimensionMismatch("perturbation_pairing: field size");
  }
  const double w2 = omega * omega;
  std::array<Eigen::VectorXcd, 3> out{Eigen::VectorXcd::Zero(n), Eigen::VectorXcd::Zero(n),
                                      Eigen::VectorXcd::Zero(n)};
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    const Grad& g = mesh.gradients[t];
    const double area = mesh.areas[t];
    const Local ae = gather(a, tri);
    const Local be = gather(b, tri);
    const Eigen::Matrix2cd ga = displacement_gradient(ae, g);
    const Eigen::Matrix2cd gb = displacement_gradient(be, g);
    const cplx lam = medium.lambda0 * (area / 3.0) * ga.trace() * gb.trace();
    const cplx mu = 2.0 * medium.mu0 * (area / 3.0) * contract(strain(ga), strain(gb));

    // sum_{a',b'} (a_{a'} . b_{b'}) int phi_a' phi_b' phi_k
    cplx dots[3][3];
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        dots[i][j] = ae(2 * i) * be(2 * j) + ae(2 * i + 1) * be(2 * j + 1);
      }
    }
    for (int k = 0; k < 3; ++k) {
      cplx m = 0.0;
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) m += dots[i][j] * triple_mass(area, i, j, k);
      }
      out[0](tri[k]) += lam;
      out[1](tri[k]) += mu;
      out[2](tri[k]) -= medium.rho0 * w2 * m;
    }
  }
  return out;
}

}  // namespace elscat
