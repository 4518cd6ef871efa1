#include "elscat/mesh.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

#include "elscat/errors.hpp"

namespace elscat {
namespace {

bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

// Connects an inner ring (or the centre node) to the next ring outward by
// merging the two angle sequences.  Triangles come out counter-clockwise.
void stitch_rings(const std::vector<int>& inner, const std::vector<int>& outer,
                  std::vector<std::array<int, 3>>& triangles) {
  const int ni = static_cast<int>(inner.size());
  const int no = static_cast<int>(outer.size());
  if (ni == 1) {
    for (int b = 0; b < no; ++b) {
      triangles.push_back({inner[0], outer[b], outer[(b + 1) % no]});
    }
    return;
  }
  int a = 0;
  int b = 0;
  while (a < ni || b < no) {
    // Compare next angles as fractions of a turn: (a+1)/ni vs (b+1)/no.
    const bool advance_outer =
        a == ni || (b < no && static_cast<long long>(b + 1) * ni <= static_cast<long long>(a + 1) * no);
    if (advance_outer) {
      triangles.push_back({inner[a % ni], outer[b], outer[(b + 1) % no]});
      ++b;
    } else {
      triangles.push_back({inner[a], outer[b % no], inner[(a + 1) % ni]});
      ++a;
    }
  }
}

}  // namespace

DiskMesh build_disk_mesh(double radius, int refinement_level, int base_points) {
  if (!(radius > 0.0)) throw DomainError("build_disk_mesh: radius must be positive");
  if (refinement_level < 0 || refinement_level > 6) {
    throw DomainError("build_disk_mesh: refinement level must lie in [0, 6]");
  }
  if (!is_power_of_two(base_points) || base_points < 16) {
    throw DomainError("build_disk_mesh: boundary points must be a power of two >= 16, got " +
                      std::to_string(base_points));
  }

  DiskMesh mesh;
  mesh.radius = radius;
  mesh.refinement_level = refinement_level;
  mesh.base_points = base_points;

  const int p = base_points << refinement_level;
  const int rings = p / 4;

  mesh.nodes.emplace_back(0.0, 0.0);
  std::vector<int> previous{0};
  for (int j = 1; j <= rings; ++j) {
    const int count = 4 * j;
    const double r = (j == rings) ? radius : radius * j / rings;
    std::vector<int> ring(count);
    for (int m = 0; m < count; ++m) {
      const double theta = 2.0 * std::numbers::pi * m / count;
      ring[m] = static_cast<int>(mesh.nodes.size());
      mesh.nodes.emplace_back(r * std::cos(theta), r * std::sin(theta));
    }
    stitch_rings(previous, ring, mesh.triangles);
    previous = std::move(ring);
  }
  mesh.boundary_ring = std::move(previous);

  const int nt = mesh.num_triangles();
  mesh.areas.resize(nt);
  mesh.gradients.resize(nt);
  mesh.lumped_mass = Eigen::VectorXd::Zero(mesh.num_nodes());
  for (int t = 0; t < nt; ++t) {
    const auto& tri = mesh.triangles[t];
    const Eigen::Vector2d& p0 = mesh.nodes[tri[0]];
    const Eigen::Vector2d& p1 = mesh.nodes[tri[1]];
    const Eigen::Vector2d& p2 = mesh.nodes[tri[2]];
    const Eigen::Vector2d e1 = p1 - p0;
    const Eigen::Vector2d e2 = p2 - p0;
    const double det = e1.x() * e2.y() - e1.y() * e2.x();
    if (!(det > 0.0)) {
      throw Error("build_disk_mesh: produced a non-positive triangle " + std::to_string(t));
    }
    mesh.areas[t] = 0.5 * det;
    // grad(phi_a) for the affine map with Jacobian [e1 e2].
    Eigen::Matrix<double, 3, 2> g;
    g.row(1) << e2.y() / det, -e2.x() / det;
    g.row(2) << -e1.y() / det, e1.x() / det;
    g.row(0) = -g.row(1) - g.row(2);
    mesh.gradients[t] = g;
    for (int v : tri) mesh.lumped_mass(v) += mesh.areas[t] / 3.0;
  }
  return mesh;
}

double DiskMesh::boundary_weight() const {
  return 2.0 * std::numbers::pi * radius / boundary_points();
}

double DiskMesh::max_element_diameter() const {
  double hmax = 0.0;
  for (const auto& tri : triangles) {
    for (int a = 0; a < 3; ++a) {
      hmax = std::max(hmax, (nodes[tri[a]] - nodes[tri[(a + 1) % 3]]).norm());
    }
  }
  return hmax;
}

double DiskMesh::total_area() const {
  double s = 0.0;
  for (double a : areas) s += a;
  return s;
}

Eigen::SparseMatrix<double> DiskMesh::mass_matrix() const {
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(9 * triangles.size());
  for (int t = 0; t < num_triangles(); ++t) {
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        trip.emplace_back(triangles[t][a], triangles[t][b], areas[t] * (a == b ? 2.0 : 1.0) / 12.0);
      }
    }
  }
  Eigen::SparseMatrix<double> m(num_nodes(), num_nodes());
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

void DiskMesh::write_nodes_csv(std::ostream& os) const {
  os << "id,x,y\n";
  os.precision(17);
  for (int i = 0; i < num_nodes(); ++i) {
    os << i << ',' << nodes[i].x() << ',' << nodes[i].y() << '\n';
  }
}

void DiskMesh::write_triangles_csv(std::ostream& os) const {
  os << "n1,n2,n3\n";
  for (const auto& tri : triangles) {
    os << tri[0] << ',' << tri[1] << ',' << tri[2] << '\n';
  }
}

}  // namespace elscat
