#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <array>
#include <iosfwd>
#include <vector>

namespace elscat {

// Concentric-ring triangulation of the disk |x| <= R.
//
// At refinement level l the outermost ring carries P = base_points * 2^l nodes
// at the uniform angles 2 pi m / P, in order; that ring is boundary_ring and
// coincides with the DtN angular grid.  Interior ring j (1 <= j <= P/4) has 4j
// nodes at radius R j / (P/4), so the element size is about 2 pi R / P in both
// directions.
struct DiskMesh {
  double radius = 1.0;
  int refinement_level = 0;
  int base_points = 0;
  std::vector<Eigen::Vector2d> nodes;
  std::vector<std::array<int, 3>> triangles;
  std::vector<int> boundary_ring;

  // Per-triangle area and barycentric gradients (row a = grad of the a-th vertex function).
  std::vector<double> areas;
  std::vector<Eigen::Matrix<double, 3, 2>> gradients;

  // Row sums of the P1 mass matrix: sum over incident triangles of |T| / 3.
  Eigen::VectorXd lumped_mass;

  int num_nodes() const { return static_cast<int>(nodes.size()); }
  int num_triangles() const { return static_cast<int>(triangles.size()); }
  int boundary_points() const { return static_cast<int>(boundary_ring.size()); }
  // Trapezoidal weight 2 pi R / P of each boundary sample.
  double boundary_weight() const;
  double max_element_diameter() const;
  double total_area() const;

  // Consistent P1 mass matrix.
  Eigen::SparseMatrix<double> mass_matrix() const;

  // id,x,y and n1,n2,n3 CSV exports.
  void write_nodes_csv(std::ostream& os) const;
  void write_triangles_csv(std::ostream& os) const;
};

// Throws DomainError unless base_points is a power of two >= 16 and level >= 0.
DiskMesh build_disk_mesh(double radius, int refinement_level, int base_points);

}  // namespace elscat
