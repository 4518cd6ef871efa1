#pragma once

#include <Eigen/Dense>
#include <complex>
#include <random>

#include "elscat/material.hpp"
#include "elscat/mesh.hpp"

namespace elscat::testing {

inline double rel(std::complex<double> a, std::complex<double> b) {
  return std::abs(a - b) / std::abs(b);
}

inline Eigen::VectorXcd random_trace(std::mt19937_64& rng, Eigen::Index size) {
  std::normal_distribution<double> g;
  Eigen::VectorXcd v(size);
  for (auto& x : v) x = {g(rng), g(rng)};
  return v;
}

// Smooth random perturbation: a few random bumps per component, cut off near the boundary.
inline MaterialField random_smooth_field(std::mt19937_64& rng, const DiskMesh& mesh) {
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  MaterialField dq = MaterialField::zeros(mesh.num_nodes());
  for (int c = 0; c < 3; ++c) {
    for (int k = 0; k < 3; ++k) {
      const Eigen::Vector2d centre(u(rng), u(rng));
      const double amp = 2.0 * u(rng);
      for (int i = 0; i < mesh.num_nodes(); ++i) {
        dq.component(c)(i) += amp * std::exp(-8.0 * (mesh.nodes[i] - centre).squaredNorm());
      }
    }
  }
  apply_support_cutoff(dq, mesh, {});
  return dq;
}

}  // namespace elscat::testing
