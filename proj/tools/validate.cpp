#include "validate.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "bessel_oracle.hpp"
#include "elastic_oracle.hpp"
#include "elscat/scenarios.hpp"
#include "elscat/solver.hpp"
#include "elscat/specfun.hpp"

namespace elscat::cli {
namespace {

struct Suite {
  std::string name;
  double tolerance;
  std::function<double()> measure;  // worst observed value, compared with tolerance
};

Eigen::VectorXcd random_trace(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> g;
  Eigen::VectorXcd v(n);
  for (auto& x : v) x = {g(rng), g(rng)};
  return v;
}

MaterialField random_field(std::mt19937_64& rng, const DiskMesh& mesh) {
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  MaterialField dq = MaterialField::zeros(mesh.num_nodes());
  for (int c = 0; c < 3; ++c) {
    const Eigen::Vector2d centre(u(rng), u(rng));
    const double amp = 2.0 * u(rng);
    for (int i = 0; i < mesh.num_nodes(); ++i) {
      dq.component(c)(i) = amp * std::exp(-8.0 * (mesh.nodes[i] - centre).squaredNorm());
    }
  }
  apply_support_cutoff(dq, mesh, {});
  return dq;
}

double specfun_oracle() {
  double worst = 0.0;
  for (int k = 0; k < 60; ++k) {
    const double t = 0.1 + 14.9 * k / 59.0;
    const auto v = hankel1_orders(30, t);
    for (int n = 0; n <= 30; ++n) {
      const cplx ref = oracle::hankel1(n, t).h;
      worst = std::max(worst, std::abs(v[n].h - ref) / std::abs(ref));
      const double wr = v[n].h.real() * v[n].dh.imag() - v[n].dh.real() * v[n].h.imag();
      worst = std::max(worst, std::abs(wr * std::numbers::pi * t / 2.0 - 1.0));
    }
  }
  return worst;
}

double dtn_modes(std::optional<int> corrupt) {
  const BackgroundMedium medium;
  double worst = 0.0;
  for (double w : {1.0, 5.0, 10.0}) {
    DtnOperator op = DtnOperator::build(medium, w);
    if (corrupt && w == 1.0) op.corrupt_mode_for_testing(*corrupt, 0, 0, 0.1 * std::abs(op.mode(*corrupt).w(0, 0)) + 0.1);
    const int p = op.boundary_points();
    for (int n = -(op.truncation() - 2); n <= op.truncation() - 2; ++n) {
      const oracle::CylindricalMode mode(medium, w, n, {0.6, 0.2}, {-0.3, 0.8}, true);
      const Eigen::VectorXcd t = mode.ring_traction(medium.radius, p);
      worst = std::max(worst, (op.apply(mode.ring_displacement(medium.radius, p)) - t).norm() / t.norm());
    }
  }
  return worst;
}

double dtn_adjoint() {
  const BackgroundMedium medium;
  std::mt19937_64 rng(1);
  double worst = 0.0;
  for (double w : {1.0, 5.0, 10.0}) {
    const DtnOperator op = DtnOperator::build(medium, w);
    for (int k = 0; k < 100; ++k) {
      const Eigen::VectorXcd phi = random_trace(rng, 2 * op.boundary_points());
      const Eigen::VectorXcd psi = random_trace(rng, 2 * op.boundary_points());
      const Eigen::VectorXcd bpsi = op.apply(psi);
      worst = std::max(worst, std::abs(psi.dot(op.apply(phi, true)) - bpsi.dot(phi)) /
                                  (bpsi.norm() * phi.norm()));
    }
  }
  return worst;
}

double adjoint_identity() {
  const BackgroundMedium medium;
  const DiskMesh mesh = build_disk_mesh(medium.radius, 0, kDefaultBasePoints);
  const MaterialField q = make_phantom("blobs").sample(mesh);
  std::mt19937_64 rng(2);
  double worst = 0.0;
  for (WaveKind kind : {WaveKind::Pressure, WaveKind::Shear}) {
    for (double w : {1.0, 5.0}) {
      SolverContext ctx(mesh, medium, w);
      ctx.set_material(q);
      const FieldSolution base = solve_forward(ctx, {kind, 0.7});
      for (int k = 0; k < 5; ++k) {
        const MaterialField dq = random_field(rng, mesh);
        const Eigen::VectorXcd h = random_trace(rng, base.trace.size());
        const Eigen::VectorXcd d = derivative_apply(ctx, base.u, dq);
        const cplx lhs = boundary_inner(mesh, d, h);
        const cplx rhs = parameter_inner(mesh, dq, near_field_adjoint(ctx, base.u, h));
        worst = std::max(worst, std::abs(lhs - rhs) / (boundary_norm(mesh, d) * boundary_norm(mesh, h)));
        const Eigen::VectorXd hbar = random_trace(rng, mesh.boundary_points()).real();
        const Eigen::VectorXd fd = phaseless_derivative(base.trace, d);
        const double plhs = boundary_inner(mesh, fd, hbar);
        const double prhs = parameter_inner(mesh, dq, phaseless_adjoint(ctx, base, hbar)).real();
        worst = std::max(worst, std::abs(plhs - prhs) / (boundary_norm(mesh, fd) * boundary_norm(mesh, hbar)));
      }
    }
  }
  return worst;
}

// Largest distance of the remainder ratio from 4.
double taylor() {
  const BackgroundMedium medium;
  const DiskMesh mesh = build_disk_mesh(medium.radius, 0, kDefaultBasePoints);
  const MaterialField q = make_phantom("blobs").sample(mesh);
  std::mt19937_64 rng(3);
  double worst = 0.0;
  for (WaveKind kind : {WaveKind::Pressure, WaveKind::Shear}) {
    const MaterialField dq = random_field(rng, mesh);
    SolverContext ctx(mesh, medium, 3.0);
    ctx.set_material(q);
    const FieldSolution base = solve_forward(ctx, {kind, 0.3});
    const Eigen::VectorXcd d = derivative_apply(ctx, base.u, dq);
    auto remainder = [&](double eps) {
      SolverContext pert(mesh, medium, 3.0);
      pert.set_material(q + eps * dq);
      const Eigen::VectorXcd moved = solve_forward(pert, {kind, 0.3}).trace;
      return boundary_norm(mesh, Eigen::VectorXcd(moved - base.trace - eps * d));
    };
    worst = std::max(worst, std::abs(remainder(1e-2) / remainder(5e-3) - 4.0));
  }
  return worst;
}

}  // namespace

bool run_validation(std::ostream& os, std::optional<int> corrupt_mode) {
  const std::vector<Suite> suites = {
      {"specfun-oracle", 1e-10, specfun_oracle},
      {"dtn-modes", 1e-8, [&] { return dtn_modes(corrupt_mode); }},
      {"dtn-adjoint", 1e-12, dtn_adjoint},
      {"adjoint-identity", 1e-8, adjoint_identity},
      {"taylor", 0.5, taylor},
  };
  bool all = true;
  os << "suite,status,value,tolerance\n";
  for (const Suite& s : suites) {
    double v = 0.0;
    bool ok = false;
    std::string note;
    try {
      v = s.measure();
      ok = v <= s.tolerance;
    } catch (const std::exception& e) {
      v = std::nan("");
      note = e.what();
    }
    all = all && ok;
    os << s.name << ',' << (ok ? "pass" : "fail") << ',' << v << ',' << s.tolerance << '\n';
    if (!note.empty()) os << "# " << s.name << ": " << note << '\n';
  }
  return all;
}

}  // namespace elscat::cli
