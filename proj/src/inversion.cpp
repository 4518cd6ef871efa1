#include "elscat/inversion.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <memory>
#include <ostream>
#include <string>
#include <utility>

#include "elscat/errors.hpp"

namespace elscat {

Eigen::Matrix3d StepSize::matrix(double omega, const BackgroundMedium& medium) const {
  if (!(omega > 0.0)) throw DomainError("step size: omega must be positive");
  switch (kind) {
    case Kind::Constant:
      return c * Eigen::Matrix3d::Identity();
    case Kind::OverOmega:
      return (c / omega) * Eigen::Matrix3d::Identity();
    case Kind::Stiffness: {
      const double r = medium.lambda0 / medium.mu0;
      Eigen::Matrix3d m;
      m << 2.0 + r, r, 0.0, r, 2.0 + r, 0.0, 0.0, 0.0, 1.0;
      return (c / omega) * m;
    }
  }
  return Eigen::Matrix3d::Zero();
}

void SweepSchedule::validate() const {
  if (frequencies.empty()) throw ConfigError("schedule has no frequencies");
  if (angles.empty()) throw ConfigError("schedule has no incident directions");
  if (inner_iterations < 0) throw ConfigError("inner iteration count must be non-negative");
  for (std::size_t i = 0; i < frequencies.size(); ++i) {
    if (!(frequencies[i] > 0.0)) throw ConfigError("frequencies must be positive");
    if (i > 0 && !(frequencies[i] > frequencies[i - 1])) {
      throw ConfigError("frequencies must be strictly increasing");
    }
  }
}

double StoppingRule::tau_bound(double eta0) { return 2.0 * (1.0 + eta0) / (1.0 - 2.0 * eta0); }

void StoppingRule::validate() const {
  if (kind == Kind::Fixed) return;
  if (!(eta0 >= 0.0 && eta0 < 0.5)) throw ConfigError("eta0 must lie in [0, 1/2)");
  if (!(tau > tau_bound(eta0))) {
    throw ConfigError("tau = " + std::to_string(tau) + " does not exceed 2(1+eta0)/(1-2eta0) = " +
                      std::to_string(tau_bound(eta0)));
  }
}

StepOutcome landweber_step(SolverContext& ctx, const MaterialField& q, const Incidence& incidence,
                           const Measurement& data, const Eigen::Matrix3d& alpha,
                           Unknowns unknowns, const SupportCutoff& cutoff,
                           double stop_threshold) {
  const DiskMesh& mesh = ctx.mesh();
  ctx.set_material(q);
  const FieldSolution base = solve_forward(ctx, incidence);
  const bool density = unknowns == Unknowns::DensityOnly;

  StepOutcome out;
  out.q = q;
  out.increment = MaterialField::zeros(mesh.num_nodes());

  ComplexGradient g;
  if (data.phaseless) {
    const Eigen::VectorXd hbar = data.intensity - phaseless(base.trace);
    out.residual = boundary_norm(mesh, hbar);
    if (out.residual <= stop_threshold) return out;
    g = phaseless_adjoint(ctx, base, hbar, density);
  } else {
    const Eigen::VectorXcd h = data.trace - base.trace;
    out.residual = boundary_norm(mesh, h);
    if (out.residual <= stop_threshold) return out;
    g = near_field_adjoint(ctx, base.u, h, density);
  }

  for (int c = density ? 2 : 0; c < 3; ++c) {
    Eigen::VectorXd& inc = out.increment.component(c);
    for (int d = density ? 2 : 0; d < 3; ++d) {
      if (alpha(c, d) != 0.0) inc += alpha(c, d) * g.c[d].real();
    }
  }
  apply_support_cutoff(out.increment, mesh, cutoff);
  out.q += out.increment;
  clamp_lower(out.q);
  out.updated = true;
  return out;
}

MaterialField gradient_step(SolverContext& ctx, const MaterialField& q, const Incidence& incidence,
                            const Eigen::VectorXcd& data, const Eigen::Matrix3d& alpha,
                            const SupportCutoff& cutoff) {
  Measurement m;
  m.trace = data;
  return landweber_step(ctx, q, incidence, m, alpha, Unknowns::All, cutoff).increment;
}

MaterialField gradient_step_phaseless(SolverContext& ctx, const MaterialField& q,
                                      const Incidence& incidence, const Eigen::VectorXd& data,
                                      const Eigen::Matrix3d& alpha, const SupportCutoff& cutoff) {
  Measurement m;
  m.intensity = data;
  m.phaseless = true;
  return landweber_step(ctx, q, incidence, m, alpha, Unknowns::All, cutoff).increment;
}

MaterialField gradient_step_density(SolverContext& ctx, const MaterialField& q,
                                    const Incidence& incidence, const Eigen::VectorXcd& data,
                                    double alpha, const SupportCutoff& cutoff) {
  if (!q.lambda.isZero(0.0) || !q.mu.isZero(0.0)) {
    throw DomainError("density-only step requires q_lambda = q_mu = 0");
  }
  Measurement m;
  m.trace = data;
  return landweber_step(ctx, q, incidence, m, alpha * Eigen::Matrix3d::Identity(),
                        Unknowns::DensityOnly, cutoff)
      .increment;
}

void IterationTrace::write_csv_header(std::ostream& os) {
  os << "i,j,l,omega,theta,residual,e_qlambda,e_qmu,e_qrho,seconds\n";
}

void IterationTrace::write_csv_row(std::ostream& os, const TraceRow& r) {
  const auto old = os.precision(10);
  os << r.i << ',' << r.j << ',' << r.l << ',' << r.omega << ',' << r.theta << ',' << r.residual
     << ',' << r.error[0] << ',' << r.error[1] << ',' << r.error[2] << ',' << r.seconds << '\n';
  os.precision(old);
}

void IterationTrace::write_csv(std::ostream& os) const {
  write_csv_header(os);
  for (const auto& r : rows) write_csv_row(os, r);
}

std::array<double, 3> IterationTrace::final_error() const {
  if (rows.empty()) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    return {nan, nan, nan};
  }
  return rows.back().error;
}

double absolute_noise_bound(const DiskMesh& mesh, const Measurement& data, double delta) {
  if (!(delta >= 0.0 && delta < 1.0)) throw ConfigError("noise level must lie in [0, 1)");
  if (data.phaseless) {
    return (2.0 * delta + delta * delta) * boundary_norm(mesh, data.intensity) /
           ((1.0 - delta) * (1.0 - delta));
  }
  return delta * boundary_norm(mesh, data.trace) / (1.0 - delta);
}

namespace {

bool same_values(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (std::abs(a[k] - b[k]) > 1e-12 * std::max(1.0, std::abs(a[k]))) return false;
  }
  return true;
}

std::array<double, 3> errors_of(const DiskMesh& mesh, const MaterialField& q,
                                const MaterialField* truth) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (!truth) return {nan, nan, nan};
  return {relative_error(mesh, truth->lambda, q.lambda), relative_error(mesh, truth->mu, q.mu),
          relative_error(mesh, truth->rho, q.rho)};
}

}  // namespace

SweepResult run_sweep(const DiskMesh& mesh, const InversionConfig& config,
                      const NearFieldDataset& data, const MaterialField& initial,
                      const MaterialField* truth, const TraceSink& sink) {
  const SweepSchedule& sched = config.schedule;
  sched.validate();
  config.stopping.validate();
  data.validate();
  if (!same_values(sched.frequencies, data.frequencies) || !same_values(sched.angles, data.angles)) {
    throw ConfigError("dataset schedule does not match the inversion schedule");
  }
  if (sched.kind != data.kind) throw ConfigError("dataset incidence kind does not match");
  if ((config.data == DataKind::Phaseless) != data.phaseless) {
    throw ConfigError(data.phaseless ? "dataset is phaseless but a complex-data inversion was requested"
                                     : "dataset holds complex traces but a phaseless inversion was requested");
  }
  if (initial.size() != mesh.num_nodes()) throw DimensionMismatch("initial guess does not match the mesh");
  if (truth && truth->size() != mesh.num_nodes()) throw DimensionMismatch("truth does not match the mesh");

  const int p = mesh.boundary_points();
  std::vector<Measurement> records(data.record_count());
  for (int r = 0; r < data.record_count(); ++r) {
    records[r].phaseless = data.phaseless;
    if (data.phaseless) {
      records[r].intensity = restrict_intensity(data.intensities[r], p);
    } else {
      records[r].trace = restrict_trace(data.traces[r], p);
    }
  }

  std::vector<std::pair<int, int>> stages;
  const int nf = data.num_frequencies();
  const int nd = data.num_directions();
  if (sched.order == LoopOrder::FrequencyOuter) {
    for (int i = 0; i < nf; ++i) {
      for (int j = 0; j < nd; ++j) stages.emplace_back(i, j);
    }
  } else {
    for (int j = 0; j < nd; ++j) {
      for (int i = 0; i < nf; ++i) stages.emplace_back(i, j);
    }
  }

  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };
  const bool discrepancy = config.stopping.kind == StoppingRule::Kind::Discrepancy;

  SweepResult result;
  result.q = initial;
  clamp_lower(result.q);

  auto emit = [&](const TraceRow& row) {
    result.trace.rows.push_back(row);
    if (sink) sink(row);
  };

  TraceRow first;
  first.error = errors_of(mesh, result.q, truth);
  emit(first);

  std::unique_ptr<SolverContext> ctx;
  int ctx_freq = -1;
  for (const auto& [i, j] : stages) {
    const double omega = sched.frequencies[i];
    if (ctx_freq != i) {
      ctx = std::make_unique<SolverContext>(mesh, data.medium, omega);
      ctx_freq = i;
    }
    const Measurement& meas = records[data.index(i, j)];
    const Incidence inc{sched.kind, sched.angles[j]};
    const Eigen::Matrix3d alpha = config.step.matrix(omega, data.medium);
    const double delta = discrepancy ? absolute_noise_bound(mesh, meas, data.noise.level) : 0.0;
    const double threshold = discrepancy ? config.stopping.tau * delta : -1.0;

    StopRecord stop{i + 1, j + 1, 0, false, threshold};
    for (int l = 1; l <= sched.inner_iterations; ++l) {
      StepOutcome step = landweber_step(*ctx, result.q, inc, meas, alpha, config.unknowns,
                                        config.cutoff, threshold);
      TraceRow row;
      row.i = i + 1;
      row.j = j + 1;
      row.l = l;
      row.omega = omega;
      row.theta = sched.angles[j];
      row.residual = step.residual;
      row.delta = delta;
      row.updated = step.updated;
      if (step.updated) {
        result.q = std::move(step.q);
        ++stop.k_stop;
      }
      row.error = errors_of(mesh, result.q, truth);
      row.seconds = elapsed();
      emit(row);
      if (!step.updated) {
        stop.stopped = true;
        break;
      }
    }
    if (discrepancy) result.trace.stops.push_back(stop);
  }
  return result;
}

}  // namespace elscat
