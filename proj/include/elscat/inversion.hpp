#pragma once

#include <Eigen/Dense>
#include <functional>
#include <iosfwd>
#include <vector>

#include "elscat/dataset.hpp"
#include "elscat/material.hpp"
#include "elscat/solver.hpp"

namespace elscat {

// Relaxation parameter alpha(omega), applied per node to (g_lambda, g_mu, g_rho).
struct StepSize {
  enum class Kind { Constant, OverOmega, Stiffness };
  Kind kind = Kind::Stiffness;
  double c = 0.01;

  static StepSize constant(double c) { return {Kind::Constant, c}; }
  static StepSize over_omega(double c) { return {Kind::OverOmega, c}; }
  // (1 / (100 omega)) [[2 + l/m, l/m, 0], [l/m, 2 + l/m, 0], [0, 0, 1]] with l/m = lambda0/mu0.
  static StepSize stiffness() { return {Kind::Stiffness, 0.01}; }

  Eigen::Matrix3d matrix(double omega, const BackgroundMedium& medium) const;
};

enum class LoopOrder {
  FrequencyOuter,  // frequency, direction, Landweber
  DirectionOuter,  // direction, frequency, Landweber
};

struct SweepSchedule {
  std::vector<double> frequencies;
  std::vector<double> angles;
  WaveKind kind = WaveKind::Pressure;
  int inner_iterations = 10;
  LoopOrder order = LoopOrder::FrequencyOuter;

  // Frequencies positive and strictly increasing, at least one angle, L >= 0.
  void validate() const;
};

struct StoppingRule {
  enum class Kind { Fixed, Discrepancy };
  Kind kind = Kind::Fixed;
  double tau = 3.0;
  double eta0 = 0.1;

  // 2 (1 + eta0) / (1 - 2 eta0).
  static double tau_bound(double eta0);
  void validate() const;
};

// Which data the residual is formed from and which parameters are updated.
enum class DataKind { Complex, Phaseless };
enum class Unknowns { All, DensityOnly };

struct InversionConfig {
  SweepSchedule schedule;
  StepSize step;
  StoppingRule stopping;
  DataKind data = DataKind::Complex;
  Unknowns unknowns = Unknowns::All;
  SupportCutoff cutoff;
};

// One measurement for a single (omega, direction).
struct Measurement {
  Eigen::VectorXcd trace;     // complex data
  Eigen::VectorXd intensity;  // phaseless data
  bool phaseless = false;
};

struct StepOutcome {
  MaterialField q;          // iterate after the update (or unchanged)
  MaterialField increment;  // alpha Re g after the support cutoff
  double residual = 0.0;    // L^2(Gamma_R) misfit at the incoming iterate
  bool updated = false;
};

// Solves at q, forms the misfit and, unless it is at or below stop_threshold,
// takes one Landweber step.  ctx is refactorized for q.
StepOutcome landweber_step(SolverContext& ctx, const MaterialField& q, const Incidence& incidence,
                           const Measurement& data, const Eigen::Matrix3d& alpha,
                           Unknowns unknowns, const SupportCutoff& cutoff,
                           double stop_threshold = -1.0);

// Increments for the three algorithms.
MaterialField gradient_step(SolverContext& ctx, const MaterialField& q, const Incidence& incidence,
                            const Eigen::VectorXcd& data, const Eigen::Matrix3d& alpha,
                            const SupportCutoff& cutoff = {});
MaterialField gradient_step_phaseless(SolverContext& ctx, const MaterialField& q,
                                      const Incidence& incidence, const Eigen::VectorXd& data,
                                      const Eigen::Matrix3d& alpha,
                                      const SupportCutoff& cutoff = {});
MaterialField gradient_step_density(SolverContext& ctx, const MaterialField& q,
                                    const Incidence& incidence, const Eigen::VectorXcd& data,
                                    double alpha, const SupportCutoff& cutoff = {});

struct TraceRow {
  int i = 0;  // frequency index, 1-based
  int j = 0;  // direction index, 1-based
  int l = 0;  // Landweber index, 1-based; 0 marks the initial guess
  double omega = 0.0;
  double theta = 0.0;
  double residual = 0.0;  // misfit at q_{i,j,l-1}
  double delta = 0.0;     // absolute noise bound used by the discrepancy test
  std::array<double, 3> error{};  // e_q after the step
  double seconds = 0.0;
  bool updated = false;
};

// Discrepancy outcome of one inner loop: k' updates were taken before the
// residual first dropped to tau delta (k' = L when it never did).
struct StopRecord {
  int i = 0;
  int j = 0;
  int k_stop = 0;
  bool stopped = false;
  double threshold = 0.0;
};

struct IterationTrace {
  std::vector<TraceRow> rows;
  std::vector<StopRecord> stops;

  // i,j,l,omega,theta,residual,e_qlambda,e_qmu,e_qrho,seconds
  void write_csv(std::ostream& os) const;
  static void write_csv_header(std::ostream& os);
  static void write_csv_row(std::ostream& os, const TraceRow& row);
  std::array<double, 3> final_error() const;
};

using TraceSink = std::function<void(const TraceRow&)>;

struct SweepResult {
  MaterialField q;
  IterationTrace trace;
};

// Absolute noise bound for one record measured with relative level delta:
// delta ||y|| / (1 - delta) for complex data, (2 delta + delta^2) ||y|| / (1 - delta)^2
// for |u|^2 data.
double absolute_noise_bound(const DiskMesh& mesh, const Measurement& data, double delta);

// Runs the frequency / direction / Landweber sweep on mesh against the dataset
// (records restricted to the mesh ring).  truth, when given, feeds the e_q columns.
// Rows reach sink as they are produced, so a failed run still leaves its partial trace.
SweepResult run_sweep(const DiskMesh& mesh, const InversionConfig& config,
                      const NearFieldDataset& data, const MaterialField& initial,
                      const MaterialField* truth = nullptr, const TraceSink& sink = {});

}  // namespace elscat
