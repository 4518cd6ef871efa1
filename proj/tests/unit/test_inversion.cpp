#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "elscat/errors.hpp"
#include "elscat/inversion.hpp"
#include "elscat/scenarios.hpp"
#include "helpers.hpp"

using namespace elscat;

namespace {

// Small complex-data problem on the level-0 mesh with data from the same mesh.
struct Fixture {
  BackgroundMedium medium;
  DiskMesh mesh = build_disk_mesh(1.0, 0, 64);
  MaterialField truth = make_phantom("blobs").sample(mesh);
  MaterialField zero = MaterialField::zeros(mesh.num_nodes());

  Eigen::VectorXcd data(double omega, const Incidence& inc) const {
    SolverContext ctx(mesh, medium, omega);
    ctx.set_material(truth);
    return solve_forward(ctx, inc).trace;
  }
};

NearFieldDataset small_dataset(const Fixture& f, const SweepSchedule& s, bool phaseless) {
  SynthesisOptions opt;
  opt.data_level = 0;
  opt.inversion_level = 0;
  opt.phaseless = phaseless;
  return synthesize(make_phantom("blobs"), f.medium, s, opt);
}

}  // namespace

TEST_SUITE("inversion") {
  TEST_CASE("step size matrices") {
    const BackgroundMedium medium;
    const Eigen::Matrix3d a = StepSize::stiffness().matrix(2.0, medium);
    CHECK(a(0, 0) == doctest::Approx(0.02));
    CHECK(a(0, 1) == doctest::Approx(0.01));
    CHECK(a(2, 2) == doctest::Approx(0.005));
    CHECK((a - a.transpose()).norm() == 0.0);
    CHECK(Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(a).eigenvalues().minCoeff() > 0.0);
    CHECK(StepSize::over_omega(0.01).matrix(4.0, medium)(1, 1) == doctest::Approx(0.0025));
    CHECK(StepSize::constant(0.01).matrix(4.0, medium)(2, 2) == doctest::Approx(0.01));
    CHECK_THROWS_AS(StepSize::constant(0.01).matrix(0.0, medium), DomainError);
  }

  TEST_CASE("discrepancy parameters") {
    CHECK(StoppingRule::tau_bound(0.1) == doctest::Approx(2.75));
    StoppingRule r;
    r.kind = StoppingRule::Kind::Discrepancy;
    CHECK_NOTHROW(r.validate());
    r.tau = 2.5;
    CHECK_THROWS_AS(r.validate(), ConfigError);
    r.tau = 3.0;
    r.eta0 = 0.5;
    CHECK_THROWS_AS(r.validate(), ConfigError);
  }

  TEST_CASE("schedule validation") {
    SweepSchedule s;
    CHECK_THROWS_AS(s.validate(), ConfigError);
    s.frequencies = {1.0, 2.0};
    CHECK_THROWS_AS(s.validate(), ConfigError);
    s.angles = {0.0};
    CHECK_NOTHROW(s.validate());
    s.frequencies = {2.0, 1.0};
    CHECK_THROWS_AS(s.validate(), ConfigError);
    s.frequencies = {1.0};
    s.inner_iterations = -1;
    CHECK_THROWS_AS(s.validate(), ConfigError);
  }

  TEST_CASE("noise bounds") {
    const DiskMesh mesh = build_disk_mesh(1.0, 0, 16);
    Measurement m;
    m.trace = Eigen::VectorXcd::Ones(32);
    const double n = boundary_norm(mesh, m.trace);
    CHECK(absolute_noise_bound(mesh, m, 0.01) == doctest::Approx(0.01 * n / 0.99));
    Measurement p;
    p.phaseless = true;
    p.intensity = Eigen::VectorXd::Ones(16);
    const double np = boundary_norm(mesh, p.intensity);
    CHECK(absolute_noise_bound(mesh, p, 0.01) == doctest::Approx(0.0201 * np / (0.99 * 0.99)));
    CHECK_THROWS_AS(absolute_noise_bound(mesh, m, 1.0), ConfigError);
  }

  TEST_CASE("exact data at the truth gives a zero increment") {
    Fixture f;
    SolverContext ctx(f.mesh, f.medium, 2.0);
    const Incidence inc{WaveKind::Pressure, 0.3};
    const Eigen::VectorXcd y = f.data(2.0, inc);
    const MaterialField dq = gradient_step(ctx, f.truth, inc, y, StepSize::stiffness().matrix(2.0, f.medium));
    for (int c = 0; c < 3; ++c) CHECK(dq.component(c).norm() < 1e-12);
  }

  TEST_CASE("zero step size leaves the iterate unchanged") {
    Fixture f;
    SolverContext ctx(f.mesh, f.medium, 2.0);
    const Incidence inc{WaveKind::Pressure, 0.3};
    Measurement m;
    m.trace = f.data(2.0, inc);
    const StepOutcome s =
        landweber_step(ctx, f.zero, inc, m, Eigen::Matrix3d::Zero(), Unknowns::All, {});
    CHECK(s.updated);
    CHECK(s.residual > 0.0);
    CHECK(s.q.is_zero());
  }

  TEST_CASE("stop threshold suppresses the update") {
    Fixture f;
    SolverContext ctx(f.mesh, f.medium, 2.0);
    const Incidence inc{WaveKind::Pressure, 0.3};
    Measurement m;
    m.trace = f.data(2.0, inc);
    const StepOutcome s = landweber_step(ctx, f.zero, inc, m, Eigen::Matrix3d::Identity(),
                                         Unknowns::All, {}, 1e6);
    CHECK_FALSE(s.updated);
    CHECK(s.q.is_zero());
  }

  TEST_CASE("one step reduces the residual and respects the support") {
    Fixture f;
    for (WaveKind kind : {WaveKind::Pressure, WaveKind::Shear}) {
      SolverContext ctx(f.mesh, f.medium, 2.0);
      const Incidence inc{kind, 0.3};
      Measurement m;
      m.trace = f.data(2.0, inc);
      const StepOutcome s = landweber_step(ctx, f.zero, inc, m, StepSize::stiffness().matrix(2.0, f.medium),
                                           Unknowns::All, {});
      const StepOutcome t = landweber_step(ctx, s.q, inc, m, Eigen::Matrix3d::Zero(), Unknowns::All, {});
      CHECK(t.residual < s.residual);
      for (int i = 0; i < f.mesh.num_nodes(); ++i) {
        if (f.mesh.nodes[i].norm() >= 0.9) {
          for (int c = 0; c < 3; ++c) CHECK(s.q.component(c)(i) == 0.0);
        }
      }
    }
  }

  TEST_CASE("one density step at omega = 1 decreases the residual for the peaks phantom") {
    Fixture f;
    const MaterialField truth = make_phantom("peaks").sample(f.mesh);
    SolverContext data_ctx(f.mesh, f.medium, 1.0);
    data_ctx.set_material(truth);
    const Incidence inc{WaveKind::Pressure, 0.0};
    Measurement m;
    m.trace = solve_forward(data_ctx, inc).trace;
    SolverContext ctx(f.mesh, f.medium, 1.0);
    const StepOutcome s = landweber_step(ctx, f.zero, inc, m, 0.01 * Eigen::Matrix3d::Identity(),
                                         Unknowns::DensityOnly, {});
    const StepOutcome t = landweber_step(ctx, s.q, inc, m, Eigen::Matrix3d::Zero(), Unknowns::DensityOnly, {});
    CHECK(t.residual < s.residual);
    CHECK(s.q.lambda.isZero(0.0));
    CHECK(s.q.mu.isZero(0.0));
  }

  TEST_CASE("phaseless step: phase invariance, zero misfit, periodic angle") {
    Fixture f;
    SolverContext ctx(f.mesh, f.medium, 3.0);
    const Incidence inc{WaveKind::Pressure, 1.0};
    const Eigen::VectorXd y = phaseless(f.data(3.0, inc));
    const Eigen::Matrix3d a = StepSize::stiffness().matrix(3.0, f.medium);
    const MaterialField dq = gradient_step_phaseless(ctx, f.zero, inc, y, a);
    CHECK(dq.rho.norm() > 0.0);
    for (int c = 0; c < 3; ++c) CHECK(dq.component(c).allFinite());
    const Eigen::VectorXd rotated = phaseless(std::polar(1.0, 2.1) * f.data(3.0, inc));
    const MaterialField dr = gradient_step_phaseless(ctx, f.zero, inc, rotated, a);
    for (int c = 0; c < 3; ++c) {
      CHECK((dr.component(c) - dq.component(c)).norm() <= 1e-12 * dq.component(c).norm());
    }
    const MaterialField at_truth = gradient_step_phaseless(ctx, f.truth, inc, y, a);
    for (int c = 0; c < 3; ++c) CHECK(at_truth.component(c).norm() < 1e-12);
    for (int c = 0; c < 3; ++c) CHECK(dq.component(c).allFinite());
    const MaterialField dq2 = gradient_step_phaseless(ctx, f.zero, {WaveKind::Pressure, 1.0 + 2.0 * M_PI}, y, a);
    for (int c = 0; c < 3; ++c) {
      CHECK((dq2.component(c) - dq.component(c)).norm() <= 1e-10 * dq.component(c).norm());
    }
  }

  TEST_CASE("density step equals the rho part of the full step") {
    Fixture f;
    SolverContext ctx(f.mesh, f.medium, 2.0);
    const Incidence inc{WaveKind::Shear, 0.0};
    const Eigen::VectorXcd y = f.data(2.0, inc);
    const MaterialField full = gradient_step(ctx, f.zero, inc, y, 0.01 * Eigen::Matrix3d::Identity());
    const MaterialField dens = gradient_step_density(ctx, f.zero, inc, y, 0.01);
    CHECK((dens.rho - full.rho).norm() < 1e-13 * full.rho.norm());
    CHECK(dens.lambda.isZero(0.0));
    CHECK(dens.mu.isZero(0.0));
    MaterialField bad = f.zero;
    bad.lambda(0) = 0.1;
    CHECK_THROWS_AS(gradient_step_density(ctx, bad, inc, y, 0.01), DomainError);
  }

  TEST_CASE("sweep bookkeeping") {
    Fixture f;
    InversionConfig cfg;
    cfg.schedule.frequencies = {1.0, 2.0};
    cfg.schedule.angles = {0.0, M_PI};
    cfg.schedule.inner_iterations = 2;
    const NearFieldDataset ds = small_dataset(f, cfg.schedule, false);

    std::vector<TraceRow> streamed;
    const SweepResult r = run_sweep(f.mesh, cfg, ds, f.zero, &f.truth,
                                    [&](const TraceRow& row) { streamed.push_back(row); });
    REQUIRE(r.trace.rows.size() == 1 + 2 * 2 * 2);
    CHECK(streamed.size() == r.trace.rows.size());
    CHECK(r.trace.rows[0].l == 0);
    for (int c = 0; c < 3; ++c) CHECK(r.trace.rows[0].error[c] == doctest::Approx(1.0));
    CHECK(r.trace.rows[1].i == 1);
    CHECK(r.trace.rows[1].j == 1);
    CHECK(r.trace.rows[2].l == 2);
    CHECK(r.trace.rows[3].j == 2);
    CHECK(r.trace.rows[5].i == 2);
    CHECK(r.trace.stops.empty());
    for (int c = 0; c < 3; ++c) CHECK(r.trace.final_error()[c] < 1.0);
    for (int c = 0; c < 3; ++c) CHECK((r.q.component(c).array() > -1.0).all());

    // direction-outer visits (i, j) = (1,1), (2,1), (1,2), (2,2)
    InversionConfig d = cfg;
    d.schedule.order = LoopOrder::DirectionOuter;
    const SweepResult rd = run_sweep(f.mesh, d, ds, f.zero, &f.truth);
    CHECK(rd.trace.rows[3].i == 2);
    CHECK(rd.trace.rows[3].j == 1);

    std::ostringstream os;
    r.trace.write_csv(os);
    CHECK(os.str().rfind("i,j,l,omega,theta,residual,e_qlambda,e_qmu,e_qrho,seconds\n", 0) == 0);
  }

  TEST_CASE("hand-off between stages is exact") {
    Fixture f;
    InversionConfig cfg;
    cfg.schedule.frequencies = {1.0, 2.0};
    cfg.schedule.angles = {0.5};
    cfg.schedule.inner_iterations = 2;
    const NearFieldDataset ds = small_dataset(f, cfg.schedule, false);
    const SweepResult r = run_sweep(f.mesh, cfg, ds, f.zero);

    // replay by hand
    MaterialField q = f.zero;
    for (int i = 0; i < 2; ++i) {
      SolverContext ctx(f.mesh, f.medium, cfg.schedule.frequencies[i]);
      Measurement m;
      m.trace = ds.traces[i];
      for (int l = 0; l < 2; ++l) {
        q = landweber_step(ctx, q, {WaveKind::Pressure, 0.5}, m,
                           cfg.step.matrix(cfg.schedule.frequencies[i], f.medium), Unknowns::All, {})
                .q;
      }
    }
    for (int c = 0; c < 3; ++c) CHECK((r.q.component(c) - q.component(c)).norm() == 0.0);
  }

  TEST_CASE("degenerate sweeps") {
    Fixture f;
    InversionConfig cfg;
    cfg.schedule.frequencies = {1.0};
    cfg.schedule.angles = {0.0};
    cfg.schedule.inner_iterations = 0;
    const NearFieldDataset ds = small_dataset(f, cfg.schedule, false);
    const SweepResult r = run_sweep(f.mesh, cfg, ds, f.zero, &f.truth);
    CHECK(r.q.is_zero());
    CHECK(r.trace.rows.size() == 1);

    // data generated from q = 0 leave a zero initial guess in place
    cfg.schedule.inner_iterations = 1;
    NearFieldDataset empty = ds;
    SynthesisOptions opt;
    opt.data_level = 0;
    opt.inversion_level = 0;
    empty = synthesize(make_phantom("zero"), f.medium, cfg.schedule, opt);
    const SweepResult z = run_sweep(f.mesh, cfg, empty, f.zero);
    for (int c = 0; c < 3; ++c) CHECK(z.q.component(c).norm() < 1e-10);
  }

  TEST_CASE("sweep rejects mismatched data") {
    Fixture f;
    InversionConfig cfg;
    cfg.schedule.frequencies = {1.0};
    cfg.schedule.angles = {0.0};
    cfg.schedule.inner_iterations = 1;
    const NearFieldDataset ds = small_dataset(f, cfg.schedule, false);
    InversionConfig other = cfg;
    other.schedule.frequencies = {2.0};
    CHECK_THROWS_AS(run_sweep(f.mesh, other, ds, f.zero), ConfigError);
    other = cfg;
    other.schedule.kind = WaveKind::Shear;
    CHECK_THROWS_AS(run_sweep(f.mesh, other, ds, f.zero), ConfigError);
    other = cfg;
    other.data = DataKind::Phaseless;
    CHECK_THROWS_AS(run_sweep(f.mesh, other, ds, f.zero), ConfigError);
    const DiskMesh fine = build_disk_mesh(1.0, 1, 64);
    CHECK_THROWS_AS(run_sweep(fine, cfg, ds, MaterialField::zeros(fine.num_nodes())), DimensionMismatch);
  }

  TEST_CASE("discrepancy stopping records") {
    Fixture f;
    InversionConfig cfg;
    cfg.schedule.frequencies = {1.0, 2.0};
    cfg.schedule.angles = {0.0};
    cfg.schedule.inner_iterations = 3;
    cfg.stopping.kind = StoppingRule::Kind::Discrepancy;
    SynthesisOptions opt;
    opt.data_level = 0;
    opt.inversion_level = 0;
    opt.noise = 0.9;
    opt.seed = 3;
    const NearFieldDataset ds = synthesize(make_phantom("blobs"), f.medium, cfg.schedule, opt);
    // with 90% noise the first residual is already below tau delta
    const SweepResult r = run_sweep(f.mesh, cfg, ds, f.zero);
    REQUIRE(r.trace.stops.size() == 2);
    for (const auto& s : r.trace.stops) {
      CHECK(s.stopped);
      CHECK(s.k_stop == 0);
      CHECK(s.threshold > 0.0);
    }
    CHECK(r.q.is_zero());
  }
}
