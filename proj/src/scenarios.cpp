#include "elscat/scenarios.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <cmath>
#include <numbers>
#include <random>
#include <thread>

#include "elscat/errors.hpp"
#include "elscat/solver.hpp"

namespace elscat {

double peaks_density(const Eigen::Vector2d& p) {
  const double x = p.x();
  const double y = p.y();
  return 0.3 * (1.0 - 3.0 * x) * (1.0 - 3.0 * x) * std::exp(-9.0 * x * x - (3.0 * y + 1.0) * (3.0 * y + 1.0)) -
         (0.6 * x - 27.0 * x * x * x - 243.0 * std::pow(y, 5)) * std::exp(-9.0 * x * x - 9.0 * y * y) -
         0.03 * std::exp(-(3.0 * x + 1.0) * (3.0 * x + 1.0) - 9.0 * y * y);
}

double Bump::operator()(const Eigen::Vector2d& p) const {
  const double s = (p - center).squaredNorm() / (radius * radius);
  if (s >= 1.0) return 0.0;
  const double w = 1.0 - s;
  return amplitude * w * w * w;
}

MaterialField Phantom::sample(const DiskMesh& mesh, const SupportCutoff& cutoff) const {
  MaterialField q = MaterialField::zeros(mesh.num_nodes());
  for (int i = 0; i < mesh.num_nodes(); ++i) {
    const Eigen::Vector2d x = mesh.nodes[i] / mesh.radius;
    for (int c = 0; c < 3; ++c) {
      if (component[c]) q.component(c)(i) = component[c](x);
    }
  }
  apply_support_cutoff(q, mesh, cutoff);
  return q;
}

namespace {

std::function<double(const Eigen::Vector2d&)> bump(double cx, double cy, double a, double amp) {
  return Bump{Eigen::Vector2d(cx, cy), a, amp};
}

double zero_field(const Eigen::Vector2d&) { return 0.0; }

}  // namespace

std::vector<std::string> phantom_names() { return {"blobs", "compact", "overlap", "peaks", "zero"}; }

Phantom make_phantom(const std::string& name) {
  Phantom ph;
  ph.name = name;
  if (name == "blobs") {
    ph.component = {bump(-0.2, 0.1, 0.45, 0.5), bump(0.15, 0.15, 0.45, 0.4),
                    bump(0.05, -0.2, 0.45, 0.3)};
    ph.support_radius = 0.7;
  } else if (name == "compact") {
    ph.component = {bump(-0.3, 0.15, 0.35, 0.5), bump(0.25, 0.25, 0.3, 0.4),
                    bump(0.05, -0.3, 0.35, 0.3)};
    ph.support_radius = 0.7;
  } else if (name == "overlap") {
    ph.component = {bump(0.0, 0.1, 0.45, 0.4), bump(0.15, -0.1, 0.4, 0.3),
                    bump(-0.15, -0.15, 0.4, 0.5)};
    ph.support_radius = 0.7;
  } else if (name == "peaks") {
    ph.component = {zero_field, zero_field, peaks_density};
    ph.support_radius = 0.9;
    ph.density_only = true;
  } else if (name == "zero") {
    ph.component = {zero_field, zero_field, zero_field};
    ph.support_radius = 0.0;
  } else {
    throw ConfigError("unknown phantom '" + name + "'");
  }
  return ph;
}

std::vector<double> unit_frequencies(int lo, int hi) {
  std::vector<double> f;
  for (int w = lo; w <= hi; ++w) f.push_back(w);
  return f;
}

std::vector<double> uniform_angles(int count) {
  std::vector<double> a;
  for (int j = 0; j < count; ++j) a.push_back(2.0 * std::numbers::pi * j / count);
  return a;
}

NearFieldDataset synthesize(const Phantom& phantom, const BackgroundMedium& medium,
                            const SweepSchedule& schedule, const SynthesisOptions& options) {
  medium.validate();
  schedule.validate();
  if (options.data_level < options.inversion_level) {
    throw ConfigError("data mesh level must not be below the inversion mesh level");
  }
  if (!(options.noise >= 0.0 && options.noise < 1.0)) {
    throw ConfigError("noise level must lie in [0, 1)");
  }

  NearFieldDataset ds;
  ds.medium = medium;
  ds.frequencies = schedule.frequencies;
  ds.angles = schedule.angles;
  ds.kind = schedule.kind;
  ds.phaseless = options.phaseless;
  ds.noise = {options.noise, options.seed};
  ds.provenance = {options.data_level, options.inversion_level, options.base_points, phantom.name,
                   options.preset};
  if (options.data_level == options.inversion_level) {
    ds.warnings.push_back("inverse crime: data synthesized on the inversion mesh (level " +
                          std::to_string(options.data_level) + ")");
  }

  const DiskMesh mesh = build_disk_mesh(medium.radius, options.data_level, options.base_points);
  const MaterialField q = phantom.sample(mesh);
  ds.boundary_points = mesh.boundary_points();

  const int nf = ds.num_frequencies();
  const int nd = ds.num_directions();
  std::vector<Eigen::VectorXcd> clean(ds.record_count());

  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_lock;
  auto work = [&] {
    for (int i = next++; i < nf; i = next++) {
      try {
        SolverContext ctx(mesh, medium, ds.frequencies[i]);
        ctx.set_material(q);
        for (int j = 0; j < nd; ++j) {
          clean[ds.index(i, j)] = solve_forward(ctx, {ds.kind, ds.angles[j]}).trace;
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_lock);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const int workers = std::max(1, std::min(options.workers, nf));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (auto& trace : clean) {
    if (options.noise > 0.0) {
      for (Eigen::Index k = 0; k < trace.size(); ++k) {
        const double r = std::sqrt(unit(rng));
        const double phi = 2.0 * std::numbers::pi * unit(rng);
        trace(k) *= 1.0 + options.noise * std::polar(r, phi);
      }
    }
    if (ds.phaseless) {
      ds.intensities.push_back(phaseless(trace));
    } else {
      ds.traces.push_back(std::move(trace));
    }
  }
  return ds;
}

std::vector<std::string> preset_ids() {
  return {"example1-P",         "example1-S",
          "example1-noise3",    "example1-noise5",
          "example2-scalar",    "example3-phaseless",
          "example4-single-direction", "example5-density",
          "example5-phaseless", "example6-fixed-frequency"};
}

ExperimentPreset experiment_preset(const std::string& id) {
  ExperimentPreset p;
  p.id = id;
  InversionConfig& inv = p.inversion;
  inv.schedule.frequencies = unit_frequencies(1, 10);
  inv.schedule.angles = uniform_angles(16);
  inv.schedule.kind = WaveKind::Pressure;
  inv.schedule.inner_iterations = 10;
  inv.step = StepSize::stiffness();
  p.phantom = "blobs";

  if (id == "example1-P") {
    p.description = "three parameters, P incidence, omega 1..10, M=16, L=10, stiffness step";
  } else if (id == "example1-S") {
    p.description = "three parameters, S incidence, omega 1..10, M=16, L=10, stiffness step";
    inv.schedule.kind = WaveKind::Shear;
  } else if (id == "example1-noise3" || id == "example1-noise5") {
    p.noise = id == "example1-noise3" ? 0.03 : 0.05;
    p.description = "example1-P with " + std::to_string(static_cast<int>(p.noise * 100)) + "% noise";
  } else if (id == "example2-scalar") {
    p.description = "example1-P with scalar step 0.01/omega";
    inv.step = StepSize::over_omega(0.01);
  } else if (id == "example3-phaseless") {
    p.description = "example1-P from phaseless data";
    inv.data = DataKind::Phaseless;
  } else if (id == "example4-single-direction") {
    p.description = "example1-P with one direction d=(1,0) and L=50";
    inv.schedule.angles = {0.0};
    inv.schedule.inner_iterations = 50;
  } else if (id == "example5-density" || id == "example5-phaseless") {
    p.description = std::string("density only, peaks phantom, omega 1..11, M=16, L=10, alpha=0.01") +
                    (id == "example5-phaseless" ? ", phaseless data" : "");
    inv.schedule.frequencies = unit_frequencies(1, 11);
    inv.step = StepSize::constant(0.01);
    inv.unknowns = Unknowns::DensityOnly;
    if (id == "example5-phaseless") inv.data = DataKind::Phaseless;
    p.phantom = "peaks";
  } else if (id == "example6-fixed-frequency") {
    p.description = "density only, peaks phantom, omega=1, one direction d=(0,1), L=10, alpha=0.01";
    inv.schedule.frequencies = {1.0};
    inv.schedule.angles = {std::numbers::pi / 2.0};
    inv.step = StepSize::constant(0.01);
    inv.unknowns = Unknowns::DensityOnly;
    p.phantom = "peaks";
  } else {
    throw ConfigError("unknown preset '" + id + "'");
  }
  return p;
}

}  // namespace elscat
