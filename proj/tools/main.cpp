#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <optional>
#include <thread>

#include "elscat/errors.hpp"
#include "elscat/inversion.hpp"
#include "elscat/scenarios.hpp"
#include "elscat/solver.hpp"
#include "run_config.hpp"
#include "validate.hpp"

namespace fs = std::filesystem;
using namespace elscat;
using elscat::cli::RunConfig;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitValidation = 4;

struct Overrides {
  std::optional<std::string> config;
  std::optional<std::string> preset;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<int> mesh_level;
  std::optional<int> data_mesh_level;
  std::optional<double> noise;
  std::optional<double> tau;
  std::optional<std::string> stop;
  std::vector<std::string> sets;
};

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

// defaults < preset < config file < flags
RunConfig resolve(const Overrides& o) {
  RunConfig cfg;
  cfg.workers = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::pair<std::string, std::string>> file;
  if (o.config) file = cli::read_config_file(*o.config);
  if (o.preset) cfg.apply_preset(*o.preset);
  for (const auto& [k, v] : file) {
    if (k == "preset" && o.preset) continue;
    cfg.set(k, v);
  }
  if (o.out) cfg.out = *o.out;
  if (o.seed) cfg.seed = *o.seed;
  if (o.workers) cfg.workers = *o.workers;
  if (o.mesh_level) cfg.mesh_level = *o.mesh_level;
  if (o.data_mesh_level) cfg.data_mesh_level = *o.data_mesh_level;
  if (o.noise) cfg.noise = *o.noise;
  if (o.tau) cfg.tau = *o.tau;
  if (o.stop) cfg.set("stop", *o.stop);
  for (const auto& s : o.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + s + "'");
    cfg.set(s.substr(0, eq), s.substr(eq + 1));
  }
  if (cfg.workers < 1) throw ConfigError("workers must be at least 1");
  return cfg;
}

fs::path prepare_out(const RunConfig& cfg) {
  const fs::path dir(cfg.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());
  std::ofstream(dir / "config.txt") << cfg.to_text();
  return dir;
}

std::ofstream open_csv(const fs::path& path) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot write " + path.string());
  os << std::setprecision(std::numeric_limits<double>::max_digits10);
  return os;
}

void warn(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "WARNING: " << w << "\n";
}

int cmd_forward(const RunConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  cfg.medium.validate();
  const fs::path dir = prepare_out(cfg);
  const DiskMesh mesh = build_disk_mesh(cfg.medium.radius, cfg.mesh_level, cfg.base_points);
  const MaterialField q = make_phantom(cfg.phantom).sample(mesh);
  SolverContext ctx(mesh, cfg.medium, cfg.omega);
  ctx.set_material(q);
  const FieldSolution s = solve_forward(ctx, {cfg.incidence, cfg.angle});

  auto field = open_csv(dir / "field.csv");
  field << "x,y,re_u1,im_u1,re_u2,im_u2\n";
  for (int i = 0; i < mesh.num_nodes(); ++i) {
    field << mesh.nodes[i].x() << ',' << mesh.nodes[i].y() << ',' << s.u(2 * i).real() << ','
          << s.u(2 * i).imag() << ',' << s.u(2 * i + 1).real() << ',' << s.u(2 * i + 1).imag() << '\n';
  }
  const Eigen::VectorXcd inc =
      boundary_trace(mesh, incident_field(cfg.incidence, cfg.angle, ctx.dtn().waves(), mesh.nodes));
  auto trace = open_csv(dir / "trace.csv");
  trace << "m,theta,re_u1,im_u1,re_u2,im_u2\n";
  for (int m = 0; m < mesh.boundary_points(); ++m) {
    trace << m << ',' << ctx.dtn().angle(m) << ',' << s.trace(2 * m).real() << ','
          << s.trace(2 * m).imag() << ',' << s.trace(2 * m + 1).real() << ','
          << s.trace(2 * m + 1).imag() << '\n';
  }
  auto material = open_csv(dir / "material.csv");
  write_field_csv(material, mesh, q);

  const double diff = boundary_norm(mesh, Eigen::VectorXcd(s.trace - inc)) / boundary_norm(mesh, inc);
  std::cout << "omega " << cfg.omega << ", incidence " << wave_kind_name(cfg.incidence) << " at angle "
            << cfg.angle << ", " << mesh.num_nodes() << " nodes, P = " << mesh.boundary_points()
            << ", N_t = " << ctx.dtn().truncation() << "\n"
            << "solve residual " << s.residual << "\n"
            << "relative difference of the trace from the incident wave " << diff << "\n"
            << "time " << seconds_since(start) << " s\n";
  return 0;
}

int cmd_synthesize(const RunConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  const fs::path dir = prepare_out(cfg);
  const NearFieldDataset ds = synthesize(make_phantom(cfg.phantom), cfg.medium, cfg.schedule(), cfg.synthesis());
  warn(ds.warnings);
  const fs::path path = cfg.dataset.empty() ? dir / "dataset.bin" : fs::path(cfg.dataset);
  write_dataset(path, ds);
  std::cout << "wrote " << path.string() << ": " << ds.num_frequencies() << " frequencies x "
            << ds.num_directions() << " directions = " << ds.record_count() << " records, P = "
            << ds.boundary_points << (ds.phaseless ? ", phaseless" : "") << ", noise " << ds.noise.level
            << "\ntime " << seconds_since(start) << " s\n";
  return 0;
}

int cmd_invert(const RunConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  const fs::path dir = prepare_out(cfg);
  const InversionConfig inv = cfg.inversion();

  NearFieldDataset ds;
  if (cfg.dataset.empty()) {
    ds = synthesize(make_phantom(cfg.phantom), cfg.medium, cfg.schedule(), cfg.synthesis());
    write_dataset(dir / "dataset.bin", ds);
  } else {
    ds = read_dataset(cfg.dataset);
  }
  if (ds.provenance.data_level <= cfg.mesh_level && ds.provenance.base_points == cfg.base_points) {
    ds.warnings.push_back("inverse crime: dataset mesh level " + std::to_string(ds.provenance.data_level) +
                          " is not finer than the inversion mesh level " + std::to_string(cfg.mesh_level));
  }
  warn(ds.warnings);

  const DiskMesh mesh = build_disk_mesh(ds.medium.radius, cfg.mesh_level, cfg.base_points);
  std::optional<MaterialField> truth;
  if (!ds.provenance.phantom.empty()) truth = make_phantom(ds.provenance.phantom).sample(mesh);

  auto trace = open_csv(dir / "trace.csv");
  IterationTrace::write_csv_header(trace);
  const TraceSink sink = [&](const TraceRow& row) {
    IterationTrace::write_csv_row(trace, row);
    trace.flush();
  };
  const SweepResult r = run_sweep(mesh, inv, ds, MaterialField::zeros(mesh.num_nodes()),
                                  truth ? &*truth : nullptr, sink);

  auto recon = open_csv(dir / "reconstruction.csv");
  write_field_csv(recon, mesh, r.q);
  if (truth) {
    auto t = open_csv(dir / "truth.csv");
    write_field_csv(t, mesh, *truth);
  }
  if (inv.stopping.kind == StoppingRule::Kind::Discrepancy) {
    auto stops = open_csv(dir / "stops.csv");
    stops << "i,j,k_stop,stopped,threshold\n";
    for (const auto& s : r.trace.stops) {
      stops << s.i << ',' << s.j << ',' << s.k_stop << ',' << s.stopped << ',' << s.threshold << '\n';
    }
  }

  int updates = 0;
  for (const auto& row : r.trace.rows) updates += row.updated;
  const auto e = r.trace.final_error();
  auto summary = open_csv(dir / "summary.txt");
  summary << "variant = " << cfg.variant << "\nupdates = " << updates << "\n";
  if (truth) {
    summary << "e_qlambda = " << e[0] << "\ne_qmu = " << e[1] << "\ne_qrho = " << e[2] << "\n";
  }
  std::cout << "inversion (" << cfg.variant << ") on " << mesh.num_nodes() << " nodes: " << updates
            << " updates in " << seconds_since(start) << " s\n";
  if (truth) {
    std::cout << "final relative errors: e_qlambda " << e[0] << ", e_qmu " << e[1] << ", e_qrho "
              << e[2] << "\n";
  }
  return 0;
}

int cmd_validate(const RunConfig& cfg, std::optional<int> corrupt, bool write_out) {
  std::ostringstream report;
  const bool ok = cli::run_validation(report, corrupt);
  std::cout << report.str();
  if (write_out) std::ofstream(prepare_out(cfg) / "validate.csv") << report.str();
  return ok ? 0 : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Elastic scattering on a disk: forward solves and multi-frequency Landweber inversion"};
  app.require_subcommand(1);
  app.fallthrough();

  Overrides o;
  app.add_option("--config", o.config, "key = value configuration file");
  app.add_option("--preset", o.preset, "named experiment preset");
  app.add_option("--out", o.out, "output directory");
  app.add_option("--seed", o.seed, "noise seed");
  app.add_option("--workers", o.workers, "synthesis threads (default: core count)");
  app.add_option("--mesh-level", o.mesh_level, "inversion / forward mesh level");
  app.add_option("--data-mesh-level", o.data_mesh_level, "mesh level used to synthesize data");
  app.add_option("--noise", o.noise, "relative noise level delta");
  app.add_option("--tau", o.tau, "discrepancy factor");
  app.add_option("--stop", o.stop, "stopping rule")->check(CLI::IsMember({"fixed", "discrepancy"}));
  app.add_option("--set", o.sets, "override any config key (key=value, repeatable)");

  auto* forward = app.add_subcommand("forward", "solve one forward problem, write field and trace");
  auto* synth = app.add_subcommand("synthesize", "generate a near-field dataset");
  auto* invert = app.add_subcommand("invert", "reconstruct the parameters from a dataset");
  std::string variant;
  std::string dataset;
  invert->add_option("--variant", variant, "full, phaseless, density or density-phaseless");
  invert->add_option("--dataset", dataset, "dataset file (synthesized on the fly when absent)");
  auto* validate = app.add_subcommand("validate", "run the invariant suites");
  std::optional<int> corrupt;
  validate->add_option("--corrupt-mode", corrupt, "test hook: perturb W_n at omega = 1");
  auto* info = app.add_subcommand("dataset-info", "print a dataset header");
  std::string info_path;
  info->add_option("path", info_path, "dataset file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*info) {
      std::cout << read_dataset_header(info_path) << "\n";
      return 0;
    }
    RunConfig cfg = resolve(o);
    if (!variant.empty()) cfg.set("variant", variant);
    if (!dataset.empty()) cfg.set("dataset", dataset);
    if (*forward) return cmd_forward(cfg);
    if (*synth) return cmd_synthesize(cfg);
    if (*invert) return cmd_invert(cfg);
    if (*validate) return cmd_validate(cfg, corrupt, o.out.has_value());
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DimensionMismatch& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DomainError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
  return 0;
}
