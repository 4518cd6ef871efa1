#include "run_config.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "elscat/errors.hpp"

namespace elscat::cli {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (trim(v.substr(used)).empty()) return d;
  } catch (const std::exception&) {
  }
  throw ConfigError("config key '" + key + "': '" + v + "' is not a number");
}

template <class Int>
Int to_int(const std::string& key, const std::string& v) {
  Int out{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError("config key '" + key + "': '" + v + "' is not an integer");
  }
  return out;
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(key, trim(item)));
  if (out.empty()) throw ConfigError("config key '" + key + "' needs at least one value");
  return out;
}

std::string one_of(const std::string& key, const std::string& v, std::initializer_list<const char*> allowed) {
  std::string list;
  for (const char* a : allowed) {
    if (v == a) return v;
    list += std::string(list.empty() ? "" : ", ") + a;
  }
  throw ConfigError("config key '" + key + "': '" + v + "' is not one of " + list);
}

std::string number(double d) {
  std::ostringstream os;
  os << std::setprecision(17) << d;
  return os.str();
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? ", " : "") + number(v[k]);
  return s;
}

}  // namespace

void RunConfig::set(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  if (key == "preset") {
    if (v.empty()) {
      preset.clear();
    } else {
      apply_preset(v);
    }
  } else if (key == "phantom") {
    make_phantom(v);
    phantom = v;
  } else if (key == "lambda0") {
    medium.lambda0 = to_double(key, v);
  } else if (key == "mu0") {
    medium.mu0 = to_double(key, v);
  } else if (key == "rho0") {
    medium.rho0 = to_double(key, v);
  } else if (key == "radius") {
    medium.radius = to_double(key, v);
  } else if (key == "base_points") {
    base_points = to_int<int>(key, v);
  } else if (key == "mesh_level") {
    mesh_level = to_int<int>(key, v);
  } else if (key == "data_mesh_level") {
    data_mesh_level = to_int<int>(key, v);
  } else if (key == "frequencies") {
    frequencies = to_list(key, v);
  } else if (key == "directions") {
    angles = uniform_angles(to_int<int>(key, v));
  } else if (key == "angles") {
    angles = to_list(key, v);
  } else if (key == "incidence") {
    incidence = parse_wave_kind(v);
  } else if (key == "iterations") {
    iterations = to_int<int>(key, v);
  } else if (key == "order") {
    order = one_of(key, v, {"frequency-outer", "direction-outer"});
  } else if (key == "step") {
    step = one_of(key, v, {"stiffness", "over-omega", "constant"});
  } else if (key == "step_c") {
    step_c = to_double(key, v);
  } else if (key == "variant") {
    variant = one_of(key, v, {"full", "phaseless", "density", "density-phaseless"});
  } else if (key == "stop") {
    stop = one_of(key, v, {"fixed", "discrepancy"});
  } else if (key == "tau") {
    tau = to_double(key, v);
  } else if (key == "eta0") {
    eta0 = to_double(key, v);
  } else if (key == "cutoff_inner") {
    cutoff_inner = to_double(key, v);
  } else if (key == "cutoff_outer") {
    cutoff_outer = to_double(key, v);
  } else if (key == "noise") {
    noise = to_double(key, v);
  } else if (key == "seed") {
    seed = to_int<std::uint64_t>(key, v);
  } else if (key == "workers") {
    workers = to_int<int>(key, v);
  } else if (key == "omega") {
    omega = to_double(key, v);
  } else if (key == "angle") {
    angle = to_double(key, v);
  } else if (key == "dataset") {
    dataset = v;
  } else if (key == "out") {
    out = v;
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

void RunConfig::apply_preset(const std::string& id) {
  const ExperimentPreset p = experiment_preset(id);
  preset = id;
  phantom = p.phantom;
  medium = p.medium;
  noise = p.noise;
  const InversionConfig& inv = p.inversion;
  frequencies = inv.schedule.frequencies;
  angles = inv.schedule.angles;
  incidence = inv.schedule.kind;
  iterations = inv.schedule.inner_iterations;
  switch (inv.step.kind) {
    case StepSize::Kind::Stiffness: step = "stiffness"; break;
    case StepSize::Kind::OverOmega: step = "over-omega"; break;
    case StepSize::Kind::Constant: step = "constant"; break;
  }
  step_c = inv.step.c;
  const bool phaseless = inv.data == DataKind::Phaseless;
  if (inv.unknowns == Unknowns::DensityOnly) {
    variant = phaseless ? "density-phaseless" : "density";
  } else {
    variant = phaseless ? "phaseless" : "full";
  }
}

std::string RunConfig::to_text() const {
  std::ostringstream os;
  os << "# effective configuration\n";
  os << "preset = " << preset << "\n";
  os << "phantom = " << phantom << "\n";
  os << "lambda0 = " << number(medium.lambda0) << "\n";
  os << "mu0 = " << number(medium.mu0) << "\n";
  os << "rho0 = " << number(medium.rho0) << "\n";
  os << "radius = " << number(medium.radius) << "\n";
  os << "base_points = " << base_points << "\n";
  os << "mesh_level = " << mesh_level << "\n";
  os << "data_mesh_level = " << effective_data_level() << "\n";
  os << "frequencies = " << join(frequencies) << "\n";
  os << "angles = " << join(angles) << "\n";
  os << "incidence = " << wave_kind_name(incidence) << "\n";
  os << "iterations = " << iterations << "\n";
  os << "order = " << order << "\n";
  os << "step = " << step << "\n";
  os << "step_c = " << number(step_c) << "\n";
  os << "variant = " << variant << "\n";
  os << "stop = " << stop << "\n";
  os << "tau = " << number(tau) << "\n";
  os << "eta0 = " << number(eta0) << "\n";
  os << "cutoff_inner = " << number(cutoff_inner) << "\n";
  os << "cutoff_outer = " << number(cutoff_outer) << "\n";
  os << "noise = " << number(noise) << "\n";
  os << "seed = " << seed << "\n";
  os << "workers = " << workers << "\n";
  os << "omega = " << number(omega) << "\n";
  os << "angle = " << number(angle) << "\n";
  os << "dataset = " << dataset << "\n";
  os << "out = " << out << "\n";
  return os.str();
}

SweepSchedule RunConfig::schedule() const {
  SweepSchedule s;
  s.frequencies = frequencies;
  s.angles = angles;
  s.kind = incidence;
  s.inner_iterations = iterations;
  s.order = order == "direction-outer" ? LoopOrder::DirectionOuter : LoopOrder::FrequencyOuter;
  return s;
}

InversionConfig RunConfig::inversion() const {
  InversionConfig c;
  c.schedule = schedule();
  if (step == "stiffness") {
    c.step = {StepSize::Kind::Stiffness, step_c};
  } else if (step == "over-omega") {
    c.step = StepSize::over_omega(step_c);
  } else {
    c.step = StepSize::constant(step_c);
  }
  c.stopping.kind = stop == "discrepancy" ? StoppingRule::Kind::Discrepancy : StoppingRule::Kind::Fixed;
  c.stopping.tau = tau;
  c.stopping.eta0 = eta0;
  c.data = variant == "phaseless" || variant == "density-phaseless" ? DataKind::Phaseless : DataKind::Complex;
  c.unknowns = variant == "density" || variant == "density-phaseless" ? Unknowns::DensityOnly : Unknowns::All;
  if (!(cutoff_inner > 0.0 && cutoff_inner < cutoff_outer && cutoff_outer < 1.0)) {
    throw ConfigError("cutoff radii must satisfy 0 < cutoff_inner < cutoff_outer < 1");
  }
  c.cutoff = {cutoff_inner, cutoff_outer};
  return c;
}

SynthesisOptions RunConfig::synthesis() const {
  SynthesisOptions o;
  o.base_points = base_points;
  o.data_level = effective_data_level();
  o.inversion_level = mesh_level;
  o.noise = noise;
  o.seed = seed;
  o.phaseless = variant == "phaseless" || variant == "density-phaseless";
  o.workers = workers;
  o.preset = preset;
  return o;
}

std::vector<std::pair<std::string, std::string>> read_config_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file " + path.string());
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": expected key = value");
    }
    out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return out;
}

}  // namespace elscat::cli
