#include "elscat/dataset.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <json.hpp>

#include "elscat/errors.hpp"

namespace elscat {
namespace {

constexpr char kMagic[8] = {'E', 'L', 'S', 'C', 'A', 'T', 'D', '1'};

static_assert(std::endian::native == std::endian::little,
              "dataset I/O assumes a little-endian host");

using json = nlohmann::json;

json header(const NearFieldDataset& ds) {
  json h;
  h["format"] = "elscat-near-field";
  h["version"] = 1;
  h["medium"] = {{"lambda0", ds.medium.lambda0},
                 {"mu0", ds.medium.mu0},
                 {"rho0", ds.medium.rho0},
                 {"radius", ds.medium.radius}};
  h["schedule"] = {{"frequencies", ds.frequencies},
                   {"angles", ds.angles},
                   {"incidence", wave_kind_name(ds.kind)},
                   {"order", "frequency-major"}};
  h["phaseless"] = ds.phaseless;
  h["boundary_points"] = ds.boundary_points;
  h["records"] = ds.record_count();
  h["noise"] = {{"level", ds.noise.level}, {"seed", ds.noise.seed}};
  h["provenance"] = {{"data_level", ds.provenance.data_level},
                     {"inversion_level", ds.provenance.inversion_level},
                     {"base_points", ds.provenance.base_points},
                     {"phantom", ds.provenance.phantom},
                     {"preset", ds.provenance.preset}};
  h["warnings"] = ds.warnings;
  return h;
}

template <class T>
T get(const json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("dataset header lacks '") + key + "'");
  return j.at(key).get<T>();
}

}  // namespace

const char* wave_kind_name(WaveKind kind) { return kind == WaveKind::Pressure ? "P" : "S"; }

WaveKind parse_wave_kind(const std::string& name) {
  if (name == "P" || name == "p" || name == "pressure") return WaveKind::Pressure;
  if (name == "S" || name == "s" || name == "shear") return WaveKind::Shear;
  throw ConfigError("unknown incidence kind '" + name + "' (expected P or S)");
}

void NearFieldDataset::validate() const {
  if (frequencies.empty() || angles.empty()) throw ConfigError("dataset schedule is empty");
  const std::size_t n = static_cast<std::size_t>(record_count());
  if (phaseless) {
    if (intensities.size() != n) throw ConfigError("dataset: phaseless record count mismatch");
    for (const auto& r : intensities) {
      if (r.size() != boundary_points) throw ConfigError("dataset: record length mismatch");
    }
  } else {
    if (traces.size() != n) throw ConfigError("dataset: record count mismatch");
    for (const auto& r : traces) {
      if (r.size() != 2 * boundary_points) throw ConfigError("dataset: record length mismatch");
    }
  }
}

std::string dataset_header_json(const NearFieldDataset& ds) { return header(ds).dump(2); }

void write_dataset(const std::filesystem::path& path, const NearFieldDataset& ds) {
  ds.validate();
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot open " + path.string() + " for writing");
  const std::string text = header(ds).dump();
  const std::uint64_t len = text.size();
  os.write(kMagic, sizeof kMagic);
  os.write(reinterpret_cast<const char*>(&len), sizeof len);
  os.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (ds.phaseless) {
    for (const auto& r : ds.intensities) {
      os.write(reinterpret_cast<const char*>(r.data()),
               static_cast<std::streamsize>(r.size() * sizeof(double)));
    }
  } else {
    for (const auto& r : ds.traces) {
      // std::complex<double> is laid out as (re, im): [Re u1, Im u1, Re u2, Im u2] per sample.
      os.write(reinterpret_cast<const char*>(r.data()),
               static_cast<std::streamsize>(r.size() * sizeof(cplx)));
    }
  }
  if (!os) throw ConfigError("write failed for " + path.string());
}

namespace {

std::string read_header_text(std::ifstream& is, const std::filesystem::path& path) {
  char magic[8];
  std::uint64_t len = 0;
  is.read(magic, sizeof magic);
  if (!is || std::memcmp(magic, kMagic, sizeof magic) != 0) {
    throw ConfigError(path.string() + " is not a near-field dataset");
  }
  is.read(reinterpret_cast<char*>(&len), sizeof len);
  if (!is || len > (1u << 30)) throw ConfigError(path.string() + ": corrupt header length");
  std::string text(len, '\0');
  is.read(text.data(), static_cast<std::streamsize>(len));
  if (!is) throw ConfigError(path.string() + ": truncated header");
  return text;
}

}  // namespace

std::string read_dataset_header(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot open " + path.string());
  return json::parse(read_header_text(is, path)).dump(2);
}

NearFieldDataset read_dataset(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot open " + path.string());
  json h;
  try {
    h = json::parse(read_header_text(is, path));
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": bad header: " + e.what());
  }

  NearFieldDataset ds;
  try {
    const json& m = h.at("medium");
    ds.medium.lambda0 = get<double>(m, "lambda0");
    ds.medium.mu0 = get<double>(m, "mu0");
    ds.medium.rho0 = get<double>(m, "rho0");
    ds.medium.radius = get<double>(m, "radius");
    const json& s = h.at("schedule");
    ds.frequencies = get<std::vector<double>>(s, "frequencies");
    ds.angles = get<std::vector<double>>(s, "angles");
    ds.kind = parse_wave_kind(get<std::string>(s, "incidence"));
    ds.phaseless = get<bool>(h, "phaseless");
    ds.boundary_points = get<int>(h, "boundary_points");
    ds.noise.level = get<double>(h.at("noise"), "level");
    ds.noise.seed = get<std::uint64_t>(h.at("noise"), "seed");
    const json& p = h.at("provenance");
    ds.provenance.data_level = get<int>(p, "data_level");
    ds.provenance.inversion_level = get<int>(p, "inversion_level");
    ds.provenance.base_points = get<int>(p, "base_points");
    ds.provenance.phantom = get<std::string>(p, "phantom");
    ds.provenance.preset = get<std::string>(p, "preset");
    ds.warnings = get<std::vector<std::string>>(h, "warnings");
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": bad header: " + e.what());
  }
  ds.medium.validate();
  if (ds.boundary_points <= 0) throw ConfigError(path.string() + ": bad boundary point count");

  const int n = ds.record_count();
  if (ds.phaseless) {
    ds.intensities.assign(n, Eigen::VectorXd(ds.boundary_points));
    for (auto& r : ds.intensities) {
      is.read(reinterpret_cast<char*>(r.data()),
              static_cast<std::streamsize>(r.size() * sizeof(double)));
    }
  } else {
    ds.traces.assign(n, Eigen::VectorXcd(2 * ds.boundary_points));
    for (auto& r : ds.traces) {
      is.read(reinterpret_cast<char*>(r.data()),
              static_cast<std::streamsize>(r.size() * sizeof(cplx)));
    }
  }
  if (!is) throw ConfigError(path.string() + ": truncated records");
  ds.validate();
  return ds;
}

namespace {

int stride_for(Eigen::Index source, int target) {
  if (target <= 0 || source % target != 0) {
    throw DimensionMismatch("cannot restrict a ring of " + std::to_string(source) +
                            " samples to " + std::to_string(target));
  }
  return static_cast<int>(source / target);
}

}  // namespace

Eigen::VectorXcd restrict_trace(const Eigen::VectorXcd& trace, int target_points) {
  const int stride = stride_for(trace.size() / 2, target_points);
  Eigen::VectorXcd out(2 * target_points);
  for (int m = 0; m < target_points; ++m) {
    out(2 * m) = trace(2 * m * stride);
    out(2 * m + 1) = trace(2 * m * stride + 1);
  }
  return out;
}

Eigen::VectorXd restrict_intensity(const Eigen::VectorXd& values, int target_points) {
  const int stride = stride_for(values.size(), target_points);
  Eigen::VectorXd out(target_points);
  for (int m = 0; m < target_points; ++m) out(m) = values(m * stride);
  return out;
}

}  // namespace elscat
