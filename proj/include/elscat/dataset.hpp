#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "elscat/dtn.hpp"
#include "elscat/fem.hpp"

namespace elscat {

struct NoiseDescriptor {
  double level = 0.0;  // relative level delta
  std::uint64_t seed = 0;
};

struct DatasetProvenance {
  int data_level = 0;
  int inversion_level = 0;
  int base_points = 0;
  std::string phantom;
  std::string preset;
};

// Near-field measurements u^{i,j} on the boundary ring, one record per
// (frequency i, direction j) in frequency-major order.
struct NearFieldDataset {
  BackgroundMedium medium;
  std::vector<double> frequencies;
  std::vector<double> angles;
  WaveKind kind = WaveKind::Pressure;
  bool phaseless = false;
  int boundary_points = 0;
  NoiseDescriptor noise;
  DatasetProvenance provenance;
  std::vector<std::string> warnings;

  std::vector<Eigen::VectorXcd> traces;      // 2P interleaved complex samples
  std::vector<Eigen::VectorXd> intensities;  // P samples of |u|^2

  int num_frequencies() const { return static_cast<int>(frequencies.size()); }
  int num_directions() const { return static_cast<int>(angles.size()); }
  int record_count() const { return num_frequencies() * num_directions(); }
  int index(int i, int j) const { return i * num_directions() + j; }

  // Throws ConfigError when records are missing or have inconsistent sizes.
  void validate() const;
};

// Header as JSON text (everything except the records).
std::string dataset_header_json(const NearFieldDataset& ds);

void write_dataset(const std::filesystem::path& path, const NearFieldDataset& ds);
NearFieldDataset read_dataset(const std::filesystem::path& path);
std::string read_dataset_header(const std::filesystem::path& path);

// Keeps every (P_source / P_target)-th sample of a trace sampled on a finer ring.
Eigen::VectorXcd restrict_trace(const Eigen::VectorXcd& trace, int target_points);
Eigen::VectorXd restrict_intensity(const Eigen::VectorXd& values, int target_points);

const char* wave_kind_name(WaveKind kind);
WaveKind parse_wave_kind(const std::string& name);

}  // namespace elscat
