#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "elscat/inversion.hpp"
#include "elscat/scenarios.hpp"

namespace elscat::cli {

// Everything a run needs.  Serialized as "key = value" lines.
struct RunConfig {
  std::string preset;
  std::string phantom = "blobs";
  BackgroundMedium medium;
  int base_points = kDefaultBasePoints;
  int mesh_level = kDefaultInversionLevel;
  int data_mesh_level = -1;  // -1: mesh_level + 1
  std::vector<double> frequencies = unit_frequencies(1, 10);
  std::vector<double> angles = uniform_angles(16);
  WaveKind incidence = WaveKind::Pressure;
  int iterations = 10;
  std::string order = "frequency-outer";
  std::string step = "stiffness";  // stiffness | over-omega | constant
  double step_c = 0.01;
  std::string variant = "full";  // full | phaseless | density | density-phaseless
  std::string stop = "fixed";    // fixed | discrepancy
  double tau = 3.0;
  double eta0 = 0.1;
  double cutoff_inner = 0.8;
  double cutoff_outer = 0.9;
  double noise = 0.0;
  std::uint64_t seed = 0;
  int workers = 1;
  double omega = 1.0;  // forward command
  double angle = 0.0;  // forward command
  std::string dataset;
  std::string out = "out";

  // Sets one key from its text form.  Throws ConfigError on unknown keys or bad values.
  void set(const std::string& key, const std::string& value);
  void apply_preset(const std::string& id);
  std::string to_text() const;

  int effective_data_level() const { return data_mesh_level < 0 ? mesh_level + 1 : data_mesh_level; }
  SweepSchedule schedule() const;
  InversionConfig inversion() const;
  SynthesisOptions synthesis() const;
};

// (key, value) pairs of a config file in file order; '#' starts a comment.
std::vector<std::pair<std::string, std::string>> read_config_file(const std::filesystem::path& path);

}  // namespace elscat::cli
