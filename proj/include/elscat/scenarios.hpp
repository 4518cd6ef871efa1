#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "elscat/dataset.hpp"
#include "elscat/inversion.hpp"
#include "elscat/material.hpp"
#include "elscat/mesh.hpp"

namespace elscat {

// Mesh used for inversion unless configured otherwise: 64 boundary points at level 0.
inline constexpr int kDefaultBasePoints = 64;
inline constexpr int kDefaultInversionLevel = 1;

// The density perturbation
//   0.3 (1 - 3x)^2 exp(-9x^2 - (3y+1)^2) - (0.6x - 27x^3 - 3^5 y^5) exp(-9x^2 - 9y^2)
//   - 0.03 exp(-(3x+1)^2 - 9y^2).
double peaks_density(const Eigen::Vector2d& p);

// Compactly supported bump amp (1 - |x - c|^2 / a^2)^3 for |x - c| < a.
struct Bump {
  Eigen::Vector2d center;
  double radius = 0.0;
  double amplitude = 0.0;

  double operator()(const Eigen::Vector2d& p) const;
};

struct Phantom {
  std::string name;
  std::array<std::function<double(const Eigen::Vector2d&)>, 3> component;  // lambda, mu, rho
  double support_radius = 0.0;  // vanishes for |x| >= support_radius * R (after the cutoff)
  bool density_only = false;

  // Nodal samples times the support cutoff.
  MaterialField sample(const DiskMesh& mesh, const SupportCutoff& cutoff = {}) const;
};

// "blobs": one wide bump per parameter, centres about 0.35R apart, radius 0.45R;
// "compact": narrower, well separated bumps (radius 0.3-0.35R);
// "overlap": bumps sharing one region; "peaks": density-only peaks_density;
// "zero": no scatterer.  Bump supports stay inside 0.7R.
Phantom make_phantom(const std::string& name);
std::vector<std::string> phantom_names();

struct SynthesisOptions {
  int base_points = kDefaultBasePoints;
  int data_level = kDefaultInversionLevel + 1;
  int inversion_level = kDefaultInversionLevel;
  double noise = 0.0;
  std::uint64_t seed = 0;
  bool phaseless = false;
  int workers = 1;
  std::string preset;
};

// Forward solves on the data mesh for every (frequency, direction), followed by
// noise u (1 + delta xi) on each complex sample with xi uniform in the unit disk.
// Noise is drawn in record order after all solves, so the result does not depend
// on the worker count.
NearFieldDataset synthesize(const Phantom& phantom, const BackgroundMedium& medium,
                            const SweepSchedule& schedule, const SynthesisOptions& options);

struct ExperimentPreset {
  std::string id;
  std::string description;
  BackgroundMedium medium;
  InversionConfig inversion;
  std::string phantom;
  double noise = 0.0;
};

ExperimentPreset experiment_preset(const std::string& id);
std::vector<std::string> preset_ids();

// Frequencies lo, lo + 1, ..., hi and angles 2 pi (j - 1) / M.
std::vector<double> unit_frequencies(int lo, int hi);
std::vector<double> uniform_angles(int count);

}  // namespace elscat
