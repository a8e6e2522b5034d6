#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gls/error.hpp"
#include "gls/rng.hpp"
#include "gls/smoothing.hpp"
#include "gls/trainer.hpp"

namespace gls {

/// |u| -> probability that the observed label disagrees with the truth.
using NoiseProfile = std::map<int, double>;

inline NoiseProfile default_noise_profile() { return {{3, 0.0}, {2, 0.1}, {1, 0.25}, {0, 0.5}}; }

struct SyntheticDataset {
  std::vector<TrainExample> examples;
  std::vector<BinaryLabel> true_labels;  // hidden ground truth, aligned with examples
  std::vector<bool> flipped;
};

/// Two unit-variance Gaussian clusters at +-separation/2 along the diagonal.
/// Each example draws a confidence level uniformly from the profile's keys;
/// the observed label is the truth flipped with that level's probability.
///
/// Observed labels are stored the way the dataset builder stores findings:
/// an observed positive is (y = 1, u = +level); an observed negative is
/// (y = 1, u = -level), or (y = 0, u = 0) at level 0. effective_label()
/// recovers the observed label in every case.
inline SyntheticDataset synthetic_noisy_generator(std::size_t n, std::size_t d, const NoiseProfile& profile,
                                                  std::uint64_t seed, double separation = 2.0) {
  if (n == 0) throw ConfigError("synthetic generator: n must be > 0");
  if (d < 2) throw ConfigError("synthetic generator: d must be >= 2");
  if (profile.empty()) throw ConfigError("synthetic generator: empty noise profile");
  std::vector<int> levels;
  for (const auto& [level, prob] : profile) {
    if (level < 0 || level > 3) throw ConfigError("synthetic generator: level " + std::to_string(level) + " outside [0, 3]");
    if (!(prob >= 0.0 && prob <= 0.5))
      throw ConfigError("synthetic generator: flip probability for |u| = " + std::to_string(level) + " outside [0, 0.5]");
    levels.push_back(level);
  }

  Rng rng(seed);
  const double offset = 0.5 * separation / std::sqrt(static_cast<double>(d));
  SyntheticDataset out;
  out.examples.reserve(n);
  out.true_labels.reserve(n);
  out.flipped.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int truth = rng.uniform() < 0.5 ? 0 : 1;
    const int level = levels[rng.below(levels.size())];
    std::vector<double> x(d);
    const double sign = truth == 1 ? 1.0 : -1.0;
    for (double& v : x) v = rng.normal() + sign * offset;
    const bool flip = rng.uniform() < profile.at(level);
    const int observed = flip ? 1 - truth : truth;

    int y = 1;
    int u = level;
    if (observed == 0) {
      if (level == 0) {
        y = 0;
      } else {
        u = -level;
      }
    }
    out.examples.push_back({std::move(x), BinaryLabel(y), UncertaintyScore(u), std::nullopt});
    out.true_labels.push_back(BinaryLabel(truth));
    out.flipped.push_back(flip);
  }
  return out;
}

}  // namespace gls
