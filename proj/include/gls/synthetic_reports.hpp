#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "gls/dataset.hpp"
#include "gls/rng.hpp"
#include "gls/taxonomy.hpp"

namespace gls {

/// Deterministic free-text reports assembled from sentence templates over
/// the given vocabulary, for exercising the dataset builder at scale.
inline std::vector<ReportRecord> synthetic_reports(std::size_t n, const std::vector<std::string>& vocab,
                                                   std::uint64_t seed) {
  static const std::vector<std::string> kTemplates = {
      "{}.",
      "No {}.",
      "Likely {}.",
      "Findings may represent {}.",
      "{} cannot be excluded.",
      "No definite {}.",
      "{} is unlikely.",
      "Possible {} in the left lower lobe.",
      "Probable {}.",
      "Negative for {}.",
      "Suspicious for {}.",
      "Interval increase in {}.",
      "Lungs are clear without {}.",
      "Equivocal {} at the right base.",
      "Previously seen {} has resolved.",
  };
  Rng rng(seed);
  std::vector<ReportRecord> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t sentences = 1 + rng.below(4);
    std::string report;
    for (std::size_t s = 0; s < sentences; ++s) {
      std::string t = kTemplates[rng.below(kTemplates.size())];
      const std::string& phrase = vocab[rng.below(vocab.size())];
      t.replace(t.find("{}"), 2, phrase);
      if (!report.empty()) report += rng.below(3) == 0 ? "\n" : " ";
      report += t;
    }
    char id[32];
    std::snprintf(id, sizeof id, "s%07zu", i);
    char pid[32];
    std::snprintf(pid, sizeof pid, "p%05zu", i / 3);
    out.push_back({pid, id, std::move(report)});
  }
  return out;
}

}  // namespace gls
