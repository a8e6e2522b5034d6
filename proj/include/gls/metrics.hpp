#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "gls/error.hpp"
#include "gls/smoothing.hpp"

namespace gls {

/// ROC AUC as the Mann-Whitney statistic: P(pos > neg) + P(tie) / 2,
/// computed from mid-ranks in O(n log n). Throws DomainError when either
/// class is missing.
inline double auc(std::span<const double> scores, std::span<const BinaryLabel> labels) {
  if (scores.size() != labels.size()) throw DomainError("auc: scores and labels differ in length");
  std::size_t n_pos = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (std::isnan(scores[i])) throw DomainError("auc: NaN score");
    n_pos += static_cast<std::size_t>(labels[i].value());
  }
  const std::size_t n_neg = scores.size() - n_pos;
  if (n_pos == 0 || n_neg == 0) throw DomainError("auc undefined: labels contain a single class");

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Ranks are 1-based; a tie group spanning ranks [lo, hi] gets (lo + hi) / 2.
  double pos_rank_sum = 0.0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double mid_rank = 0.5 * static_cast<double>(i + 1 + j + 1);
    for (std::size_t t = i; t <= j; ++t)
      if (labels[order[t]].value() == 1) pos_rank_sum += mid_rank;
    i = j + 1;
  }
  const double np = static_cast<double>(n_pos);
  const double u_stat = pos_rank_sum - np * (np + 1.0) / 2.0;
  return u_stat / (np * static_cast<double>(n_neg));
}

/// Mean of per-group AUCs over groups that contain both classes. Groups are
/// arbitrary integer ids (e.g. disease category indices).
inline double mean_group_auc(std::span<const double> scores, std::span<const BinaryLabel> labels,
                             std::span<const int> groups) {
  if (groups.size() != scores.size()) throw DomainError("mean_group_auc: groups and scores differ in length");
  std::map<int, std::pair<std::vector<double>, std::vector<BinaryLabel>>> by_group;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    auto& [s, l] = by_group[groups[i]];
    s.push_back(scores[i]);
    l.push_back(labels[i]);
  }
  double sum = 0.0;
  std::size_t used = 0;
  for (const auto& [_, sl] : by_group) {
    const auto& [s, l] = sl;
    const auto pos = std::count_if(l.begin(), l.end(), [](BinaryLabel b) { return b.value() == 1; });
    if (pos == 0 || static_cast<std::size_t>(pos) == l.size()) continue;
    sum += auc(s, l);
    ++used;
  }
  if (used == 0) throw DomainError("auc undefined: no group contains both classes");
  return sum / static_cast<double>(used);
}

}  // namespace gls
