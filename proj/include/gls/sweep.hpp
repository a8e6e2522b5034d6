#pragma once

#include <algorithm>
#include <cstdio>
#include <exception>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <span>
#include <thread>
#include <vector>

#include "gls/error.hpp"
#include "gls/rational.hpp"
#include "gls/rng.hpp"
#include "gls/trainer.hpp"

namespace gls {

struct HoldoutSplit {
  std::vector<TrainExample> train;
  std::vector<TrainExample> heldout;
};

/// Seeded shuffle, then the last `fraction` of examples are held out.
inline HoldoutSplit holdout_split(std::span<const TrainExample> data, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) throw ConfigError("holdout fraction must lie in (0, 1)");
  std::vector<std::size_t> idx(data.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(idx));
  const auto n_held = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(data.size())));
  if (n_held == 0 || n_held >= data.size()) throw ConfigError("holdout split leaves an empty side");
  HoldoutSplit s;
  for (std::size_t i = 0; i < idx.size(); ++i)
    (i < idx.size() - n_held ? s.train : s.heldout).push_back(data[idx[i]]);
  return s;
}

struct SweepCell {
  Rational k;
  int warmup_epochs = 0;
  double auc = 0.0;
};

struct SweepOptions {
  double holdout_fraction = 0.25;
  unsigned threads = 1;
};

/// Cell i (row-major over k, then warm-up) trains with seed base.seed + i.
inline TrainConfig sweep_cell_config(const TrainConfig& base, const Rational& k, int warmup, std::size_t cell) {
  TrainConfig cfg = base;
  cfg.smoothing_params.k = k;
  cfg.warmup_epochs = warmup;
  cfg.seed = base.seed + cell;
  return cfg;
}

/// One model per (k, warm-up) cell; each reports held-out AUC. The split is
/// shared by every cell and derived from base.seed.
inline std::vector<SweepCell> sweep(std::span<const TrainExample> data, const TrainConfig& base,
                                    std::span<const Rational> k_values, std::span<const int> warmup_values,
                                    const SweepOptions& options = {}) {
  if (k_values.empty() || warmup_values.empty()) throw ConfigError("sweep grid is empty");
  const HoldoutSplit split = holdout_split(data, options.holdout_fraction, base.seed);
  const EvalSet heldout = EvalSet::from_examples(split.heldout);

  std::vector<SweepCell> cells;
  std::vector<TrainConfig> configs;
  for (const Rational& k : k_values)
    for (int w : warmup_values) {
      configs.push_back(sweep_cell_config(base, k, w, cells.size()));
      cells.push_back({k, w, 0.0});
    }
  for (const auto& cfg : configs) cfg.validate();

  auto run = [&](std::size_t i) {
    const TrainResult r = train(split.train, configs[i], &heldout);
    cells[i].auc = *r.history.back().heldout_auc;
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(cells.size())));
  if (workers == 1) {
    for (std::size_t i = 0; i < cells.size(); ++i) run(i);
  } else {
    std::vector<std::exception_ptr> failures(workers);
    {
      std::vector<std::jthread> pool;
      for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
          try {
            for (std::size_t i = w; i < cells.size(); i += workers) run(i);
          } catch (...) {
            failures[w] = std::current_exception();
          }
        });
    }
    for (auto& f : failures)
      if (f) std::rethrow_exception(f);
  }
  return cells;
}

inline void write_sweep_table(std::ostream& out, std::span<const SweepCell> cells) {
  out << "k,warmup,auc\n";
  char buf[64];
  for (const auto& c : cells) {
    std::snprintf(buf, sizeof buf, "%.6g,%d,%.6f", c.k.to_double(), c.warmup_epochs, c.auc);
    out << buf << '\n';
  }
}

}  // namespace gls
