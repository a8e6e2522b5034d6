// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. Thresholds are fixed here and never tuned at runtime.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "cli.hpp"
#include "golden.hpp"
#include "gls/gls.hpp"
#include "diagnosis_table.hpp"

using namespace gls;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double time_limit_s;
  std::function<Outcome()> check;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// ---------------------------------------------------------------------------
// 1. Score -> rate -> target table, every cell at its printed precision.

struct PrintedRow {
  int u;
  const char* r;
  const char* neg;
  const char* pos;
};

constexpr PrintedRow kPrintedTable[] = {
    {3, "-0.250", "-0.125", "1.125"},  {2, "0.167", "0.083", "0.917"},  {1, "0.583", "0.2915", "0.7085"},
    {0, "1.000", "0.5", "0.5"},        {-1, "0.583", "0.7085", "0.2915"}, {-2, "0.167", "0.917", "0.083"},
    {-3, "-0.250", "1.125", "-0.125"},
};

int decimals(std::string_view s) {
  const auto dot = s.find('.');
  return dot == std::string_view::npos ? 0 : static_cast<int>(s.size() - dot - 1);
}

Outcome criterion_table1() {
  std::ostringstream cli_out, cli_err;
  const int code = cli::run({"table1"}, cli_out, cli_err);
  std::size_t emitted = 0;
  {
    std::istringstream in(cli_out.str());
    std::string line;
    while (std::getline(in, line))
      if (!line.empty() && line.front() != '#') ++emitted;
  }

  const auto rows = table1();
  std::vector<std::string> mismatches;
  std::size_t cells = 0;
  for (const PrintedRow& want : kPrintedTable) {
    const auto it = std::find_if(rows.begin(), rows.end(), [&](const Table1Row& r) { return r.u.value() == want.u; });
    if (it == rows.end()) {
      mismatches.push_back("missing row u=" + std::to_string(want.u));
      continue;
    }
    // Stored label y = 1; the target columns follow the pipeline's flip.
    const auto got_r = to_fixed(it->rate, 3);
    const auto got_neg = to_fixed(it->target.neg, decimals(want.neg));
    const auto got_pos = to_fixed(it->target.pos, decimals(want.pos));
    cells += 3;
    if (got_r != want.r) mismatches.push_back("u=" + std::to_string(want.u) + " r " + got_r + "!=" + want.r);
    if (got_neg != want.neg) mismatches.push_back("u=" + std::to_string(want.u) + " neg " + got_neg + "!=" + want.neg);
    if (got_pos != want.pos) mismatches.push_back("u=" + std::to_string(want.u) + " pos " + got_pos + "!=" + want.pos);
  }
  std::string detail = std::to_string(cells - mismatches.size()) + "/" + std::to_string(cells) +
                       " cells match, cli rows=" + std::to_string(emitted);
  for (const auto& m : mismatches) detail += "; " + m;
  return {code == 0 && emitted == 7 && mismatches.empty(), detail};
}

// ---------------------------------------------------------------------------
// 2. Loss as mixture of CE terms equals CE against the smoothed target.

Outcome criterion_loss_equivalence() {
  Rng rng(2002);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double p1 = rng.uniform(1e-4, 1.0 - 1e-4);
    const ProbabilityPair p(1.0 - p1, p1);
    const BinaryLabel y(static_cast<int>(rng.below(2)));
    const SmoothingRate r(rng.uniform(-0.25, 1.0));
    const double mixture = gls_loss(p, y, r);
    const auto t = gls_target(y, r);
    const double direct = -(t.neg * std::log(p.p0()) + t.pos * std::log(p.p1()));
    worst = std::max(worst, std::abs(mixture - direct) / std::abs(direct));
  }
  return {worst < 1e-12, "max relative error " + fmt("%.3e", worst) + " (limit 1e-12)"};
}

// ---------------------------------------------------------------------------
// 3. Analytic gradient against central differences.

Outcome criterion_gradient() {
  Rng rng(3003);
  constexpr double h = 1e-5;
  double worst = 0.0, worst_sum = 0.0;
  int negative = 0;
  for (int i = 0; i < 500; ++i) {
    const std::array<double, 2> z{rng.uniform(-4.0, 4.0), rng.uniform(-4.0, 4.0)};
    const BinaryLabel y(static_cast<int>(rng.below(2)));
    const SmoothingRate r(i % 4 == 0 ? -0.25 : rng.uniform(-0.25, 1.0));
    negative += r.value() < 0.0 ? 1 : 0;
    auto loss_at = [&](std::array<double, 2> zz) {
      // log-softmax written out independently of softmax2
      const double m = std::max(zz[0], zz[1]);
      const double lse = m + std::log(std::exp(zz[0] - m) + std::exp(zz[1] - m));
      const auto t = gls_target(y, r);
      return -(t.neg * (zz[0] - lse) + t.pos * (zz[1] - lse));
    };
    std::array<double, 2> fd{};
    for (int k = 0; k < 2; ++k) {
      auto up = z, down = z;
      up[k] += h;
      down[k] -= h;
      fd[k] = (loss_at(up) - loss_at(down)) / (2 * h);
    }
    const auto g = gls_loss_gradient(z, y, r);
    const double num = std::hypot(g[0] - fd[0], g[1] - fd[1]);
    const double den = std::max({std::hypot(g[0], g[1]), std::hypot(fd[0], fd[1]), 1e-300});
    worst = std::max(worst, num / den);
    worst_sum = std::max(worst_sum, std::abs(g[0] + g[1]));
  }
  return {worst < 1e-6 && worst_sum < 1e-10 && negative > 0,
          "max relative error " + fmt("%.3e", worst) + ", max |sum| " + fmt("%.1e", worst_sum) + ", " +
              std::to_string(negative) + " cases with r<0"};
}

// ---------------------------------------------------------------------------
// 4. u = -s gives the component-swapped target of u = +s, exactly.

Outcome criterion_flip_symmetry() {
  int ok = 0, total = 0;
  for (int y : {0, 1})
    for (int s = 1; s <= 3; ++s) {
      ++total;
      auto pipeline = [&](int u_raw) {
        const UncertaintyScore u(u_raw);
        return gls_target_exact(effective_label(BinaryLabel(y), u), smoothing_rate_exact(u, {}));
      };
      const auto plus = pipeline(s);
      const auto minus = pipeline(-s);
      if (minus.neg == plus.pos && minus.pos == plus.neg) ++ok;
    }
  return {ok == total, std::to_string(ok) + "/" + std::to_string(total) + " (y, s) pairs swap exactly"};
}

// ---------------------------------------------------------------------------
// 5. Golden parser corpus.

Outcome criterion_golden_corpus() {
  const auto cases = golden::load_golden(std::string(GLS_SOURCE_DIR) + "/tests/data/parser_golden.tsv");
  const auto vocab = vocabulary(default_taxonomy());
  std::size_t ok = 0;
  std::string first_failure;
  for (const auto& c : cases) {
    const auto got = golden::as_expected(extract_findings(c.text, default_lexicon(), vocab));
    if (got == c.expected) {
      ++ok;
    } else if (first_failure.empty()) {
      first_failure = "; first failure at line " + std::to_string(c.line) + ": got " + golden::describe(got);
    }
  }
  return {cases.size() >= 30 && ok == cases.size(),
          std::to_string(ok) + "/" + std::to_string(cases.size()) + " snippets" + first_failure};
}

// ---------------------------------------------------------------------------
// 6. Diagnosis table fidelity.

Outcome criterion_taxonomy() {
  const TaxonomyMap& tax = default_taxonomy();
  std::size_t mapped = 0, oov = 0;
  for (const auto& row : diagnosis_table::kTable) mapped += map_diagnosis(row.phrase, tax) == row.category ? 1 : 0;
  for (const char* p : diagnosis_table::kOutOfVocabulary) oov += map_diagnosis(p, tax).has_value() ? 0 : 1;
  const std::size_t rows = std::size(diagnosis_table::kTable);
  return {mapped == rows && oov == std::size(diagnosis_table::kOutOfVocabulary) && tax.size() == rows,
          std::to_string(mapped) + "/" + std::to_string(rows) + " table phrases mapped, " + std::to_string(oov) +
              "/5 out-of-vocabulary unmapped"};
}

// ---------------------------------------------------------------------------
// 7. Dataset build determinism.

Outcome criterion_dataset_determinism() {
  const auto reports = synthetic_reports(1000, vocabulary(default_taxonomy()), 7007);
  std::vector<std::string> lines;
  for (const auto& r : reports) {
    std::ostringstream os;
    write_report(os, r);
    lines.push_back(os.str());
  }
  auto build = [&](const std::vector<std::string>& input, unsigned threads) {
    std::string joined;
    for (const auto& l : input) joined += l;
    std::istringstream in(joined);
    std::ostringstream out;
    build_dataset_stream(in, out, default_lexicon(), default_taxonomy(), {SmoothingParams{}, threads});
    return out.str();
  };
  const std::string first = build(lines, 1);
  const std::string second = build(lines, 1);
  auto permuted = lines;
  Rng rng(77);
  rng.shuffle(std::span<std::string>(permuted));
  const std::string third = build(permuted, 4);
  std::istringstream check(first);
  const ValidationReport v = validate_dataset(check);
  const bool same = first == second && first == third;
  return {same && v.ok() && !first.empty(),
          std::string(same ? "byte-identical" : "outputs differ") + ", " + std::to_string(v.stats.record_count) +
              " records, validate " + (v.ok() ? "ok" : "found " + std::to_string(v.errors.size()) + " errors")};
}

// ---------------------------------------------------------------------------
// 8. Rank AUC against pair counting.

double pairwise_auc(const std::vector<double>& s, const std::vector<BinaryLabel>& y) {
  double wins = 0.0, pairs = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < s.size(); ++j)
      if (y[i].value() == 1 && y[j].value() == 0) {
        pairs += 1.0;
        wins += s[i] > s[j] ? 1.0 : s[i] == s[j] ? 0.5 : 0.0;
      }
  return wins / pairs;
}

Outcome criterion_auc() {
  Rng rng(8008);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng.below(99);
    std::vector<double> s(n);
    std::vector<BinaryLabel> y;
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = trial % 2 == 0 ? static_cast<double>(rng.below(8)) : rng.normal();
      y.emplace_back(static_cast<int>(rng.below(2)));
    }
    y[0] = BinaryLabel(0);
    y[1] = BinaryLabel(1);
    worst = std::max(worst, std::abs(auc(s, y) - pairwise_auc(s, y)));
  }
  auto lab = [](std::initializer_list<int> v) {
    std::vector<BinaryLabel> out;
    for (int x : v) out.emplace_back(x);
    return out;
  };
  const double perfect = auc(std::vector<double>{0.8, 0.4, 0.6, 0.3}, lab({1, 0, 1, 0}));
  const double reversed = auc(std::vector<double>{0.2, 0.9, 0.1, 0.7}, lab({1, 0, 1, 0}));
  const double tied = auc(std::vector<double>{0.5, 0.5, 0.5, 0.5}, lab({1, 0, 1, 0}));
  const bool closed = perfect == 1.0 && reversed == 0.0 && tied == 0.5;
  return {worst < 1e-12 && closed, "max deviation " + fmt("%.1e", worst) + ", closed forms " +
                                       fmt("%.1f", perfect) + "/" + fmt("%.1f", reversed) + "/" + fmt("%.1f", tied)};
}

// ---------------------------------------------------------------------------
// 9. GLS versus plain cross-entropy on noisy synthetic labels.

constexpr std::size_t kSeeds = 20;

TrainConfig comparison_config(std::uint64_t seed, bool plain_ce) {
  TrainConfig cfg;
  cfg.architecture = Architecture::mlp_1hidden;
  cfg.hidden_width = 64;
  cfg.epochs = 30;
  cfg.warmup_epochs = 5;
  cfg.lr_warmup_epochs = 5;
  cfg.learning_rate = 1e-2;
  cfg.weight_decay = 1e-2;
  cfg.batch_size = 32;
  cfg.seed = seed;
  cfg.plain_ce = plain_ce;
  return cfg;
}

// P(X >= wins) for X ~ Binomial(n, 1/2).
double sign_test_p(std::size_t wins, std::size_t n) {
  double p = 0.0;
  for (std::size_t k = wins; k <= n; ++k) {
    double c = 1.0;
    for (std::size_t i = 0; i < k; ++i) c = c * static_cast<double>(n - i) / static_cast<double>(i + 1);
    p += c;
  }
  return p / std::pow(2.0, static_cast<double>(n));
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

Outcome criterion_gls_beats_ce() {
  const NoiseProfile profile = {{3, 0.0}, {2, 0.1}, {1, 0.25}, {0, 0.5}};
  std::vector<double> gls_auc(kSeeds), ce_auc(kSeeds);
  auto run_seed = [&](std::size_t s) {
    const auto ds = synthetic_noisy_generator(4000, 10, profile, 9000 + s);
    const std::span<const TrainExample> all(ds.examples);
    const auto train_part = all.first(3000);
    EvalSet heldout;
    for (std::size_t i = 3000; i < all.size(); ++i) {
      heldout.features.push_back(all[i].features);
      heldout.labels.push_back(ds.true_labels[i]);
    }
    gls_auc[s] = evaluate_auc(train(train_part, comparison_config(s, false)).model, heldout);
    ce_auc[s] = evaluate_auc(train(train_part, comparison_config(s, true)).model, heldout);
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), kSeeds));
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t s = w; s < kSeeds; s += workers) run_seed(s);
      });
  }
  std::size_t wins = 0;
  double mean_diff = 0.0;
  for (std::size_t s = 0; s < kSeeds; ++s) {
    wins += gls_auc[s] > ce_auc[s] ? 1 : 0;
    mean_diff += (gls_auc[s] - ce_auc[s]) / static_cast<double>(kSeeds);
  }
  const double med_gls = median(gls_auc), med_ce = median(ce_auc);
  const double p = sign_test_p(wins, kSeeds);
  return {med_gls > med_ce && mean_diff > 0.0 && p < 0.05,
          "median AUC gls " + fmt("%.4f", med_gls) + " vs ce " + fmt("%.4f", med_ce) + ", mean diff " +
              fmt("%+.4f", mean_diff) + ", wins " + std::to_string(wins) + "/" + std::to_string(kSeeds) +
              ", sign test p=" + fmt("%.4f", p)};
}

// ---------------------------------------------------------------------------
// 10. Sample warm-up schedule and reproducibility.

Outcome criterion_warmup() {
  const auto ds = synthetic_noisy_generator(4000, 10, default_noise_profile(), 1010);
  std::size_t extreme = 0;
  for (const auto& ex : ds.examples) extreme += ex.u.extreme() ? 1 : 0;
  TrainConfig cfg;
  cfg.epochs = 10;
  cfg.warmup_epochs = 5;
  const auto a = train(ds.examples, cfg);
  const auto b = train(ds.examples, cfg);
  std::size_t schedule_ok = 0;
  for (const auto& m : a.history) schedule_ok += m.samples_used == (m.epoch <= 5 ? extreme : ds.examples.size()) ? 1 : 0;
  bool same = a.model == b.model && a.history.size() == b.history.size();
  for (std::size_t i = 0; same && i < a.history.size(); ++i)
    same = a.history[i].mean_loss == b.history[i].mean_loss && a.history[i].auc == b.history[i].auc;
  return {schedule_ok == a.history.size() && same && extreme > 0 && extreme < ds.examples.size(),
          std::to_string(schedule_ok) + "/" + std::to_string(a.history.size()) + " epochs on schedule (" +
              std::to_string(extreme) + " extreme of " + std::to_string(ds.examples.size()) + "), rerun " +
              (same ? "bitwise identical" : "differs")};
}

// ---------------------------------------------------------------------------
// 11. 3 x 3 sweep.

Outcome criterion_sweep() {
  const auto ds = synthetic_noisy_generator(4000, 10, default_noise_profile(), 1111);
  const std::vector<Rational> ks = {Rational::parse("0.375"), Rational(5, 12), Rational::parse("0.458")};
  const std::vector<int> warmups = {3, 5, 7};
  const auto cells = sweep(ds.examples, TrainConfig{}, ks, warmups, {0.25, std::thread::hardware_concurrency()});
  std::size_t finite = 0;
  for (const auto& c : cells) finite += std::isfinite(c.auc) ? 1 : 0;
  std::string detail = std::to_string(finite) + "/" + std::to_string(cells.size()) + " finite cells, AUC range ";
  const auto [lo, hi] = std::minmax_element(cells.begin(), cells.end(),
                                            [](const SweepCell& a, const SweepCell& b) { return a.auc < b.auc; });
  detail += fmt("%.4f", lo->auc) + ".." + fmt("%.4f", hi->auc);
  return {cells.size() == 9 && finite == 9, detail};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "table1 reproduction", 1.0, criterion_table1},
      {2, "loss form equivalence", 1.0, criterion_loss_equivalence},
      {3, "gradient check", 5.0, criterion_gradient},
      {4, "flip symmetry", 1.0, criterion_flip_symmetry},
      {5, "parser golden corpus", 1.0, criterion_golden_corpus},
      {6, "taxonomy fidelity", 1.0, criterion_taxonomy},
      {7, "dataset determinism", 10.0, criterion_dataset_determinism},
      {8, "AUC oracle equivalence", 5.0, criterion_auc},
      {9, "GLS beats CE on noisy labels", 300.0, criterion_gls_beats_ce},
      {10, "warm-up schedule", 60.0, criterion_warmup},
      {11, "sweep shape", 900.0, criterion_sweep},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.time_limit_s;
    const bool pass = o.pass && in_time;
    failures += pass ? 0 : 1;
    std::printf("%s  %2d  %-30s %8.3f s (limit %g s)%s  %s\n", pass ? "PASS" : "FAIL", c.id, c.name, secs,
                c.time_limit_s, in_time ? "" : " TOO SLOW", o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
