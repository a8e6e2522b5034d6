#pragma once

// Desk-scale GLS training.
//
// Two independent warm-ups run side by side:
//   * sample warm-up: for the first `warmup_epochs` epochs only |u| = 3
//     examples enter the loss; afterwards everything does;
//   * learning-rate warm-up: linear ramp over `lr_warmup_epochs`, then
//     cosine decay to zero at the end of training.
// Adam moments are carried across the sample warm-up boundary.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gls/error.hpp"
#include "gls/metrics.hpp"
#include "gls/model.hpp"
#include "gls/rng.hpp"
#include "gls/smoothing.hpp"

namespace gls {

struct TrainExample {
  std::vector<double> features;
  BinaryLabel y{1};
  UncertaintyScore u{3};
  std::optional<int> category;  // optional per-disease group for AUC averaging

  BinaryLabel effective() const noexcept { return effective_label(y, u); }
};

struct TrainConfig {
  int epochs = 30;
  int warmup_epochs = 5;
  double learning_rate = 1e-2;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double weight_decay = 1e-2;
  int batch_size = 32;
  int lr_warmup_epochs = 5;
  std::uint64_t seed = 42;
  SmoothingParams smoothing_params;
  Architecture architecture = Architecture::linear;
  std::size_t hidden_width = 64;
  bool plain_ce = false;  // force r = 0 for every example

  void validate() const {
    if (epochs <= 0) throw ConfigError("epochs must be > 0");
    if (warmup_epochs < 0 || warmup_epochs > epochs) throw ConfigError("warmup_epochs must lie in [0, epochs]");
    if (lr_warmup_epochs < 0) throw ConfigError("lr_warmup_epochs must be >= 0");
    if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be > 0");
    if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) throw ConfigError("betas must lie in [0, 1)");
    if (!(weight_decay >= 0.0)) throw ConfigError("weight_decay must be >= 0");
    if (batch_size <= 0) throw ConfigError("batch_size must be > 0");
    smoothing_params.validate();
  }
};

struct EpochMetrics {
  int epoch = 0;
  double mean_loss = 0.0;
  double auc = 0.0;  // on the training set, against effective labels
  std::size_t samples_used = 0;
  std::optional<double> heldout_auc;
};

/// Held-out examples scored against `labels` (e.g. a generator's hidden
/// truth); `groups`, when non-empty, turns the metric into a per-group mean.
struct EvalSet {
  std::vector<std::vector<double>> features;
  std::vector<BinaryLabel> labels;
  std::vector<int> groups;

  static EvalSet from_examples(std::span<const TrainExample> data) {
    EvalSet e;
    bool grouped = !data.empty() && std::all_of(data.begin(), data.end(), [](const auto& x) { return x.category.has_value(); });
    for (const auto& x : data) {
      e.features.push_back(x.features);
      e.labels.push_back(x.effective());
      if (grouped) e.groups.push_back(*x.category);
    }
    return e;
  }
};

struct TrainResult {
  Model model;
  std::vector<EpochMetrics> history;
};

inline double evaluate_auc(const Model& model, const EvalSet& eval) {
  std::vector<double> scores;
  scores.reserve(eval.features.size());
  for (const auto& x : eval.features) scores.push_back(score(model, x));
  if (eval.groups.empty()) return auc(scores, eval.labels);
  return mean_group_auc(scores, eval.labels, eval.groups);
}

/// Decoupled-weight-decay Adam.
class AdamW {
 public:
  AdamW(const Model& model, double beta1, double beta2, double epsilon, double weight_decay)
      : beta1_(beta1), beta2_(beta2), epsilon_(epsilon), weight_decay_(weight_decay) {
    for (const auto& t : model.tensors()) {
      m_.emplace_back(t.value.size(), 0.0);
      v_.emplace_back(t.value.size(), 0.0);
    }
  }

  void step(Model& model, const std::vector<std::vector<double>>& grads, double lr) {
    ++t_;
    const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    auto& tensors = model.tensors();
    for (std::size_t k = 0; k < tensors.size(); ++k) {
      auto& w = tensors[k].value;
      const double decay = tensors[k].decay ? weight_decay_ : 0.0;
      for (std::size_t i = 0; i < w.size(); ++i) {
        const double g = grads[k][i];
        m_[k][i] = beta1_ * m_[k][i] + (1.0 - beta1_) * g;
        v_[k][i] = beta2_ * v_[k][i] + (1.0 - beta2_) * g * g;
        const double mhat = m_[k][i] / c1;
        const double vhat = v_[k][i] / c2;
        w[i] -= lr * (mhat / (std::sqrt(vhat) + epsilon_) + decay * w[i]);
      }
    }
  }

 private:
  double beta1_, beta2_, epsilon_, weight_decay_;
  long t_ = 0;
  std::vector<std::vector<double>> m_, v_;
};

/// Learning rate at `progress` epochs into training (fractional).
inline double scheduled_lr(const TrainConfig& cfg, double progress) {
  const double warm = std::min<double>(cfg.lr_warmup_epochs, cfg.epochs);
  if (warm > 0.0 && progress <= warm) return cfg.learning_rate * progress / warm;
  const double span = cfg.epochs - warm;
  if (span <= 0.0) return cfg.learning_rate;
  return cfg.learning_rate * 0.5 * (1.0 + std::cos(std::numbers::pi * (progress - warm) / span));
}

/// Per-example loss used by the trainer: softmax probabilities are clamped
/// to [1e-12, 1 - 1e-12] before the log.
inline double clamped_loss_from_logits(std::array<double, 2> z, BinaryLabel y_eff, SmoothingRate r) {
  const auto p = softmax2(z[0], z[1]);
  constexpr double kEps = 1e-12;
  const double p1 = std::clamp(p[1], kEps, 1.0 - kEps);
  return gls_loss(ProbabilityPair(1.0 - p1, p1), y_eff, r);
}

inline double clamped_example_loss(const Model& model, const TrainExample& ex, SmoothingRate r) {
  return clamped_loss_from_logits(model.logits(ex.features), ex.effective(), r);
}

inline SmoothingRate example_rate(const TrainExample& ex, const TrainConfig& cfg) {
  return cfg.plain_ce ? SmoothingRate(0.0) : smoothing_rate(ex.u, cfg.smoothing_params);
}

inline std::vector<std::vector<double>> zero_grads(const Model& model) {
  std::vector<std::vector<double>> g;
  for (const auto& t : model.tensors()) g.emplace_back(t.value.size(), 0.0);
  return g;
}

inline TrainResult train(std::span<const TrainExample> data, const TrainConfig& cfg,
                         const EvalSet* heldout = nullptr) {
  cfg.validate();
  if (data.empty()) throw ConfigError("training set is empty");
  const std::size_t dim = data.front().features.size();
  if (dim == 0) throw ConfigError("examples have no features");
  for (const auto& ex : data) {
    if (ex.features.size() != dim) throw ConfigError("inconsistent feature dimension in training set");
    for (double v : ex.features)
      if (!std::isfinite(v)) throw ConfigError("non-finite feature value in training set");
  }

  std::vector<std::size_t> extreme, everyone;
  for (std::size_t i = 0; i < data.size(); ++i) {
    everyone.push_back(i);
    if (data[i].u.extreme()) extreme.push_back(i);
  }
  if (cfg.warmup_epochs > 0 && extreme.empty())
    throw ConfigError("warm-up requested but the training set has no |u| = 3 examples");

  const EvalSet train_eval = EvalSet::from_examples(data);
  std::vector<SmoothingRate> rates;
  rates.reserve(data.size());
  for (const auto& ex : data) rates.push_back(example_rate(ex, cfg));

  Rng rng(cfg.seed);
  TrainResult result{Model::init(cfg.architecture, dim, cfg.hidden_width, rng), {}};
  Model& model = result.model;
  AdamW opt(model, cfg.beta1, cfg.beta2, cfg.epsilon, cfg.weight_decay);

  std::vector<std::size_t> order;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    order = epoch < cfg.warmup_epochs ? extreme : everyone;
    rng.shuffle(std::span<std::size_t>(order));

    const std::size_t batch = static_cast<std::size_t>(cfg.batch_size);
    const std::size_t steps = (order.size() + batch - 1) / batch;
    double loss_sum = 0.0;
    for (std::size_t s = 0; s < steps; ++s) {
      const std::size_t begin = s * batch;
      const std::size_t end = std::min(order.size(), begin + batch);
      auto grads = zero_grads(model);
      for (std::size_t b = begin; b < end; ++b) {
        const TrainExample& ex = data[order[b]];
        const SmoothingRate r = rates[order[b]];
        const auto z = model.logits(ex.features);
        const double loss =
            std::isfinite(z[0]) && std::isfinite(z[1]) ? clamped_loss_from_logits(z, ex.effective(), r) : NAN;
        if (!std::isfinite(loss))
          throw NumericError("non-finite loss at epoch " + std::to_string(epoch + 1) + ", example " +
                             std::to_string(order[b]));
        loss_sum += loss;
        model.accumulate_gradient(ex.features, gls_loss_gradient(z, ex.effective(), r), grads);
      }
      const double inv = 1.0 / static_cast<double>(end - begin);
      for (auto& g : grads)
        for (double& v : g) v *= inv;
      const double progress = epoch + static_cast<double>(s + 1) / static_cast<double>(steps);
      opt.step(model, grads, scheduled_lr(cfg, progress));
    }
    if (!model.finite()) throw NumericError("non-finite weights after epoch " + std::to_string(epoch + 1));

    EpochMetrics m;
    m.epoch = epoch + 1;
    m.samples_used = order.size();
    m.mean_loss = loss_sum / static_cast<double>(order.size());
    m.auc = evaluate_auc(model, train_eval);
    if (heldout) m.heldout_auc = evaluate_auc(model, *heldout);
    result.history.push_back(m);
  }
  return result;
}

}  // namespace gls
