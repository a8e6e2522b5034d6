#pragma once

#include <array>
#include <cmath>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "gls/error.hpp"
#include "gls/rng.hpp"
#include "gls/smoothing.hpp"

namespace gls {

enum class Architecture { linear, mlp_1hidden };

inline std::string_view to_string(Architecture a) noexcept {
  return a == Architecture::linear ? "linear" : "mlp_1hidden";
}

inline Architecture parse_architecture(std::string_view name) {
  if (name == "linear") return Architecture::linear;
  if (name == "mlp_1hidden" || name == "mlp") return Architecture::mlp_1hidden;
  throw ConfigError("unknown architecture '" + std::string(name) + "'");
}

/// Two-logit classifier: either `out = W x + b` or
/// `out = W2 relu(W1 x + b1) + b2`. Matrices are row-major.
class Model {
 public:
  struct Tensor {
    std::vector<double> value;
    bool decay;  // weight decay applies to matrices, not biases
  };

  static Model zeros(Architecture arch, std::size_t input_dim, std::size_t hidden_width = 0) {
    if (input_dim == 0) throw ConfigError("model input dimension must be > 0");
    if (arch == Architecture::mlp_1hidden && hidden_width == 0) throw ConfigError("mlp hidden width must be > 0");
    Model m;
    m.arch_ = arch;
    m.input_dim_ = input_dim;
    m.hidden_width_ = arch == Architecture::linear ? 0 : hidden_width;
    const std::size_t last_in = arch == Architecture::linear ? input_dim : hidden_width;
    if (arch == Architecture::mlp_1hidden) {
      m.tensors_.push_back({std::vector<double>(hidden_width * input_dim), true});
      m.tensors_.push_back({std::vector<double>(hidden_width), false});
    }
    m.tensors_.push_back({std::vector<double>(2 * last_in), true});
    m.tensors_.push_back({std::vector<double>(2), false});
    return m;
  }

  /// Weights uniform on +-1/sqrt(fan_in), biases zero.
  static Model init(Architecture arch, std::size_t input_dim, std::size_t hidden_width, Rng& rng) {
    Model m = zeros(arch, input_dim, hidden_width);
    auto fill = [&](Tensor& t, std::size_t fan_in) {
      const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
      for (double& w : t.value) w = rng.uniform(-bound, bound);
    };
    if (arch == Architecture::mlp_1hidden) {
      fill(m.tensors_[0], input_dim);
      fill(m.tensors_[2], hidden_width);
    } else {
      fill(m.tensors_[0], input_dim);
    }
    return m;
  }

  Architecture architecture() const noexcept { return arch_; }
  std::size_t input_dim() const noexcept { return input_dim_; }
  std::size_t hidden_width() const noexcept { return hidden_width_; }
  std::vector<Tensor>& tensors() noexcept { return tensors_; }
  const std::vector<Tensor>& tensors() const noexcept { return tensors_; }

  std::array<double, 2> logits(std::span<const double> x) const {
    check_dim(x);
    if (arch_ == Architecture::linear) return affine2(tensors_[0].value, tensors_[1].value, x);
    std::vector<double> h(hidden_width_);
    hidden(x, h);
    return affine2(tensors_[2].value, tensors_[3].value, h);
  }

  /// Adds dL/dparams for one example to `grads` (same layout as tensors()),
  /// given dL/dlogits.
  void accumulate_gradient(std::span<const double> x, std::array<double, 2> dlogits,
                           std::vector<std::vector<double>>& grads) const {
    check_dim(x);
    if (arch_ == Architecture::linear) {
      add_outer(grads[0], dlogits, x);
      grads[1][0] += dlogits[0];
      grads[1][1] += dlogits[1];
      return;
    }
    std::vector<double> h(hidden_width_);
    hidden(x, h);
    add_outer(grads[2], dlogits, h);
    grads[3][0] += dlogits[0];
    grads[3][1] += dlogits[1];
    const auto& w2 = tensors_[2].value;
    for (std::size_t j = 0; j < hidden_width_; ++j) {
      if (h[j] <= 0.0) continue;
      const double dh = dlogits[0] * w2[j] + dlogits[1] * w2[hidden_width_ + j];
      double* row = grads[0].data() + j * input_dim_;
      for (std::size_t i = 0; i < input_dim_; ++i) row[i] += dh * x[i];
      grads[1][j] += dh;
    }
  }

  bool finite() const noexcept {
    for (const auto& t : tensors_)
      for (double v : t.value)
        if (!std::isfinite(v)) return false;
    return true;
  }

  friend bool operator==(const Model& a, const Model& b) {
    if (a.arch_ != b.arch_ || a.input_dim_ != b.input_dim_ || a.hidden_width_ != b.hidden_width_) return false;
    for (std::size_t i = 0; i < a.tensors_.size(); ++i)
      if (a.tensors_[i].value != b.tensors_[i].value) return false;
    return true;
  }

  nlohmann::json to_json() const {
    nlohmann::json tensors = nlohmann::json::array();
    for (const auto& t : tensors_) tensors.push_back(t.value);
    return {{"architecture", std::string(to_string(arch_))},
            {"input_dim", input_dim_},
            {"hidden_width", hidden_width_},
            {"tensors", tensors}};
  }

  static Model from_json(const nlohmann::json& j) {
    try {
      Model m = zeros(parse_architecture(j.at("architecture").get<std::string>()), j.at("input_dim").get<std::size_t>(),
                      j.at("hidden_width").get<std::size_t>());
      const auto& tensors = j.at("tensors");
      if (tensors.size() != m.tensors_.size()) throw DataError("model: wrong tensor count");
      for (std::size_t i = 0; i < m.tensors_.size(); ++i) {
        auto values = tensors[i].get<std::vector<double>>();
        if (values.size() != m.tensors_[i].value.size()) throw DataError("model: wrong tensor size");
        m.tensors_[i].value = std::move(values);
      }
      if (!m.finite()) throw DataError("model: non-finite weight");
      return m;
    } catch (const nlohmann::json::exception& e) {
      throw DataError(std::string("model: ") + e.what());
    }
  }

 private:
  void check_dim(std::span<const double> x) const {
    if (x.size() != input_dim_)
      throw DomainError("feature dimension " + std::to_string(x.size()) + " does not match model input " +
                        std::to_string(input_dim_));
  }

  void hidden(std::span<const double> x, std::vector<double>& h) const {
    const auto& w1 = tensors_[0].value;
    const auto& b1 = tensors_[1].value;
    for (std::size_t j = 0; j < hidden_width_; ++j) {
      double s = b1[j];
      const double* row = w1.data() + j * input_dim_;
      for (std::size_t i = 0; i < input_dim_; ++i) s += row[i] * x[i];
      h[j] = s > 0.0 ? s : 0.0;
    }
  }

  static std::array<double, 2> affine2(const std::vector<double>& w, const std::vector<double>& b,
                                       std::span<const double> x) {
    const std::size_t n = x.size();
    double z0 = b[0], z1 = b[1];
    for (std::size_t i = 0; i < n; ++i) {
      z0 += w[i] * x[i];
      z1 += w[n + i] * x[i];
    }
    return {z0, z1};
  }

  static void add_outer(std::vector<double>& g, std::array<double, 2> d, std::span<const double> x) {
    const std::size_t n = x.size();
    for (std::size_t i = 0; i < n; ++i) {
      g[i] += d[0] * x[i];
      g[n + i] += d[1] * x[i];
    }
  }

  Architecture arch_ = Architecture::linear;
  std::size_t input_dim_ = 0;
  std::size_t hidden_width_ = 0;
  std::vector<Tensor> tensors_;
};

/// Class-1 score used for ranking: the logit margin z1 - z0. Monotone in p1
/// but never saturates.
inline double score(const Model& model, std::span<const double> x) {
  const auto z = model.logits(x);
  return z[1] - z[0];
}

inline ProbabilityPair predict(const Model& model, std::span<const double> x) {
  const auto z = model.logits(x);
  auto p = softmax2(z[0], z[1]);
  // Keep both components representable as strictly positive probabilities.
  constexpr double kFloor = 1e-300;
  if (p[0] < kFloor) p = {kFloor, 1.0 - kFloor};
  if (p[1] < kFloor) p = {1.0 - kFloor, kFloor};
  return ProbabilityPair(p[0], p[1]);
}

inline std::vector<ProbabilityPair> predict_batch(const Model& model, std::span<const std::vector<double>> xs) {
  std::vector<ProbabilityPair> out;
  out.reserve(xs.size());
  for (const auto& x : xs) out.push_back(predict(model, x));
  return out;
}

}  // namespace gls
