#pragma once

// Generalized label smoothing (GLS) driven by ordinal expert uncertainty.
//
// An uncertainty score u in {-3..3} is turned into a smoothing rate
//
//     r = r0 - k * |u|            (r <= 1, may be negative)
//
// and the two-class target for effective label y_eff becomes
//
//     target = (1 - r) * onehot(y_eff) + r / 2
//
// Negative scores flip the stored label before smoothing. The loss
//
//     L = (1 - r) * CE(p, y_eff) + r * CE(p, uniform)
//
// equals cross-entropy against `target`, including when r < 0 pushes the
// target outside the probability simplex.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gls/error.hpp"
#include "gls/rational.hpp"

namespace gls {

class UncertaintyScore {
 public:
  static constexpr int kMin = -3;
  static constexpr int kMax = 3;

  explicit UncertaintyScore(int value) : value_(value) {
    if (value < kMin || value > kMax)
      throw DomainError("uncertainty score " + std::to_string(value) + " outside [-3, 3]");
  }

  int value() const noexcept { return value_; }
  int magnitude() const noexcept { return std::abs(value_); }
  bool extreme() const noexcept { return magnitude() == kMax; }

  static bool valid(long value) noexcept { return value >= kMin && value <= kMax; }

  friend bool operator==(UncertaintyScore, UncertaintyScore) = default;
  friend auto operator<=>(UncertaintyScore, UncertaintyScore) = default;

 private:
  int value_;
};

/// All seven levels from +3 down to -3.
inline std::array<UncertaintyScore, 7> all_scores() {
  return {UncertaintyScore(3), UncertaintyScore(2), UncertaintyScore(1), UncertaintyScore(0),
          UncertaintyScore(-1), UncertaintyScore(-2), UncertaintyScore(-3)};
}

class BinaryLabel {
 public:
  explicit BinaryLabel(int value) : value_(value) {
    if (value != 0 && value != 1)
      throw DomainError("binary label must be 0 or 1, got " + std::to_string(value));
  }

  int value() const noexcept { return value_; }
  BinaryLabel flipped() const noexcept { return BinaryLabel(1 - value_); }

  friend bool operator==(BinaryLabel, BinaryLabel) = default;

 private:
  int value_;
};

/// Slope and intercept of the linear score-to-rate map. Kept as exact
/// rationals so the default k = 5/12 reproduces 7/12, 1/6 and -1/4 exactly.
struct SmoothingParams {
  Rational k{5, 12};
  Rational r0{1};

  void validate() const {
    if (k <= Rational(0)) throw ConfigError("smoothing slope k must be > 0, got " + k.str());
    if (r0 > Rational(1)) throw ConfigError("smoothing intercept r0 must be <= 1, got " + r0.str());
  }
};

class SmoothingRate {
 public:
  explicit SmoothingRate(double value) : value_(value) {
    if (!(value <= 1.0)) throw DomainError("smoothing rate must be <= 1, got " + std::to_string(value));
  }

  double value() const noexcept { return value_; }

 private:
  double value_;
};

/// Target mass on class 0 (`neg`) and class 1 (`pos`). Sums to one; either
/// component may leave [0, 1] when r < 0.
struct GlsTarget {
  double neg = 0.0;
  double pos = 0.0;

  double operator[](int cls) const noexcept { return cls == 0 ? neg : pos; }
};

struct ExactGlsTarget {
  Rational neg;
  Rational pos;

  friend bool operator==(const ExactGlsTarget&, const ExactGlsTarget&) = default;
};

class ProbabilityPair {
 public:
  ProbabilityPair(double p0, double p1) : p0_(p0), p1_(p1) {
    if (!(p0 > 0.0) || !(p1 > 0.0))
      throw DomainError("probabilities must be strictly positive (log undefined)");
    if (std::abs(p0 + p1 - 1.0) > 1e-9) throw DomainError("probabilities must sum to 1");
  }

  double p0() const noexcept { return p0_; }
  double p1() const noexcept { return p1_; }
  double operator[](int cls) const noexcept { return cls == 0 ? p0_ : p1_; }
  ProbabilityPair swapped() const { return ProbabilityPair(p1_, p0_); }

 private:
  double p0_;
  double p1_;
};

inline Rational smoothing_rate_exact(UncertaintyScore u, const SmoothingParams& params) {
  params.validate();
  return params.r0 - params.k * Rational(u.magnitude());
}

inline SmoothingRate smoothing_rate(UncertaintyScore u, const SmoothingParams& params = {}) {
  return SmoothingRate(smoothing_rate_exact(u, params).to_double());
}

/// Negative scores express disagreement with the stored label.
inline BinaryLabel effective_label(BinaryLabel y, UncertaintyScore u) noexcept {
  return u.value() < 0 ? y.flipped() : y;
}

inline ExactGlsTarget gls_target_exact(BinaryLabel y_eff, const Rational& r) {
  if (r > Rational(1)) throw DomainError("smoothing rate must be <= 1, got " + r.str());
  Rational half = r / Rational(2);
  Rational hit = (Rational(1) - r) + half;
  return y_eff.value() == 1 ? ExactGlsTarget{half, hit} : ExactGlsTarget{hit, half};
}

inline GlsTarget gls_target(BinaryLabel y_eff, SmoothingRate r) {
  const double half = 0.5 * r.value();
  const double hit = (1.0 - r.value()) + half;
  return y_eff.value() == 1 ? GlsTarget{half, hit} : GlsTarget{hit, half};
}

/// Cross-entropy of `p` against an arbitrary (possibly non-simplex) target.
inline double cross_entropy(const ProbabilityPair& p, const GlsTarget& target) {
  return -(target.neg * std::log(p.p0()) + target.pos * std::log(p.p1()));
}

inline double gls_loss(const ProbabilityPair& p, BinaryLabel y_eff, SmoothingRate r) {
  const double ce = -std::log(p[y_eff.value()]);
  const double uniform = -0.5 * (std::log(p.p0()) + std::log(p.p1()));
  return (1.0 - r.value()) * ce + r.value() * uniform;
}

/// Numerically stable two-way softmax.
inline std::array<double, 2> softmax2(double z0, double z1) {
  const double m = std::max(z0, z1);
  const double e0 = std::exp(z0 - m);
  const double e1 = std::exp(z1 - m);
  const double s = e0 + e1;
  return {e0 / s, e1 / s};
}

/// dL/dlogits through the softmax link: softmax(logits) - target.
inline std::array<double, 2> gls_loss_gradient(std::span<const double, 2> logits, BinaryLabel y_eff,
                                               SmoothingRate r) {
  if (!std::isfinite(logits[0]) || !std::isfinite(logits[1]))
    throw DomainError("logits must be finite");
  const auto p = softmax2(logits[0], logits[1]);
  const GlsTarget t = gls_target(y_eff, r);
  return {p[0] - t.neg, p[1] - t.pos};
}

struct Table1Row {
  UncertaintyScore u;
  Rational rate;
  ExactGlsTarget target;  // for stored label y = 1
  std::string_view interpretation;
};

/// The seven-row score -> rate -> target mapping for a stored positive label.
inline std::vector<Table1Row> table1(const SmoothingParams& params = {}) {
  static constexpr std::string_view kInterpretation[] = {
      "Definitively positive (strong negative smoothing)",
      "Highly confident (mild positive smoothing)",
      "Moderately confident (moderate smoothing)",
      "Ambiguous/Neutral (maximum uncertainty)",
      "Moderately uncertain (moderate smoothing)",
      "Highly uncertain (mild smoothing)",
      "Definitively negative (strong negative smoothing)",
  };
  std::vector<Table1Row> rows;
  rows.reserve(7);
  std::size_t i = 0;
  for (UncertaintyScore u : all_scores()) {
    Rational r = smoothing_rate_exact(u, params);
    BinaryLabel y_eff = effective_label(BinaryLabel(1), u);
    rows.push_back({u, r, gls_target_exact(y_eff, r), kInterpretation[i++]});
  }
  return rows;
}

}  // namespace gls
