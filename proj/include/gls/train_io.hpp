#pragma once

// Line-delimited JSON for training data, models and metrics.
//
//   data:    {"features":[...], "y":0|1, "u":-3..3, "category":"Edema"?, "true_y":0|1?}
//   metrics: one {"epoch":...} object per epoch, then {"summary":true,...}

#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gls/error.hpp"
#include "gls/model.hpp"
#include "gls/taxonomy.hpp"
#include "gls/text.hpp"
#include "gls/trainer.hpp"

namespace gls {

struct TrainData {
  std::vector<TrainExample> examples;
  std::vector<BinaryLabel> true_labels;  // empty unless every line carries true_y

  bool has_truth() const noexcept { return !true_labels.empty() && true_labels.size() == examples.size(); }
};

inline TrainData read_train_data(std::istream& in) {
  TrainData data;
  std::size_t truth_lines = 0;
  std::string line;
  std::size_t line_no = 0;
  std::optional<std::size_t> dim;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::normalize(line).empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      TrainExample ex;
      ex.features = j.at("features").get<std::vector<double>>();
      if (ex.features.empty()) throw DataError("empty feature vector", line_no);
      if (dim && *dim != ex.features.size())
        throw DataError("feature dimension " + std::to_string(ex.features.size()) + " differs from " + std::to_string(*dim),
                        line_no);
      dim = ex.features.size();
      const long y = j.at("y").get<long>();
      const long u = j.at("u").get<long>();
      if (y != 0 && y != 1) throw DataError("y must be 0 or 1", line_no);
      if (!UncertaintyScore::valid(u)) throw DataError("u outside [-3, 3]", line_no);
      ex.y = BinaryLabel(static_cast<int>(y));
      ex.u = UncertaintyScore(static_cast<int>(u));
      if (j.contains("category") && !j["category"].is_null()) {
        auto c = parse_category(j["category"].get<std::string>());
        if (!c) throw DataError("unknown category", line_no);
        ex.category = static_cast<int>(*c);
      }
      if (j.contains("true_y") && !j["true_y"].is_null()) {
        const long t = j["true_y"].get<long>();
        if (t != 0 && t != 1) throw DataError("true_y must be 0 or 1", line_no);
        data.true_labels.emplace_back(static_cast<int>(t));
        ++truth_lines;
      }
      data.examples.push_back(std::move(ex));
    } catch (const nlohmann::json::exception& e) {
      throw DataError(std::string("bad training record: ") + e.what(), line_no);
    }
  }
  if (truth_lines != 0 && truth_lines != data.examples.size())
    throw DataError("true_y must be present on every line or on none");
  return data;
}

inline void write_train_example(std::ostream& out, const TrainExample& ex, std::optional<BinaryLabel> truth = {}) {
  nlohmann::json j = {{"features", ex.features}, {"y", ex.y.value()}, {"u", ex.u.value()}};
  if (ex.category) j["category"] = std::string(to_string(static_cast<DiseaseCategory>(*ex.category)));
  if (truth) j["true_y"] = truth->value();
  out << j.dump() << '\n';
}

inline nlohmann::json epoch_to_json(const EpochMetrics& m) {
  nlohmann::json j = {{"epoch", m.epoch}, {"mean_loss", m.mean_loss}, {"auc", m.auc}, {"samples_used", m.samples_used}};
  if (m.heldout_auc) j["heldout_auc"] = *m.heldout_auc;
  return j;
}

inline void write_metrics(std::ostream& out, const std::vector<EpochMetrics>& history) {
  for (const auto& m : history) out << epoch_to_json(m).dump() << '\n';
  nlohmann::json summary = {{"summary", true}, {"epochs", history.size()}};
  if (!history.empty()) {
    summary["final_auc"] = history.back().auc;
    summary["final_loss"] = history.back().mean_loss;
    if (history.back().heldout_auc) summary["final_heldout_auc"] = *history.back().heldout_auc;
  }
  out << summary.dump() << '\n';
}

}  // namespace gls
