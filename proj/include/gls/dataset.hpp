#pragma once

// Turns free-text report records into uncertainty-annotated labeled records.
//
// Each emitted record is one (study, category) pair. Mentions assert the
// finding, so y = 1 and the signed score u carries polarity; the loss side
// resolves it through effective_label. Categories never mentioned in a
// report are not emitted.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <thread>
#include <tuple>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

#include "gls/error.hpp"
#include "gls/lexicon.hpp"
#include "gls/report_parser.hpp"
#include "gls/smoothing.hpp"
#include "gls/taxonomy.hpp"

namespace gls {

struct ReportRecord {
  std::string patient_id;
  std::string study_id;
  std::string text;
};

struct LabeledRecord {
  std::string study_id;
  DiseaseCategory category{};
  BinaryLabel y{1};
  UncertaintyScore u{3};
  SmoothingRate r{1.0};
  GlsTarget target;
  std::optional<std::string> cue;
};

struct RecordError {
  std::size_t line = 0;
  std::string message;

  friend bool operator==(const RecordError&, const RecordError&) = default;
};

struct DatasetStats {
  std::size_t report_count = 0;
  std::size_t record_count = 0;
  std::array<std::size_t, kCategoryCount> per_category_counts{};
  std::array<std::size_t, 7> per_score_counts{};  // index u + 3
  std::size_t unmapped_phrase_count = 0;
  std::vector<RecordError> errors;

  std::size_t score_count(int u) const { return per_score_counts.at(static_cast<std::size_t>(u + 3)); }
  std::size_t category_count(DiseaseCategory c) const { return per_category_counts[static_cast<std::size_t>(c)]; }

  void count(const LabeledRecord& rec) {
    ++record_count;
    ++per_category_counts[static_cast<std::size_t>(rec.category)];
    ++per_score_counts[static_cast<std::size_t>(rec.u.value() + 3)];
  }

  /// Associative and commutative except for error order, which callers sort.
  void merge(const DatasetStats& other) {
    report_count += other.report_count;
    record_count += other.record_count;
    for (std::size_t i = 0; i < kCategoryCount; ++i) per_category_counts[i] += other.per_category_counts[i];
    for (std::size_t i = 0; i < 7; ++i) per_score_counts[i] += other.per_score_counts[i];
    unmapped_phrase_count += other.unmapped_phrase_count;
    errors.insert(errors.end(), other.errors.begin(), other.errors.end());
  }

  bool same_counts(const DatasetStats& other) const {
    return record_count == other.record_count && per_category_counts == other.per_category_counts &&
           per_score_counts == other.per_score_counts;
  }
};

struct BuildOptions {
  SmoothingParams params;
  unsigned threads = 1;
};

struct BuildResult {
  std::vector<LabeledRecord> records;
  DatasetStats stats;
};

namespace detail {

inline LabeledRecord make_record(std::string study_id, DiseaseCategory category, UncertaintyScore u,
                                 std::optional<std::string> cue, const SmoothingParams& params) {
  const BinaryLabel y(1);
  const SmoothingRate r = smoothing_rate(u, params);
  return {std::move(study_id), category, y, u, r, gls_target(effective_label(y, u), r), std::move(cue)};
}

/// Higher |u| wins; on equal magnitude the positive score wins.
inline bool dominates(UncertaintyScore challenger, UncertaintyScore incumbent) {
  if (challenger.magnitude() != incumbent.magnitude()) return challenger.magnitude() > incumbent.magnitude();
  return challenger.value() > incumbent.value();
}

inline void process_report(const ReportRecord& report, const Lexicon& lexicon, const TaxonomyMap& taxonomy,
                           const std::vector<std::string>& vocab, const SmoothingParams& params,
                           std::vector<LabeledRecord>& out, DatasetStats& stats) {
  ++stats.report_count;
  struct Best {
    UncertaintyScore u;
    std::optional<std::string> cue;
  };
  std::map<DiseaseCategory, Best> merged;
  for (ExtractedFinding& f : extract_findings(report.text, lexicon, vocab)) {
    auto category = map_diagnosis(f.raw_phrase, taxonomy);
    if (!category) {
      ++stats.unmapped_phrase_count;
      continue;
    }
    auto it = merged.find(*category);
    if (it == merged.end()) {
      merged.emplace(*category, Best{f.u, std::move(f.cue)});
    } else if (dominates(f.u, it->second.u)) {
      it->second = Best{f.u, std::move(f.cue)};
    }
  }
  for (auto& [category, best] : merged) {
    out.push_back(make_record(report.study_id, category, best.u, std::move(best.cue), params));
    stats.count(out.back());
  }
}

inline bool record_less(const LabeledRecord& a, const LabeledRecord& b) {
  return std::tie(a.study_id, a.category) < std::tie(b.study_id, b.category);
}

}  // namespace detail

/// Parses, maps, scores and merges every report. Output is sorted by
/// (study_id, category) regardless of input order or thread count. Throws
/// DataError on a duplicate study_id.
inline BuildResult build_dataset(std::span<const ReportRecord> reports, const Lexicon& lexicon,
                                 const TaxonomyMap& taxonomy, const BuildOptions& options = {}) {
  options.params.validate();
  {
    std::unordered_set<std::string_view> ids;
    for (const auto& r : reports)
      if (!ids.insert(r.study_id).second) throw DataError("duplicate study_id '" + r.study_id + "'");
  }

  const auto vocab = vocabulary(taxonomy);
  const unsigned workers = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(reports.size())));

  std::vector<std::vector<LabeledRecord>> parts(workers);
  std::vector<DatasetStats> part_stats(workers);
  auto run = [&](unsigned w) {
    const std::size_t begin = reports.size() * w / workers;
    const std::size_t end = reports.size() * (w + 1) / workers;
    for (std::size_t i = begin; i < end; ++i)
      detail::process_report(reports[i], lexicon, taxonomy, vocab, options.params, parts[w], part_stats[w]);
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
  }

  BuildResult result;
  for (unsigned w = 0; w < workers; ++w) {
    result.stats.merge(part_stats[w]);
    result.records.insert(result.records.end(), std::make_move_iterator(parts[w].begin()),
                          std::make_move_iterator(parts[w].end()));
  }
  std::sort(result.records.begin(), result.records.end(), detail::record_less);
  return result;
}

// ---------------------------------------------------------------------------
// Line-delimited JSON I/O

/// Reads `{"patient_id", "study_id", "text"}` lines. Malformed lines are
/// recorded in `errors` and skipped.
inline std::vector<ReportRecord> read_reports(std::istream& in, std::vector<RecordError>& errors) {
  std::vector<ReportRecord> reports;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::normalize(line).empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      if (!j.is_object()) throw DataError("record is not an object");
      for (const char* field : {"patient_id", "study_id", "text"})
        if (!j.contains(field) || !j[field].is_string())
          throw DataError(std::string("missing or non-string field '") + field + "'");
      ReportRecord r{j["patient_id"].get<std::string>(), j["study_id"].get<std::string>(),
                     j["text"].get<std::string>()};
      if (r.patient_id.empty()) throw DataError("empty patient_id");
      if (r.study_id.empty()) throw DataError("empty study_id");
      reports.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      errors.push_back({line_no, std::string("invalid JSON: ") + e.what()});
    } catch (const DataError& e) {
      errors.push_back({line_no, e.what()});
    }
  }
  return reports;
}

inline void write_report(std::ostream& out, const ReportRecord& r) {
  nlohmann::json j = {{"patient_id", r.patient_id}, {"study_id", r.study_id}, {"text", r.text}};
  out << j.dump() << '\n';
}

inline std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

/// One JSON object per line; decimals printed with exactly six places so the
/// bytes are stable across runs and platforms.
inline void write_labeled_record(std::ostream& out, const LabeledRecord& rec) {
  out << "{\"study_id\":" << nlohmann::json(rec.study_id).dump() << ",\"category\":\"" << to_string(rec.category)
      << "\",\"y\":" << rec.y.value() << ",\"u\":" << rec.u.value() << ",\"r\":" << fixed6(rec.r.value())
      << ",\"target_neg\":" << fixed6(rec.target.neg) << ",\"target_pos\":" << fixed6(rec.target.pos)
      << ",\"cue\":" << (rec.cue ? nlohmann::json(*rec.cue).dump() : "null") << "}\n";
}

inline nlohmann::json stats_to_json(const DatasetStats& stats, const SmoothingParams& params) {
  nlohmann::json per_category = nlohmann::json::object();
  for (DiseaseCategory c : all_categories()) per_category[std::string(to_string(c))] = stats.category_count(c);
  nlohmann::json per_score = nlohmann::json::object();
  for (int u = -3; u <= 3; ++u) per_score[std::to_string(u)] = stats.score_count(u);
  nlohmann::json errors = nlohmann::json::array();
  for (const auto& e : stats.errors) errors.push_back({{"line", e.line}, {"message", e.message}});
  return {{"report_count", stats.report_count},
          {"record_count", stats.record_count},
          {"per_category_counts", per_category},
          {"per_score_counts", per_score},
          {"unmapped_phrase_count", stats.unmapped_phrase_count},
          {"error_count", stats.errors.size()},
          {"errors", errors},
          {"k", params.k.str()},
          {"r0", params.r0.str()}};
}

/// Builds from a JSONL stream, writing records to `out`. Per-line parse
/// errors land in the returned stats.
inline DatasetStats build_dataset_stream(std::istream& in, std::ostream& out, const Lexicon& lexicon,
                                         const TaxonomyMap& taxonomy, const BuildOptions& options = {}) {
  std::vector<RecordError> errors;
  const auto reports = read_reports(in, errors);
  BuildResult result = build_dataset(reports, lexicon, taxonomy, options);
  for (const auto& rec : result.records) write_labeled_record(out, rec);
  result.stats.errors.insert(result.stats.errors.begin(), errors.begin(), errors.end());
  return result.stats;
}

// ---------------------------------------------------------------------------
// Validation

struct ValidationReport {
  DatasetStats stats;
  std::vector<RecordError> errors;

  bool ok() const noexcept { return errors.empty(); }
};

/// Re-derives r and the target from (y, u) for every line and checks them
/// against the stored values at the six-decimal output precision.
inline ValidationReport validate_dataset(std::istream& in, const SmoothingParams& params = {}) {
  params.validate();
  constexpr double kTol = 5e-7 + 1e-12;
  ValidationReport report;
  std::string line;
  std::size_t line_no = 0;
  std::optional<std::pair<std::string, DiseaseCategory>> previous;

  while (std::getline(in, line)) {
    ++line_no;
    if (text::normalize(line).empty()) continue;
    auto fail = [&](const std::string& msg) { report.errors.push_back({line_no, msg}); };

    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      fail(std::string("schema: invalid JSON: ") + e.what());
      continue;
    }
    if (!j.is_object()) {
      fail("schema: record is not an object");
      continue;
    }

    bool schema_ok = true;
    auto need = [&](const char* field, auto pred, const char* what) {
      if (!j.contains(field) || !pred(j[field])) {
        fail(std::string("schema: field '") + field + "' must be " + what);
        schema_ok = false;
      }
    };
    auto is_string = [](const nlohmann::json& v) { return v.is_string(); };
    auto is_int = [](const nlohmann::json& v) { return v.is_number_integer(); };
    auto is_number = [](const nlohmann::json& v) { return v.is_number(); };
    need("study_id", is_string, "a string");
    need("category", is_string, "a string");
    need("y", is_int, "an integer");
    need("u", is_int, "an integer");
    need("r", is_number, "a number");
    need("target_neg", is_number, "a number");
    need("target_pos", is_number, "a number");
    need("cue", [](const nlohmann::json& v) { return v.is_string() || v.is_null(); }, "a string or null");
    if (!schema_ok) continue;

    const auto category = parse_category(j["category"].get<std::string>());
    if (!category) {
      fail("schema: unknown category '" + j["category"].get<std::string>() + "'");
      continue;
    }
    const auto y_raw = j["y"].get<long>();
    const auto u_raw = j["u"].get<long>();
    if (y_raw != 0 && y_raw != 1) {
      fail("invariant: y must be 0 or 1, got " + std::to_string(y_raw));
      continue;
    }
    if (!UncertaintyScore::valid(u_raw)) {
      fail("invariant: u " + std::to_string(u_raw) + " outside [-3, 3]");
      continue;
    }

    const BinaryLabel y(static_cast<int>(y_raw));
    const UncertaintyScore u(static_cast<int>(u_raw));
    const SmoothingRate expected_r = smoothing_rate(u, params);
    const double r = j["r"].get<double>();
    if (!(std::abs(r - expected_r.value()) <= kTol)) {
      fail("invariant: r = " + fixed6(r) + " but u = " + std::to_string(u_raw) + " gives r = " +
           fixed6(expected_r.value()) + " (k = " + params.k.str() + ", r0 = " + params.r0.str() + ")");
      continue;
    }
    const GlsTarget expected_t = gls_target(effective_label(y, u), expected_r);
    const double neg = j["target_neg"].get<double>();
    const double pos = j["target_pos"].get<double>();
    if (!(std::abs(neg - expected_t.neg) <= kTol) || !(std::abs(pos - expected_t.pos) <= kTol)) {
      fail("invariant: target [" + fixed6(neg) + ", " + fixed6(pos) + "] but expected [" + fixed6(expected_t.neg) +
           ", " + fixed6(expected_t.pos) + "]");
      continue;
    }

    std::pair<std::string, DiseaseCategory> key{j["study_id"].get<std::string>(), *category};
    if (previous && !(*previous < key)) {
      fail("order: (study_id, category) not strictly increasing");
      continue;
    }
    previous = key;

    LabeledRecord rec{key.first, *category, y, u, expected_r, expected_t, std::nullopt};
    report.stats.count(rec);
  }
  return report;
}

}  // namespace gls
