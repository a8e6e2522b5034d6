#pragma once

#include <algorithm>
#include <array>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "gls/error.hpp"
#include "gls/text.hpp"

namespace gls {

// Declared in alphabetical order, which is also the output sort order.
enum class DiseaseCategory {
  Atelectasis,
  Cardiomegaly,
  Consolidation,
  Edema,
  Effusion,
  Emphysema,
  Fracture,
  Hernia,
  Mass,
  Nodule,
  PleuralThickening,
  Pneumonia,
  Pneumothorax,
  Scoliosis,
};

inline constexpr std::size_t kCategoryCount = 14;

inline constexpr std::array<std::string_view, kCategoryCount> kCategoryNames = {
    "Atelectasis", "Cardiomegaly", "Consolidation", "Edema",   "Effusion",          "Emphysema", "Fracture",
    "Hernia",      "Mass",         "Nodule",        "PleuralThickening", "Pneumonia", "Pneumothorax", "Scoliosis",
};

inline std::string_view to_string(DiseaseCategory c) noexcept {
  return kCategoryNames[static_cast<std::size_t>(c)];
}

inline std::optional<DiseaseCategory> parse_category(std::string_view name) noexcept {
  for (std::size_t i = 0; i < kCategoryCount; ++i)
    if (kCategoryNames[i] == name) return static_cast<DiseaseCategory>(i);
  return std::nullopt;
}

inline std::array<DiseaseCategory, kCategoryCount> all_categories() noexcept {
  std::array<DiseaseCategory, kCategoryCount> out{};
  for (std::size_t i = 0; i < kCategoryCount; ++i) out[i] = static_cast<DiseaseCategory>(i);
  return out;
}

inline std::string normalize_phrase(std::string_view raw) { return text::normalize(raw); }

/// Normalized raw-diagnosis phrase -> clinical category.
class TaxonomyMap {
 public:
  TaxonomyMap() = default;

  /// Throws DataError when a phrase is added twice.
  void add(std::string_view raw, DiseaseCategory category, std::size_t line = 0) {
    std::string key = normalize_phrase(raw);
    if (key.empty()) throw DataError("empty diagnosis phrase", line);
    auto [it, inserted] = entries_.emplace(std::move(key), category);
    if (!inserted) throw DataError("diagnosis phrase '" + it->first + "' listed twice", line);
  }

  std::optional<DiseaseCategory> lookup(std::string_view raw) const {
    auto it = entries_.find(normalize_phrase(raw));
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  const std::map<std::string, DiseaseCategory, std::less<>>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }

 private:
  std::map<std::string, DiseaseCategory, std::less<>> entries_;
};

inline std::optional<DiseaseCategory> map_diagnosis(std::string_view raw, const TaxonomyMap& taxonomy) {
  return taxonomy.lookup(raw);
}

/// Every phrase, longest first (ties alphabetical), for use as parser
/// vocabulary.
inline std::vector<std::string> vocabulary(const TaxonomyMap& taxonomy) {
  std::vector<std::string> out;
  out.reserve(taxonomy.size());
  for (const auto& [phrase, _] : taxonomy.entries()) out.push_back(phrase);
  std::stable_sort(out.begin(), out.end(),
                   [](const std::string& a, const std::string& b) { return a.size() > b.size(); });
  return out;
}

/// Reads `raw_phrase<TAB>category` lines; '#' lines and blank lines skipped.
inline TaxonomyMap load_taxonomy(std::istream& in) {
  TaxonomyMap map;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = text::strip_cr(line);
    if (view.empty() || view.front() == '#') continue;
    auto fields = text::split(view, '\t');
    if (fields.size() != 2)
      throw DataError("expected 2 tab-separated fields, got " + std::to_string(fields.size()), line_no);
    auto category = parse_category(fields[1]);
    if (!category) throw DataError("unknown category '" + std::string(fields[1]) + "'", line_no);
    map.add(fields[0], *category, line_no);
  }
  return map;
}

inline TaxonomyMap load_taxonomy(std::string_view tsv) {
  std::istringstream in{std::string(tsv)};
  return load_taxonomy(in);
}

}  // namespace gls
