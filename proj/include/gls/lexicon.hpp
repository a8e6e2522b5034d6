#pragma once

#include <algorithm>
#include <charconv>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "gls/error.hpp"
#include "gls/smoothing.hpp"
#include "gls/text.hpp"

namespace gls {

enum class CueKind { uncertainty_cue, negation_cue };

inline std::string_view to_string(CueKind kind) noexcept {
  return kind == CueKind::uncertainty_cue ? "uncertainty_cue" : "negation_cue";
}

struct LexiconEntry {
  std::string pattern;  // lowercase, single-spaced
  UncertaintyScore score;
  CueKind kind;
};

/// Cue phrases in precedence order: longer patterns first, then
/// lexicographic. Immutable once built.
class Lexicon {
 public:
  Lexicon() = default;

  explicit Lexicon(std::vector<LexiconEntry> entries) : entries_(std::move(entries)) {
    std::unordered_set<std::string_view> seen;
    for (const auto& e : entries_) {
      if (e.pattern.empty()) throw DataError("empty lexicon pattern");
      if (!seen.insert(e.pattern).second) throw DataError("duplicate lexicon pattern '" + e.pattern + "'");
    }
    std::stable_sort(entries_.begin(), entries_.end(), [](const LexiconEntry& a, const LexiconEntry& b) {
      if (a.pattern.size() != b.pattern.size()) return a.pattern.size() > b.pattern.size();
      return a.pattern < b.pattern;
    });
  }

  const std::vector<LexiconEntry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }

 private:
  std::vector<LexiconEntry> entries_;
};

/// Reads `pattern<TAB>score<TAB>kind` lines; '#' lines and blank lines are
/// skipped. Errors carry the 1-based line number.
inline Lexicon load_lexicon(std::istream& in) {
  std::vector<LexiconEntry> entries;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = text::strip_cr(line);
    if (view.empty() || view.front() == '#') continue;

    auto fields = text::split(view, '\t');
    if (fields.size() != 3) throw DataError("expected 3 tab-separated fields, got " + std::to_string(fields.size()), line_no);

    std::string pattern = text::normalize(fields[0]);
    if (pattern.empty()) throw DataError("empty pattern", line_no);
    if (pattern != fields[0])
      throw DataError("pattern '" + std::string(fields[0]) + "' must be lowercase with single spaces and no padding", line_no);

    long score = 0;
    auto [ptr, ec] = std::from_chars(fields[1].data(), fields[1].data() + fields[1].size(), score);
    if (ec != std::errc{} || ptr != fields[1].data() + fields[1].size())
      throw DataError("score '" + std::string(fields[1]) + "' is not an integer", line_no);
    if (!UncertaintyScore::valid(score))
      throw DataError("score " + std::to_string(score) + " outside [-3, 3]", line_no);

    CueKind kind;
    if (fields[2] == "uncertainty_cue") {
      kind = CueKind::uncertainty_cue;
    } else if (fields[2] == "negation_cue") {
      kind = CueKind::negation_cue;
    } else {
      throw DataError("unknown cue kind '" + std::string(fields[2]) + "'", line_no);
    }

    if (!seen.insert(pattern).second) throw DataError("duplicate lexicon pattern '" + pattern + "'", line_no);
    entries.push_back({std::move(pattern), UncertaintyScore(static_cast<int>(score)), kind});
  }
  return Lexicon(std::move(entries));
}

inline Lexicon load_lexicon(std::string_view tsv) {
  std::istringstream in{std::string(tsv)};
  return load_lexicon(in);
}

}  // namespace gls
