#pragma once

// Rule-based extraction of (diagnosis mention, uncertainty score) pairs.
//
// Scope of a cue is the sentence it occurs in. Inside a sentence, cues are
// tokenized greedily left to right with longest-pattern precedence, so
// "less likely" hides the embedded "likely" and "no definite" hides "no".
// A mention takes the score of the cue whose start is closest to it; a
// mention with no cue in its sentence is an affirmative statement (+3).

#include <algorithm>
#include <cstdlib>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "gls/lexicon.hpp"
#include "gls/smoothing.hpp"
#include "gls/text.hpp"

namespace gls {

struct ExtractedFinding {
  std::string raw_phrase;
  std::size_t sentence_index = 0;
  UncertaintyScore u{3};
  std::optional<std::string> cue;

  friend bool operator==(const ExtractedFinding&, const ExtractedFinding&) = default;
};

struct MentionScore {
  UncertaintyScore u{3};
  std::optional<std::string> cue;
};

/// Splits on '.', '!', '?' and newlines; lowercases and collapses
/// whitespace; drops empty sentences.
inline std::vector<std::string> split_sentences(std::string_view report_text) {
  std::vector<std::string> sentences;
  std::size_t start = 0;
  auto flush = [&](std::size_t end) {
    std::string s = text::normalize(report_text.substr(start, end - start));
    if (!s.empty()) sentences.push_back(std::move(s));
  };
  for (std::size_t i = 0; i < report_text.size(); ++i) {
    char c = report_text[i];
    if (c == '.' || c == '!' || c == '?' || c == '\n' || c == '\r') {
      flush(i);
      start = i + 1;
    }
  }
  flush(report_text.size());
  return sentences;
}

namespace detail {

struct CueHit {
  std::size_t start;
  std::size_t rank;  // index into the lexicon's precedence order
};

inline std::vector<CueHit> scan_cues(std::string_view sentence, const Lexicon& lexicon) {
  std::vector<CueHit> hits;
  const auto& entries = lexicon.entries();
  std::size_t pos = 0;
  while (pos < sentence.size()) {
    if (pos > 0 && text::is_word_char(sentence[pos - 1])) {
      ++pos;
      continue;
    }
    bool matched = false;
    for (std::size_t rank = 0; rank < entries.size(); ++rank) {
      const std::string& p = entries[rank].pattern;
      if (sentence.compare(pos, p.size(), p) == 0 && text::on_word_boundary(sentence, pos, p.size())) {
        hits.push_back({pos, rank});
        pos += p.size();
        matched = true;
        break;
      }
    }
    if (!matched) ++pos;
  }
  return hits;
}

}  // namespace detail

/// Scores the mention starting at `mention_offset` in a normalized sentence.
inline MentionScore score_mention(std::string_view sentence, std::size_t mention_offset, const Lexicon& lexicon) {
  const auto hits = detail::scan_cues(sentence, lexicon);
  if (hits.empty()) return {UncertaintyScore(3), std::nullopt};

  auto distance = [&](const detail::CueHit& h) {
    return h.start > mention_offset ? h.start - mention_offset : mention_offset - h.start;
  };
  const auto best = std::min_element(hits.begin(), hits.end(), [&](const auto& a, const auto& b) {
    return std::tuple(distance(a), a.rank) < std::tuple(distance(b), b.rank);
  });
  const LexiconEntry& entry = lexicon.entries()[best->rank];
  return {entry.score, entry.pattern};
}

/// `vocabulary` should be ordered longest-first (see taxonomy::vocabulary);
/// a shorter phrase never matches inside a span already claimed by a longer
/// one.
inline std::vector<ExtractedFinding> extract_findings(std::string_view report_text, const Lexicon& lexicon,
                                                      const std::vector<std::string>& vocabulary) {
  std::vector<ExtractedFinding> findings;
  const auto sentences = split_sentences(report_text);
  for (std::size_t si = 0; si < sentences.size(); ++si) {
    const std::string& sentence = sentences[si];

    struct Span {
      std::size_t start, end;
      const std::string* phrase;
    };
    std::vector<Span> claimed;
    for (const std::string& phrase : vocabulary) {
      for (std::size_t pos : text::find_words(sentence, phrase)) {
        const std::size_t end = pos + phrase.size();
        bool overlaps = std::any_of(claimed.begin(), claimed.end(),
                                    [&](const Span& s) { return pos < s.end && s.start < end; });
        if (!overlaps) claimed.push_back({pos, end, &phrase});
      }
    }
    std::sort(claimed.begin(), claimed.end(), [](const Span& a, const Span& b) { return a.start < b.start; });

    for (const Span& span : claimed) {
      MentionScore score = score_mention(sentence, span.start, lexicon);
      findings.push_back({*span.phrase, si, score.u, std::move(score.cue)});
    }
  }
  return findings;
}

}  // namespace gls
