#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

namespace gls::text {

inline bool is_word_char(char c) noexcept {
  return std::isalnum(static_cast<unsigned char>(c)) != 0;
}

inline bool is_space(char c) noexcept {
  return std::isspace(static_cast<unsigned char>(c)) != 0;
}

/// Lowercase, collapse whitespace runs to one space, strip both ends.
inline std::string normalize(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;
  for (char c : raw) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

/// True when [pos, pos + len) is delimited by non-word characters or the
/// ends of `s`.
inline bool on_word_boundary(std::string_view s, std::size_t pos, std::size_t len) noexcept {
  if (pos > 0 && is_word_char(s[pos - 1])) return false;
  if (pos + len < s.size() && is_word_char(s[pos + len])) return false;
  return true;
}

/// Offsets of every word-bounded occurrence of `needle` in `haystack`.
inline std::vector<std::size_t> find_words(std::string_view haystack, std::string_view needle) {
  std::vector<std::size_t> hits;
  if (needle.empty()) return hits;
  for (std::size_t pos = haystack.find(needle); pos != std::string_view::npos;
       pos = haystack.find(needle, pos + 1)) {
    if (on_word_boundary(haystack, pos, needle.size())) hits.push_back(pos);
  }
  return hits;
}

/// Splits on `sep`, keeping empty fields.
inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    std::size_t end = s.find(sep, start);
    out.push_back(s.substr(start, end == std::string_view::npos ? end : end - start));
    if (end == std::string_view::npos) return out;
    start = end + 1;
  }
}

inline std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

}  // namespace gls::text
