#pragma once

#include <charconv>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hexlink/error.hpp"

namespace hexlink::detail {

struct Token {
  std::string_view text;
  int column = 0;  // 1-based
};

struct Line {
  int number = 0;  // 1-based
  std::vector<Token> tokens;
};

// Splits text into non-empty lines of whitespace-separated tokens.
// Everything from '#' to end of line is a comment.
inline std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> lines;
  int number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(pos, end - pos);
    ++number;
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);

    Line line{number, {}};
    std::size_t i = 0;
    while (i < raw.size()) {
      while (i < raw.size() && (raw[i] == ' ' || raw[i] == '\t' || raw[i] == '\r')) ++i;
      std::size_t start = i;
      while (i < raw.size() && raw[i] != ' ' && raw[i] != '\t' && raw[i] != '\r') ++i;
      if (i > start) line.tokens.push_back({raw.substr(start, i - start), static_cast<int>(start) + 1});
    }
    if (!line.tokens.empty()) lines.push_back(std::move(line));
    pos = end + 1;
  }
  return lines;
}

inline int parse_int(std::string_view s, int line, int column) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
    throw ParseError(line, column, "expected integer, got '" + std::string(s) + "'");
  return value;
}

inline bool parse_bool01(std::string_view s, int line, int column) {
  if (s == "0") return false;
  if (s == "1") return true;
  throw ParseError(line, column, "expected 0 or 1, got '" + std::string(s) + "'");
}

// key=value token. Returns nullopt if the token does not start with "key=".
inline std::optional<std::string_view> value_of(const Token& tok, std::string_view key) {
  if (tok.text.size() > key.size() && tok.text.substr(0, key.size()) == key &&
      tok.text[key.size()] == '=')
    return tok.text.substr(key.size() + 1);
  return std::nullopt;
}

inline std::string_view key_of(const Token& tok) {
  auto eq = tok.text.find('=');
  return eq == std::string_view::npos ? std::string_view{} : tok.text.substr(0, eq);
}

}  // namespace hexlink::detail
