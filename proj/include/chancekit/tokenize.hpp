#ifndef CHANCEKIT_TOKENIZE_HPP
#define CHANCEKIT_TOKENIZE_HPP

#include <istream>
#include <set>
#include <string>
#include <string_view>

#include "chancekit/core.hpp"
#include "chancekit/stopwords.hpp"

namespace chancekit {

struct TokenizerConfig {
  bool lowercase = true;
  int min_token_len = 2;  // in bytes
  std::set<std::string> stopwords = default_stopwords();
  std::string sentence_delimiters = ".!?\n";
};

namespace detail {

// Token characters: ASCII alphanumerics plus any non-ASCII byte, so
// UTF-8 sequences stay inside one token. Case folding is ASCII-only.
inline bool is_token_char(unsigned char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') ||
         (c >= 'A' && c <= 'Z') || c >= 0x80;
}

inline char fold_ascii(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

}  // namespace detail

// Splits raw text into sentences on cfg.sentence_delimiters, then each
// sentence into tokens on non-alphanumeric runs. Tokens are case-folded
// (when cfg.lowercase), then dropped if shorter than cfg.min_token_len
// or present in cfg.stopwords. Every sentence with at least one
// surviving token becomes one Event; t is the 0-based index over the
// emitted events. Multiplicities are preserved.
inline EventStream tokenize_text(std::string_view raw,
                                 const TokenizerConfig& cfg = {}) {
  EventStream stream;
  std::size_t pos = 0;
  std::string token;
  while (pos <= raw.size()) {
    std::size_t end = raw.size();
    for (std::size_t i = pos; i < raw.size(); ++i) {
      if (cfg.sentence_delimiters.find(raw[i]) != std::string::npos) {
        end = i;
        break;
      }
    }

    Event event;
    event.t = static_cast<Tick>(stream.size());
    std::size_t i = pos;
    while (i < end) {
      if (!detail::is_token_char(static_cast<unsigned char>(raw[i]))) {
        ++i;
        continue;
      }
      token.clear();
      while (i < end &&
             detail::is_token_char(static_cast<unsigned char>(raw[i]))) {
        token.push_back(cfg.lowercase ? detail::fold_ascii(raw[i]) : raw[i]);
        ++i;
      }
      if (static_cast<int>(token.size()) < cfg.min_token_len) continue;
      if (cfg.stopwords.count(token)) continue;
      event.items[token] += 1;
    }
    if (!event.items.empty()) stream.push_back(std::move(event));

    if (end == raw.size()) break;
    pos = end + 1;
  }
  return stream;
}

// One token per line; blank lines ignored. Tokens are stored verbatim
// apart from surrounding whitespace.
inline std::set<std::string> load_stopwords(std::istream& in) {
  std::set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    words.insert(line.substr(first, last - first + 1));
  }
  return words;
}

}  // namespace chancekit

#endif  // CHANCEKIT_TOKENIZE_HPP
