#include "volatext/tokenizer.hpp"

#include <algorithm>

namespace volatext {
namespace {

bool is_word_byte(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
         c == '_' || c >= 0x80;
}

char ascii_lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

}  // namespace

std::vector<TokenSentence> tokenize(std::string_view text, const TokenizerConfig& config) {
  std::vector<TokenSentence> sentences;
  TokenSentence current;
  std::string token;

  auto flush_token = [&] {
    if (token.empty()) return;
    if (config.lowercase) std::transform(token.begin(), token.end(), token.begin(), ascii_lower);
    if (!(config.remove_stopwords && config.is_stopword(token))) {
      current.push_back(config.stemmer ? config.stemmer(token) : token);
      if (current.back().empty()) current.pop_back();
    }
    token.clear();
  };
  auto flush_sentence = [&] {
    flush_token();
    if (!current.empty()) sentences.push_back(std::move(current));
    current.clear();
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    const auto uc = static_cast<unsigned char>(c);
    if (is_word_byte(uc)) {
      token.push_back(c);
    } else if (c == '\'' && !token.empty() && i + 1 < text.size() &&
               is_word_byte(static_cast<unsigned char>(text[i + 1]))) {
      token.push_back(c);  // don't, Cameron's
    } else if (config.sentence_terminators.find(c) != std::string::npos) {
      flush_sentence();
    } else {
      flush_token();
    }
  }
  flush_sentence();
  return sentences;
}

std::unordered_set<std::string> read_stopwords(std::istream& in) {
  std::unordered_set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t\r");
    std::string word = line.substr(first, last - first + 1);
    std::transform(word.begin(), word.end(), word.begin(), ascii_lower);
    words.insert(std::move(word));
  }
  return words;
}

}  // namespace volatext
