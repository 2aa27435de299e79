#pragma once

#include <functional>
#include <istream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace volatext {

using TokenSentence = std::vector<std::string>;

/// Maps a (lowercased) token to its stem. An empty function means no stemming.
using Stemmer = std::function<std::string(std::string_view)>;

struct TokenizerConfig {
  /// Characters that end a sentence. Everything else that is not a word
  /// character only separates tokens.
  std::string sentence_terminators = ".!?";
  bool lowercase = true;
  /// Drop stopwords during tokenization. When false but `stopwords` is
  /// non-empty, stopwords are kept and flagged in the vocabulary instead.
  bool remove_stopwords = false;
  std::unordered_set<std::string> stopwords;
  Stemmer stemmer;

  bool is_stopword(const std::string& token) const { return stopwords.count(token) != 0; }
};

/// Splits text into sentences of word tokens. A token is a maximal run of
/// ASCII letters, digits, underscores, apostrophes inside a word, or any
/// non-ASCII byte (so UTF-8 letters stay intact). Sentences that end up
/// empty are dropped.
std::vector<TokenSentence> tokenize(std::string_view text, const TokenizerConfig& config);

/// Reads one stopword per line; blank lines and lines starting with '#' are
/// ignored. Words are lowercased.
std::unordered_set<std::string> read_stopwords(std::istream& in);

}  // namespace volatext
