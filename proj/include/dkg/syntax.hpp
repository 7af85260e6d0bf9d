#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dkg/fact_corpus.hpp"
#include "dkg/lexicon.hpp"

namespace dkg {

enum class Field { entities, relationships };

// Words kept verbatim when converting a span to its syntax.
class RetentionSet {
 public:
  RetentionSet() = default;
  explicit RetentionSet(WordSet words) : words_(std::move(words)) {}

  bool contains(std::string_view word) const { return words_.contains(word); }
  const WordSet& words() const { return words_; }
  std::size_t size() const { return words_.size(); }

 private:
  WordSet words_;
};

// The fixed list of the 30 most frequent entity words used for reproducing
// the published entity syntaxes.
const std::array<std::string_view, 30>& published_entity_words();

// Top `n` word tokens of the chosen field (counted over every mention, ties
// lexicographic) merged with the pronoun and preposition lexicons.
// Throws EmptyCorpus.
RetentionSet top_frequent_words(const Corpus& corpus, Field field, std::size_t n,
                                const Lexicons& lexicons = Lexicons::embedded());

// published_entity_words() merged with the pronoun and preposition lexicons.
RetentionSet published_entity_retention(const Lexicons& lexicons = Lexicons::embedded());

struct SyntaxString {
  std::vector<std::string> tokens;
  std::string text() const;
};

// Replaces every non-retained token by its POS tag. Throws MissingPos.
SyntaxString to_syntax(const TokenSpan& span, const RetentionSet& retain);

// Ordered relationship patterns. Tokens are literals, prefix wildcards
// ("includ*") or POS placeholders ("VBG"). Matching needs equal token count;
// patterns are tried longest first, then most literal first, then in file
// order, so "not includ*" wins over "RB includ*".
class HierarchyLexicon {
 public:
  static HierarchyLexicon from_patterns(const std::vector<std::string>& patterns);
  static HierarchyLexicon defaults(const Lexicons& lexicons = Lexicons::embedded());

  std::optional<std::string> match(const TokenSpan& rel) const;
  std::size_t size() const { return patterns_.size(); }
  std::vector<std::string> patterns() const;

 private:
  enum class TokenKind { literal, prefix, pos };
  struct PatternToken {
    TokenKind kind;
    std::string value;
  };
  struct Pattern {
    std::string text;
    std::vector<PatternToken> tokens;
  };
  std::vector<Pattern> patterns_;
};

// First matching pattern, or nullopt. POS placeholders only match when the
// span carries tags.
std::optional<std::string> match_hierarchy(const TokenSpan& rel, const HierarchyLexicon& lex);

}  // namespace dkg
