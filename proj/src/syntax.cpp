#include "dkg/syntax.hpp"

#include <algorithm>
#include <map>

#include "dkg/error.hpp"
#include "dkg/text.hpp"

namespace dkg {

const std::array<std::string_view, 30>& published_entity_words() {
  static constexpr std::array<std::string_view, 30> kWords = {
      "the",     "a",        "an",      "first",       "one",     "data",     "second", "device",
      "or",      "system",   "said",    "and",         "other",   "each",     "portion", "information",
      "surface", "more",     "signal",  "invention",   "layer",   "method",   "user",   "control",
      "any",     "at",       "least",   "material",    "end",     "unit"};
  return kWords;
}

namespace {

WordSet with_lexicons(WordSet words, const Lexicons& lexicons) {
  words.insert(lexicons.pronouns.begin(), lexicons.pronouns.end());
  words.insert(lexicons.prepositions.begin(), lexicons.prepositions.end());
  return words;
}

bool is_pos_placeholder(std::string_view token) {
  if (token.size() < 2) return false;
  return std::all_of(token.begin(), token.end(), [](char c) { return (c >= 'A' && c <= 'Z') || c == '$'; });
}

}  // namespace

RetentionSet top_frequent_words(const Corpus& corpus, Field field, std::size_t n, const Lexicons& lexicons) {
  if (corpus.empty()) throw EmptyCorpus("cannot rank words of an empty corpus");
  std::map<std::string, std::uint64_t> counts;
  for (const auto& fact : corpus.facts()) {
    if (field == Field::entities) {
      for (const auto& token : fact.head.tokens) ++counts[token];
      for (const auto& token : fact.tail.tokens) ++counts[token];
    } else {
      for (const auto& token : fact.rel.tokens) ++counts[token];
    }
  }
  std::vector<std::pair<std::string, std::uint64_t>> ranked(counts.begin(), counts.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  WordSet top;
  for (std::size_t i = 0; i < std::min(n, ranked.size()); ++i) top.insert(ranked[i].first);
  return RetentionSet(with_lexicons(std::move(top), lexicons));
}

RetentionSet published_entity_retention(const Lexicons& lexicons) {
  WordSet words;
  for (auto word : published_entity_words()) words.emplace(word);
  return RetentionSet(with_lexicons(std::move(words), lexicons));
}

std::string SyntaxString::text() const { return join(tokens, " "); }

SyntaxString to_syntax(const TokenSpan& span, const RetentionSet& retain) {
  if (!span.pos) throw MissingPos("span '" + span.text + "' has no POS tags");
  SyntaxString syntax;
  syntax.tokens.reserve(span.tokens.size());
  for (std::size_t i = 0; i < span.tokens.size(); ++i) {
    syntax.tokens.push_back(retain.contains(span.tokens[i]) ? span.tokens[i] : (*span.pos)[i]);
  }
  return syntax;
}

HierarchyLexicon HierarchyLexicon::from_patterns(const std::vector<std::string>& patterns) {
  HierarchyLexicon lex;
  for (const auto& raw : patterns) {
    Pattern pattern;
    pattern.text = collapse_whitespace(raw);
    for (const auto& word : split_words(pattern.text)) {
      if (word.size() > 1 && word.back() == '*') {
        pattern.tokens.push_back({TokenKind::prefix, ascii_lower(word.substr(0, word.size() - 1))});
      } else if (is_pos_placeholder(word)) {
        pattern.tokens.push_back({TokenKind::pos, word});
      } else {
        pattern.tokens.push_back({TokenKind::literal, ascii_lower(word)});
      }
    }
    if (!pattern.tokens.empty()) lex.patterns_.push_back(std::move(pattern));
  }
  if (lex.patterns_.empty()) throw InvalidArgument("hierarchy lexicon has no patterns");
  auto lexical = [](const Pattern& p) {
    return std::count_if(p.tokens.begin(), p.tokens.end(),
                         [](const PatternToken& t) { return t.kind != TokenKind::pos; });
  };
  std::stable_sort(lex.patterns_.begin(), lex.patterns_.end(), [&](const Pattern& a, const Pattern& b) {
    if (a.tokens.size() != b.tokens.size()) return a.tokens.size() > b.tokens.size();
    return lexical(a) > lexical(b);
  });
  return lex;
}

HierarchyLexicon HierarchyLexicon::defaults(const Lexicons& lexicons) {
  return from_patterns(lexicons.hierarchy_patterns);
}

std::vector<std::string> HierarchyLexicon::patterns() const {
  std::vector<std::string> out;
  for (const auto& p : patterns_) out.push_back(p.text);
  return out;
}

std::optional<std::string> HierarchyLexicon::match(const TokenSpan& rel) const {
  for (const auto& pattern : patterns_) {
    if (pattern.tokens.size() != rel.tokens.size()) continue;
    bool ok = true;
    for (std::size_t i = 0; ok && i < rel.tokens.size(); ++i) {
      const auto& want = pattern.tokens[i];
      const auto& word = rel.tokens[i];
      switch (want.kind) {
        case TokenKind::literal:
          ok = word == want.value;
          break;
        case TokenKind::prefix:
          ok = word.starts_with(want.value);
          break;
        case TokenKind::pos:
          ok = rel.pos && (*rel.pos)[i] == want.value;
          break;
      }
    }
    if (ok) return pattern.text;
  }
  return std::nullopt;
}

std::optional<std::string> match_hierarchy(const TokenSpan& rel, const HierarchyLexicon& lex) {
  return lex.match(rel);
}

}  // namespace dkg
