#include "dkg/pos_tagger.hpp"

#include <array>
#include <string_view>
#include <utility>

#include "dkg/text.hpp"

namespace dkg {

namespace {

constexpr std::array<std::string_view, 4> kConjunctions = {"and", "but", "nor", "or"};

constexpr std::array<std::string_view, 28> kNumberWords = {
    "zero",     "one",      "two",       "three",    "four",     "five",    "six",
    "seven",    "eight",    "nine",      "ten",      "eleven",   "twelve",  "thirteen",
    "fourteen", "fifteen",  "sixteen",   "seventeen", "eighteen", "nineteen", "twenty",
    "thirty",   "forty",    "fifty",     "hundred",  "thousand", "million", "billion"};

// Auxiliaries and negation that show up constantly in relationships.
constexpr std::array<std::pair<std::string_view, std::string_view>, 12> kAuxiliaries = {{
    {"is", "VBZ"},
    {"are", "VBP"},
    {"was", "VBD"},
    {"were", "VBD"},
    {"be", "VB"},
    {"been", "VBN"},
    {"being", "VBG"},
    {"has", "VBZ"},
    {"have", "VBP"},
    {"had", "VBD"},
    {"not", "RB"},
    {"can", "MD"},
}};

constexpr std::array<std::string_view, 4> kParticles = {"out", "away", "back", "apart"};

constexpr std::array<std::string_view, 7> kPossessives = {"my", "your", "his", "her", "its", "our",
                                                          "their"};

template <std::size_t N>
bool contains(const std::array<std::string_view, N>& list, std::string_view word) {
  for (auto entry : list) {
    if (entry == word) return true;
  }
  return false;
}

bool ends_with(std::string_view word, std::string_view suffix) {
  return word.size() >= suffix.size() && word.substr(word.size() - suffix.size()) == suffix;
}

// Leading digit is enough: "100°", "5mm" and "3.5" all read as cardinals.
bool is_numeric(std::string_view word) { return starts_with_digit(word); }

bool is_capitalized(std::string_view word) { return !word.empty() && word.front() >= 'A' && word.front() <= 'Z'; }

}  // namespace

PosTagger::PosTagger(const Lexicons& lexicons)
    : determiners_(lexicons.determiners),
      prepositions_(lexicons.prepositions),
      pronouns_(lexicons.pronouns) {}

std::string PosTagger::tag_word(const std::string& word, std::size_t position) const {
  const std::string lower = ascii_lower(word);
  if (determiners_.contains(lower)) return "DT";
  if (contains(kConjunctions, lower)) return "CC";
  if (lower == "to") return "TO";
  if (prepositions_.contains(lower)) return "IN";
  if (contains(kParticles, lower)) return "RP";
  if (is_numeric(lower) || contains(kNumberWords, lower)) return "CD";
  for (const auto& [aux, tag] : kAuxiliaries) {
    if (aux == lower) return std::string(tag);
  }
  if (pronouns_.contains(lower)) return contains(kPossessives, lower) ? "PRP$" : "PRP";
  if (position > 0 && is_capitalized(word)) return "NNP";
  if (lower.size() > 4 && ends_with(lower, "ing")) return "VBG";
  if (lower.size() > 3 && ends_with(lower, "ed")) return "VBN";
  if (lower.size() > 3 && ends_with(lower, "ly")) return "RB";
  if (lower.size() > 3 && ends_with(lower, "s") && !ends_with(lower, "ss") &&
      !ends_with(lower, "us") && !ends_with(lower, "is")) {
    return "NNS";
  }
  return "NN";
}

std::vector<std::string> PosTagger::tag(std::span<const std::string> words) const {
  std::vector<std::string> tags;
  tags.reserve(words.size());
  for (std::size_t i = 0; i < words.size(); ++i) tags.push_back(tag_word(words[i], i));
  return tags;
}

TokenSpan tag_tokens(const TokenSpan& span, const PosTagger& tagger) {
  if (span.pos) return span;
  TokenSpan tagged = span;
  // Surface words carry the casing; they align 1:1 with the folded tokens.
  tagged.pos = tagger.tag(split_words(span.text));
  return tagged;
}

}  // namespace dkg
