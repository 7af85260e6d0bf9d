#include "dkg/lexicon.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "dkg/error.hpp"
#include "dkg/text.hpp"

namespace dkg {

namespace {

std::vector<std::string> read_lines(std::istream& in) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    std::string cleaned = collapse_whitespace(line);
    if (cleaned.empty() || cleaned.front() == '#') continue;
    lines.push_back(std::move(cleaned));
  }
  return lines;
}

WordSet words_from(std::string_view text) {
  std::istringstream in{std::string(text)};
  return read_word_list(in);
}

std::vector<std::string> patterns_from(std::string_view text) {
  std::istringstream in{std::string(text)};
  return read_pattern_list(in);
}

}  // namespace

WordSet read_word_list(std::istream& in) {
  WordSet words;
  for (auto& line : read_lines(in)) words.insert(ascii_lower(line));
  return words;
}

// Patterns keep their case: upper-case tokens are POS placeholders.
std::vector<std::string> read_pattern_list(std::istream& in) { return read_lines(in); }

const Lexicons& Lexicons::embedded() {
  static const Lexicons lex{
      words_from(detail::embedded_prepositions()),
      words_from(detail::embedded_pronouns()),
      words_from(detail::embedded_determiners()),
      patterns_from(detail::embedded_hierarchy()),
  };
  return lex;
}

Lexicons Lexicons::from_directory(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw InvalidArgument("lexicon directory not found: " + dir.string());
  }
  Lexicons lex = embedded();
  auto open = [&](const char* name) -> std::ifstream {
    return std::ifstream(dir / name);
  };
  if (auto in = open("prepositions.txt")) lex.prepositions = read_word_list(in);
  if (auto in = open("pronouns.txt")) lex.pronouns = read_word_list(in);
  if (auto in = open("determiners.txt")) lex.determiners = read_word_list(in);
  if (auto in = open("hierarchy.txt")) lex.hierarchy_patterns = read_pattern_list(in);
  return lex;
}

Lexicons Lexicons::from_environment() {
  const char* dir = std::getenv(kLexiconDirEnv);
  if (dir == nullptr || *dir == '\0') return embedded();
  return from_directory(dir);
}

}  // namespace dkg
