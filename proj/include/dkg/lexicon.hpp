#pragma once

#include <filesystem>
#include <istream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace dkg {

using WordSet = std::set<std::string, std::less<>>;

// Reads a newline-delimited word list. Blank lines and '#' comments are
// skipped; entries are lowercased and whitespace-collapsed.
WordSet read_word_list(std::istream& in);
std::vector<std::string> read_pattern_list(std::istream& in);

// The closed-class word lists and the hierarchy pattern list. Defaults are
// compiled in from data/lexicon; any file present in an override directory
// replaces the corresponding default.
struct Lexicons {
  WordSet prepositions;
  WordSet pronouns;
  WordSet determiners;
  std::vector<std::string> hierarchy_patterns;

  static const Lexicons& embedded();
  static Lexicons from_directory(const std::filesystem::path& dir);
  // Honors $DKG_LEXICON_DIR when set, otherwise the embedded defaults.
  static Lexicons from_environment();
};

inline constexpr const char* kLexiconDirEnv = "DKG_LEXICON_DIR";

namespace detail {
std::string_view embedded_prepositions();
std::string_view embedded_pronouns();
std::string_view embedded_determiners();
std::string_view embedded_hierarchy();
}  // namespace detail

}  // namespace dkg
