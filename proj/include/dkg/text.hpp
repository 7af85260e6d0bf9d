#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace dkg {

// Trims and collapses runs of ASCII whitespace to a single space.
std::string collapse_whitespace(std::string_view text);

// ASCII case folding; bytes outside ASCII (UTF-8 continuation etc.) pass through.
std::string ascii_lower(std::string_view text);

// Key used for entity/relationship identity: case-folded, whitespace-collapsed.
std::string normalize_key(std::string_view text);

std::vector<std::string> split_words(std::string_view text);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

bool starts_with_digit(std::string_view word);

}  // namespace dkg
