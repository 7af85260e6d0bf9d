#pragma once

#include <span>
#include <string>
#include <vector>

#include "dkg/fact_corpus.hpp"
#include "dkg/lexicon.hpp"

namespace dkg {

// Deterministic rule-based Penn Treebank tagger used when input records carry
// no tags. Closed-class lexicons first (DT, CC, TO/IN, CD, PRP, a few
// auxiliaries), then capitalization (NNP) and suffix rules (VBG, VBN, RB,
// NNS), defaulting to NN. It is an approximation, not a statistical tagger.
class PosTagger {
 public:
  explicit PosTagger(const Lexicons& lexicons = Lexicons::embedded());

  // `words` keep their surface casing.
  std::vector<std::string> tag(std::span<const std::string> words) const;

 private:
  std::string tag_word(const std::string& word, std::size_t position) const;

  WordSet determiners_;
  WordSet prepositions_;
  WordSet pronouns_;
};

// Returns `span` with pos filled by the fallback tagger. Spans that already
// carry tags are returned unchanged.
TokenSpan tag_tokens(const TokenSpan& span, const PosTagger& tagger);

}  // namespace dkg
