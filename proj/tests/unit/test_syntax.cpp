#include <doctest.h>

#include <fstream>
#include <sstream>

#include "dkg/error.hpp"
#include "dkg/pos_tagger.hpp"
#include "dkg/syntax.hpp"

using namespace dkg;

namespace {

TokenSpan tagged(const std::string& text, std::vector<std::string> pos) { return TokenSpan::from_text(text, pos); }

TokenSpan plain(const std::string& text) { return tag_tokens(TokenSpan::from_text(text), PosTagger()); }

}  // namespace

TEST_SUITE("syntax") {
  TEST_CASE("fixed entity list") {
    const auto& words = published_entity_words();
    CHECK(words.size() == 30);
    CHECK(words[0] == "the");
    CHECK(words[5] == "data");
    CHECK(words[29] == "unit");
    const auto retain = published_entity_retention();
    for (auto w : words) CHECK(retain.contains(w));
    CHECK(retain.contains("all"));
    CHECK(retain.contains("within"));
    CHECK_FALSE(retain.contains("shake"));
  }

  TEST_CASE("entity examples under the fixed list") {
    const auto retain = published_entity_retention();
    CHECK(to_syntax(tagged("a shake", {"DT", "NN"}), retain).text() == "a NN");
    CHECK(to_syntax(tagged("the cured spar assembly", {"DT", "JJ", "NNP", "NNP"}), retain).text() ==
          "the JJ NNP NNP");
    CHECK(to_syntax(tagged("the spectrometer field", {"DT", "JJ", "NN"}), retain).text() == "the JJ NN");
    CHECK(to_syntax(tagged("all three erase blocks", {"DT", "CD", "NN", "NNS"}), retain).text() == "all CD NN NNS");
    CHECK(to_syntax(tagged("the main antenna signal", {"DT", "JJ", "NN", "NN"}), retain).text() ==
          "the JJ NN signal");
  }

  TEST_CASE("syntax needs tags") {
    CHECK_THROWS_AS(to_syntax(TokenSpan::from_text("a shake"), published_entity_retention()), MissingPos);
  }

  TEST_CASE("full retention is the identity and length is preserved") {
    const RetentionSet all(WordSet{"the", "main", "antenna", "signal"});
    const auto span = tagged("The Main antenna signal", {"DT", "JJ", "NN", "NN"});
    CHECK(to_syntax(span, all).text() == "the main antenna signal");
    for (const auto& text : {"a", "the big red box", "one of the two cells"}) {
      CHECK(to_syntax(plain(text), published_entity_retention()).tokens.size() == plain(text).tokens.size());
    }
  }

  TEST_CASE("top frequent words") {
    std::istringstream in("D\t0\ta shake\tof\ta box\n");
    const auto corpus = load_corpus(in);
    const auto lex = Lexicons::embedded();
    const auto one = top_frequent_words(corpus, Field::entities, 1);
    CHECK(one.contains("a"));
    CHECK_FALSE(one.contains("shake"));
    CHECK_FALSE(one.contains("box"));
    CHECK(one.size() == [&] {
      WordSet merged = lex.pronouns;
      merged.insert(lex.prepositions.begin(), lex.prepositions.end());
      merged.insert("a");
      return merged.size();
    }());
    const auto none = top_frequent_words(corpus, Field::entities, 0);
    CHECK_FALSE(none.contains("a"));
    CHECK_FALSE(none.contains("shake"));
    CHECK(none.contains("of"));
    const auto rel = top_frequent_words(corpus, Field::relationships, 5);
    CHECK(rel.contains("of"));
    CHECK_FALSE(rel.contains("a"));
    CHECK_THROWS_AS(top_frequent_words(Corpus{}, Field::entities, 3), EmptyCorpus);
  }

  TEST_CASE("ties are broken alphabetically") {
    std::istringstream in("D\t0\tzeta yak\tof\txi zeta\nD\t1\tyak\tof\tkappa\n");
    const auto corpus = load_corpus(in);
    // zeta 2, yak 2, xi 1, kappa 1
    const auto two = top_frequent_words(corpus, Field::entities, 2);
    CHECK(two.contains("zeta"));
    CHECK(two.contains("yak"));
    CHECK_FALSE(two.contains("kappa"));
    const auto three = top_frequent_words(corpus, Field::entities, 3);
    CHECK(three.contains("kappa"));
    CHECK_FALSE(three.contains("xi"));
  }

  TEST_CASE("hierarchy lexicon matches") {
    const auto lex = HierarchyLexicon::defaults();
    CHECK(lex.match(plain("includes")) == std::optional<std::string>("includ*"));
    CHECK(lex.match(plain("comprising")) == std::optional<std::string>("compris*"));
    CHECK(lex.match(plain("consisting of")) == std::optional<std::string>("consist* of"));
    CHECK(lex.match(plain("not include")) == std::optional<std::string>("not includ*"));
    CHECK(lex.match(plain("is part of")) == std::optional<std::string>("is part of"));
    CHECK_FALSE(lex.match(plain("connected to")).has_value());
    CHECK_FALSE(lex.match(plain("of")).has_value());
    CHECK(match_hierarchy(plain("Wherein"), lex) == std::optional<std::string>("wherein"));
  }

  TEST_CASE("pos placeholders") {
    const auto lex = HierarchyLexicon::from_patterns({"includ*", "RB includ*", "includ* NN"});
    CHECK(lex.match(tagged("further includes", {"RB", "VBZ"})) == std::optional<std::string>("RB includ*"));
    CHECK(lex.match(plain("further includes")) == std::nullopt);  // fallback tagger: NN
    CHECK(lex.match(tagged("includes glass", {"VBZ", "NN"})) == std::optional<std::string>("includ* NN"));
    CHECK_FALSE(lex.match(TokenSpan::from_text("further includes")).has_value());
  }

  TEST_CASE("specific patterns are tried first") {
    const auto lex = HierarchyLexicon::from_patterns({"RB includ*", "includ*", "not includ*"});
    CHECK(lex.match(plain("not including")) == std::optional<std::string>("not includ*"));
    CHECK(lex.patterns().front() == "not includ*");
  }

  TEST_CASE("lexicon files") {
    std::istringstream in("# header\nincludes\n\n  part   of \n");
    const auto patterns = read_pattern_list(in);
    CHECK(patterns == std::vector<std::string>{"includes", "part of"});
    CHECK_THROWS_AS(HierarchyLexicon::from_patterns({}), InvalidArgument);
  }
}
