#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dkg {

// One entity or relationship mention. `text` keeps the surface casing (the
// fallback tagger uses it for proper nouns); `tokens` are case-folded.
struct TokenSpan {
  std::string text;
  std::vector<std::string> tokens;
  std::optional<std::vector<std::string>> pos;

  // Builds a span from raw text; throws InvalidArgument when the text is blank
  // or when `pos` does not have one tag per token.
  static TokenSpan from_text(std::string_view raw,
                             std::optional<std::vector<std::string>> pos = std::nullopt);

  // Normalized identity key (case-folded, whitespace-collapsed).
  std::string key() const;

  bool operator==(const TokenSpan&) const = default;
};

struct Fact {
  std::string doc_id;
  std::uint64_t sentence_id = 0;
  TokenSpan head;
  TokenSpan rel;
  TokenSpan tail;

  bool operator==(const Fact&) const = default;
};

// Parses one TSV (`doc_id\tsentence_id\thead\trel\ttail`) or JSONL record.
// Records starting with '{' are treated as JSONL. Throws MalformedRecord.
Fact parse_fact_record(std::string_view record, std::size_t line_number = 0);

// JSONL form that parse_fact_record reads back to an equal Fact.
std::string serialize_fact(const Fact& fact);
std::string serialize_fact_tsv(const Fact& fact);

struct DocRange {
  std::string doc_id;
  std::size_t begin = 0;
  std::size_t end = 0;
};

struct CorpusSummary {
  std::size_t documents = 0;
  std::size_t sentences_with_facts = 0;
  std::size_t facts = 0;
  std::size_t unique_entities = 0;
  std::size_t unique_relationships = 0;
};

enum class ErrorPolicy { abort, skip };

struct SkippedRecord {
  std::size_t line = 0;
  std::string reason;
};

// Facts grouped by document (documents ordered by first appearance, facts in
// input order within a document) plus frequency tables keyed by normalized
// text. Duplicate facts are kept and counted.
class Corpus {
 public:
  Corpus() = default;
  explicit Corpus(std::vector<Fact> facts);

  std::span<const Fact> facts() const { return facts_; }
  const std::vector<DocRange>& documents() const { return docs_; }
  std::span<const Fact> document_facts(std::size_t doc) const;
  const DocRange* find_document(std::string_view doc_id) const;

  const std::map<std::string, std::uint64_t>& entity_freq() const { return entity_freq_; }
  const std::map<std::string, std::uint64_t>& rel_freq() const { return rel_freq_; }
  // Keyed by "head :: rel :: tail" over normalized keys.
  const std::map<std::string, std::uint64_t>& fact_freq() const { return fact_freq_; }

  CorpusSummary summary() const;
  bool empty() const { return facts_.empty(); }

  std::vector<SkippedRecord> skipped;

 private:
  std::vector<Fact> facts_;
  std::vector<DocRange> docs_;
  std::map<std::string, std::size_t, std::less<>> doc_lookup_;
  std::map<std::string, std::uint64_t> entity_freq_;
  std::map<std::string, std::uint64_t> rel_freq_;
  std::map<std::string, std::uint64_t> fact_freq_;
};

std::string fact_key(const Fact& fact);

Corpus load_corpus(std::istream& in, ErrorPolicy policy = ErrorPolicy::abort);
// Loads several shards and merges them in the given order.
Corpus load_corpus_files(std::span<const std::filesystem::path> paths,
                         ErrorPolicy policy = ErrorPolicy::abort);

// Keeps facts whose normalized triple occurs at least `min_freq` times.
Corpus filter_by_fact_frequency(const Corpus& corpus, std::uint64_t min_freq);

}  // namespace dkg
