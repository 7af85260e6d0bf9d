#include "dkg/fact_corpus.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <utility>

#include <json.hpp>

#include "dkg/error.hpp"
#include "dkg/text.hpp"

namespace dkg {

using nlohmann::json;
using nlohmann::ordered_json;

TokenSpan TokenSpan::from_text(std::string_view raw, std::optional<std::vector<std::string>> pos) {
  TokenSpan span;
  span.text = collapse_whitespace(raw);
  span.tokens = split_words(ascii_lower(span.text));
  if (span.tokens.empty()) throw InvalidArgument("empty text");
  if (pos && pos->size() != span.tokens.size()) {
    throw InvalidArgument("pos has " + std::to_string(pos->size()) + " tags for " +
                          std::to_string(span.tokens.size()) + " tokens");
  }
  span.pos = std::move(pos);
  return span;
}

std::string TokenSpan::key() const { return join(tokens, " "); }

namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return fields;
}

std::uint64_t parse_sentence_id(std::string_view text, std::size_t line) {
  std::string trimmed = collapse_whitespace(text);
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(trimmed.data(), trimmed.data() + trimmed.size(), value);
  if (trimmed.empty() || ec != std::errc() || ptr != trimmed.data() + trimmed.size()) {
    throw MalformedRecord(line, "sentence_id is not a non-negative integer: '" + trimmed + "'");
  }
  return value;
}

TokenSpan span_field(std::string_view name, std::string_view text,
                     std::optional<std::vector<std::string>> pos, std::size_t line) {
  try {
    return TokenSpan::from_text(text, std::move(pos));
  } catch (const InvalidArgument& e) {
    throw MalformedRecord(line, std::string(name) + ": " + e.what());
  }
}

Fact parse_tsv(std::string_view record, std::size_t line) {
  auto fields = split_tabs(record);
  if (fields.size() != 5) {
    throw MalformedRecord(line, "expected 5 tab-separated fields, found " +
                                    std::to_string(fields.size()));
  }
  Fact fact;
  fact.doc_id = collapse_whitespace(fields[0]);
  if (fact.doc_id.empty()) throw MalformedRecord(line, "doc_id is empty");
  fact.sentence_id = parse_sentence_id(fields[1], line);
  fact.head = span_field("head", fields[2], std::nullopt, line);
  fact.rel = span_field("rel", fields[3], std::nullopt, line);
  fact.tail = span_field("tail", fields[4], std::nullopt, line);
  return fact;
}

TokenSpan span_from_json(const json& record, const char* name, std::size_t line) {
  if (!record.contains(name)) throw MalformedRecord(line, std::string("missing field '") + name + "'");
  const json& node = record.at(name);
  if (!node.is_object() || !node.contains("text") || !node.at("text").is_string()) {
    throw MalformedRecord(line, std::string(name) + ": expected {\"text\": string}");
  }
  std::optional<std::vector<std::string>> pos;
  if (node.contains("pos") && !node.at("pos").is_null()) {
    const json& tags = node.at("pos");
    if (!tags.is_array()) throw MalformedRecord(line, std::string(name) + ".pos must be an array");
    pos.emplace();
    for (const auto& tag : tags) {
      if (!tag.is_string()) throw MalformedRecord(line, std::string(name) + ".pos entries must be strings");
      pos->push_back(tag.get<std::string>());
    }
  }
  return span_field(name, node.at("text").get<std::string>(), std::move(pos), line);
}

Fact parse_jsonl(std::string_view record, std::size_t line) {
  json parsed = json::parse(record, nullptr, false);
  if (parsed.is_discarded() || !parsed.is_object()) throw MalformedRecord(line, "invalid JSON object");
  Fact fact;
  if (!parsed.contains("doc_id") || !parsed.at("doc_id").is_string()) {
    throw MalformedRecord(line, "missing string field 'doc_id'");
  }
  fact.doc_id = collapse_whitespace(parsed.at("doc_id").get<std::string>());
  if (fact.doc_id.empty()) throw MalformedRecord(line, "doc_id is empty");
  if (!parsed.contains("sentence_id") || !parsed.at("sentence_id").is_number_integer() ||
      parsed.at("sentence_id").get<std::int64_t>() < 0) {
    throw MalformedRecord(line, "missing non-negative integer field 'sentence_id'");
  }
  fact.sentence_id = parsed.at("sentence_id").get<std::uint64_t>();
  fact.head = span_from_json(parsed, "head", line);
  fact.rel = span_from_json(parsed, "rel", line);
  fact.tail = span_from_json(parsed, "tail", line);
  return fact;
}

ordered_json span_to_json(const TokenSpan& span) {
  ordered_json out;
  out["text"] = span.text;
  if (span.pos) out["pos"] = *span.pos;
  return out;
}

}  // namespace

Fact parse_fact_record(std::string_view record, std::size_t line_number) {
  if (!record.empty() && record.back() == '\r') record.remove_suffix(1);
  std::size_t first = record.find_first_not_of(" \t");
  if (first != std::string_view::npos && record[first] == '{') {
    return parse_jsonl(record.substr(first), line_number);
  }
  return parse_tsv(record, line_number);
}

std::string serialize_fact(const Fact& fact) {
  ordered_json out;
  out["doc_id"] = fact.doc_id;
  out["sentence_id"] = fact.sentence_id;
  out["head"] = span_to_json(fact.head);
  out["rel"] = span_to_json(fact.rel);
  out["tail"] = span_to_json(fact.tail);
  return out.dump();
}

std::string serialize_fact_tsv(const Fact& fact) {
  return fact.doc_id + '\t' + std::to_string(fact.sentence_id) + '\t' + fact.head.text + '\t' +
         fact.rel.text + '\t' + fact.tail.text;
}

std::string fact_key(const Fact& fact) {
  return fact.head.key() + " :: " + fact.rel.key() + " :: " + fact.tail.key();
}

Corpus::Corpus(std::vector<Fact> facts) {
  // Group by document, keeping first-appearance order of documents.
  std::vector<std::vector<Fact>> groups;
  std::map<std::string, std::size_t, std::less<>> group_of;
  for (auto& fact : facts) {
    auto [it, inserted] = group_of.try_emplace(fact.doc_id, groups.size());
    if (inserted) groups.emplace_back();
    groups[it->second].push_back(std::move(fact));
  }
  for (auto& group : groups) {
    DocRange range{group.front().doc_id, facts_.size(), facts_.size() + group.size()};
    doc_lookup_.emplace(range.doc_id, docs_.size());
    docs_.push_back(std::move(range));
    for (auto& fact : group) facts_.push_back(std::move(fact));
  }
  for (const auto& fact : facts_) {
    ++entity_freq_[fact.head.key()];
    ++entity_freq_[fact.tail.key()];
    ++rel_freq_[fact.rel.key()];
    ++fact_freq_[fact_key(fact)];
  }
}

std::span<const Fact> Corpus::document_facts(std::size_t doc) const {
  const DocRange& range = docs_.at(doc);
  return std::span<const Fact>(facts_).subspan(range.begin, range.end - range.begin);
}

const DocRange* Corpus::find_document(std::string_view doc_id) const {
  auto it = doc_lookup_.find(doc_id);
  return it == doc_lookup_.end() ? nullptr : &docs_[it->second];
}

CorpusSummary Corpus::summary() const {
  std::set<std::pair<std::string_view, std::uint64_t>> sentences;
  for (const auto& fact : facts_) sentences.emplace(fact.doc_id, fact.sentence_id);
  return CorpusSummary{docs_.size(), sentences.size(), facts_.size(), entity_freq_.size(),
                       rel_freq_.size()};
}

namespace {

void read_records(std::istream& in, ErrorPolicy policy, std::vector<Fact>& facts,
                  std::vector<SkippedRecord>& skipped, std::size_t& line) {
  std::string record;
  while (std::getline(in, record)) {
    ++line;
    std::string_view view = record;
    if (!view.empty() && view.back() == '\r') view.remove_suffix(1);
    if (view.find_first_not_of(" \t") == std::string_view::npos || view.front() == '#') continue;
    try {
      facts.push_back(parse_fact_record(view, line));
    } catch (const MalformedRecord& e) {
      if (policy == ErrorPolicy::abort) throw;
      skipped.push_back({e.line(), e.reason()});
    }
  }
}

}  // namespace

Corpus load_corpus(std::istream& in, ErrorPolicy policy) {
  std::vector<Fact> facts;
  std::vector<SkippedRecord> skipped;
  std::size_t line = 0;
  read_records(in, policy, facts, skipped, line);
  Corpus corpus(std::move(facts));
  corpus.skipped = std::move(skipped);
  return corpus;
}

Corpus load_corpus_files(std::span<const std::filesystem::path> paths, ErrorPolicy policy) {
  std::vector<Fact> facts;
  std::vector<SkippedRecord> skipped;
  for (const auto& path : paths) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open fact file: " + path.string());
    std::size_t line = 0;
    try {
      read_records(in, policy, facts, skipped, line);
    } catch (const MalformedRecord& e) {
      throw MalformedRecord(e.line(), path.string() + ": " + e.reason());
    }
  }
  Corpus corpus(std::move(facts));
  corpus.skipped = std::move(skipped);
  return corpus;
}

Corpus filter_by_fact_frequency(const Corpus& corpus, std::uint64_t min_freq) {
  std::vector<Fact> kept;
  for (const auto& fact : corpus.facts()) {
    if (corpus.fact_freq().at(fact_key(fact)) >= min_freq) kept.push_back(fact);
  }
  Corpus filtered(std::move(kept));
  filtered.skipped = corpus.skipped;
  return filtered;
}

}  // namespace dkg
