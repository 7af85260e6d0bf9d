#include "dkg/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "dkg/curveball.hpp"
#include "dkg/doc_graph.hpp"
#include "dkg/error.hpp"
#include "dkg/fact_corpus.hpp"
#include "dkg/lexicon.hpp"
#include "dkg/motif.hpp"
#include "dkg/parallel.hpp"
#include "dkg/pos_tagger.hpp"
#include "dkg/subgraph.hpp"
#include "dkg/syntax.hpp"
#include "dkg/text.hpp"
#include "dkg/transforms.hpp"
#include "dkg/zipf.hpp"

namespace dkg::cli {

namespace fs = std::filesystem;

namespace {

class UsageError : public Error {
 public:
  using Error::Error;
};

// Collects artifacts as temporary files and renames them into place only on
// commit; anything uncommitted is deleted.
class Artifacts {
 public:
  explicit Artifacts(fs::path dir) : dir_(std::move(dir)) {}
  Artifacts(const Artifacts&) = delete;
  Artifacts& operator=(const Artifacts&) = delete;
  ~Artifacts() {
    if (committed_) return;
    std::error_code ec;
    for (const auto& [name, stream] : files_) fs::remove(tmp_path(name), ec);
  }

  std::ostream& open(const std::string& name) {
    if (files_.empty()) fs::create_directories(dir_);
    auto stream = std::make_unique<std::ofstream>(tmp_path(name), std::ios::binary | std::ios::trunc);
    if (!*stream) throw Error("cannot write " + (dir_ / name).string());
    auto& ref = *stream;
    files_.emplace_back(name, std::move(stream));
    return ref;
  }

  void commit() {
    for (auto& [name, stream] : files_) {
      stream->close();
      if (!*stream) throw Error("failed writing " + (dir_ / name).string());
    }
    for (const auto& [name, stream] : files_) fs::rename(tmp_path(name), dir_ / name);
    committed_ = true;
  }

 private:
  fs::path tmp_path(const std::string& name) const { return dir_ / (name + ".tmp"); }

  fs::path dir_;
  std::vector<std::pair<std::string, std::unique_ptr<std::ofstream>>> files_;
  bool committed_ = false;
};

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

template <typename... Fields>
void csv_row(std::ostream& os, const Fields&... fields) {
  bool first = true;
  auto put = [&](const auto& f) {
    if (!first) os << ',';
    first = false;
    if constexpr (std::is_convertible_v<decltype(f), std::string_view>) {
      os << csv_field(f);
    } else {
      os << fmt::format("{}", f);
    }
  };
  (put(fields), ...);
  os << '\n';
}

struct CommonOptions {
  std::vector<std::string> inputs;
  std::string out_dir;
  std::string on_error = "abort";
  std::uint64_t min_fact_freq = 1;
  std::size_t jobs = 1;
  std::string lexicon_dir;
};

void add_common(CLI::App* sub, CommonOptions& c, bool needs_out) {
  sub->add_option("inputs", c.inputs, "Fact files (TSV or JSONL)")->required()->check(CLI::ExistingFile);
  auto* out = sub->add_option("-o,--out", c.out_dir, "Output directory");
  if (needs_out) out->required();
  sub->add_option("--on-error", c.on_error, "Malformed record policy")
      ->check(CLI::IsMember({"abort", "skip"}))
      ->capture_default_str();
  sub->add_option("--min-fact-freq", c.min_fact_freq, "Keep facts occurring at least this often")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_option("-j,--jobs", c.jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--lexicon-dir", c.lexicon_dir,
                  std::string("Lexicon override directory (default: $") + kLexiconDirEnv + ")");
}

struct Context {
  Corpus corpus;
  Lexicons lexicons;
};

Context load(const CommonOptions& c) {
  Context ctx;
  ctx.lexicons = c.lexicon_dir.empty() ? Lexicons::from_environment() : Lexicons::from_directory(c.lexicon_dir);
  std::vector<fs::path> paths(c.inputs.begin(), c.inputs.end());
  const auto policy = c.on_error == "skip" ? ErrorPolicy::skip : ErrorPolicy::abort;
  ctx.corpus = load_corpus_files(paths, policy);
  if (c.min_fact_freq > 1) {
    auto skipped = ctx.corpus.skipped;
    ctx.corpus = filter_by_fact_frequency(ctx.corpus, c.min_fact_freq);
    ctx.corpus.skipped = std::move(skipped);
  }
  return ctx;
}

std::vector<DocGraph> build_graphs(const Corpus& corpus, std::size_t jobs) {
  std::vector<DocGraph> graphs(corpus.documents().size());
  parallel_for(graphs.size(), jobs, [&](std::size_t i) { graphs[i] = build_graph(corpus.document_facts(i)); });
  return graphs;
}

const DocGraph& pick_document(const std::vector<DocGraph>& graphs, const std::string& doc) {
  if (doc.empty()) {
    if (graphs.size() == 1) return graphs.front();
    throw UsageError("--doc is required when the corpus has several documents");
  }
  for (const auto& g : graphs) {
    if (g.doc_id() == doc) return g;
  }
  throw UsageError("document '" + doc + "' not found");
}

RetentionSet entity_retention(const Context& ctx, const std::string& mode, std::size_t top_n) {
  if (mode == "paper-list") return published_entity_retention(ctx.lexicons);
  return top_frequent_words(ctx.corpus, Field::entities, top_n, ctx.lexicons);
}

// Entity syntax per node, tagging untagged spans with the fallback tagger.
std::vector<std::string> node_syntaxes(const DocGraph& g, const RetentionSet& retain, const PosTagger& tagger) {
  std::vector<std::string> out;
  out.reserve(g.node_count());
  for (NodeId id = 0; id < g.node_count(); ++id) {
    const auto* span = g.node_span(id);
    TokenSpan s = span ? *span : TokenSpan::from_text(g.node_name(id));
    out.push_back(to_syntax(tag_tokens(s, tagger), retain).text());
  }
  return out;
}

SignatureSet parse_signatures(const std::vector<std::string>& list) {
  SignatureSet out(list.begin(), list.end());
  return out;
}

std::string structural_jsonl(const std::string& doc_id, const DocGraph& names, const Digraph& g) {
  nlohmann::ordered_json j;
  j["doc_id"] = doc_id;
  j["nodes"] = names.nodes();
  auto edges = nlohmann::ordered_json::array();
  for (auto [u, v] : g.edges()) edges.push_back({names.node_name(u), names.node_name(v)});
  j["edges"] = std::move(edges);
  return j.dump();
}

std::string meta_json(const RandomizationRecord& r) {
  nlohmann::ordered_json j;
  j["doc_id"] = r.doc_id;
  j["perturbation"] = r.perturbation;
  j["trades"] = r.trades;
  j["seed"] = r.seed;
  j["reached_target"] = r.reached_target;
  return j.dump();
}

// ---------------------------------------------------------------- commands

struct IngestCmd {
  CommonOptions c;
  void setup(CLI::App& app) {
    auto* sub = app.add_subcommand("ingest", "Parse fact files and write a normalized, tagged fact file");
    add_common(sub, c, true);
    sub->footer("Artifacts: facts.jsonl, summary.json, skipped.tsv");
  }
  void run(std::ostream& out) {
    auto ctx = load(c);
    PosTagger tagger(ctx.lexicons);
    Artifacts art(c.out_dir);
    auto& facts = art.open("facts.jsonl");
    for (auto f : ctx.corpus.facts()) {
      f.head = tag_tokens(f.head, tagger);
      f.rel = tag_tokens(f.rel, tagger);
      f.tail = tag_tokens(f.tail, tagger);
      facts << serialize_fact(f) << '\n';
    }
    const auto s = ctx.corpus.summary();
    nlohmann::ordered_json j;
    j["documents"] = s.documents;
    j["sentences_with_facts"] = s.sentences_with_facts;
    j["facts"] = s.facts;
    j["unique_entities"] = s.unique_entities;
    j["unique_relationships"] = s.unique_relationships;
    j["skipped_records"] = ctx.corpus.skipped.size();
    art.open("summary.json") << j.dump(2) << '\n';
    auto& skipped = art.open("skipped.tsv");
    skipped << "line\treason\n";
    for (const auto& r : ctx.corpus.skipped) skipped << r.line << '\t' << r.reason << '\n';
    art.commit();
    out << fmt::format("ingested {} facts from {} documents ({} records skipped)\n", s.facts, s.documents,
                       ctx.corpus.skipped.size());
  }
};

struct StatsCmd {
  CommonOptions c;
  void setup(CLI::App& app) {
    auto* sub = app.add_subcommand("stats", "Corpus summary and frequency tables");
    add_common(sub, c, false);
    sub->footer("Artifacts (with --out): stats.json, entity_freq.csv, relationship_freq.csv, fact_freq.csv");
  }
  void run(std::ostream& out) {
    auto ctx = load(c);
    const auto s = ctx.corpus.summary();
    auto graphs = build_graphs(ctx.corpus, c.jobs);
    std::size_t nodes = 0, edges = 0;
    for (const auto& g : graphs) {
      nodes += g.node_count();
      edges += g.edge_count();
    }
    nlohmann::ordered_json j;
    j["documents"] = s.documents;
    j["sentences_with_facts"] = s.sentences_with_facts;
    j["facts"] = s.facts;
    j["unique_entities"] = s.unique_entities;
    j["unique_relationships"] = s.unique_relationships;
    j["graph_nodes"] = nodes;
    j["graph_edges"] = edges;
    if (nodes > 0) j["sparsity"] = static_cast<double>(edges) / static_cast<double>(nodes);
    out << j.dump(2) << '\n';
    if (c.out_dir.empty()) return;
    Artifacts art(c.out_dir);
    art.open("stats.json") << j.dump(2) << '\n';
    auto table = [&](const std::string& name, const std::map<std::string, std::uint64_t>& freq) {
      auto& os = art.open(name);
      os << "term,count\n";
      const auto ranked = RankedProportions::from_counts(freq);
      for (const auto& item : ranked.items()) csv_row(os, item.term, item.count);
    };
    table("entity_freq.csv", ctx.corpus.entity_freq());
    table("relationship_freq.csv", ctx.corpus.rel_freq());
    table("fact_freq.csv", ctx.corpus.fact_freq());
    art.commit();
  }
};

struct ZipfCmd {
  CommonOptions c;
  std::string field = "entities";
  std::size_t top_k = 5;
  void setup(CLI::App& app) {
    auto* sub = app.add_subcommand("zipf", "Fit a Zipf exponent and bucket the cumulative distribution");
    add_common(sub, c, true);
    sub->add_option("--field", field)->check(CLI::IsMember({"entities", "relationships"}))->capture_default_str();
    sub->add_option("--top-k", top_k, "Terms listed per bucket")->capture_default_str();
    sub->footer("Artifacts: zipf_<field>.json ({s, error, N}), cdf_<field>.csv");
  }
  void run(std::ostream& out) {
    auto ctx = load(c);
    if (ctx.corpus.empty()) throw UsageError("zipf needs a non-empty corpus");
    const auto& freq = field == "entities" ? ctx.corpus.entity_freq() : ctx.corpus.rel_freq();
    const auto data = RankedProportions::from_counts(freq);
    const auto fit = fit_zipf(data);
    Artifacts art(c.out_dir);
    nlohmann::ordered_json j;
    j["s"] = fit.s;
    j["error"] = fit.error;
    j["N"] = fit.n;
    art.open("zipf_" + field + ".json") << j.dump() << '\n';
    auto& cdf = art.open("cdf_" + field + ".csv");
    cdf << "bucket_lo,bucket_hi,unique_count,top_terms\n";
    for (const auto& b : bucket_cdf(data, top_k).buckets) {
      csv_row(cdf, b.lo, b.hi, b.unique_count, join(b.top_terms, "|"));
    }
    art.commit();
    out << fmt::format("{}: s = {}, error = {}, N = {}\n", field, fit.s, fit.error, fit.n);
  }
};

struct SyntaxCmd {
  CommonOptions c;
  std::string field = "entities";
  std::string retention = "corpus";
  std::size_t top_n = 30;
  void setup(CLI::App& app) {
    auto* sub = app.add_subcommand("syntax", "Convert entities or relationships to syntaxes");
    add_common(sub, c, true);
    sub->add_option("--field", field)->check(CLI::IsMember({"entities", "relationships"}))->capture_default_str();
    sub->add_option("--retention", retention, "Retention words: corpus top-N or the fixed entity list")
        ->check(CLI::IsMember({"corpus", "paper-list"}))
        ->capture_default_str();
    sub->add_option("--top-n", top_n, "Frequent words retained in corpus mode")->capture_default_str();
    sub->footer(
        "Artifacts: syntax_<field>.csv (surface,syntax,count); for relationships also hierarchy.csv "
        "(relationship,pattern,count)");
  }
  void run(std::ostream& out) {
    auto ctx = load(c);
    if (ctx.corpus.empty()) throw UsageError("syntax needs a non-empty corpus");
    const bool entities = field == "entities";
    if (!entities && retention == "paper-list") throw UsageError("the fixed word list applies to entities only");
    const auto retain =
        entities ? entity_retention(ctx, retention, top_n)
                 : top_frequent_words(ctx.corpus, Field::relationships, top_n, ctx.lexicons);
    PosTagger tagger(ctx.lexicons);
    std::map<std::string, TokenSpan> first_span;
    std::map<std::string, std::uint64_t> counts;
    auto see = [&](const TokenSpan& span) {
      auto key = span.key();
      ++counts[key];
      first_span.emplace(std::move(key), span);
    };
    for (const auto& f : ctx.corpus.facts()) {
      if (entities) {
        see(f.head);
        see(f.tail);
      } else {
        see(f.rel);
      }
    }
    Artifacts art(c.out_dir);
    auto& os = art.open("syntax_" + field + ".csv");
    os << "surface,syntax,count\n";
    std::map<std::string, std::uint64_t> syntax_counts;
    const auto ranked = RankedProportions::from_counts(counts);
    for (const auto& item : ranked.items()) {
      const auto tagged = tag_tokens(first_span.at(item.term), tagger);
      const auto syntax = to_syntax(tagged, retain).text();
      syntax_counts[syntax] += item.count;
      csv_row(os, item.term, syntax, item.count);
    }
    if (!entities) {
      const auto lex = HierarchyLexicon::from_patterns(ctx.lexicons.hierarchy_patterns);
      auto& h = art.open("hierarchy.csv");
      h << "relationship,pattern,count\n";
      for (const auto& item : ranked.items()) {
        const auto tagged = tag_tokens(first_span.at(item.term), tagger);
        if (auto m = lex.match(tagged)) csv_row(h, item.term, *m, item.count);
      }
    }
    art.commit();
    out << fmt::format("{} distinct {} mapped to {} syntaxes\n", counts.size(), field, syntax_counts.size());
  }
};

struct MineCmd {
  CommonOptions c;
  std::size_t size = 3;
  std::vector<std::string> signatures;
  void setup(CLI::App& app) {
    auto* sub = app.add_subcommand("mine", "Count connected 3- or 4-node subgraph patterns per document");
    add_common(sub, c, true);
    sub->add_option("--size", size)->check(CLI::IsMember({3, 4}))->capture_default_str();
    sub->add_option("--signatures", signatures,
                    "3-node signatures that seed 4-node enumeration (default: every connected triple)");
    sub->footer("Artifacts: patterns_k<size>.csv (doc_id,k,signature,count)");
  }
  void run(std::ostream& out) {
    auto ctx = load(c);
    auto graphs = build_graphs(ctx.corpus, c.jobs);
    const auto seed = parse_signatures(signatures);
    std::vector<PatternCounts> counts(graphs.size());
    parallel_for(graphs.size(), c.jobs, [&](std::size_t i) {
      counts[i] = count_patterns(graphs[i].structure(), size, seed.empty() ? nullptr : &seed);
    });
    Artifacts art(c.out_dir);
    auto& os = art.open(fmt::format("patterns_k{}.csv", size));
    os << "doc_id,k,signature,count\n";
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < graphs.size(); ++i) {
      total += counts[i].total;
      for (const auto& [sig, n] : counts[i].counts) csv_row(os, graphs[i].doc_id(), size, sig, n);
    }
    art.commit();
    out << fmt::format("{} connected {}-node subgraphs in {} documents\n", total, size, graphs.size());
  }
};

struct RandomizeCmd {
  CommonOptions c;
  std::uint64_t seed = 0;
  double target = 0.5;
  std::uint64_t max_trades = 30000;
  void setup(CLI::App& app) {
    auto* sub = app.add_subcommand("randomize", "Degree-preserving curveball randomization per document");
    add_common(sub, c, true);
    sub->add_option("--seed", seed)->required();
    sub->add_option("--target-perturbation", target)->check(CLI::Range(0.0, 1.0))->capture_default_str();
    sub->add_option("--max-trades", max_trades)->capture_default_str();
    sub->footer("Artifacts: randomized.jsonl, randomize_meta.jsonl ({doc_id, perturbation, trades, seed})");
  }
  void run(std::ostream& out) {
    auto ctx = load(c);
    auto graphs = build_graphs(ctx.corpus, c.jobs);
    std::vector<std::optional<RandomizeResult>> results(graphs.size());
    parallel_for(graphs.size(), c.jobs, [&](std::size_t i) {
      if (graphs[i].edge_count() == 0) return;
      results[i] = randomize(graphs[i].structure(), {target, max_trades, derive_seed(seed, graphs[i].doc_id())});
    });
    Artifacts art(c.out_dir);
    auto& rg = art.open("randomized.jsonl");
    auto& meta = art.open("randomize_meta.jsonl");
    std::size_t reached = 0, done = 0;
    for (std::size_t i = 0; i < graphs.size(); ++i) {
      if (!results[i]) continue;
      const auto& r = *results[i];
      ++done;
      reached += r.reached_target;
      rg << structural_jsonl(graphs[i].doc_id(), graphs[i], r.graph) << '\n';
      meta << meta_json({graphs[i].doc_id(), r.perturbation, r.trades, r.seed, r.reached_target}) << '\n';
    }
    art.commit();
    out << fmt::format("randomized {} documents, {} reached perturbation {}\n", done, reached, target);
  }
};

struct MotifsCmd {
  CommonOptions c;
  ScoreOptions score;
  std::size_t size = 3;
  bool exclude_absent = false;
  std::string classes;
  void setup(CLI::App& app) {
    auto* sub = app.add_subcommand("motifs", "Score pattern over-representation and rank motifs");
    add_common(sub, c, true);
    sub->add_option("--seed", score.seed)->required();
    sub->add_option("--size", size, "Largest pattern size")->check(CLI::IsMember({3, 4}))->capture_default_str();
    sub->add_option("--threshold", score.threshold, "z' cut-off")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--target-perturbation", score.target_perturbation)
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    sub->add_option("--max-trades", score.max_trades)->capture_default_str();
    sub->add_flag("--exhaustive", score.exhaustive, "4-node enumeration from every connected triple");
    sub->add_flag("--exclude-absent", exclude_absent,
                  "Leave documents without the pattern out of the z' statistics");
    sub->add_option("--ensemble", score.ensemble, "Extra randomizations for the ensemble Z-score")
        ->capture_default_str();
    sub->add_option("--classes", classes, "TSV doc_id<TAB>class for per-class rankings")->check(CLI::ExistingFile);
    sub->footer(
        "Artifacts: motifs.csv (signature,patent_count,raw_count), motif_details.csv "
        "(doc_id,signature,P,R,E,delta,z_prime,significant[,z_ensemble]), motif_stats.csv, randomize_meta.jsonl, "
        "motifs_by_class.csv (with --classes)");
  }
  void run(std::ostream& out) {
    auto ctx = load(c);
    auto graphs = build_graphs(ctx.corpus, c.jobs);
    score.four_node = size == 4;
    score.include_absent = !exclude_absent;
    score.jobs = c.jobs;
    const auto result = score_corpus(graphs, score);

    Artifacts art(c.out_dir);
    auto& ranking = art.open("motifs.csv");
    ranking << "signature,patent_count,raw_count\n";
    for (const auto& e : rank_motifs(result.scores)) csv_row(ranking, e.signature, e.patent_count, e.raw_count);

    auto& details = art.open("motif_details.csv");
    details << "doc_id,signature,P,R,E,delta,z_prime,significant" << (score.ensemble ? ",z_ensemble" : "") << '\n';
    for (const auto& s : result.scores) {
      details << fmt::format("{},{},{},{},{},{},{},{}", csv_field(s.doc_id), s.signature, s.p, s.r, s.e, s.delta,
                             s.z_prime, s.significant ? "true" : "false");
      if (score.ensemble) details << ',' << (s.z_ensemble ? fmt::format("{}", *s.z_ensemble) : "");
      details << '\n';
    }
    auto& stats = art.open("motif_stats.csv");
    stats << "k,signature,documents,mean,stddev,degenerate\n";
    for (const auto& s : result.stats) {
      csv_row(stats, s.k, s.signature, s.documents, s.mean, s.stddev, s.degenerate ? "true" : "false");
    }
    auto& meta = art.open("randomize_meta.jsonl");
    for (const auto& r : result.randomizations) meta << meta_json(r) << '\n';

    if (!classes.empty()) {
      std::ifstream in(classes);
      std::map<std::string, std::string> doc_class;
      std::string line;
      std::size_t number = 0;
      while (std::getline(in, line)) {
        ++number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (collapse_whitespace(line).empty() || line.front() == '#') continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos) throw MalformedRecord(number, "class map rows need doc_id<TAB>class");
        doc_class[line.substr(0, tab)] = collapse_whitespace(line.substr(tab + 1));
      }
      const auto rollup = classification_rollup(result.scores, doc_class);
      auto& by_class = art.open("motifs_by_class.csv");
      by_class << "class,signature,patent_count,raw_count\n";
      for (const auto& [cls, rank] : rollup.per_class) {
        for (const auto& e : rank) csv_row(by_class, cls, e.signature, e.patent_count, e.raw_count);
      }
      for (const auto& doc : rollup.unmapped) {
        out << fmt::format("warning: document '{}' has no class; counted as {}\n", doc, kUnclassified);
      }
    }
    art.commit();
    std::size_t flagged = 0;
    for (const auto& s : result.scores) flagged += s.significant;
    out << fmt::format("scored {} documents ({} skipped), {} significant (document, pattern) pairs\n",
                       result.randomizations.size(), result.skipped.size(), flagged);
  }
};

struct SubgraphsCmd {
  CommonOptions c;
  std::size_t size = 3;
  std::string mode = "rel";
  std::string retention = "corpus";
  std::size_t top_n = 30;
  std::size_t top_k = 3;
  std::vector<std::string> signatures;
  void setup(CLI::App& app) {
    auto* sub = app.add_subcommand("subgraphs", "Group subgraphs by labeled form and report per-percentile windows");
    add_common(sub, c, true);
    sub->add_option("--size", size)->check(CLI::IsMember({3, 4}))->capture_default_str();
    sub->add_option("--mode", mode, "Labels in the grouping key")
        ->check(CLI::IsMember({"rel", "rel+syntax"}))
        ->capture_default_str();
    sub->add_option("--retention", retention)->check(CLI::IsMember({"corpus", "paper-list"}))->capture_default_str();
    sub->add_option("--top-n", top_n)->capture_default_str();
    sub->add_option("--top-k", top_k, "Labeled forms listed per window")->capture_default_str();
    sub->add_option("--signatures", signatures, "Only report these signatures (4-node: also the enumeration seed)");
    sub->footer(
        "Artifacts: subgraphs.csv (signature,labeled_form,count), subgraph_buckets.csv "
        "(signature,bucket_lo,bucket_hi,unique_count,top_forms)");
  }
  void run(std::ostream& out) {
    auto ctx = load(c);
    auto graphs = build_graphs(ctx.corpus, c.jobs);
    const auto wanted = parse_signatures(signatures);
    const bool with_syntax = mode == "rel+syntax";
    std::optional<RetentionSet> retain;
    if (with_syntax) retain = entity_retention(ctx, retention, top_n);
    PosTagger tagger(ctx.lexicons);

    using FormCounts = std::map<std::string, std::map<std::string, std::uint64_t>>;
    std::vector<FormCounts> per_doc(graphs.size());
    parallel_for(graphs.size(), c.jobs, [&](std::size_t i) {
      const auto& g = graphs[i];
      std::vector<std::string> syn;
      if (with_syntax) syn = node_syntaxes(g, *retain, tagger);
      auto visit = [&](std::span<const NodeId> nodes) {
        auto sig = pattern_signature(g, nodes);
        if (!wanted.empty() && !wanted.contains(sig)) return;
        const auto form = canonical_labeled_form(
            g, nodes, with_syntax ? LabelMode::relationships_and_syntax : LabelMode::relationships, syn);
        ++per_doc[i][sig][form];
      };
      if (size == 3) {
        for_each_triple(g.structure(), [&](const Triple& t) { visit(t); });
      } else {
        const auto quads =
            wanted.empty() ? enumerate_4node_exhaustive(g.structure()) : enumerate_4node(g.structure(), wanted);
        for (const auto& q : quads) visit(q);
      }
    });
    FormCounts merged;
    for (const auto& doc : per_doc) {
      for (const auto& [sig, forms] : doc) {
        for (const auto& [form, n] : forms) merged[sig][form] += n;
      }
    }
    Artifacts art(c.out_dir);
    auto& os = art.open("subgraphs.csv");
    os << "signature,labeled_form,count\n";
    auto& buckets = art.open("subgraph_buckets.csv");
    buckets << "signature,bucket_lo,bucket_hi,unique_count,top_forms\n";
    for (const auto& [sig, forms] : merged) {
      const auto ranked = RankedProportions::from_counts(forms);
      for (const auto& item : ranked.items()) csv_row(os, sig, item.term, item.count);
      for (const auto& b : bucket_cdf(ranked, top_k).buckets) {
        csv_row(buckets, sig, b.lo, b.hi, b.unique_count, join(b.top_terms, " || "));
      }
    }
    art.commit();
    out << fmt::format("{} signatures with labeled subgraphs\n", merged.size());
  }
};

struct NeighborhoodCmd {
  CommonOptions c;
  std::string doc;
  std::string entity;
  std::size_t hops = 1;
  void setup(CLI::App& app) {
    auto* sub = app.add_subcommand("neighborhood", "Facts within a number of hops of an entity");
    add_common(sub, c, true);
    sub->add_option("--doc", doc, "Document id (optional for single-document corpora)");
    sub->add_option("--entity", entity)->required();
    sub->add_option("--hops", hops)->check(CLI::PositiveNumber)->capture_default_str();
    sub->footer("Artifacts: neighborhood.dot, neighborhood.jsonl");
  }
  void run(std::ostream& out) {
    auto ctx = load(c);
    auto graphs = build_graphs(ctx.corpus, c.jobs);
    const auto sub = neighborhood(pick_document(graphs, doc), entity, hops);
    Artifacts art(c.out_dir);
    art.open("neighborhood.dot") << to_dot(sub);
    art.open("neighborhood.jsonl") << to_jsonl(sub) << '\n';
    art.commit();
    for (const auto& e : sub.labeled_edges()) {
      for (const auto& label : e.labels) out << e.head << " :: " << label << " :: " << e.tail << '\n';
    }
  }
};

struct TransformCmd {
  CommonOptions c;
  std::string op;
  std::string doc;
  std::string head;
  std::string tail;
  std::string table;
  std::vector<std::string> abstract;
  std::string retention = "corpus";
  std::size_t top_n = 30;
  void setup(CLI::App& app) {
    auto* sub = app.add_subcommand("transform", "Collapse attributes, concretize relationships, explicate hierarchy");
    add_common(sub, c, true);
    sub->add_option("--op", op)->required()->check(CLI::IsMember({"collapse", "relabel", "hierarchy"}));
    sub->add_option("--doc", doc, "Document id (collapse; optional filter otherwise)");
    sub->add_option("--head", head, "Head of the 'of' edge (collapse)");
    sub->add_option("--tail", tail, "Tail of the 'of' edge (collapse)");
    sub->add_option("--table", table, "Relabel table TSV (relabel)")->check(CLI::ExistingFile);
    sub->add_option("--abstract", abstract, "Abstract relationships (relabel; default in,to,with,on,for,at,from)");
    sub->add_option("--retention", retention)->check(CLI::IsMember({"corpus", "paper-list"}))->capture_default_str();
    sub->add_option("--top-n", top_n)->capture_default_str();
    sub->footer(
        "Artifacts: transformed.jsonl, edits.jsonl (one edit per line, with doc_id), before.dot, after.dot, "
        "transform_log.txt, suggestions.csv (relabel)");
  }
  void run(std::ostream& out) {
    auto ctx = load(c);
    auto graphs = build_graphs(ctx.corpus, c.jobs);
    std::vector<const DocGraph*> targets;
    if (op == "collapse") {
      if (head.empty() || tail.empty()) throw UsageError("collapse needs --head and --tail");
      targets.push_back(&pick_document(graphs, doc));
    } else if (!doc.empty()) {
      targets.push_back(&pick_document(graphs, doc));
    } else {
      for (const auto& g : graphs) targets.push_back(&g);
    }

    RelabelTable relabels;
    if (!table.empty()) {
      std::ifstream in(table);
      relabels = RelabelTable::parse_tsv(in);
    }
    const std::set<std::string> abstract_set =
        abstract.empty() ? default_abstract_relationships() : std::set<std::string>(abstract.begin(), abstract.end());
    std::optional<RetentionSet> retain;
    if (op == "relabel") retain = entity_retention(ctx, retention, top_n);
    const auto lex = HierarchyLexicon::from_patterns(ctx.lexicons.hierarchy_patterns);
    PosTagger tagger(ctx.lexicons);

    struct Outcome {
      DocGraph graph;
      std::vector<TransformEdit> edits;
      std::vector<std::string> log;
      std::vector<RelabelSuggestion> suggestions;
    };
    std::vector<Outcome> outcomes(targets.size());
    parallel_for(targets.size(), c.jobs, [&](std::size_t i) {
      const auto& g = *targets[i];
      auto& o = outcomes[i];
      if (op == "collapse") {
        auto r = collapse_attribute(g, head, tail);
        o.graph = std::move(r.graph);
        o.edits = std::move(r.edits);
      } else if (op == "relabel") {
        auto r = suggest_relabels(g, abstract_set, relabels, node_syntaxes(g, *retain, tagger));
        o.graph = std::move(r.graph);
        o.edits = std::move(r.edits);
        o.suggestions = std::move(r.suggestions);
      } else {
        auto r = explicate_hierarchy(g, lex, tagger);
        o.graph = std::move(r.graph);
        o.edits = std::move(r.edits);
        o.log = std::move(r.log);
      }
    });

    Artifacts art(c.out_dir);
    auto& transformed = art.open("transformed.jsonl");
    auto& edits = art.open("edits.jsonl");
    auto& before = art.open("before.dot");
    auto& after = art.open("after.dot");
    auto& log = art.open("transform_log.txt");
    std::ostream* suggestions = nullptr;
    if (op == "relabel") {
      suggestions = &art.open("suggestions.csv");
      *suggestions << "doc_id,head,relationship,tail,head_syntax,tail_syntax\n";
    }
    std::size_t edit_count = 0;
    for (std::size_t i = 0; i < targets.size(); ++i) {
      const auto& o = outcomes[i];
      const auto& id = targets[i]->doc_id();
      transformed << to_jsonl(o.graph) << '\n';
      before << to_dot(*targets[i]);
      after << to_dot(o.graph);
      for (const auto& e : o.edits) {
        auto j = nlohmann::ordered_json::parse(edit_to_json(e));
        nlohmann::ordered_json line;
        line["doc_id"] = id;
        for (auto& [key, value] : j.items()) line[key] = value;
        edits << line.dump() << '\n';
        log << id << ": " << to_string(e.kind) << " (" << e.provenance.size() << " source facts)\n";
        for (const auto& note : e.notes) log << id << ":   " << note << '\n';
      }
      for (const auto& line : o.log) log << id << ": " << line << '\n';
      for (const auto& s : o.suggestions) {
        csv_row(*suggestions, id, s.head, s.relationship, s.tail, s.head_syntax, s.tail_syntax);
      }
      edit_count += o.edits.size();
    }
    art.commit();
    out << fmt::format("{} edits over {} documents\n", edit_count, targets.size());
  }
};

struct ExportCmd {
  CommonOptions c;
  std::string format = "jsonl";
  void setup(CLI::App& app) {
    auto* sub = app.add_subcommand("export", "Write per-document graphs");
    add_common(sub, c, true);
    sub->add_option("--format", format)->check(CLI::IsMember({"dot", "jsonl"}))->capture_default_str();
    sub->footer("Artifacts: graphs.dot or graphs.jsonl");
  }
  void run(std::ostream& out) {
    auto ctx = load(c);
    auto graphs = build_graphs(ctx.corpus, c.jobs);
    Artifacts art(c.out_dir);
    auto& os = art.open(format == "dot" ? "graphs.dot" : "graphs.jsonl");
    for (const auto& g : graphs) os << (format == "dot" ? to_dot(g) : to_jsonl(g) + "\n");
    art.commit();
    out << fmt::format("exported {} graphs\n", graphs.size());
  }
};

struct OracleCmd {
  std::size_t size = 3;
  std::size_t validate = 0;
  std::uint64_t seed = 1;
  std::string out_dir;
  void setup(CLI::App& app) {
    auto* sub = app.add_subcommand("oracle", "Enumerate the k-node pattern space and validate the miners");
    sub->add_option("--size", size)->check(CLI::IsMember({3, 4}))->capture_default_str();
    sub->add_option("--validate", validate, "Random graphs checked against brute-force enumeration")
        ->capture_default_str();
    sub->add_option("--seed", seed, "Seed for --validate graphs")->capture_default_str();
    sub->add_option("-o,--out", out_dir, "Output directory");
    sub->footer("Artifacts (with --out): pattern_space_k<size>.csv (signature,isomorphism_classes)");
  }
  void run(std::ostream& out) {
    const auto space = enumerate_all_patterns(size);
    out << fmt::format("{} signatures, {} collisions\n", space.signatures.size(), space.collisions.size());
    out << fmt::format("{} isomorphism classes over {} connected labeled digraphs\n", space.isomorphism_classes,
                       space.labeled_graphs);
    for (const auto& col : space.collisions) {
      out << fmt::format("collision {} shared by {} classes\n", col.signature, col.classes);
    }
    if (validate > 0) {
      Rng rng(seed);
      std::size_t mismatches = 0;
      for (std::size_t round = 0; round < validate; ++round) {
        const auto n = 2 + rng.below(11);
        Digraph g(n);
        const auto m = rng.below(2 * n + 1);
        for (std::uint64_t e = 0; e < m; ++e) {
          const auto u = static_cast<NodeId>(rng.below(n));
          const auto v = static_cast<NodeId>(rng.below(n));
          if (u != v) g.add_edge(u, v);
        }
        std::vector<std::vector<NodeId>> streamed;
        if (size == 3) {
          for (const auto& t : enumerate_3node(g)) streamed.emplace_back(t.begin(), t.end());
        } else {
          for (const auto& q : enumerate_4node_exhaustive(g)) streamed.emplace_back(q.begin(), q.end());
        }
        mismatches += streamed != brute_force_connected_sets(g, size);
      }
      out << fmt::format("enumeration check: {} random graphs, {} mismatches\n", validate, mismatches);
      if (mismatches) throw Error("streamed enumeration disagrees with brute force");
    }
    if (out_dir.empty()) return;
    Artifacts art(out_dir);
    auto& os = art.open(fmt::format("pattern_space_k{}.csv", size));
    os << "signature,isomorphism_classes\n";
    for (const auto& [sig, classes] : space.signatures) csv_row(os, sig, classes);
    art.commit();
  }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Design knowledge graph analytics"};
  app.name("dkg");
  app.require_subcommand(1);
  IngestCmd ingest;
  StatsCmd stats;
  ZipfCmd zipf;
  SyntaxCmd syntax;
  MineCmd mine;
  RandomizeCmd randomize_cmd;
  MotifsCmd motifs;
  SubgraphsCmd subgraphs;
  NeighborhoodCmd neighborhood_cmd;
  TransformCmd transform;
  ExportCmd export_cmd;
  OracleCmd oracle;
  ingest.setup(app);
  stats.setup(app);
  zipf.setup(app);
  syntax.setup(app);
  mine.setup(app);
  randomize_cmd.setup(app);
  motifs.setup(app);
  subgraphs.setup(app);
  neighborhood_cmd.setup(app);
  transform.setup(app);
  export_cmd.setup(app);
  oracle.setup(app);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    // --help and --version arrive here as "successful" parse errors.
    const int code = app.exit(e, out, err);
    return code == static_cast<int>(CLI::ExitCodes::Success) ? kOk : kUsage;
  }

  try {
    const auto* sub = app.get_subcommands().front();
    const auto& name = sub->get_name();
    if (name == "ingest") ingest.run(out);
    else if (name == "stats") stats.run(out);
    else if (name == "zipf") zipf.run(out);
    else if (name == "syntax") syntax.run(out);
    else if (name == "mine") mine.run(out);
    else if (name == "randomize") randomize_cmd.run(out);
    else if (name == "motifs") motifs.run(out);
    else if (name == "subgraphs") subgraphs.run(out);
    else if (name == "neighborhood") neighborhood_cmd.run(out);
    else if (name == "transform") transform.run(out);
    else if (name == "export") export_cmd.run(out);
    else if (name == "oracle") oracle.run(out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const EmptyCorpus& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kOk;
}

}  // namespace dkg::cli
