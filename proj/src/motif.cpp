#include "dkg/motif.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dkg/curveball.hpp"
#include "dkg/error.hpp"
#include "dkg/parallel.hpp"

namespace dkg {

namespace {

struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;
  bool constant = true;
};

// Two-pass sample statistics. `constant` is decided on the raw values so that
// rounding in the variance cannot hide or fake a zero spread.
MeanSd mean_sd(std::span<const double> values) {
  MeanSd out;
  const auto n = static_cast<double>(values.size());
  out.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - out.mean) * (v - out.mean);
  out.sd = values.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  out.constant = std::all_of(values.begin(), values.end(), [&](double v) { return v == values.front(); });
  return out;
}

}  // namespace

double z_score(double observed, std::span<const double> samples) {
  if (samples.size() < 2) throw InvalidArgument("z-score needs at least two randomized samples");
  const auto stats = mean_sd(samples);
  if (stats.constant) throw ZeroVariance("randomized counts do not vary");
  return (observed - stats.mean) / stats.sd;
}

double delta(double observed, double randomized, std::uint64_t edges) {
  if (edges == 0) throw ZeroEdges("delta needs at least one edge");
  return (observed - randomized) / static_cast<double>(edges);
}

ZPrime corpus_z_prime(const std::map<std::string, double>& deltas, double threshold) {
  if (deltas.size() < 2) throw TooFewDocuments("z' needs at least two documents");
  std::vector<double> values;
  values.reserve(deltas.size());
  for (const auto& [doc, d] : deltas) values.push_back(d);
  const auto stats = mean_sd(values);
  if (stats.constant) throw ZeroVariance("every document has the same delta");
  ZPrime out;
  out.mean = stats.mean;
  out.stddev = stats.sd;
  for (const auto& [doc, d] : deltas) {
    const double z = (d - stats.mean) / stats.sd;
    out.z.emplace(doc, z);
    out.significant.emplace(doc, z > threshold);
  }
  return out;
}

MotifRanking rank_motifs(std::span<const MotifScore> scores) {
  std::map<UniqueSequence, MotifRankEntry> by_signature;
  for (const auto& s : scores) {
    auto& entry = by_signature[s.signature];
    entry.signature = s.signature;
    entry.patent_count += s.significant;
    entry.raw_count += s.p;
  }
  MotifRanking ranking;
  ranking.reserve(by_signature.size());
  for (auto& [sig, entry] : by_signature) ranking.push_back(std::move(entry));
  std::stable_sort(ranking.begin(), ranking.end(), [](const MotifRankEntry& a, const MotifRankEntry& b) {
    if (a.patent_count != b.patent_count) return a.patent_count > b.patent_count;
    return a.raw_count > b.raw_count;
  });
  return ranking;
}

ClassRollup classification_rollup(std::span<const MotifScore> scores,
                                  const std::map<std::string, std::string>& doc_class) {
  ClassRollup out;
  out.overall = rank_motifs(scores);
  std::map<std::string, std::vector<MotifScore>> grouped;
  for (const auto& [doc, cls] : doc_class) grouped[cls];
  std::set<std::string> unmapped;
  for (const auto& s : scores) {
    auto it = doc_class.find(s.doc_id);
    if (it == doc_class.end()) {
      unmapped.insert(s.doc_id);
      grouped[kUnclassified].push_back(s);
    } else {
      grouped[it->second].push_back(s);
    }
  }
  for (auto& [cls, members] : grouped) out.per_class.emplace(cls, rank_motifs(members));
  out.unmapped.assign(unmapped.begin(), unmapped.end());
  return out;
}

namespace {

struct DocWork {
  bool scored = false;
  std::uint64_t edges = 0;
  RandomizeResult random;
  std::vector<Digraph> ensemble;
  PatternCounts p3, r3, p4, r4;
  std::vector<PatternCounts> e3, e4;
};

std::uint64_t count_of(const PatternCounts& counts, const UniqueSequence& sig) {
  auto it = counts.counts.find(sig);
  return it == counts.counts.end() ? 0 : it->second;
}

void aggregate(std::size_t k, std::span<const DocGraph> graphs, const std::vector<DocWork>& work,
               const ScoreOptions& options, CorpusScores& out) {
  auto original = [&](const DocWork& w) -> const PatternCounts& { return k == 3 ? w.p3 : w.p4; };
  auto randomized = [&](const DocWork& w) -> const PatternCounts& { return k == 3 ? w.r3 : w.r4; };
  auto ensemble = [&](const DocWork& w) -> const std::vector<PatternCounts>& { return k == 3 ? w.e3 : w.e4; };

  std::set<UniqueSequence> signatures;
  for (const auto& w : work) {
    if (!w.scored) continue;
    for (const auto& [sig, c] : original(w).counts) signatures.insert(sig);
    for (const auto& [sig, c] : randomized(w).counts) signatures.insert(sig);
  }

  for (const auto& sig : signatures) {
    std::vector<double> deltas;
    for (const auto& w : work) {
      if (!w.scored) continue;
      const auto p = count_of(original(w), sig);
      const auto r = count_of(randomized(w), sig);
      if (options.include_absent || p > 0 || r > 0) deltas.push_back(delta(double(p), double(r), w.edges));
    }
    SignatureStats stats;
    stats.k = k;
    stats.signature = sig;
    stats.documents = deltas.size();
    if (deltas.size() >= 2) {
      const auto ms = mean_sd(deltas);
      stats.mean = ms.mean;
      stats.stddev = ms.sd;
      stats.degenerate = ms.constant;
    } else {
      stats.degenerate = true;
      if (!deltas.empty()) stats.mean = deltas.front();
    }

    for (std::size_t i = 0; i < work.size(); ++i) {
      const auto& w = work[i];
      if (!w.scored) continue;
      const auto p = count_of(original(w), sig);
      const auto r = count_of(randomized(w), sig);
      if (p == 0 && r == 0) continue;
      MotifScore s;
      s.doc_id = graphs[i].doc_id();
      s.k = k;
      s.signature = sig;
      s.p = p;
      s.r = r;
      s.e = w.edges;
      s.delta = delta(double(p), double(r), w.edges);
      if (!stats.degenerate) {
        s.z_prime = (s.delta - stats.mean) / stats.stddev;
        s.significant = s.z_prime > options.threshold;
      }
      if (!ensemble(w).empty()) {
        std::vector<double> samples;
        for (const auto& e : ensemble(w)) samples.push_back(double(count_of(e, sig)));
        try {
          s.z_ensemble = z_score(double(p), samples);
        } catch (const ZeroVariance&) {
          s.z_ensemble.reset();
        }
      }
      out.scores.push_back(std::move(s));
    }
    out.stats.push_back(std::move(stats));
  }
}

}  // namespace

CorpusScores score_corpus(std::span<const DocGraph> graphs, const ScoreOptions& options) {
  std::vector<DocWork> work(graphs.size());
  parallel_for(graphs.size(), options.jobs, [&](std::size_t i) {
    const auto& g = graphs[i];
    auto& w = work[i];
    if (g.edge_count() == 0) return;
    w.scored = true;
    w.edges = g.edge_count();
    RandomizeOptions ro{options.target_perturbation, options.max_trades, derive_seed(options.seed, g.doc_id())};
    w.random = randomize(g.structure(), ro);
    w.p3 = count_patterns(g.structure(), 3);
    w.r3 = count_patterns(w.random.graph, 3);
    for (std::size_t e = 0; e < options.ensemble; ++e) {
      ro.seed = derive_seed(options.seed, g.doc_id() + "#" + std::to_string(e + 1));
      w.ensemble.push_back(randomize(g.structure(), ro).graph);
      w.e3.push_back(count_patterns(w.ensemble.back(), 3));
    }
  });

  CorpusScores out;
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    if (!work[i].scored) {
      out.skipped.push_back(graphs[i].doc_id());
      continue;
    }
    const auto& r = work[i].random;
    out.randomizations.push_back({graphs[i].doc_id(), r.perturbation, r.trades, r.seed, r.reached_target});
  }
  aggregate(3, graphs, work, options, out);
  if (!options.four_node) return out;

  std::map<std::string, std::vector<std::size_t>> index_of;
  for (std::size_t i = 0; i < graphs.size(); ++i) index_of[graphs[i].doc_id()].push_back(i);
  std::vector<SignatureSet> seeds(graphs.size());
  for (const auto& s : out.scores) {
    if (!s.significant) continue;
    for (auto i : index_of[s.doc_id]) seeds[i].insert(s.signature);
  }
  parallel_for(graphs.size(), options.jobs, [&](std::size_t i) {
    auto& w = work[i];
    if (!w.scored) return;
    const SignatureSet* seed = options.exhaustive ? nullptr : &seeds[i];
    if (seed && seed->empty()) return;
    w.p4 = count_patterns(graphs[i].structure(), 4, seed);
    w.r4 = count_patterns(w.random.graph, 4, seed);
    for (const auto& e : w.ensemble) w.e4.push_back(count_patterns(e, 4, seed));
  });
  aggregate(4, graphs, work, options, out);
  return out;
}

}  // namespace dkg
