#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dkg/doc_graph.hpp"
#include "dkg/subgraph.hpp"

namespace dkg {

inline constexpr double kDefaultZThreshold = 1.64;

// (P - mean(R)) / sd(R) with the n-1 standard deviation. Throws
// InvalidArgument for fewer than two samples and ZeroVariance when every
// sample is equal.
double z_score(double observed, std::span<const double> samples);

// (P - R) / E. Throws ZeroEdges when E is 0.
double delta(double observed, double randomized, std::uint64_t edges);

struct ZPrime {
  double mean = 0.0;
  double stddev = 0.0;
  std::map<std::string, double> z;
  std::map<std::string, bool> significant;
};

// Standardizes per-document deltas against their corpus mean and n-1
// standard deviation. Throws TooFewDocuments (< 2) and ZeroVariance.
ZPrime corpus_z_prime(const std::map<std::string, double>& deltas, double threshold = kDefaultZThreshold);

struct MotifScore {
  std::string doc_id;
  std::size_t k = 3;
  UniqueSequence signature;
  std::uint64_t p = 0;
  std::uint64_t r = 0;
  std::uint64_t e = 0;
  double delta = 0.0;
  double z_prime = 0.0;
  bool significant = false;
  // Ensemble Z-score, present only when an ensemble was requested and the
  // randomized counts were not constant.
  std::optional<double> z_ensemble;
};

struct MotifRankEntry {
  UniqueSequence signature;
  std::uint64_t patent_count = 0;
  std::uint64_t raw_count = 0;

  bool operator==(const MotifRankEntry&) const = default;
};

using MotifRanking = std::vector<MotifRankEntry>;

// One entry per distinct signature: documents where it is significant and
// the summed original counts. Ordered by patent count, then raw count
// (both descending), then signature.
MotifRanking rank_motifs(std::span<const MotifScore> scores);

inline constexpr const char* kUnclassified = "unclassified";

struct ClassRollup {
  MotifRanking overall;
  std::map<std::string, MotifRanking> per_class;
  // Scored documents missing from the class map; ranked under "unclassified".
  std::vector<std::string> unmapped;
};

ClassRollup classification_rollup(std::span<const MotifScore> scores,
                                  const std::map<std::string, std::string>& doc_class);

struct ScoreOptions {
  std::uint64_t seed = 0;
  double target_perturbation = 0.5;
  std::uint64_t max_trades = 30000;
  double threshold = kDefaultZThreshold;
  // Documents where a signature is absent still contribute delta = 0.
  bool include_absent = true;
  bool four_node = false;
  // Four-node enumeration from every connected triple instead of the
  // document's significant triple patterns.
  bool exhaustive = false;
  // Number of extra randomizations for the ensemble Z-score; 0 disables it.
  std::size_t ensemble = 0;
  std::size_t jobs = 1;
};

struct RandomizationRecord {
  std::string doc_id;
  double perturbation = 0.0;
  std::uint64_t trades = 0;
  std::uint64_t seed = 0;
  bool reached_target = false;
};

struct SignatureStats {
  std::size_t k = 3;
  UniqueSequence signature;
  std::size_t documents = 0;
  double mean = 0.0;
  double stddev = 0.0;
  // Too few documents or constant deltas; nothing is flagged.
  bool degenerate = false;
};

struct CorpusScores {
  std::vector<MotifScore> scores;
  std::vector<SignatureStats> stats;
  std::vector<RandomizationRecord> randomizations;
  // Documents without edges are not scored.
  std::vector<std::string> skipped;
};

// Randomizes each document once (seeded per document), counts 3-node
// patterns, and optionally 4-node patterns seeded by the document's
// significant 3-node patterns, then standardizes deltas across documents.
CorpusScores score_corpus(std::span<const DocGraph> graphs, const ScoreOptions& options);

}  // namespace dkg
