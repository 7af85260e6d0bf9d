#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "dkg/digraph.hpp"
#include "dkg/doc_graph.hpp"

namespace dkg {

// Seeded generator with a bounded draw that does not depend on the standard
// library's distribution implementations, so results match across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  // Uniform in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound);
  template <typename It>
  void shuffle(It first, It last) {
    for (auto n = static_cast<std::uint64_t>(last - first); n > 1; --n) {
      std::swap(first[n - 1], first[below(n)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);
// Per-document seed: independent streams for each document from one run seed.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view key);

// One curveball trade between nodes i and j: their non-shared out-neighbours
// (excluding i and j themselves, which keeps the graph free of self-loops)
// are pooled, shuffled and dealt back in the original amounts. Returns true
// when some neighbour changed owner.
bool curveball_trade(Digraph& g, NodeId i, NodeId j, Rng& rng);
// Same with a uniformly drawn pair i != j. Requires at least two nodes.
bool curveball_trade(Digraph& g, Rng& rng);

struct RandomizeOptions {
  double target = 0.5;
  std::uint64_t max_trades = 30000;
  std::uint64_t seed = 0;
};

struct RandomizeResult {
  Digraph graph;
  double perturbation = 0.0;
  std::uint64_t trades = 0;
  std::uint64_t seed = 0;
  bool reached_target = false;
};

// Trades until the perturbation reaches the target or max_trades is spent.
// Throws ZeroEdges for a graph without edges.
RandomizeResult randomize(const Digraph& g, const RandomizeOptions& options);
RandomizeResult randomize(const DocGraph& g, const RandomizeOptions& options);

// Fraction of randomized edges absent from the original. Throws
// NodeSetMismatch when node counts differ, ZeroEdges when the original is
// edgeless.
double perturbation(const Digraph& original, const Digraph& randomized);
double perturbation(const DocGraph& original, const Digraph& randomized);

}  // namespace dkg
