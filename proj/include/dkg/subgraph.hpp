#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "dkg/digraph.hpp"
#include "dkg/doc_graph.hpp"

namespace dkg {

// "ins-outs-pairs": within-subgraph in-degrees, out-degrees and per unordered
// pair directed edge counts, each group sorted ascending and written as
// digits. Example: the fan-out Y->X, Y->Z is "011-002-011".
using UniqueSequence = std::string;
using SignatureSet = std::set<UniqueSequence, std::less<>>;

using Triple = std::array<NodeId, 3>;
using Quad = std::array<NodeId, 4>;

// Throws DisconnectedSubgraph when the induced subgraph is not weakly
// connected, InvalidArgument for repeated nodes or fewer than two nodes.
UniqueSequence pattern_signature(const Digraph& g, std::span<const NodeId> nodes);
UniqueSequence pattern_signature(const DocGraph& g, std::span<const NodeId> nodes);

bool weakly_connected(const Digraph& g, std::span<const NodeId> nodes);

// Every weakly connected induced triple exactly once, sorted ascending.
// Triples come from pairing two edges that share a centre node; a triple is
// reported only by its smallest centre.
void for_each_triple(const Digraph& g, const std::function<void(const Triple&)>& visit);
std::vector<Triple> enumerate_3node(const Digraph& g);

// Connected quadruples reachable by adding one neighbouring node to a
// connected triple whose signature is in `seed`; sorted and unique.
// Throws InvalidArgument for an empty seed.
std::vector<Quad> enumerate_4node(const Digraph& g, const SignatureSet& seed);
// Every connected quadruple.
std::vector<Quad> enumerate_4node_exhaustive(const Digraph& g);

// All connected induced node sets of size k by direct subset enumeration.
// Meant for validation on small graphs.
std::vector<std::vector<NodeId>> brute_force_connected_sets(const Digraph& g, std::size_t k);

struct PatternCounts {
  std::map<UniqueSequence, std::uint64_t> counts;
  std::uint64_t total = 0;
};

// k = 3 or 4. For k = 4 a null seed means exhaustive enumeration.
PatternCounts count_patterns(const Digraph& g, std::size_t k, const SignatureSet* seed = nullptr);

struct SignatureCollision {
  UniqueSequence signature;
  std::size_t classes = 0;
};

struct PatternSpace {
  std::size_t k = 0;
  std::size_t labeled_graphs = 0;
  std::size_t isomorphism_classes = 0;
  // signature -> number of isomorphism classes carrying it
  std::map<UniqueSequence, std::size_t> signatures;
  std::vector<SignatureCollision> collisions;
};

// Enumerates every weakly connected simple digraph on k labeled nodes
// (k = 2..5), groups by signature and by exact isomorphism class.
PatternSpace enumerate_all_patterns(std::size_t k);

// Smallest adjacency code over all node orderings; equal codes mean
// isomorphic digraphs.
std::uint64_t canonical_structure_code(const Digraph& g, std::span<const NodeId> nodes);

enum class LabelMode { relationships, relationships_and_syntax };

// Lexicographically smallest encoding of the labeled induced subgraph over
// all node orderings. `node_syntax` (indexed by node id) is required in
// relationships_and_syntax mode. Throws DisconnectedSubgraph.
std::string canonical_labeled_form(const DocGraph& g, std::span<const NodeId> nodes, LabelMode mode,
                                   std::span<const std::string> node_syntax = {});

}  // namespace dkg
