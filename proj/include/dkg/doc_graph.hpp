#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dkg/digraph.hpp"
#include "dkg/fact_corpus.hpp"

namespace dkg {

using LabelSet = std::set<std::string>;

// Name-keyed mutable form of a document graph. Transforms edit drafts and
// freeze them back into DocGraphs.
struct GraphDraft {
  std::string doc_id;
  std::set<std::string> nodes;
  std::map<std::pair<std::string, std::string>, LabelSet> edges;
  // Representative mention per node / relationship label, used when a
  // transform or report needs POS tags.
  std::map<std::string, TokenSpan> node_spans;
  std::map<std::string, TokenSpan> rel_spans;
  std::size_t dropped_self_loops = 0;
};

struct LabeledEdge {
  std::string head;
  std::string tail;
  std::vector<std::string> labels;

  bool operator==(const LabeledEdge&) const = default;
};

// Directed labeled graph of one document. Nodes are normalized entity strings
// held in sorted order, so node ids do not depend on fact order. Each ordered
// pair carries at most one structural edge with a non-empty label set.
class DocGraph {
 public:
  DocGraph() = default;
  // Throws InvalidArgument on a self-loop or an empty label set.
  static DocGraph from_draft(GraphDraft draft);
  GraphDraft to_draft() const;

  const std::string& doc_id() const { return doc_id_; }
  std::size_t node_count() const { return names_.size(); }
  std::size_t edge_count() const { return structure_.edge_count(); }
  const std::vector<std::string>& nodes() const { return names_; }
  const std::string& node_name(NodeId id) const { return names_[id]; }
  std::optional<NodeId> find_node(std::string_view name) const;
  const Digraph& structure() const { return structure_; }
  // Empty set when the pair has no edge.
  const LabelSet& labels(NodeId head, NodeId tail) const;
  std::vector<LabeledEdge> labeled_edges() const;
  std::size_t dropped_self_loops() const { return dropped_self_loops_; }
  const TokenSpan* node_span(NodeId id) const;
  const TokenSpan* rel_span(std::string_view label) const;

  // Graph identity: document id, node names and labeled edges.
  bool operator==(const DocGraph& other) const;

 private:
  std::string doc_id_;
  std::vector<std::string> names_;
  Digraph structure_;
  std::map<Edge, LabelSet> labels_;
  std::map<std::string, TokenSpan, std::less<>> node_spans_;
  std::map<std::string, TokenSpan, std::less<>> rel_spans_;
  std::size_t dropped_self_loops_ = 0;
};

// Builds the graph of one document. Entities merge on their normalized key;
// facts whose head and tail normalize to the same key are dropped and
// counted. Throws InvalidArgument if the facts span several documents.
DocGraph build_graph(std::span<const Fact> facts);

// Edges per node. Throws EmptyGraph for a graph without nodes.
double sparsity(const DocGraph& g);

// Subgraph induced on nodes within `hops` undirected steps of `entity`
// (matched after normalization). Throws UnknownEntity.
DocGraph neighborhood(const DocGraph& g, std::string_view entity, std::size_t hops);

// Induced subgraph on a node set, labels kept.
DocGraph induced_subgraph(const DocGraph& g, std::span<const NodeId> nodes);

std::string to_dot(const DocGraph& g);
// One JSON object: {"doc_id", "nodes": [...], "edges": [{"h","t","labels"}]}.
std::string to_jsonl(const DocGraph& g);
DocGraph from_jsonl(std::string_view line);

}  // namespace dkg
