#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace dkg {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

// Simple directed graph without self-loops over nodes 0..n-1. Adjacency lists
// are kept sorted so that neighbor sets can be compared and merged cheaply.
class Digraph {
 public:
  Digraph() = default;
  explicit Digraph(std::size_t node_count);
  // Throws InvalidArgument on self-loops or out-of-range endpoints; duplicate
  // edges are ignored.
  Digraph(std::size_t node_count, const std::vector<Edge>& edges);

  std::size_t node_count() const { return out_.size(); }
  std::size_t edge_count() const { return edge_count_; }

  bool has_edge(NodeId u, NodeId v) const;
  // Returns false when the edge already existed.
  bool add_edge(NodeId u, NodeId v);
  // Returns false when the edge was absent.
  bool remove_edge(NodeId u, NodeId v);

  const std::vector<NodeId>& out(NodeId u) const { return out_[u]; }
  const std::vector<NodeId>& in(NodeId u) const { return in_[u]; }
  std::size_t out_degree(NodeId u) const { return out_[u].size(); }
  std::size_t in_degree(NodeId u) const { return in_[u].size(); }

  // Sorted union of in- and out-neighbors.
  std::vector<NodeId> neighbors(NodeId u) const;
  bool adjacent(NodeId u, NodeId v) const { return has_edge(u, v) || has_edge(v, u); }

  // All edges in (tail, head) lexicographic order.
  std::vector<Edge> edges() const;

  // Replaces the out-neighborhood of `u` and patches the in-lists of the
  // affected heads. `targets` must be sorted, unique and exclude `u`.
  void set_out(NodeId u, std::vector<NodeId> targets);

  bool operator==(const Digraph&) const = default;

 private:
  void check_node(NodeId u) const;

  std::vector<std::vector<NodeId>> out_;
  std::vector<std::vector<NodeId>> in_;
  std::size_t edge_count_ = 0;
};

}  // namespace dkg
