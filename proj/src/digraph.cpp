#include "dkg/digraph.hpp"

#include <algorithm>
#include <string>

#include "dkg/error.hpp"

namespace dkg {

namespace {

bool sorted_insert(std::vector<NodeId>& list, NodeId v) {
  auto it = std::lower_bound(list.begin(), list.end(), v);
  if (it != list.end() && *it == v) return false;
  list.insert(it, v);
  return true;
}

bool sorted_erase(std::vector<NodeId>& list, NodeId v) {
  auto it = std::lower_bound(list.begin(), list.end(), v);
  if (it == list.end() || *it != v) return false;
  list.erase(it);
  return true;
}

}  // namespace

Digraph::Digraph(std::size_t node_count) : out_(node_count), in_(node_count) {}

Digraph::Digraph(std::size_t node_count, const std::vector<Edge>& edges) : Digraph(node_count) {
  for (auto [u, v] : edges) add_edge(u, v);
}

void Digraph::check_node(NodeId u) const {
  if (u >= out_.size()) throw InvalidArgument("node " + std::to_string(u) + " out of range");
}

bool Digraph::has_edge(NodeId u, NodeId v) const {
  if (u >= out_.size() || v >= out_.size()) return false;
  return std::binary_search(out_[u].begin(), out_[u].end(), v);
}

bool Digraph::add_edge(NodeId u, NodeId v) {
  check_node(u);
  check_node(v);
  if (u == v) throw InvalidArgument("self-loop on node " + std::to_string(u));
  if (!sorted_insert(out_[u], v)) return false;
  sorted_insert(in_[v], u);
  ++edge_count_;
  return true;
}

bool Digraph::remove_edge(NodeId u, NodeId v) {
  if (u >= out_.size() || v >= out_.size()) return false;
  if (!sorted_erase(out_[u], v)) return false;
  sorted_erase(in_[v], u);
  --edge_count_;
  return true;
}

std::vector<NodeId> Digraph::neighbors(NodeId u) const {
  std::vector<NodeId> result;
  result.reserve(out_[u].size() + in_[u].size());
  std::set_union(out_[u].begin(), out_[u].end(), in_[u].begin(), in_[u].end(), std::back_inserter(result));
  return result;
}

std::vector<Edge> Digraph::edges() const {
  std::vector<Edge> result;
  result.reserve(edge_count_);
  for (NodeId u = 0; u < out_.size(); ++u) {
    for (NodeId v : out_[u]) result.emplace_back(u, v);
  }
  return result;
}

void Digraph::set_out(NodeId u, std::vector<NodeId> targets) {
  auto& current = out_[u];
  std::vector<NodeId> dropped;
  std::vector<NodeId> gained;
  std::set_difference(current.begin(), current.end(), targets.begin(), targets.end(), std::back_inserter(dropped));
  std::set_difference(targets.begin(), targets.end(), current.begin(), current.end(), std::back_inserter(gained));
  for (NodeId v : dropped) sorted_erase(in_[v], u);
  for (NodeId v : gained) sorted_insert(in_[v], u);
  edge_count_ = edge_count_ - current.size() + targets.size();
  current = std::move(targets);
}

}  // namespace dkg
