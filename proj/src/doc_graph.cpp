#include "dkg/doc_graph.hpp"

#include <algorithm>
#include <deque>

#include <json.hpp>

#include "dkg/error.hpp"
#include "dkg/text.hpp"

namespace dkg {

namespace {

const LabelSet& empty_labels() {
  static const LabelSet kEmpty;
  return kEmpty;
}

// Keeps the representative that sorts first, preferring one with tags, so the
// choice does not depend on input order.
void remember_span(std::map<std::string, TokenSpan>& spans, const std::string& key, const TokenSpan& span) {
  auto [it, inserted] = spans.emplace(key, span);
  if (inserted) return;
  auto rank = [](const TokenSpan& s) { return std::make_tuple(!s.pos.has_value(), s.text, s.pos); };
  if (rank(span) < rank(it->second)) it->second = span;
}

std::string dot_quote(std::string_view text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

DocGraph DocGraph::from_draft(GraphDraft draft) {
  DocGraph g;
  g.doc_id_ = std::move(draft.doc_id);
  g.dropped_self_loops_ = draft.dropped_self_loops;
  for (const auto& [pair, labels] : draft.edges) {
    if (pair.first == pair.second) throw InvalidArgument("self-loop on '" + pair.first + "'");
    if (labels.empty()) throw InvalidArgument("edge '" + pair.first + "' -> '" + pair.second + "' has no label");
    draft.nodes.insert(pair.first);
    draft.nodes.insert(pair.second);
  }
  g.names_.assign(draft.nodes.begin(), draft.nodes.end());
  g.structure_ = Digraph(g.names_.size());
  for (auto& [pair, labels] : draft.edges) {
    const auto u = *g.find_node(pair.first);
    const auto v = *g.find_node(pair.second);
    g.structure_.add_edge(u, v);
    g.labels_.emplace(Edge{u, v}, std::move(labels));
  }
  for (auto& [name, span] : draft.node_spans) {
    if (std::binary_search(g.names_.begin(), g.names_.end(), name)) g.node_spans_.emplace(name, std::move(span));
  }
  for (auto& [label, span] : draft.rel_spans) g.rel_spans_.emplace(label, std::move(span));
  return g;
}

GraphDraft DocGraph::to_draft() const {
  GraphDraft draft;
  draft.doc_id = doc_id_;
  draft.nodes.insert(names_.begin(), names_.end());
  for (const auto& [edge, labels] : labels_) draft.edges.emplace(std::pair{names_[edge.first], names_[edge.second]}, labels);
  draft.node_spans.insert(node_spans_.begin(), node_spans_.end());
  draft.rel_spans.insert(rel_spans_.begin(), rel_spans_.end());
  draft.dropped_self_loops = dropped_self_loops_;
  return draft;
}

std::optional<NodeId> DocGraph::find_node(std::string_view name) const {
  auto it = std::lower_bound(names_.begin(), names_.end(), name);
  if (it == names_.end() || *it != name) return std::nullopt;
  return static_cast<NodeId>(it - names_.begin());
}

const LabelSet& DocGraph::labels(NodeId head, NodeId tail) const {
  auto it = labels_.find(Edge{head, tail});
  return it == labels_.end() ? empty_labels() : it->second;
}

std::vector<LabeledEdge> DocGraph::labeled_edges() const {
  std::vector<LabeledEdge> out;
  out.reserve(labels_.size());
  for (const auto& [edge, labels] : labels_) {
    out.push_back({names_[edge.first], names_[edge.second], {labels.begin(), labels.end()}});
  }
  return out;
}

const TokenSpan* DocGraph::node_span(NodeId id) const {
  auto it = node_spans_.find(names_[id]);
  return it == node_spans_.end() ? nullptr : &it->second;
}

const TokenSpan* DocGraph::rel_span(std::string_view label) const {
  auto it = rel_spans_.find(label);
  return it == rel_spans_.end() ? nullptr : &it->second;
}

bool DocGraph::operator==(const DocGraph& other) const {
  return doc_id_ == other.doc_id_ && names_ == other.names_ && labels_ == other.labels_;
}

DocGraph build_graph(std::span<const Fact> facts) {
  GraphDraft draft;
  if (!facts.empty()) draft.doc_id = facts.front().doc_id;
  for (const auto& fact : facts) {
    if (fact.doc_id != draft.doc_id) {
      throw InvalidArgument("facts from documents '" + draft.doc_id + "' and '" + fact.doc_id + "' mixed");
    }
    auto head = fact.head.key();
    auto tail = fact.tail.key();
    if (head == tail) {
      ++draft.dropped_self_loops;
      continue;
    }
    auto rel = fact.rel.key();
    remember_span(draft.node_spans, head, fact.head);
    remember_span(draft.node_spans, tail, fact.tail);
    remember_span(draft.rel_spans, rel, fact.rel);
    draft.nodes.insert(head);
    draft.nodes.insert(tail);
    draft.edges[{std::move(head), std::move(tail)}].insert(std::move(rel));
  }
  return DocGraph::from_draft(std::move(draft));
}

double sparsity(const DocGraph& g) {
  if (g.node_count() == 0) throw EmptyGraph("sparsity of a graph without nodes");
  return static_cast<double>(g.edge_count()) / static_cast<double>(g.node_count());
}

DocGraph induced_subgraph(const DocGraph& g, std::span<const NodeId> nodes) {
  std::vector<NodeId> keep(nodes.begin(), nodes.end());
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  GraphDraft draft;
  draft.doc_id = g.doc_id();
  for (NodeId u : keep) {
    draft.nodes.insert(g.node_name(u));
    if (const auto* span = g.node_span(u)) draft.node_spans.emplace(g.node_name(u), *span);
    for (NodeId v : g.structure().out(u)) {
      if (!std::binary_search(keep.begin(), keep.end(), v)) continue;
      const auto& labels = g.labels(u, v);
      draft.edges.emplace(std::pair{g.node_name(u), g.node_name(v)}, labels);
      for (const auto& label : labels) {
        if (const auto* span = g.rel_span(label)) draft.rel_spans.emplace(label, *span);
      }
    }
  }
  return DocGraph::from_draft(std::move(draft));
}

DocGraph neighborhood(const DocGraph& g, std::string_view entity, std::size_t hops) {
  const auto start = g.find_node(normalize_key(entity));
  if (!start) throw UnknownEntity("entity '" + std::string(entity) + "' not in graph '" + g.doc_id() + "'");
  std::vector<std::size_t> depth(g.node_count(), SIZE_MAX);
  std::deque<NodeId> queue{*start};
  depth[*start] = 0;
  std::vector<NodeId> reached{*start};
  while (!queue.empty()) {
    const NodeId u = queue.front();
    queue.pop_front();
    if (depth[u] == hops) continue;
    for (NodeId v : g.structure().neighbors(u)) {
      if (depth[v] != SIZE_MAX) continue;
      depth[v] = depth[u] + 1;
      reached.push_back(v);
      queue.push_back(v);
    }
  }
  return induced_subgraph(g, reached);
}

std::string to_dot(const DocGraph& g) {
  std::string out = "digraph " + dot_quote(g.doc_id()) + " {\n";
  for (const auto& name : g.nodes()) out += "  " + dot_quote(name) + ";\n";
  for (const auto& edge : g.labeled_edges()) {
    out += "  " + dot_quote(edge.head) + " -> " + dot_quote(edge.tail) + " [label=" + dot_quote(join(edge.labels, "; ")) +
           "];\n";
  }
  out += "}\n";
  return out;
}

std::string to_jsonl(const DocGraph& g) {
  nlohmann::ordered_json j;
  j["doc_id"] = g.doc_id();
  j["nodes"] = g.nodes();
  auto edges = nlohmann::ordered_json::array();
  for (const auto& edge : g.labeled_edges()) {
    nlohmann::ordered_json e;
    e["h"] = edge.head;
    e["t"] = edge.tail;
    e["labels"] = edge.labels;
    edges.push_back(std::move(e));
  }
  j["edges"] = std::move(edges);
  return j.dump();
}

DocGraph from_jsonl(std::string_view line) {
  GraphDraft draft;
  try {
    auto j = nlohmann::json::parse(line);
    draft.doc_id = j.at("doc_id").get<std::string>();
    for (const auto& node : j.at("nodes")) draft.nodes.insert(node.get<std::string>());
    for (const auto& e : j.at("edges")) {
      auto& labels = draft.edges[{e.at("h").get<std::string>(), e.at("t").get<std::string>()}];
      for (const auto& label : e.at("labels")) labels.insert(label.get<std::string>());
    }
  } catch (const nlohmann::json::exception& ex) {
    throw InvalidArgument(std::string("bad graph record: ") + ex.what());
  }
  return DocGraph::from_draft(std::move(draft));
}

}  // namespace dkg
