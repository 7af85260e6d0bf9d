#include "dkg/subgraph.hpp"

#include <algorithm>
#include <numeric>

#include "dkg/error.hpp"

namespace dkg {

namespace {

void check_nodes(const Digraph& g, std::span<const NodeId> nodes) {
  if (nodes.size() < 2) throw InvalidArgument("a pattern needs at least two nodes");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i] >= g.node_count()) throw InvalidArgument("node id out of range");
    for (std::size_t j = 0; j < i; ++j) {
      if (nodes[i] == nodes[j]) throw InvalidArgument("repeated node in pattern");
    }
  }
}

std::string digits(std::vector<int> values) {
  std::sort(values.begin(), values.end());
  std::string out;
  for (int v : values) out += std::to_string(v);
  return out;
}

std::string escape_label(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (c == '\\' || c == ';' || c == '|' || c == ',') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

}  // namespace

bool weakly_connected(const Digraph& g, std::span<const NodeId> nodes) {
  const std::size_t k = nodes.size();
  if (k == 0) return false;
  std::vector<bool> seen(k, false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const auto i = stack.back();
    stack.pop_back();
    for (std::size_t j = 0; j < k; ++j) {
      if (!seen[j] && g.adjacent(nodes[i], nodes[j])) {
        seen[j] = true;
        ++reached;
        stack.push_back(j);
      }
    }
  }
  return reached == k;
}

UniqueSequence pattern_signature(const Digraph& g, std::span<const NodeId> nodes) {
  check_nodes(g, nodes);
  if (!weakly_connected(g, nodes)) throw DisconnectedSubgraph("induced subgraph is not weakly connected");
  const std::size_t k = nodes.size();
  std::vector<int> ins(k, 0), outs(k, 0), pairs;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      const bool ij = g.has_edge(nodes[i], nodes[j]);
      const bool ji = g.has_edge(nodes[j], nodes[i]);
      outs[i] += ij;
      ins[j] += ij;
      outs[j] += ji;
      ins[i] += ji;
      pairs.push_back(int(ij) + int(ji));
    }
  }
  return digits(ins) + "-" + digits(outs) + "-" + digits(pairs);
}

UniqueSequence pattern_signature(const DocGraph& g, std::span<const NodeId> nodes) {
  return pattern_signature(g.structure(), nodes);
}

void for_each_triple(const Digraph& g, const std::function<void(const Triple&)>& visit) {
  for (NodeId c = 0; c < g.node_count(); ++c) {
    const auto around = g.neighbors(c);
    for (std::size_t x = 0; x < around.size(); ++x) {
      for (std::size_t y = x + 1; y < around.size(); ++y) {
        const NodeId a = around[x];
        const NodeId b = around[y];
        // a or b is also a centre of this triple when they are adjacent; the
        // smaller centre owns it.
        if (g.adjacent(a, b) && a < c) continue;
        Triple t{a, b, c};
        std::sort(t.begin(), t.end());
        visit(t);
      }
    }
  }
}

std::vector<Triple> enumerate_3node(const Digraph& g) {
  std::vector<Triple> out;
  for_each_triple(g, [&](const Triple& t) { out.push_back(t); });
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

std::vector<Quad> extend_triples(const Digraph& g, const SignatureSet* seed) {
  std::vector<Quad> out;
  for_each_triple(g, [&](const Triple& t) {
    if (seed && !seed->contains(pattern_signature(g, t))) return;
    for (NodeId member : t) {
      for (NodeId v : g.neighbors(member)) {
        if (v == t[0] || v == t[1] || v == t[2]) continue;
        Quad q{t[0], t[1], t[2], v};
        std::sort(q.begin(), q.end());
        out.push_back(q);
      }
    }
  });
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

std::vector<Quad> enumerate_4node(const Digraph& g, const SignatureSet& seed) {
  if (seed.empty()) throw InvalidArgument("4-node enumeration needs a non-empty seed");
  return extend_triples(g, &seed);
}

std::vector<Quad> enumerate_4node_exhaustive(const Digraph& g) { return extend_triples(g, nullptr); }

std::vector<std::vector<NodeId>> brute_force_connected_sets(const Digraph& g, std::size_t k) {
  std::vector<std::vector<NodeId>> out;
  const std::size_t n = g.node_count();
  if (k == 0 || k > n) return out;
  std::vector<NodeId> pick(k);
  std::iota(pick.begin(), pick.end(), 0);
  while (true) {
    if (weakly_connected(g, pick)) out.push_back(pick);
    std::size_t i = k;
    while (i > 0 && pick[i - 1] == n - k + i - 1) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
  }
  return out;
}

PatternCounts count_patterns(const Digraph& g, std::size_t k, const SignatureSet* seed) {
  PatternCounts result;
  auto add = [&](std::span<const NodeId> nodes) {
    ++result.counts[pattern_signature(g, nodes)];
    ++result.total;
  };
  if (k == 3) {
    for_each_triple(g, [&](const Triple& t) { add(t); });
  } else if (k == 4) {
    for (const auto& q : seed ? enumerate_4node(g, *seed) : enumerate_4node_exhaustive(g)) add(q);
  } else {
    throw InvalidArgument("pattern size must be 3 or 4");
  }
  return result;
}

std::uint64_t canonical_structure_code(const Digraph& g, std::span<const NodeId> nodes) {
  std::vector<std::size_t> order(nodes.size());
  std::iota(order.begin(), order.end(), 0);
  std::uint64_t best = UINT64_MAX;
  do {
    std::uint64_t code = 0;
    for (std::size_t i = 0; i < order.size(); ++i) {
      for (std::size_t j = 0; j < order.size(); ++j) {
        if (i == j) continue;
        code = (code << 1) | std::uint64_t(g.has_edge(nodes[order[i]], nodes[order[j]]));
      }
    }
    best = std::min(best, code);
  } while (std::next_permutation(order.begin(), order.end()));
  return best;
}

PatternSpace enumerate_all_patterns(std::size_t k) {
  if (k < 2 || k > 5) throw InvalidArgument("pattern space enumeration supports k = 2..5");
  std::vector<Edge> slots;
  for (NodeId i = 0; i < k; ++i) {
    for (NodeId j = 0; j < k; ++j) {
      if (i != j) slots.emplace_back(i, j);
    }
  }
  std::vector<NodeId> all(k);
  std::iota(all.begin(), all.end(), 0);
  std::map<UniqueSequence, std::set<std::uint64_t>> classes;
  PatternSpace space;
  space.k = k;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << slots.size()); ++mask) {
    Digraph g(k);
    for (std::size_t b = 0; b < slots.size(); ++b) {
      if (mask >> b & 1) g.add_edge(slots[b].first, slots[b].second);
    }
    if (!weakly_connected(g, all)) continue;
    ++space.labeled_graphs;
    classes[pattern_signature(g, all)].insert(canonical_structure_code(g, all));
  }
  for (const auto& [signature, codes] : classes) {
    space.signatures.emplace(signature, codes.size());
    space.isomorphism_classes += codes.size();
    if (codes.size() > 1) space.collisions.push_back({signature, codes.size()});
  }
  return space;
}

std::string canonical_labeled_form(const DocGraph& g, std::span<const NodeId> nodes, LabelMode mode,
                                   std::span<const std::string> node_syntax) {
  check_nodes(g.structure(), nodes);
  if (!weakly_connected(g.structure(), nodes)) throw DisconnectedSubgraph("induced subgraph is not weakly connected");
  const bool with_syntax = mode == LabelMode::relationships_and_syntax;
  if (with_syntax && node_syntax.size() != g.node_count()) {
    throw InvalidArgument("node syntax list does not cover the graph");
  }
  std::vector<std::size_t> order(nodes.size());
  std::iota(order.begin(), order.end(), 0);
  std::string best;
  bool first = true;
  do {
    std::string code;
    for (std::size_t i = 0; i < order.size(); ++i) {
      for (std::size_t j = 0; j < order.size(); ++j) {
        if (i == j) continue;
        const auto& labels = g.labels(nodes[order[i]], nodes[order[j]]);
        bool sep = false;
        for (const auto& label : labels) {
          if (sep) code.push_back(';');
          code += escape_label(label);
          sep = true;
        }
        code.push_back('|');
      }
    }
    if (with_syntax) {
      for (std::size_t i = 0; i < order.size(); ++i) {
        code += escape_label(node_syntax[nodes[order[i]]]);
        code.push_back(',');
      }
    }
    if (first || code < best) {
      best = std::move(code);
      first = false;
    }
  } while (std::next_permutation(order.begin(), order.end()));
  return std::to_string(nodes.size()) + "|" + best;
}

}  // namespace dkg
