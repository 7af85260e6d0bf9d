#pragma once

// Reference implementations used only by the tests. They are deliberately
// naive and share no code with the library beyond its public types.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dkg/digraph.hpp"

namespace oracle {

using AdjMatrix = std::vector<std::vector<bool>>;

inline AdjMatrix matrix_of(const dkg::Digraph& g) {
  AdjMatrix m(g.node_count(), std::vector<bool>(g.node_count(), false));
  for (auto [u, v] : g.edges()) m[u][v] = true;
  return m;
}

// Signature straight from the definition: degrees inside the node set, and the
// number of directed edges per unordered pair.
inline std::string signature(const AdjMatrix& m, const std::vector<std::uint32_t>& nodes) {
  std::vector<int> ins, outs, pairs;
  for (auto a : nodes) {
    int in = 0, out = 0;
    for (auto b : nodes) {
      in += m[b][a];
      out += m[a][b];
    }
    ins.push_back(in);
    outs.push_back(out);
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (std::size_t j = i + 1; j < nodes.size(); ++j) pairs.push_back(m[nodes[i]][nodes[j]] + m[nodes[j]][nodes[i]]);
  }
  auto text = [](std::vector<int> v) {
    std::sort(v.begin(), v.end());
    std::string s;
    for (int x : v) s += char('0' + x);
    return s;
  };
  return text(ins) + "-" + text(outs) + "-" + text(pairs);
}

inline bool connected(const AdjMatrix& m, const std::vector<std::uint32_t>& nodes) {
  // union-find over the induced undirected edges
  std::vector<std::size_t> parent(nodes.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      if (m[nodes[i]][nodes[j]]) parent[find(i)] = find(j);
    }
  }
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    if (find(i) != find(0)) return false;
  }
  return true;
}

// Every connected k-subset, found by scanning all bitmasks.
inline std::vector<std::vector<std::uint32_t>> connected_subsets(const dkg::Digraph& g, std::size_t k) {
  const auto m = matrix_of(g);
  const std::size_t n = g.node_count();
  std::vector<std::vector<std::uint32_t>> out;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) != k) continue;
    std::vector<std::uint32_t> nodes;
    for (std::uint32_t b = 0; b < n; ++b) {
      if (mask >> b & 1u) nodes.push_back(b);
    }
    if (connected(m, nodes)) out.push_back(nodes);
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline dkg::Digraph random_digraph(std::mt19937_64& rng, std::size_t n, std::size_t m) {
  dkg::Digraph g(n);
  std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(n - 1));
  std::size_t guard = 0;
  while (g.edge_count() < m && guard++ < 100 * m + 100) {
    const auto u = pick(rng);
    const auto v = pick(rng);
    if (u != v) g.add_edge(u, v);
  }
  return g;
}

inline long double harmonic(std::uint64_t n, long double s) {
  long double h = 0.0L;
  for (std::uint64_t k = n; k >= 1; --k) h += std::pow(static_cast<long double>(k), -s);
  return h;
}

inline std::vector<double> zipf_proportions(std::uint64_t n, double s) {
  const auto h = harmonic(n, s);
  std::vector<double> p;
  for (std::uint64_t k = 1; k <= n; ++k) p.push_back(static_cast<double>(std::pow((long double)k, -(long double)s) / h));
  return p;
}

inline double sample_sd(const std::vector<double>& v) {
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / double(v.size());
  double ss = 0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / double(v.size() - 1));
}

// Nodes reachable from `from` following edges of `m`.
inline std::set<std::uint32_t> reachable(const AdjMatrix& m, std::uint32_t from) {
  std::set<std::uint32_t> seen;
  std::vector<std::uint32_t> stack{from};
  while (!stack.empty()) {
    auto u = stack.back();
    stack.pop_back();
    for (std::uint32_t v = 0; v < m.size(); ++v) {
      if (m[u][v] && seen.insert(v).second) stack.push_back(v);
    }
  }
  return seen;
}

}  // namespace oracle
