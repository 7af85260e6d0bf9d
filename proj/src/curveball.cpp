#include "dkg/curveball.hpp"

#include <algorithm>
#include <iterator>

#include "dkg/error.hpp"

namespace dkg {

std::uint64_t Rng::below(std::uint64_t bound) {
  // Lemire's nearly divisionless method.
  std::uint64_t x = engine_();
  auto m = static_cast<unsigned __int128>(x) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = -bound % bound;
    while (low < threshold) {
      x = engine_();
      m = static_cast<unsigned __int128>(x) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::string_view key) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : key) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return splitmix64(seed ^ h);
}

namespace {

struct TradeOutcome {
  std::vector<NodeId> new_i;
  std::vector<NodeId> new_j;
  bool moved = false;
};

TradeOutcome plan_trade(const Digraph& g, NodeId i, NodeId j, Rng& rng) {
  const auto& oi = g.out(i);
  const auto& oj = g.out(j);
  std::vector<NodeId> a, b, shared;
  auto tradable = [&](NodeId v) { return v != i && v != j; };
  std::set_difference(oi.begin(), oi.end(), oj.begin(), oj.end(), std::back_inserter(a));
  std::set_difference(oj.begin(), oj.end(), oi.begin(), oi.end(), std::back_inserter(b));
  std::set_intersection(oi.begin(), oi.end(), oj.begin(), oj.end(), std::back_inserter(shared));
  std::erase_if(a, [&](NodeId v) { return !tradable(v); });
  std::erase_if(b, [&](NodeId v) { return !tradable(v); });

  TradeOutcome out;
  if (a.empty() || b.empty()) return out;
  std::vector<NodeId> pool = a;
  pool.insert(pool.end(), b.begin(), b.end());
  rng.shuffle(pool.begin(), pool.end());

  out.new_i = shared;
  out.new_j = shared;
  if (std::binary_search(oi.begin(), oi.end(), j)) out.new_i.push_back(j);
  if (std::binary_search(oj.begin(), oj.end(), i)) out.new_j.push_back(i);
  out.new_i.insert(out.new_i.end(), pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(a.size()));
  out.new_j.insert(out.new_j.end(), pool.begin() + static_cast<std::ptrdiff_t>(a.size()), pool.end());
  std::sort(out.new_i.begin(), out.new_i.end());
  std::sort(out.new_j.begin(), out.new_j.end());
  out.moved = out.new_i != oi;
  return out;
}

// Applies a planned trade and returns the change in the number of edges that
// are absent from `original`.
long apply_trade(Digraph& g, const Digraph* original, NodeId i, NodeId j, TradeOutcome&& trade) {
  long change = 0;
  if (original) {
    auto account = [&](NodeId u, const std::vector<NodeId>& before, const std::vector<NodeId>& after) {
      std::vector<NodeId> gone, come;
      std::set_difference(before.begin(), before.end(), after.begin(), after.end(), std::back_inserter(gone));
      std::set_difference(after.begin(), after.end(), before.begin(), before.end(), std::back_inserter(come));
      for (NodeId v : gone) change -= !original->has_edge(u, v);
      for (NodeId v : come) change += !original->has_edge(u, v);
    };
    account(i, g.out(i), trade.new_i);
    account(j, g.out(j), trade.new_j);
  }
  g.set_out(i, std::move(trade.new_i));
  g.set_out(j, std::move(trade.new_j));
  return change;
}

std::pair<NodeId, NodeId> draw_pair(const Digraph& g, Rng& rng) {
  const auto n = g.node_count();
  if (n < 2) throw InvalidArgument("a curveball trade needs at least two nodes");
  const auto i = static_cast<NodeId>(rng.below(n));
  auto j = static_cast<NodeId>(rng.below(n - 1));
  if (j >= i) ++j;
  return {i, j};
}

}  // namespace

bool curveball_trade(Digraph& g, NodeId i, NodeId j, Rng& rng) {
  if (i == j) throw InvalidArgument("curveball trade needs two distinct nodes");
  auto trade = plan_trade(g, i, j, rng);
  if (!trade.moved) return false;
  apply_trade(g, nullptr, i, j, std::move(trade));
  return true;
}

bool curveball_trade(Digraph& g, Rng& rng) {
  const auto [i, j] = draw_pair(g, rng);
  return curveball_trade(g, i, j, rng);
}

RandomizeResult randomize(const Digraph& g, const RandomizeOptions& options) {
  if (g.edge_count() == 0) throw ZeroEdges("cannot randomize a graph without edges");
  RandomizeResult result;
  result.graph = g;
  result.seed = options.seed;
  Rng rng(options.seed);
  long foreign = 0;
  const auto edges = static_cast<double>(g.edge_count());
  while (static_cast<double>(foreign) / edges < options.target && result.trades < options.max_trades) {
    ++result.trades;
    const auto [i, j] = draw_pair(result.graph, rng);
    auto trade = plan_trade(result.graph, i, j, rng);
    if (trade.moved) foreign += apply_trade(result.graph, &g, i, j, std::move(trade));
  }
  result.perturbation = static_cast<double>(foreign) / edges;
  result.reached_target = result.perturbation >= options.target;
  return result;
}

RandomizeResult randomize(const DocGraph& g, const RandomizeOptions& options) {
  return randomize(g.structure(), options);
}

double perturbation(const Digraph& original, const Digraph& randomized) {
  if (original.node_count() != randomized.node_count()) {
    throw NodeSetMismatch("graphs have " + std::to_string(original.node_count()) + " and " +
                          std::to_string(randomized.node_count()) + " nodes");
  }
  if (original.edge_count() == 0) throw ZeroEdges("perturbation of a graph without edges");
  std::size_t foreign = 0;
  for (auto [u, v] : randomized.edges()) foreign += !original.has_edge(u, v);
  return static_cast<double>(foreign) / static_cast<double>(original.edge_count());
}

double perturbation(const DocGraph& original, const Digraph& randomized) {
  return perturbation(original.structure(), randomized);
}

}  // namespace dkg
