#include <doctest.h>

#include <random>
#include <sstream>

#include "dkg/error.hpp"
#include "dkg/transforms.hpp"
#include "support/oracles.hpp"

using namespace dkg;

namespace {

struct Triple3 {
  std::string h, r, t;
};

DocGraph graph_of(const std::vector<Triple3>& facts, const std::string& doc = "T") {
  std::vector<Fact> list;
  for (const auto& f : facts) {
    list.push_back(Fact{doc, 0, TokenSpan::from_text(f.h), TokenSpan::from_text(f.r), TokenSpan::from_text(f.t)});
  }
  return build_graph(list);
}

std::size_t label_total(const DocGraph& g) {
  std::size_t n = 0;
  for (const auto& e : g.labeled_edges()) n += e.labels.size();
  return n;
}

LabelSet labels_between(const DocGraph& g, const std::string& h, const std::string& t) {
  const auto u = g.find_node(h);
  const auto v = g.find_node(t);
  if (!u || !v) return {};
  return g.labels(*u, *v);
}

// Reachability over edges carrying a hierarchical label, by node name.
std::set<std::pair<std::string, std::string>> hierarchical_closure(const DocGraph& g, const HierarchyLexicon& lex) {
  const auto n = g.node_count();
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  for (auto [u, v] : g.structure().edges()) {
    for (const auto& l : g.labels(u, v)) {
      if (is_hierarchical(g, l, lex, PosTagger())) adj[u][v] = true;
    }
  }
  std::set<std::pair<std::string, std::string>> out;
  for (NodeId s = 0; s < n; ++s) {
    for (auto t : oracle::reachable(adj, s)) {
      if (s != t) out.emplace(g.node_name(s), g.node_name(t));
    }
  }
  return out;
}

DocGraph random_labeled(std::mt19937_64& rng, std::size_t nodes, std::size_t edges,
                        const std::vector<std::string>& labels, bool acyclic) {
  std::vector<Triple3> facts;
  std::uniform_int_distribution<std::size_t> pick(0, nodes - 1);
  std::uniform_int_distribution<std::size_t> label(0, labels.size() - 1);
  for (std::size_t i = 0; i < edges; ++i) {
    auto a = pick(rng);
    auto b = pick(rng);
    if (a == b) continue;
    if (acyclic && a > b) std::swap(a, b);
    facts.push_back({"n" + std::to_string(a), labels[label(rng)], "n" + std::to_string(b)});
  }
  return graph_of(facts, "R");
}

}  // namespace

TEST_SUITE("transforms") {
  TEST_CASE("naming helpers") {
    CHECK(singularize("cells") == "cell");
    CHECK(singularize("gas") == "gas");
    CHECK(singularize("lens") == "lens");
    CHECK(singularize("glass") == "glass");
    CHECK(singularize("apparatus") == "apparatus");
    CHECK(singularize("axis") == "axis");
    CHECK(singularize("bus") == "bus");
    CHECK(entity_core("The said memory cells", true) == "memory cell");
    CHECK(entity_core("the", false) == "the");
    CHECK(compound_name("array", "memory cells") == "memory cell array");
    CHECK(compound_name("the examples", "material") == "material examples");
  }

  TEST_CASE("attribute collapse rewires incident edges") {
    const auto g = graph_of({{"array", "of", "memory cells"},
                             {"controller", "addresses", "array"},
                             {"memory cells", "store", "bits"},
                             {"bits", "fill", "memory cells"}});
    const auto r = collapse_attribute(g, "array", "memory cells");
    const auto& out = r.graph;
    REQUIRE(out.find_node("memory cell array"));
    CHECK_FALSE(out.find_node("array"));
    CHECK_FALSE(out.find_node("memory cells"));
    CHECK(out.node_count() == 3);
    CHECK(labels_between(out, "controller", "memory cell array") == LabelSet{"addresses"});
    CHECK(labels_between(out, "memory cell array", "bits") == LabelSet{"store"});
    CHECK(labels_between(out, "bits", "memory cell array") == LabelSet{"fill"});

    REQUIRE(r.edits.size() == 1);
    const auto& e = r.edits.front();
    CHECK(e.kind == EditKind::collapse_attribute);
    CHECK(e.removed_nodes == std::vector<std::string>{"array", "memory cells"});
    CHECK(e.added_nodes == std::vector<std::string>{"memory cell array"});
    CHECK(e.removed_edges.size() == 4);
    CHECK(e.added_edges.size() == 3);
    CHECK(e.self_loop_labels_dropped == 0);
    CHECK(e.coincident_labels_merged == 0);
    CHECK(e.provenance.size() == 4);
    CHECK(apply_edit(g, e) == out);
  }

  TEST_CASE("isolated pair collapses to one isolated node") {
    const auto g = graph_of({{"array", "of", "memory cells"}});
    const auto r = collapse_attribute(g, "array", "memory cells");
    CHECK(r.graph.node_count() == 1);
    CHECK(r.graph.edge_count() == 0);
    CHECK(r.edits.front().removed_nodes.size() == 2);
    CHECK(r.edits.front().added_nodes.size() == 1);
  }

  TEST_CASE("chained collapses") {
    const auto g = graph_of({{"constancy", "of", "pressure"}, {"pressure constancy", "of", "washing liquid"}});
    auto first = collapse_attribute(g, "constancy", "pressure");
    CHECK(first.graph.find_node("pressure constancy"));
    auto second = collapse_attribute(first.graph, "pressure constancy", "washing liquid");
    CHECK(second.graph.node_count() == 1);
    CHECK(second.graph.node_name(0) == "washing liquid pressure constancy");
  }

  TEST_CASE("self-loops and coincident labels are ledgered") {
    const auto g = graph_of({{"array", "of", "cells"},
                             {"cells", "form", "array"},
                             {"x", "feeds", "array"},
                             {"x", "feeds", "cells"},
                             {"x", "powers", "cells"}});
    const auto r = collapse_attribute(g, "array", "cells");
    const auto& e = r.edits.front();
    CHECK(e.self_loop_labels_dropped == 1);
    CHECK(e.coincident_labels_merged == 1);
    CHECK(labels_between(r.graph, "x", "cell array") == LabelSet{"feeds", "powers"});
    CHECK(label_total(g) - 1 - e.self_loop_labels_dropped - e.coincident_labels_merged == label_total(r.graph));
  }

  TEST_CASE("collapse errors") {
    const auto g = graph_of({{"array", "of", "cells"}, {"array", "includes", "rows"}});
    CHECK_THROWS_AS(collapse_attribute(g, "array", "nothing"), UnknownEntity);
    CHECK_THROWS_AS(collapse_attribute(g, "cells", "array"), MissingEdge);
    CHECK_THROWS_AS(collapse_attribute(g, "array", "rows"), WrongLabel);
  }

  TEST_CASE("label ledger holds on random graphs") {
    std::mt19937_64 rng(41);
    const std::vector<std::string> labels = {"of", "has", "feeds", "of", "drives"};
    for (int trial = 0; trial < 300; ++trial) {
      const auto g = random_labeled(rng, 3 + rng() % 8, 4 + rng() % 20, labels, false);
      for (auto [u, v] : g.structure().edges()) {
        if (!g.labels(u, v).contains("of")) continue;
        const auto r = collapse_attribute(g, g.node_name(u), g.node_name(v));
        const auto& e = r.edits.front();
        CHECK(label_total(g) - 1 - e.self_loop_labels_dropped - e.coincident_labels_merged == label_total(r.graph));
        CHECK(apply_edits(g, r.edits) == r.graph);
        for (auto [a, b] : r.graph.structure().edges()) CHECK(a != b);
        break;
      }
    }
  }

  TEST_CASE("edit records round-trip through JSON") {
    const auto g = graph_of({{"array", "of", "cells"}, {"cells", "form", "array"}, {"x", "feeds", "array"}});
    const auto r = collapse_attribute(g, "array", "cells");
    const auto line = edit_to_json(r.edits.front());
    const auto back = edit_from_json(line);
    CHECK(back == r.edits.front());
    CHECK(edit_to_json(back) == line);
    CHECK_THROWS_AS(edit_from_json("{\"kind\":\"bogus\"}"), InvalidArgument);
    CHECK_THROWS_AS(edit_from_json("not json"), InvalidArgument);
  }

  TEST_CASE("replay rejects edits that do not fit") {
    const auto g = graph_of({{"a", "of", "b"}});
    TransformEdit e;
    e.removed_edges.push_back({"a", "b", {"has"}});
    CHECK_THROWS_AS(apply_edit(g, e), InvalidArgument);
    TransformEdit still_wired;
    still_wired.removed_nodes = {"a"};
    CHECK_THROWS_AS(apply_edit(g, still_wired), InvalidArgument);
    TransformEdit loop;
    loop.added_edges.push_back({"a", "a", {"has"}});
    CHECK_THROWS_AS(apply_edit(g, loop), InvalidArgument);
  }

  TEST_CASE("relabel table lookup and parsing") {
    RelabelTable table;
    table.add("in", "", "", "located in");
    table.add("in", "NN NN NN", "", "measured in");
    CHECK(*table.find("in", "NN NN NN", "JJ NN") == "measured in");
    CHECK(*table.find("in", "DT NN", "NN") == "located in");
    CHECK(table.find("to", "", "") == nullptr);
    CHECK_THROWS_AS(table.add("in", "", "", "other"), InvalidArgument);
    CHECK_THROWS_AS(table.add("on", "", "", "  "), InvalidArgument);

    std::istringstream tsv("# comment\n\nin\tmeasured in\nto\tJJ JJ NN\tJJ JJ NN\treduced to\n");
    const auto parsed = RelabelTable::parse_tsv(tsv);
    CHECK(parsed.size() == 2);
    CHECK(*parsed.find("to", "JJ JJ NN", "JJ JJ NN") == "reduced to");
    std::istringstream bad("in\ta\tb\n");
    CHECK_THROWS_AS(RelabelTable::parse_tsv(bad), MalformedRecord);
  }

  TEST_CASE("relabeling is suggestion-first") {
    const auto g = graph_of({{"center block length", "in", "tire circumferential direction"},
                             {"increased transfer molar rate", "to", "same transfer molar rate"},
                             {"tire", "includes", "tread"},
                             {"tread", "with", "grooves"}});
    std::istringstream tsv("in\tmeasured in\nto\treduced to\n");
    const auto table = RelabelTable::parse_tsv(tsv);
    const auto r = suggest_relabels(g, default_abstract_relationships(), table);
    CHECK(labels_between(r.graph, "center block length", "tire circumferential direction") ==
          LabelSet{"measured in"});
    CHECK(labels_between(r.graph, "increased transfer molar rate", "same transfer molar rate") ==
          LabelSet{"reduced to"});
    CHECK(labels_between(r.graph, "tire", "tread") == LabelSet{"includes"});
    REQUIRE(r.suggestions.size() == 1);
    CHECK(r.suggestions.front().relationship == "with");
    CHECK(r.edits.size() == 2);
    for (const auto& e : r.edits) CHECK(e.kind == EditKind::relabel_relationship);
    CHECK(apply_edits(g, r.edits) == r.graph);

    const auto none = suggest_relabels(g, default_abstract_relationships(), RelabelTable());
    CHECK(none.edits.empty());
    CHECK(none.suggestions.size() == 3);
    CHECK(none.graph == g);
    CHECK_THROWS_AS(suggest_relabels(g, {}, table), InvalidArgument);
  }

  TEST_CASE("relabel uses syntax context") {
    const auto g = graph_of({{"block length", "in", "direction"}, {"a tire", "in", "a car"}});
    RelabelTable table;
    table.add("in", "NN NN", "NN", "measured in");
    std::vector<std::string> syntax(g.node_count());
    for (NodeId i = 0; i < g.node_count(); ++i) {
      const auto& name = g.node_name(i);
      syntax[i] = name == "block length" ? "NN NN" : name.starts_with("a ") ? "DT NN" : "NN";
    }
    const auto r = suggest_relabels(g, default_abstract_relationships(), table, syntax);
    CHECK(labels_between(r.graph, "block length", "direction") == LabelSet{"measured in"});
    REQUIRE(r.suggestions.size() == 1);
    CHECK(r.suggestions.front().head_syntax == "DT NN");
  }

  TEST_CASE("hierarchy: include triangle") {
    const auto lex = HierarchyLexicon::defaults();
    const auto g = graph_of({{"a", "includes", "b"}, {"b", "includes", "c"}, {"a", "includes", "c"},
                             {"c", "drives", "d"}});
    const auto r = explicate_hierarchy(g, lex);
    CHECK(r.graph.edge_count() == 3);
    CHECK(labels_between(r.graph, "a", "c").empty());
    CHECK(labels_between(r.graph, "a", "b") == LabelSet{"includes"});
    CHECK(labels_between(r.graph, "b", "c") == LabelSet{"includes"});
    REQUIRE(r.edits.size() == 1);
    CHECK(r.edits.front().kind == EditKind::hierarchy_reduce);
    CHECK(hierarchical_closure(g, lex) == hierarchical_closure(r.graph, lex));
    CHECK(apply_edits(g, r.edits) == r.graph);
    CHECK(explicate_hierarchy(r.graph, lex).graph == r.graph);
  }

  TEST_CASE("hierarchy: only hierarchical labels are removed") {
    const auto lex = HierarchyLexicon::defaults();
    const auto g = graph_of({{"a", "includes", "b"}, {"b", "includes", "c"}, {"a", "includes", "c"},
                             {"a", "heats", "c"}});
    const auto r = explicate_hierarchy(g, lex);
    CHECK(labels_between(r.graph, "a", "c") == LabelSet{"heats"});
  }

  TEST_CASE("hierarchy: attribute parent is collapsed first") {
    const auto lex = HierarchyLexicon::defaults();
    const auto g = graph_of({{"examples", "of", "material"},
                             {"examples", "include", "barium titanate"},
                             {"examples", "include", "titanium oxide"}});
    const auto r = explicate_hierarchy(g, lex);
    REQUIRE(r.graph.find_node("material examples"));
    CHECK(r.graph.node_count() == 3);
    CHECK(labels_between(r.graph, "material examples", "barium titanate") == LabelSet{"include"});
    CHECK(labels_between(r.graph, "material examples", "titanium oxide") == LabelSet{"include"});
    REQUIRE(r.edits.size() == 1);
    CHECK(r.edits.front().kind == EditKind::collapse_attribute);
    CHECK(apply_edits(g, r.edits) == r.graph);
  }

  TEST_CASE("hierarchy: cycles are logged and kept") {
    const auto lex = HierarchyLexicon::defaults();
    const auto g = graph_of({{"a", "includes", "b"}, {"b", "includes", "a"}});
    const auto r = explicate_hierarchy(g, lex);
    CHECK(r.graph == g);
    CHECK(r.edits.empty());
    CHECK(r.log.size() == 2);
  }

  TEST_CASE("hierarchy: no hierarchical labels leaves the graph alone") {
    const auto lex = HierarchyLexicon::defaults();
    const auto g = graph_of({{"a", "heats", "b"}, {"b", "cools", "c"}, {"a", "heats", "c"}});
    const auto r = explicate_hierarchy(g, lex);
    CHECK(r.graph == g);
    CHECK(r.edits.empty());
  }

  TEST_CASE("hierarchy properties on random graphs") {
    const auto lex = HierarchyLexicon::defaults();
    std::mt19937_64 rng(97);
    const std::vector<std::string> plain = {"includes", "comprises", "heats", "includes"};
    const std::vector<std::string> with_attr = {"includes", "of", "heats", "comprises"};
    for (int trial = 0; trial < 200; ++trial) {
      const bool acyclic = trial % 2 == 0;
      const auto g = random_labeled(rng, 4 + rng() % 9, 6 + rng() % 25, plain, acyclic);
      const auto r = explicate_hierarchy(g, lex);
      CHECK(hierarchical_closure(g, lex) == hierarchical_closure(r.graph, lex));
      CHECK(apply_edits(g, r.edits) == r.graph);
      CHECK(to_jsonl(apply_edits(g, r.edits)) == to_jsonl(r.graph));
      CHECK(explicate_hierarchy(r.graph, lex).graph == r.graph);

      const auto h = random_labeled(rng, 4 + rng() % 9, 6 + rng() % 25, with_attr, acyclic);
      const auto s = explicate_hierarchy(h, lex);
      CHECK(apply_edits(h, s.edits) == s.graph);
      const auto again = explicate_hierarchy(s.graph, lex);
      CHECK(again.graph == s.graph);
      CHECK(again.edits.empty());
    }
  }
}
