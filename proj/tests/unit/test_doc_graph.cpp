#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <random>

#include "dkg/doc_graph.hpp"
#include "dkg/error.hpp"
#include "support/oracles.hpp"

using namespace dkg;

namespace {

Corpus load_fixture() {
  std::ifstream in(DKG_FIXTURE_DIR "/us4358411.tsv");
  return load_corpus(in);
}

Fact fact(const std::string& h, const std::string& r, const std::string& t, const std::string& doc = "D") {
  return Fact{doc, 0, TokenSpan::from_text(h), TokenSpan::from_text(r), TokenSpan::from_text(t)};
}

std::vector<std::string> sorted(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST_SUITE("graph") {
  TEST_CASE("worked example graph") {
    const auto corpus = load_fixture();
    const auto g = build_graph(corpus.document_facts(0));
    CHECK(g.doc_id() == "US4358411");
    CHECK(g.node_count() == 7);
    CHECK(g.edge_count() == 6);
    CHECK(std::abs(sparsity(g) - 6.0 / 7.0) <= 1e-9);
    const auto r = g.find_node("the reaction");
    const auto t = g.find_node("a temperature");
    REQUIRE(r);
    REQUIRE(t);
    CHECK(g.labels(*r, *t) == LabelSet{"is carried out at"});
  }

  TEST_CASE("empty and collapsed graphs") {
    const auto empty = build_graph({});
    CHECK(empty.node_count() == 0);
    CHECK_THROWS_AS(sparsity(empty), EmptyGraph);

    const std::vector<Fact> facts = {fact("A", "r1", "B"), fact("a", "r2", "b")};
    const auto g = build_graph(facts);
    CHECK(g.edge_count() == 1);
    CHECK(g.labels(0, 1) == LabelSet{"r1", "r2"});
  }

  TEST_CASE("self-loop facts are dropped and counted") {
    const std::vector<Fact> facts = {fact("The Box", "of", "the  box"), fact("x", "of", "y")};
    const auto g = build_graph(facts);
    CHECK(g.dropped_self_loops() == 1);
    CHECK(g.node_count() == 2);
    CHECK(g.edge_count() == 1);
  }

  TEST_CASE("single node sparsity") {
    GraphDraft d;
    d.doc_id = "S";
    d.nodes = {"alone"};
    CHECK(sparsity(DocGraph::from_draft(d)) == 0.0);
  }

  TEST_CASE("mixed documents are rejected") {
    const std::vector<Fact> facts = {fact("a", "r", "b", "D1"), fact("a", "r", "b", "D2")};
    CHECK_THROWS_AS(build_graph(facts), InvalidArgument);
  }

  TEST_CASE("neighborhood") {
    const auto g = build_graph(load_fixture().document_facts(0));
    const auto one = neighborhood(g, "The Reaction", 1);
    CHECK(sorted(one.nodes()) == sorted({"a process", "the reaction", "a temperature", "a partial pressure"}));
    CHECK(one.edge_count() == 3);
    const auto all = neighborhood(g, "the reaction", 10);
    CHECK(all == g);
    CHECK_THROWS_AS(neighborhood(g, "nothing", 1), UnknownEntity);

    GraphDraft d;
    d.nodes = {"island", "p", "q"};
    d.edges[{"p", "q"}] = {"of"};
    const auto iso = neighborhood(DocGraph::from_draft(d), "island", 3);
    CHECK(iso.nodes() == std::vector<std::string>{"island"});
  }

  TEST_CASE("invariants on random fact lists") {
    std::mt19937_64 rng(21);
    const std::vector<std::string> ents = {"a", "b", "c", "d", "e", "f"};
    const std::vector<std::string> rels = {"of", "in", "includes"};
    for (int round = 0; round < 50; ++round) {
      std::vector<Fact> facts;
      const auto n = rng() % 25;
      for (std::size_t i = 0; i < n; ++i) {
        facts.push_back(fact(ents[rng() % ents.size()], rels[rng() % rels.size()], ents[rng() % ents.size()]));
      }
      const auto g = build_graph(facts);
      std::size_t in_sum = 0, out_sum = 0, labels = 0;
      for (NodeId u = 0; u < g.node_count(); ++u) {
        in_sum += g.structure().in_degree(u);
        out_sum += g.structure().out_degree(u);
      }
      for (const auto& e : g.labeled_edges()) labels += e.labels.size();
      CHECK(in_sum == g.edge_count());
      CHECK(out_sum == g.edge_count());
      std::set<std::string> distinct;
      std::size_t loops = 0;
      for (const auto& f : facts) {
        if (f.head.key() == f.tail.key()) {
          ++loops;
          continue;
        }
        distinct.insert(fact_key(f));
      }
      CHECK(labels == distinct.size());
      CHECK(g.dropped_self_loops() == loops);

      auto shuffled = facts;
      std::shuffle(shuffled.begin(), shuffled.end(), rng);
      CHECK(build_graph(shuffled) == g);
      CHECK(to_jsonl(build_graph(shuffled)) == to_jsonl(g));
    }
  }

  TEST_CASE("jsonl and dot export") {
    const auto g = build_graph(load_fixture().document_facts(0));
    const auto line = to_jsonl(g);
    CHECK(from_jsonl(line) == g);
    CHECK(to_jsonl(from_jsonl(line)) == line);
    const auto dot = to_dot(g);
    CHECK(dot.find("\"the reaction\" -> \"a temperature\" [label=\"is carried out at\"];") != std::string::npos);

    const std::vector<Fact> facts = {fact("a", "r1", "b"), fact("a", "r2", "b")};
    CHECK(to_dot(build_graph(facts)).find("[label=\"r1; r2\"]") != std::string::npos);
    CHECK_THROWS_AS(from_jsonl("{}"), InvalidArgument);
  }
}
