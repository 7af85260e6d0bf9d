#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "dkg/cli.hpp"
#include "dkg/doc_graph.hpp"
#include "dkg/transforms.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kFixture = DKG_FIXTURE_DIR "/us4358411.tsv";

class TempDir {
 public:
  TempDir() {
    static std::mt19937_64 rng(std::random_device{}());
    path_ = fs::temp_directory_path() / ("dkg_cli_test_" + std::to_string(rng()));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  const fs::path& path() const { return path_; }
  std::string str(const std::string& leaf = "") const { return leaf.empty() ? path_.string() : (path_ / leaf).string(); }

 private:
  fs::path path_;
};

struct Outcome {
  int status = 0;
  std::string out;
  std::string err;
};

Outcome run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  Outcome o;
  o.status = dkg::cli::run(args, out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> listing(const fs::path& dir) {
  std::vector<std::string> names;
  for (const auto& e : fs::directory_iterator(dir)) names.push_back(e.path().filename().string());
  std::sort(names.begin(), names.end());
  return names;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("mine on the worked example") {
    TempDir dir;
    const auto o = run({"mine", kFixture, "--size", "3", "-o", dir.str()});
    REQUIRE(o.status == dkg::cli::kOk);
    const auto csv = slurp(dir.path() / "patterns_k3.csv");
    CHECK(csv.starts_with("doc_id,k,signature,count\n"));
    CHECK(csv.find("US4358411,3,011-011-011,5\n") != std::string::npos);
    CHECK(csv.find("US4358411,3,011-002-011,1\n") != std::string::npos);
  }

  TEST_CASE("frequency and syntax tables") {
    TempDir dir;
    REQUIRE(run({"stats", kFixture, "-o", dir.str("s")}).status == dkg::cli::kOk);
    const auto rel = slurp(dir.path() / "s" / "relationship_freq.csv");
    CHECK(rel.starts_with("term,count\nof,3\n"));

    REQUIRE(run({"syntax", kFixture, "--field", "relationships", "-o", dir.str("y")}).status == dkg::cli::kOk);
    const auto syntax = slurp(dir.path() / "y" / "syntax_relationships.csv");
    CHECK(syntax.starts_with("surface,syntax,count\nof,of,3\n"));
    CHECK(fs::exists(dir.path() / "y" / "hierarchy.csv"));
  }

  TEST_CASE("supplied tags under the fixed word list") {
    TempDir dir;
    const auto o = run({"syntax", DKG_FIXTURE_DIR "/tagged_entities.jsonl", "--field", "entities", "--retention",
                        "paper-list", "-o", dir.str()});
    REQUIRE(o.status == dkg::cli::kOk);
    CHECK(slurp(dir.path() / "syntax_entities.csv") ==
          "surface,syntax,count\n"
          "a shake,a NN,2\n"
          "all three erase blocks,all CD NN NNS,1\n"
          "the cured spar assembly,the JJ NNP NNP,1\n"
          "the main antenna signal,the JJ NN signal,1\n"
          "the spectrometer field,the JJ NN,1\n");
  }

  TEST_CASE("oracle prints the pattern-space summary") {
    const auto o = run({"oracle", "--size", "3"});
    REQUIRE(o.status == dkg::cli::kOk);
    CHECK(o.out.find("13 signatures, 0 collisions") != std::string::npos);
  }

  TEST_CASE("usage errors") {
    TempDir dir;
    const auto empty = dir.str("empty.tsv");
    std::ofstream(empty).close();
    const auto out_dir = dir.str("out");
    const auto z = run({"zipf", empty, "--field", "entities", "-o", out_dir});
    CHECK(z.status != dkg::cli::kOk);
    CHECK_FALSE(z.err.empty());
    CHECK((!fs::exists(out_dir) || fs::is_empty(out_dir)));

    CHECK(run({"frobnicate"}).status == dkg::cli::kUsage);
    CHECK(run({}).status == dkg::cli::kUsage);
    CHECK(run({"randomize", kFixture, "-o", out_dir}).status == dkg::cli::kUsage);
    CHECK(run({"mine", dir.str("missing.tsv")}).status == dkg::cli::kUsage);
  }

  TEST_CASE("failed runs leave no partial artifacts") {
    TempDir dir;
    const auto bad = dir.str("bad.tsv");
    {
      std::ofstream f(bad);
      f << "D1\t1\tthe pump\tfeeds\tthe tank\n";
      f << "D1\tnot-a-number\tbroken\n";
    }
    const auto out_dir = dir.str("out");
    const auto abort = run({"ingest", bad, "-o", out_dir, "--on-error", "abort"});
    CHECK(abort.status != dkg::cli::kOk);
    CHECK((!fs::exists(out_dir) || fs::is_empty(out_dir)));

    const auto skip = run({"ingest", bad, "-o", out_dir, "--on-error", "skip"});
    CHECK(skip.status == dkg::cli::kOk);
    CHECK(listing(out_dir) == std::vector<std::string>{"facts.jsonl", "skipped.tsv", "summary.json"});

    const auto collapse = run({"transform", kFixture, "--op", "collapse", "--doc", "US4358411", "--head",
                               "nowhere", "--tail", "nothing", "-o", dir.str("t")});
    CHECK(collapse.status != dkg::cli::kOk);
    CHECK((!fs::exists(dir.str("t")) || fs::is_empty(dir.str("t"))));
  }

  TEST_CASE("help documents artifacts") {
    const auto o = run({"mine", "--help"});
    CHECK(o.status == dkg::cli::kOk);
    CHECK(o.out.find("patterns_k<size>.csv") != std::string::npos);
  }

  TEST_CASE("transform edits replay onto the exported graph") {
    TempDir dir;
    const auto o = run({"transform", kFixture, "--op", "collapse", "--doc", "US4358411", "--head", "a temperature",
                        "--tail", "at least 100° c.", "-o", dir.str()});
    REQUIRE(o.status == dkg::cli::kOk);
    const auto after = dkg::from_jsonl(slurp(dir.path() / "transformed.jsonl"));

    const auto exported = run({"export", kFixture, "--format", "jsonl", "-o", dir.str("exp")});
    REQUIRE(exported.status == dkg::cli::kOk);
    const auto before = dkg::from_jsonl(slurp(dir.path() / "exp" / "graphs.jsonl"));

    std::istringstream edits(slurp(dir.path() / "edits.jsonl"));
    std::vector<dkg::TransformEdit> list;
    for (std::string line; std::getline(edits, line);) {
      if (!line.empty()) list.push_back(dkg::edit_from_json(line));
    }
    REQUIRE(list.size() == 1);
    CHECK(dkg::apply_edits(before, list) == after);
    CHECK(after.find_node("at least 100° c. temperature"));
  }

  TEST_CASE("motif artifacts do not depend on job count") {
    TempDir dir;
    const auto a = run({"motifs", kFixture, "--seed", "7", "--jobs", "1", "-o", dir.str("a")});
    const auto b = run({"motifs", kFixture, "--seed", "7", "--jobs", "4", "-o", dir.str("b")});
    REQUIRE(a.status == dkg::cli::kOk);
    REQUIRE(b.status == dkg::cli::kOk);
    const auto names = listing(dir.path() / "a");
    CHECK(names == listing(dir.path() / "b"));
    for (const auto& n : names) CHECK(slurp(dir.path() / "a" / n) == slurp(dir.path() / "b" / n));
  }
}
