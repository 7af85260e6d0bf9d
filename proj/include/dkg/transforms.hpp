#pragma once

#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "dkg/doc_graph.hpp"
#include "dkg/pos_tagger.hpp"
#include "dkg/syntax.hpp"

namespace dkg {

enum class EditKind { collapse_attribute, relabel_relationship, hierarchy_reduce };

std::string_view to_string(EditKind kind);

struct EdgeLabels {
  std::string head;
  std::string tail;
  LabelSet labels;

  bool operator==(const EdgeLabels&) const = default;
};

// A recorded graph rewrite. Replaying it removes the listed edge labels,
// then the listed nodes, then adds nodes and edge labels (label sets merge
// with whatever is already present).
struct TransformEdit {
  EditKind kind = EditKind::collapse_attribute;
  std::vector<std::string> removed_nodes;
  std::vector<EdgeLabels> removed_edges;
  std::vector<std::string> added_nodes;
  std::vector<EdgeLabels> added_edges;
  // Source facts as "head :: rel :: tail".
  std::vector<std::string> provenance;
  std::vector<std::string> notes;
  // Labels lost because re-attaching them would have made a self-loop.
  std::size_t self_loop_labels_dropped = 0;
  // Labels that landed on an edge already carrying the same label.
  std::size_t coincident_labels_merged = 0;

  bool operator==(const TransformEdit&) const = default;
};

// Throws InvalidArgument when the edit does not fit the graph (missing
// label, removing a node that still has edges, self-loop).
DocGraph apply_edit(const DocGraph& g, const TransformEdit& edit);
DocGraph apply_edits(const DocGraph& g, std::span<const TransformEdit> edits);

std::string edit_to_json(const TransformEdit& edit);
TransformEdit edit_from_json(std::string_view line);

// Naive singular form: drops a final "s" unless the word is short, ends in
// "ss", "us" or "is", or is a known invariant plural.
std::string singularize(std::string_view word);
// Strips leading determiners (the, a, an, said, each); with `singular` the
// final token is also singularized.
std::string entity_core(std::string_view entity, bool singular);
// Name of the entity produced by collapsing "head of tail": core(tail) then
// core(head), e.g. ("array", "memory cells") -> "memory cell array".
std::string compound_name(std::string_view head, std::string_view tail);

inline constexpr const char* kAttributeLabel = "of";

struct TransformResult {
  DocGraph graph;
  std::vector<TransformEdit> edits;
};

// Merges the endpoints of an "of" edge into one compound node and re-attaches
// every other incident edge to it. Throws UnknownEntity, MissingEdge and
// WrongLabel.
TransformResult collapse_attribute(const DocGraph& g, std::string_view head, std::string_view tail);

// Keys are (relationship, head syntax, tail syntax); an empty syntax is a
// wildcard. Lookup tries the most specific key first.
class RelabelTable {
 public:
  // Throws InvalidArgument for duplicate keys or empty values.
  void add(std::string relationship, std::string head_syntax, std::string tail_syntax, std::string replacement);
  const std::string* find(std::string_view relationship, std::string_view head_syntax,
                          std::string_view tail_syntax) const;
  std::size_t size() const { return entries_.size(); }

  // `relationship<TAB>head_syntax<TAB>tail_syntax<TAB>replacement` or
  // `relationship<TAB>replacement`; '#' comments and blank lines skipped.
  static RelabelTable parse_tsv(std::istream& in);

 private:
  std::map<std::tuple<std::string, std::string, std::string>, std::string, std::less<>> entries_;
};

const std::set<std::string>& default_abstract_relationships();

struct RelabelSuggestion {
  std::string head;
  std::string tail;
  std::string relationship;
  std::string head_syntax;
  std::string tail_syntax;
};

struct RelabelResult {
  DocGraph graph;
  std::vector<TransformEdit> edits;
  std::vector<RelabelSuggestion> suggestions;
};

// Flags every edge label in `abstract`. Labels with a table entry are
// replaced; the rest become suggestions. `node_syntax` (indexed by node id)
// supplies the syntax context and may be empty. Throws InvalidArgument for an
// empty abstract set.
RelabelResult suggest_relabels(const DocGraph& g, const std::set<std::string>& abstract, const RelabelTable& table,
                               std::span<const std::string> node_syntax = {});

struct ExplicateResult {
  DocGraph graph;
  std::vector<TransformEdit> edits;
  std::vector<std::string> log;
};

// Labels that match the hierarchy lexicon (tagging relationship spans with the
// fallback tagger when they carry no tags).
bool is_hierarchical(const DocGraph& g, std::string_view label, const HierarchyLexicon& lex, const PosTagger& tagger);

// Collapses "of" edges whose head is a hierarchical parent, then removes
// hierarchical edges that are implied by another hierarchical path. Edges
// inside a hierarchical cycle are left alone and logged.
ExplicateResult explicate_hierarchy(const DocGraph& g, const HierarchyLexicon& lex,
                                    const PosTagger& tagger = PosTagger());

}  // namespace dkg
