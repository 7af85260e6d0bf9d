#include "dkg/transforms.hpp"

#include <algorithm>
#include <deque>
#include <istream>

#include <fmt/format.h>
#include <json.hpp>

#include "dkg/error.hpp"
#include "dkg/text.hpp"

namespace dkg {

std::string_view to_string(EditKind kind) {
  switch (kind) {
    case EditKind::collapse_attribute:
      return "collapse-attribute";
    case EditKind::relabel_relationship:
      return "relabel-relationship";
    case EditKind::hierarchy_reduce:
      return "hierarchy-reduce";
  }
  return "unknown";
}

namespace {

EditKind kind_from_string(std::string_view text) {
  for (auto kind : {EditKind::collapse_attribute, EditKind::relabel_relationship, EditKind::hierarchy_reduce}) {
    if (to_string(kind) == text) return kind;
  }
  throw InvalidArgument("unknown edit kind '" + std::string(text) + "'");
}

std::string fact_text(std::string_view h, std::string_view r, std::string_view t) {
  return fmt::format("{} :: {} :: {}", h, r, t);
}

void apply_to_draft(GraphDraft& d, const TransformEdit& e) {
  for (const auto& edge : e.removed_edges) {
    auto it = d.edges.find({edge.head, edge.tail});
    if (it == d.edges.end()) throw InvalidArgument("edit removes missing edge " + edge.head + " -> " + edge.tail);
    for (const auto& label : edge.labels) {
      if (it->second.erase(label) == 0) {
        throw InvalidArgument("edit removes missing label '" + label + "' on " + edge.head + " -> " + edge.tail);
      }
    }
    if (it->second.empty()) d.edges.erase(it);
  }
  for (const auto& node : e.removed_nodes) {
    for (const auto& [pair, labels] : d.edges) {
      if (pair.first == node || pair.second == node) {
        throw InvalidArgument("edit removes node '" + node + "' that still has edges");
      }
    }
    d.nodes.erase(node);
    d.node_spans.erase(node);
  }
  d.nodes.insert(e.added_nodes.begin(), e.added_nodes.end());
  for (const auto& edge : e.added_edges) {
    if (edge.head == edge.tail) throw InvalidArgument("edit adds a self-loop on '" + edge.head + "'");
    d.nodes.insert(edge.head);
    d.nodes.insert(edge.tail);
    d.edges[{edge.head, edge.tail}].insert(edge.labels.begin(), edge.labels.end());
  }
}

nlohmann::ordered_json edges_json(const std::vector<EdgeLabels>& edges) {
  auto out = nlohmann::ordered_json::array();
  for (const auto& e : edges) {
    nlohmann::ordered_json j;
    j["h"] = e.head;
    j["t"] = e.tail;
    j["labels"] = std::vector<std::string>(e.labels.begin(), e.labels.end());
    out.push_back(std::move(j));
  }
  return out;
}

std::vector<EdgeLabels> edges_from_json(const nlohmann::json& j) {
  std::vector<EdgeLabels> out;
  for (const auto& e : j) {
    EdgeLabels edge{e.at("h").get<std::string>(), e.at("t").get<std::string>(), {}};
    for (const auto& l : e.at("labels")) edge.labels.insert(l.get<std::string>());
    out.push_back(std::move(edge));
  }
  return out;
}

}  // namespace

DocGraph apply_edit(const DocGraph& g, const TransformEdit& edit) {
  auto draft = g.to_draft();
  apply_to_draft(draft, edit);
  return DocGraph::from_draft(std::move(draft));
}

DocGraph apply_edits(const DocGraph& g, std::span<const TransformEdit> edits) {
  auto draft = g.to_draft();
  for (const auto& e : edits) apply_to_draft(draft, e);
  return DocGraph::from_draft(std::move(draft));
}

std::string edit_to_json(const TransformEdit& edit) {
  nlohmann::ordered_json j;
  j["kind"] = std::string(to_string(edit.kind));
  j["removed_nodes"] = edit.removed_nodes;
  j["removed_edges"] = edges_json(edit.removed_edges);
  j["added_nodes"] = edit.added_nodes;
  j["added_edges"] = edges_json(edit.added_edges);
  j["provenance"] = edit.provenance;
  j["notes"] = edit.notes;
  j["self_loop_labels_dropped"] = edit.self_loop_labels_dropped;
  j["coincident_labels_merged"] = edit.coincident_labels_merged;
  return j.dump();
}

TransformEdit edit_from_json(std::string_view line) {
  try {
    auto j = nlohmann::json::parse(line);
    TransformEdit e;
    e.kind = kind_from_string(j.at("kind").get<std::string>());
    e.removed_nodes = j.at("removed_nodes").get<std::vector<std::string>>();
    e.removed_edges = edges_from_json(j.at("removed_edges"));
    e.added_nodes = j.at("added_nodes").get<std::vector<std::string>>();
    e.added_edges = edges_from_json(j.at("added_edges"));
    e.provenance = j.value("provenance", std::vector<std::string>{});
    e.notes = j.value("notes", std::vector<std::string>{});
    e.self_loop_labels_dropped = j.value("self_loop_labels_dropped", std::size_t{0});
    e.coincident_labels_merged = j.value("coincident_labels_merged", std::size_t{0});
    return e;
  } catch (const nlohmann::json::exception& ex) {
    throw InvalidArgument(std::string("bad edit record: ") + ex.what());
  }
}

std::string singularize(std::string_view word) {
  static const WordSet kInvariant = {"alias",  "atlas",   "bias",   "canvas",      "chassis", "gas",
                                     "lens",   "means",   "news",   "series",      "species", "plus",
                                     "thus",   "corpus",  "apparatus", "physics",  "mathematics", "electronics",
                                     "optics", "kinetics", "dynamics"};
  std::string w(word);
  if (w.size() <= 3 || w.back() != 's' || kInvariant.contains(w)) return w;
  if (w.ends_with("ss") || w.ends_with("us") || w.ends_with("is")) return w;
  w.pop_back();
  return w;
}

std::string entity_core(std::string_view entity, bool singular) {
  static const WordSet kLeading = {"the", "a", "an", "said", "each"};
  auto words = split_words(normalize_key(entity));
  std::size_t first = 0;
  while (first + 1 < words.size() && kLeading.contains(words[first])) ++first;
  std::vector<std::string> core(words.begin() + static_cast<std::ptrdiff_t>(first), words.end());
  if (singular && !core.empty()) core.back() = singularize(core.back());
  return join(core, " ");
}

std::string compound_name(std::string_view head, std::string_view tail) {
  return entity_core(tail, true) + " " + entity_core(head, false);
}

TransformResult collapse_attribute(const DocGraph& g, std::string_view head, std::string_view tail) {
  const auto h = normalize_key(head);
  const auto t = normalize_key(tail);
  const auto hid = g.find_node(h);
  const auto tid = g.find_node(t);
  if (!hid) throw UnknownEntity("entity '" + h + "' not in graph");
  if (!tid) throw UnknownEntity("entity '" + t + "' not in graph");
  const auto& pair_labels = g.labels(*hid, *tid);
  if (pair_labels.empty()) throw MissingEdge("no edge '" + h + "' -> '" + t + "'");
  if (!pair_labels.contains(kAttributeLabel)) throw WrongLabel("edge '" + h + "' -> '" + t + "' is not labeled 'of'");

  const auto merged = compound_name(h, t);
  TransformEdit edit;
  edit.kind = EditKind::collapse_attribute;
  edit.removed_nodes = h == t ? std::vector<std::string>{h} : std::vector<std::string>{h, t};
  edit.added_nodes = {merged};

  const auto draft = g.to_draft();
  std::map<std::pair<std::string, std::string>, LabelSet> added;
  auto remap = [&](const std::string& node) { return node == h || node == t ? merged : node; };
  for (const auto& [pair, labels] : draft.edges) {
    const bool touches = pair.first == h || pair.first == t || pair.second == h || pair.second == t;
    if (!touches) continue;
    edit.removed_edges.push_back({pair.first, pair.second, labels});
    for (const auto& label : labels) edit.provenance.push_back(fact_text(pair.first, label, pair.second));
    const auto nh = remap(pair.first);
    const auto nt = remap(pair.second);
    const bool collapsed_pair = pair.first == h && pair.second == t;
    if (nh == nt) {
      for (const auto& label : labels) {
        if (collapsed_pair && label == kAttributeLabel) continue;
        ++edit.self_loop_labels_dropped;
        edit.notes.push_back("dropped self-loop " + fact_text(nh, label, nt));
      }
      continue;
    }
    auto& target = added[{nh, nt}];
    const auto existing = draft.edges.find({nh, nt});
    const bool existing_survives = existing != draft.edges.end() && remap(nh) == nh && remap(nt) == nt &&
                                   !(nh == h || nh == t || nt == h || nt == t);
    for (const auto& label : labels) {
      const bool seen = target.contains(label) || (existing_survives && existing->second.contains(label));
      if (seen) {
        ++edit.coincident_labels_merged;
        edit.notes.push_back("merged coincident " + fact_text(nh, label, nt));
      }
      target.insert(label);
    }
  }
  for (auto& [pair, labels] : added) edit.added_edges.push_back({pair.first, pair.second, std::move(labels)});

  TransformResult result{apply_edit(g, edit), {}};
  result.edits.push_back(std::move(edit));
  return result;
}

void RelabelTable::add(std::string relationship, std::string head_syntax, std::string tail_syntax,
                       std::string replacement) {
  relationship = normalize_key(relationship);
  replacement = normalize_key(replacement);
  if (relationship.empty()) throw InvalidArgument("relabel entry without a relationship");
  if (replacement.empty()) throw InvalidArgument("relabel entry for '" + relationship + "' has no replacement");
  auto key = std::make_tuple(std::move(relationship), collapse_whitespace(head_syntax), collapse_whitespace(tail_syntax));
  if (!entries_.emplace(key, std::move(replacement)).second) {
    throw InvalidArgument("duplicate relabel entry for '" + std::get<0>(key) + "'");
  }
}

const std::string* RelabelTable::find(std::string_view relationship, std::string_view head_syntax,
                                      std::string_view tail_syntax) const {
  const std::string rel(relationship);
  const std::string hs(head_syntax);
  const std::string ts(tail_syntax);
  const std::tuple<std::string, std::string, std::string> keys[] = {
      {rel, hs, ts}, {rel, hs, ""}, {rel, "", ts}, {rel, "", ""}};
  for (const auto& key : keys) {
    auto it = entries_.find(key);
    if (it != entries_.end()) return &it->second;
  }
  return nullptr;
}

RelabelTable RelabelTable::parse_tsv(std::istream& in) {
  RelabelTable table;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (collapse_whitespace(line).empty() || line.front() == '#') continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      auto tab = line.find('\t', start);
      fields.push_back(line.substr(start, tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (fields.size() == 2) {
      table.add(fields[0], "", "", fields[1]);
    } else if (fields.size() == 4) {
      table.add(fields[0], fields[1], fields[2], fields[3]);
    } else {
      throw MalformedRecord(number, "relabel table rows need 2 or 4 tab-separated fields");
    }
  }
  return table;
}

const std::set<std::string>& default_abstract_relationships() {
  static const std::set<std::string> kAbstract = {"in", "to", "with", "on", "for", "at", "from"};
  return kAbstract;
}

RelabelResult suggest_relabels(const DocGraph& g, const std::set<std::string>& abstract, const RelabelTable& table,
                               std::span<const std::string> node_syntax) {
  if (abstract.empty()) throw InvalidArgument("abstract relationship set is empty");
  if (!node_syntax.empty() && node_syntax.size() != g.node_count()) {
    throw InvalidArgument("node syntax list does not cover the graph");
  }
  RelabelResult result;
  auto syntax_of = [&](NodeId id) { return node_syntax.empty() ? std::string() : node_syntax[id]; };
  for (auto [u, v] : g.structure().edges()) {
    const auto& labels = g.labels(u, v);
    for (const auto& label : labels) {
      if (!abstract.contains(label)) continue;
      const auto hs = syntax_of(u);
      const auto ts = syntax_of(v);
      const auto* replacement = table.find(label, hs, ts);
      if (!replacement) {
        result.suggestions.push_back({g.node_name(u), g.node_name(v), label, hs, ts});
        continue;
      }
      TransformEdit edit;
      edit.kind = EditKind::relabel_relationship;
      edit.removed_edges.push_back({g.node_name(u), g.node_name(v), {label}});
      edit.added_edges.push_back({g.node_name(u), g.node_name(v), {*replacement}});
      edit.provenance.push_back(fact_text(g.node_name(u), label, g.node_name(v)));
      if (labels.contains(*replacement)) {
        edit.coincident_labels_merged = 1;
        edit.notes.push_back("merged coincident " + fact_text(g.node_name(u), *replacement, g.node_name(v)));
      }
      result.edits.push_back(std::move(edit));
    }
  }
  result.graph = apply_edits(g, result.edits);
  return result;
}

bool is_hierarchical(const DocGraph& g, std::string_view label, const HierarchyLexicon& lex, const PosTagger& tagger) {
  const auto* known = g.rel_span(label);
  TokenSpan span = known ? *known : TokenSpan::from_text(label);
  if (!span.pos) span = tag_tokens(span, tagger);
  return lex.match(span).has_value();
}

namespace {

using HierarchyCache = std::map<std::string, bool, std::less<>>;

bool cached_hierarchical(HierarchyCache& cache, const DocGraph& g, const std::string& label,
                         const HierarchyLexicon& lex, const PosTagger& tagger) {
  auto it = cache.find(label);
  if (it != cache.end()) return it->second;
  return cache.emplace(label, is_hierarchical(g, label, lex, tagger)).first->second;
}

bool reaches(const Digraph& h, NodeId from, NodeId to) {
  std::vector<bool> seen(h.node_count(), false);
  std::vector<NodeId> stack{from};
  seen[from] = true;
  while (!stack.empty()) {
    const auto u = stack.back();
    stack.pop_back();
    if (u == to) return true;
    for (NodeId v : h.out(u)) {
      if (!seen[v]) {
        seen[v] = true;
        stack.push_back(v);
      }
    }
  }
  return false;
}

}  // namespace

ExplicateResult explicate_hierarchy(const DocGraph& g, const HierarchyLexicon& lex, const PosTagger& tagger) {
  ExplicateResult result{g, {}, {}};
  HierarchyCache cache;
  auto hierarchical_pair = [&](const DocGraph& graph, NodeId u, NodeId v) {
    for (const auto& label : graph.labels(u, v)) {
      if (cached_hierarchical(cache, graph, label, lex, tagger)) return true;
    }
    return false;
  };

  // Attribute collapses, one at a time until none applies.
  while (true) {
    const auto& cur = result.graph;
    std::optional<Edge> target;
    for (auto [u, v] : cur.structure().edges()) {
      if (!cur.labels(u, v).contains(kAttributeLabel)) continue;
      const auto& outs = cur.structure().out(u);
      const bool parent = std::any_of(outs.begin(), outs.end(),
                                      [&](NodeId w) { return w != v && hierarchical_pair(cur, u, w); });
      if (parent) {
        target = Edge{u, v};
        break;
      }
    }
    if (!target) break;
    const auto h = cur.node_name(target->first);
    const auto t = cur.node_name(target->second);
    auto collapsed = collapse_attribute(cur, h, t);
    result.log.push_back("collapsed " + fact_text(h, kAttributeLabel, t) + " into '" + compound_name(h, t) + "'");
    for (auto& e : collapsed.edits) result.edits.push_back(std::move(e));
    result.graph = std::move(collapsed.graph);
  }

  // Redundant hierarchical edges.
  const auto& cur = result.graph;
  Digraph hier(cur.node_count());
  for (auto [u, v] : cur.structure().edges()) {
    if (hierarchical_pair(cur, u, v)) hier.add_edge(u, v);
  }
  std::vector<TransformEdit> reductions;
  for (auto [u, v] : hier.edges()) {
    if (reaches(hier, v, u)) {
      result.log.push_back("skipped hierarchical edge in cycle " + cur.node_name(u) + " -> " + cur.node_name(v));
      continue;
    }
    hier.remove_edge(u, v);
    if (!reaches(hier, u, v)) {
      hier.add_edge(u, v);
      continue;
    }
    TransformEdit edit;
    edit.kind = EditKind::hierarchy_reduce;
    EdgeLabels removed{cur.node_name(u), cur.node_name(v), {}};
    for (const auto& label : cur.labels(u, v)) {
      if (cached_hierarchical(cache, cur, label, lex, tagger)) {
        removed.labels.insert(label);
        edit.provenance.push_back(fact_text(removed.head, label, removed.tail));
      }
    }
    edit.removed_edges.push_back(std::move(removed));
    result.log.push_back("removed redundant hierarchical edge " + cur.node_name(u) + " -> " + cur.node_name(v));
    reductions.push_back(std::move(edit));
  }
  if (!reductions.empty()) {
    result.graph = apply_edits(result.graph, reductions);
    for (auto& e : reductions) result.edits.push_back(std::move(e));
  }
  return result;
}

}  // namespace dkg
