#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "boxology/diagnostic.hpp"
#include "boxology/graph.hpp"
#include "boxology/rules.hpp"
#include "boxology/taxonomy.hpp"

namespace boxology {

class ComposeError : public std::runtime_error {
 public:
  enum class Code {
    bad_glue,           // unknown or repeated id in the glue map
    incompatible_glue,  // glued types have no meet
    not_an_ancestor,
    not_a_descendant,
    unknown_node,
    result_ill_typed,
  };

  ComposeError(Code code, std::string message, std::string node = {}, Diagnostics diags = {})
      : std::runtime_error(std::move(message)), code_(code), node_(std::move(node)),
        diagnostics_(std::move(diags)) {}

  Code code() const noexcept { return code_; }
  /// Offending node id (or glue pair rendered as `left=right`).
  const std::string& node() const noexcept { return node_; }
  const Diagnostics& diagnostics() const noexcept { return diagnostics_; }

 private:
  Code code_;
  std::string node_;
  Diagnostics diagnostics_;
};

/// Pairs of (left id, right id) to fuse when stitching two patterns.
struct GlueMap {
  std::vector<std::pair<std::string, std::string>> pairs;

  /// Parses `a=b[,c=d...]`. Throws ComposeError(bad_glue) on malformed text.
  static GlueMap parse(std::string_view text) {
    GlueMap g;
    std::size_t start = 0;
    while (start <= text.size()) {
      auto comma = text.find(',', start);
      auto item = text.substr(start, comma == std::string_view::npos ? comma : comma - start);
      auto eq = item.find('=');
      if (eq == std::string_view::npos || !is_identifier(item.substr(0, eq)) ||
          !is_identifier(item.substr(eq + 1))) {
        throw ComposeError(ComposeError::Code::bad_glue,
                           "malformed glue pair '" + std::string(item) + "' (expected left=right)",
                           std::string(item));
      }
      g.pairs.emplace_back(std::string(item.substr(0, eq)), std::string(item.substr(eq + 1)));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    return g;
  }
};

namespace detail {

inline void recheck(const PatternGraph& g, const TypingRuleTable& rules, const Taxonomy& taxonomy,
                    const char* what) {
  auto diags = check_well_formed(g, rules, taxonomy);
  if (has_errors(diags)) {
    std::string msg = std::string(what) + " \"" + g.name() + "\" is ill-typed:";
    for (const auto& d : diags)
      if (d.severity == Severity::error) msg += " " + d.message + ";";
    msg.pop_back();
    throw ComposeError(ComposeError::Code::result_ill_typed, msg, {}, std::move(diags));
  }
}

}  // namespace detail

/// Stitches `right` onto `left`, fusing each glued pair into one node typed
/// with the meet of the two types. A fused node keeps the left id and label;
/// the right label, if any, is kept as meta `label-<id>`. Unglued right ids
/// that collide get `_r` appended until unique.
inline PatternGraph compose(const PatternGraph& left, const PatternGraph& right,
                            const GlueMap& glue, std::string name,
                            const TypingRuleTable& rules = default_rules(),
                            const Taxonomy& taxonomy = default_taxonomy()) {
  std::set<std::string> lefts, rights;
  for (const auto& [l, r] : glue.pairs) {
    std::string pair = l + "=" + r;
    if (!left.find(l)) {
      throw ComposeError(ComposeError::Code::bad_glue,
                         "glue " + pair + ": '" + l + "' is not a node of \"" + left.name() + "\"",
                         pair);
    }
    if (!right.find(r)) {
      throw ComposeError(ComposeError::Code::bad_glue,
                         "glue " + pair + ": '" + r + "' is not a node of \"" + right.name() + "\"",
                         pair);
    }
    if (!lefts.insert(l).second || !rights.insert(r).second) {
      throw ComposeError(ComposeError::Code::bad_glue, "glue " + pair + ": id glued twice", pair);
    }
  }

  PatternGraph::Builder b(std::move(name));
  std::map<std::string, std::string> rename;  // right id -> result id
  std::set<std::string> used;
  for (const auto& [id, n] : left.nodes()) used.insert(id);

  std::map<std::string, TypePath> fused_type;
  std::map<std::string, std::optional<std::string>> right_label;
  for (const auto& [l, r] : glue.pairs) {
    const Node& ln = left.node(l);
    const Node& rn = right.node(r);
    std::string pair = l + "=" + r;
    auto m = meet(ln.type, rn.type);
    if (!m || (ln.is_process() && ln.type != rn.type)) {
      throw ComposeError(ComposeError::Code::incompatible_glue,
                         "cannot glue " + l + " (" + ln.type.str() + ") to " + r + " (" +
                             rn.type.str() + ")",
                         pair);
    }
    fused_type.emplace(l, *m);
    right_label.emplace(l, rn.label);
    rename[r] = l;
  }

  for (const auto& [id, n] : left.nodes()) {
    auto f = fused_type.find(id);
    if (f == fused_type.end()) {
      b.node(id, n.type, n.label);
      continue;
    }
    const auto& rl = right_label.at(id);
    b.node(id, f->second, n.label ? n.label : rl);
    if (n.label && rl) b.meta("label-" + id, *rl);
  }
  for (const auto& [id, n] : right.nodes()) {
    if (rename.contains(id)) continue;
    std::string fresh = id;
    while (used.contains(fresh)) fresh += "_r";
    used.insert(fresh);
    rename[id] = fresh;
    b.node(fresh, n.type, n.label);
  }

  std::set<Edge> edges = left.edges();
  for (const auto& e : right.edges()) edges.insert(Edge{rename.at(e.from), rename.at(e.to)});
  for (const auto& e : edges) b.edge(e.from, e.to);
  b.meta("composed", left.name() + " + " + right.name());

  PatternGraph g = b.build();
  detail::recheck(g, rules, taxonomy, "composed pattern");
  return g;
}

using TypeReplacements = std::map<std::string, TypePath>;

/// Lifts node types to strict supertypes.
inline PatternGraph abstract_types(const PatternGraph& g, const TypeReplacements& replacements,
                                   const TypingRuleTable& rules = default_rules(),
                                   const Taxonomy& taxonomy = default_taxonomy()) {
  PatternGraph::Builder b(g);
  for (const auto& [id, type] : replacements) {
    const Node* n = g.find(id);
    if (!n) throw ComposeError(ComposeError::Code::unknown_node, "unknown node '" + id + "'", id);
    if (!is_strict_subtype(n->type, type)) {
      throw ComposeError(ComposeError::Code::not_an_ancestor,
                         type.str() + " is not a strict supertype of " + n->type.str() +
                             " (node '" + id + "')",
                         id);
    }
    b.set_type(id, type);
  }
  PatternGraph out = b.build();
  detail::recheck(out, rules, taxonomy, "abstracted pattern");
  return out;
}

/// Lowers node types to strict subtypes.
inline PatternGraph specialize_types(const PatternGraph& g, const TypeReplacements& replacements,
                                     const TypingRuleTable& rules = default_rules(),
                                     const Taxonomy& taxonomy = default_taxonomy()) {
  PatternGraph::Builder b(g);
  for (const auto& [id, type] : replacements) {
    const Node* n = g.find(id);
    if (!n) throw ComposeError(ComposeError::Code::unknown_node, "unknown node '" + id + "'", id);
    if (!is_strict_subtype(type, n->type)) {
      throw ComposeError(ComposeError::Code::not_a_descendant,
                         type.str() + " is not a strict subtype of " + n->type.str() + " (node '" +
                             id + "')",
                         id);
    }
    b.set_type(id, type);
  }
  PatternGraph out = b.build();
  detail::recheck(out, rules, taxonomy, "specialized pattern");
  return out;
}

}  // namespace boxology
