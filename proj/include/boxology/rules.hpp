#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "boxology/diagnostic.hpp"
#include "boxology/graph.hpp"
#include "boxology/taxonomy.hpp"

namespace boxology {

/// Accepts adjacent boxes whose type is a subtype of any of `accepts`.
struct Constraint {
  std::vector<TypePath> accepts;
  std::size_t min = 0;
  std::optional<std::size_t> max;  // nullopt: unbounded

  bool admits(const TypePath& t) const {
    return std::any_of(accepts.begin(), accepts.end(),
                       [&](const TypePath& a) { return is_subtype(t, a); });
  }

  std::string describe() const {
    std::string out;
    for (std::size_t i = 0; i < accepts.size(); ++i) {
      if (i) out += '|';
      out += accepts[i].str();
    }
    return out;
  }

  friend bool operator==(const Constraint&, const Constraint&) = default;
};

/// Arity and typing constraints for one process type. Adjacent boxes are
/// assigned to the first constraint that admits them.
struct TypingRule {
  std::vector<Constraint> inputs;
  std::vector<Constraint> outputs;
  /// Warn when the single input and single output carry the same type.
  bool warn_on_same_type = false;

  friend bool operator==(const TypingRule&, const TypingRule&) = default;
};

class TypingRuleTable {
 public:
  TypingRuleTable& add(TypePath key, TypingRule rule) {
    if (key.kind() != Kind::process) {
      throw std::invalid_argument("typing rule key '" + key.str() + "' is not a process type");
    }
    rows_.insert_or_assign(std::move(key), std::move(rule));
    return *this;
  }

  /// The most specific row whose key is a supertype of `process_type`.
  const TypingRule* lookup(const TypePath& process_type) const {
    for (std::size_t n = process_type.depth(); n >= 1; --n) {
      auto it = rows_.find(process_type.prefix(n));
      if (it != rows_.end()) return &it->second;
    }
    return nullptr;
  }

  const std::map<TypePath, TypingRule>& rows() const noexcept { return rows_; }

 private:
  std::map<TypePath, TypingRule> rows_;
};

namespace detail {

inline Constraint one_of(std::initializer_list<const char*> types, std::size_t min,
                         std::optional<std::size_t> max) {
  Constraint c;
  for (const char* t : types) c.accepts.push_back(TypePath::from_string(t));
  c.min = min;
  c.max = max;
  return c;
}

inline constexpr std::optional<std::size_t> kUnbounded = std::nullopt;

}  // namespace detail

/// The shipped rule table.
///
/// Actors may initiate any process, so every row except `engineer` (where an
/// actor is mandatory) also accepts any number of actor inputs.
inline const TypingRuleTable& default_rules() {
  static const TypingRuleTable table = [] {
    using detail::kUnbounded;
    using detail::one_of;
    TypingRuleTable t;
    auto actors = one_of({"actor"}, 0, kUnbounded);

    t.add(TypePath::from_string("process"),
          {{one_of({"instance", "model", "actor"}, 1, kUnbounded)},
           {one_of({"instance", "model"}, 1, kUnbounded)}});
    t.add(TypePath::from_string("process:generate"),
          {{one_of({"instance", "model", "actor"}, 1, kUnbounded)},
           {one_of({"model"}, 1, 1)}});
    t.add(TypePath::from_string("process:generate:train"),
          {{one_of({"instance"}, 1, kUnbounded), one_of({"model"}, 0, kUnbounded), actors},
           {one_of({"model"}, 1, 1)}});
    t.add(TypePath::from_string("process:generate:engineer"),
          {{one_of({"actor"}, 1, kUnbounded)}, {one_of({"model"}, 1, 1)}});
    t.add(TypePath::from_string("process:transform"),
          {{one_of({"instance", "model"}, 1, 1), actors},
           {one_of({"instance", "model"}, 1, 1)},
           true});
    t.add(TypePath::from_string("process:infer"),
          {{one_of({"instance"}, 1, kUnbounded), one_of({"model"}, 0, kUnbounded), actors},
           {one_of({"instance", "model"}, 1, kUnbounded)}});
    t.add(TypePath::from_string("process:infer:deduce"),
          {{one_of({"model"}, 1, kUnbounded), one_of({"instance"}, 1, kUnbounded), actors},
           {one_of({"instance"}, 1, kUnbounded)}});
    t.add(TypePath::from_string("process:infer:induce"),
          {{one_of({"instance"}, 1, kUnbounded), one_of({"model"}, 0, kUnbounded), actors},
           {one_of({"model"}, 1, 1)}});
    return t;
  }();
  return table;
}

namespace detail {

inline std::string count_phrase(const Constraint& c) {
  if (c.max && *c.max == c.min) return "exactly " + std::to_string(c.min);
  if (c.min > 0 && !c.max) return "at least " + std::to_string(c.min);
  if (c.max && c.min == 0) return "at most " + std::to_string(*c.max);
  return "between " + std::to_string(c.min) + " and " +
         (c.max ? std::to_string(*c.max) : std::string("unbounded"));
}

inline void check_side(const PatternGraph& g, const Node& proc,
                       const std::vector<Constraint>& constraints,
                       const std::vector<std::string>& neighbours, bool inputs,
                       Diagnostics& out) {
  const char* side = inputs ? "input" : "output";
  std::vector<std::size_t> counts(constraints.size(), 0);
  for (const auto& nb : neighbours) {
    const Node& n = g.node(nb);
    if (n.is_process()) continue;  // reported as an edge error
    auto it = std::find_if(constraints.begin(), constraints.end(),
                           [&](const Constraint& c) { return c.admits(n.type); });
    if (it == constraints.end()) {
      out.push_back(Diagnostic{Severity::error,
                               inputs ? "UnexpectedInput" : "UnexpectedOutput",
                               "process '" + proc.id + "' (" + proc.type.str() + ") does not accept " +
                                   side + " '" + n.id + "' of type " + n.type.str(),
                               std::nullopt,
                               {proc.id, std::nullopt}});
      continue;
    }
    ++counts[static_cast<std::size_t>(it - constraints.begin())];
  }
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    const auto& c = constraints[i];
    bool low = counts[i] < c.min;
    bool high = c.max && counts[i] > *c.max;
    if (!low && !high) continue;
    std::string code = low ? (inputs ? "MissingInput" : "MissingOutput")
                           : (inputs ? "TooManyInputs" : "TooManyOutputs");
    out.push_back(Diagnostic{Severity::error, code,
                             "process '" + proc.id + "' (" + proc.type.str() + ") requires " +
                                 count_phrase(c) + " " + c.describe() + " " + side +
                                 (c.min == 1 && c.max == 1 ? "" : "s") + ", found " +
                                 std::to_string(counts[i]),
                             std::nullopt,
                             {proc.id, std::nullopt}});
  }
}

}  // namespace detail

/// Type-checks a graph. Returns diagnostics ordered by node id, then by edge.
/// An empty result means the graph is well formed.
inline Diagnostics check_well_formed(const PatternGraph& g, const TypingRuleTable& rules,
                                     const Taxonomy& taxonomy) {
  Diagnostics out;
  for (const auto& [id, n] : g.nodes()) {
    if (!taxonomy.contains(n.type)) {
      out.push_back(Diagnostic{Severity::error, "UnknownType",
                               "node '" + id + "' has unknown type " + n.type.str(),
                               std::nullopt,
                               {id, std::nullopt}});
    }
    if (!n.is_process()) {
      bool touches = false;
      for (const auto& s : g.successors(id)) touches |= g.node(s).is_process();
      for (const auto& p : g.predecessors(id)) touches |= g.node(p).is_process();
      if (!touches) {
        out.push_back(Diagnostic{Severity::error, "OrphanBox",
                                 "box '" + id + "' is not connected to any process",
                                 std::nullopt,
                                 {id, std::nullopt}});
      }
      continue;
    }
    const TypingRule* rule = rules.lookup(n.type);
    if (!rule) {
      out.push_back(Diagnostic{Severity::error, "NoRule",
                               "no typing rule for process type " + n.type.str(), std::nullopt,
                               {id, std::nullopt}});
      continue;
    }
    detail::check_side(g, n, rule->inputs, g.predecessors(id), true, out);
    detail::check_side(g, n, rule->outputs, g.successors(id), false, out);
    if (rule->warn_on_same_type && g.predecessors(id).size() == 1 &&
        g.successors(id).size() == 1) {
      const Node& in = g.node(g.predecessors(id).front());
      const Node& o = g.node(g.successors(id).front());
      if (!in.is_process() && !o.is_process() && in.type == o.type) {
        out.push_back(Diagnostic{Severity::warning, "SameTypeTransform",
                                 "process '" + id + "' transforms " + in.type.str() +
                                     " into the same type",
                                 std::nullopt,
                                 {id, std::nullopt}});
      }
    }
  }
  for (const auto& e : g.edges()) {
    bool a = g.node(e.from).is_process();
    bool b = g.node(e.to).is_process();
    if (a == b) {
      out.push_back(Diagnostic{
          Severity::error, "EdgeKind",
          "edge " + e.from + " -> " + e.to + " must join a process to a box", std::nullopt,
          {{}, std::make_pair(e.from, e.to)}});
    }
  }
  // Node diagnostics first, in id order; then edges.
  std::stable_sort(out.begin(), out.end(), [](const Diagnostic& x, const Diagnostic& y) {
    auto key = [](const Diagnostic& d) {
      return std::make_tuple(d.subject.edge.has_value(), d.subject.node,
                             d.subject.edge.value_or(std::pair<std::string, std::string>{}));
    };
    return key(x) < key(y);
  });
  return out;
}

}  // namespace boxology
