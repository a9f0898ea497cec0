#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "boxology/builtin_catalog_data.hpp"
#include "boxology/diagnostic.hpp"
#include "boxology/dsl.hpp"
#include "boxology/graph.hpp"
#include "boxology/rules.hpp"
#include "boxology/taxonomy.hpp"

namespace boxology {

/// Named patterns in presentation order.
class Catalog {
 public:
  /// Throws std::invalid_argument on a duplicate name.
  void add(PatternGraph g) {
    if (entries_.contains(g.name())) {
      throw std::invalid_argument("duplicate pattern name \"" + g.name() + "\"");
    }
    order_.push_back(g.name());
    entries_.emplace(g.name(), std::move(g));
  }

  const PatternGraph* find(const std::string& name) const {
    auto it = entries_.find(name);
    return it == entries_.end() ? nullptr : &it->second;
  }

  const PatternGraph& at(const std::string& name) const { return entries_.at(name); }

  const std::vector<std::string>& names() const noexcept { return order_; }
  std::size_t size() const noexcept { return order_.size(); }

  /// Entries in presentation order.
  std::vector<PatternGraph> graphs() const {
    std::vector<PatternGraph> out;
    for (const auto& n : order_) out.push_back(entries_.at(n));
    return out;
  }

  /// Entries with exactly one process node, in presentation order.
  std::vector<const PatternGraph*> elementary() const {
    std::vector<const PatternGraph*> out;
    for (const auto& n : order_) {
      const auto& g = entries_.at(n);
      if (g.process_ids().size() == 1) out.push_back(&g);
    }
    return out;
  }

  friend bool operator==(const Catalog& a, const Catalog& b) {
    return a.order_ == b.order_ && a.entries_ == b.entries_;
  }

 private:
  std::vector<std::string> order_;
  std::map<std::string, PatternGraph> entries_;
};

struct CatalogLoad {
  std::optional<Catalog> catalog;
  Diagnostics diagnostics;

  bool ok() const { return catalog.has_value(); }
};

/// Parses and type-checks every pattern. Any error rejects the whole file.
inline CatalogLoad load_catalog(const SourceFile& src, const Taxonomy& taxonomy,
                                const TypingRuleTable& rules) {
  CatalogLoad r;
  ParseResult parsed = parse(src, taxonomy);
  r.diagnostics = parsed.diagnostics;
  for (const auto& p : parsed.patterns) {
    for (auto d : check_well_formed(p.graph, rules, taxonomy)) {
      d.position = p.map.locate(d.subject);
      d.message = "pattern \"" + p.graph.name() + "\": " + d.message;
      r.diagnostics.push_back(std::move(d));
    }
  }
  std::stable_sort(r.diagnostics.begin(), r.diagnostics.end(),
                   [](const Diagnostic& a, const Diagnostic& b) {
                     return a.position.value_or(Position{}) < b.position.value_or(Position{});
                   });
  if (has_errors(r.diagnostics)) return r;
  Catalog c;
  for (const auto& p : parsed.patterns) c.add(p.graph);
  r.catalog = std::move(c);
  return r;
}

inline std::string_view builtin_catalog_source() { return detail::kBuiltinCatalogSource; }

/// The shipped pattern catalog, parsed once against the default taxonomy.
inline const Catalog& builtin_catalog() {
  static const Catalog catalog = [] {
    auto r = load_catalog(SourceFile{"catalog/builtin.box", std::string(builtin_catalog_source())},
                          Taxonomy::default_taxonomy(), default_rules());
    if (!r.ok()) {
      std::string msg = "builtin catalog failed its self-check:";
      for (const auto& d : r.diagnostics) msg += "\n  " + format_diagnostic("builtin.box", d);
      throw std::logic_error(msg);
    }
    return std::move(*r.catalog);
  }();
  return catalog;
}

}  // namespace boxology
