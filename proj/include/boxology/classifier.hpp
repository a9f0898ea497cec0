#pragma once

#include <array>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "boxology/catalog.hpp"
#include "boxology/matcher.hpp"

namespace boxology {

enum class SystemKind { ml, kr, hybrid, unclassified };

inline std::string_view to_string(SystemKind k) {
  switch (k) {
    case SystemKind::ml: return "ML";
    case SystemKind::kr: return "KR";
    case SystemKind::hybrid: return "HYBRID";
    case SystemKind::unclassified: return "UNCLASSIFIED";
  }
  return "UNCLASSIFIED";
}

struct SystemClass {
  SystemKind kind = SystemKind::unclassified;
  Decomposition decomposition;
};

/// Class from a decomposition alone.
///
/// ML is exactly one 1a plus one 2a, KR exactly one 2b. Any other non-empty
/// full cover is HYBRID. Leftover processes, or no processes at all, give
/// UNCLASSIFIED.
inline SystemKind classify_decomposition(const Decomposition& d) {
  if (!d.uncovered.empty() || d.parts.empty()) return SystemKind::unclassified;
  std::multiset<std::string> names;
  for (const auto& p : d.parts) names.insert(p.pattern);
  if (names == std::multiset<std::string>{"1a", "2a"}) return SystemKind::ml;
  if (names == std::multiset<std::string>{"2b"}) return SystemKind::kr;
  return SystemKind::hybrid;
}

inline SystemClass classify_system(const PatternGraph& g, const Catalog& catalog) {
  SystemClass c;
  c.decomposition = decompose(g, catalog);
  c.kind = classify_decomposition(c.decomposition);
  return c;
}

/// Which Kautz neuro-symbolic types each composite pattern evidences. Type 6
/// has no pattern.
inline const std::vector<std::pair<std::string, std::vector<int>>>& kautz_table() {
  static const std::vector<std::pair<std::string, std::vector<int>>> table = {
      {"3b", {1, 4}}, {"11", {2}}, {"6a", {3}}, {"6b", {3}},
      {"8", {4}},     {"10", {4}}, {"7", {5}},
  };
  return table;
}

struct KautzReport {
  std::set<int> types;
  std::map<int, std::vector<std::string>> evidence;  // type -> pattern names, table order

  friend bool operator==(const KautzReport&, const KautzReport&) = default;
};

/// Looks for each table pattern inside `g` and collects the types they evidence.
/// Table patterns missing from the catalog are skipped.
inline KautzReport kautz_types(const PatternGraph& g, const Catalog& catalog) {
  KautzReport r;
  for (const auto& [name, types] : kautz_table()) {
    const PatternGraph* p = catalog.find(name);
    if (!p || find_matches(*p, g).empty()) continue;
    for (int t : types) {
      r.types.insert(t);
      r.evidence[t].push_back(name);
    }
  }
  return r;
}

}  // namespace boxology
