#pragma once

#include <array>
#include <cctype>
#include <optional>
#include <string>
#include <string_view>

#include "boxology/graph.hpp"

namespace boxology {

enum class RankDir { LR, TB };

struct RenderOptions {
  RankDir rankdir = RankDir::LR;
  bool show_meta = false;
};

/// Graphviz shape for each kind of box.
inline std::string_view dot_shape(Kind k) {
  switch (k) {
    case Kind::instance: return "box";
    case Kind::model: return "hexagon";
    case Kind::process: return "ellipse";
    case Kind::actor: return "triangle";
  }
  return "box";
}

namespace detail {

inline std::string dot_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') {
      out += '\\';
      out += c;
    } else if (c == '\n') {
      out += "\\n";
    } else if (c == '\r') {
      continue;
    } else {
      out += c;
    }
  }
  return out;
}

// Node ids may contain '-' or spell a DOT keyword; quote those.
inline std::string dot_id(std::string_view id) {
  static constexpr std::array<std::string_view, 6> keywords = {"node",     "edge",  "graph",
                                                               "digraph",  "subgraph", "strict"};
  bool plain = !id.empty() && id.find('-') == std::string_view::npos;
  if (plain) {
    std::string lower;
    for (char c : id) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    for (auto kw : keywords) plain &= lower != kw;
  }
  return plain ? std::string(id) : "\"" + dot_escape(id) + "\"";
}

}  // namespace detail

/// Deterministic Graphviz DOT: nodes sorted by id, then edges by (from, to).
/// Node labels read `id : type`, followed by the display label when present.
inline std::string to_dot(const PatternGraph& g, const RenderOptions& opts = {}) {
  std::string out = "digraph \"" + detail::dot_escape(g.name()) + "\" {\n";
  out += opts.rankdir == RankDir::LR ? "  rankdir=LR;\n" : "  rankdir=TB;\n";
  if (opts.show_meta) {
    for (const auto& [k, v] : g.meta())
      out += "  // meta " + k + " = \"" + detail::dot_escape(v) + "\"\n";
  }
  for (const auto& [id, n] : g.nodes()) {
    std::string label = id + " : " + n.type.str();
    if (n.label) label += "\n" + *n.label;
    out += "  " + detail::dot_id(id) + " [shape=" + std::string(dot_shape(n.kind())) +
           ", label=\"" + detail::dot_escape(label) + "\"];\n";
  }
  for (const auto& e : g.edges())
    out += "  " + detail::dot_id(e.from) + " -> " + detail::dot_id(e.to) + ";\n";
  out += "}\n";
  return out;
}

}  // namespace boxology
