#pragma once

// Textual surface syntax for pattern graphs (`.box` files).
//
//   file    := { pattern } ;
//   pattern := "pattern" STRING "{" { stmt } "}" ;
//   stmt    := node | edge | meta ;
//   node    := "node" IDENT ":" TYPEPATH [ STRING ] ;
//   edge    := "edge" IDENT "->" IDENT ;
//   meta    := "meta" IDENT "=" STRING ;
//
// `#` starts a line comment. The optional STRING after a node's type is its
// display label.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "boxology/diagnostic.hpp"
#include "boxology/graph.hpp"
#include "boxology/taxonomy.hpp"

namespace boxology {

struct SourceFile {
  std::string path = "<memory>";
  std::string text;
};

/// Where each declaration of one parsed pattern came from.
struct SourceMap {
  Position pattern;
  std::map<std::string, Position> nodes;
  std::map<Edge, Position> edges;
  std::map<std::string, Position> meta;

  /// Best source position for a graph-level diagnostic.
  Position locate(const Subject& s) const {
    if (s.edge) {
      if (auto it = edges.find(Edge{s.edge->first, s.edge->second}); it != edges.end())
        return it->second;
    }
    if (!s.node.empty()) {
      if (auto it = nodes.find(s.node); it != nodes.end()) return it->second;
    }
    return pattern;
  }
};

struct ParsedPattern {
  PatternGraph graph;
  SourceMap map;
};

struct ParseResult {
  std::vector<ParsedPattern> patterns;  // only patterns that parsed cleanly
  Diagnostics diagnostics;

  bool ok() const { return !has_errors(diagnostics); }

  std::vector<PatternGraph> graphs() const {
    std::vector<PatternGraph> out;
    out.reserve(patterns.size());
    for (const auto& p : patterns) out.push_back(p.graph);
    return out;
  }
};

namespace detail {

enum class Tok { ident, string, lbrace, rbrace, colon, arrow, equals, end };

inline const char* describe(Tok t) {
  switch (t) {
    case Tok::ident: return "identifier";
    case Tok::string: return "string";
    case Tok::lbrace: return "'{'";
    case Tok::rbrace: return "'}'";
    case Tok::colon: return "':'";
    case Tok::arrow: return "'->'";
    case Tok::equals: return "'='";
    case Tok::end: return "end of file";
  }
  return "token";
}

struct Token {
  Tok kind;
  std::string text;  // identifier text or decoded string value
  Position pos;
};

class Lexer {
 public:
  Lexer(std::string_view text, Diagnostics& diags) : text_(text), diags_(diags) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_trivia();
      Position start = pos_;
      if (i_ >= text_.size()) {
        out.push_back({Tok::end, {}, start});
        return out;
      }
      char c = text_[i_];
      if (is_ident_start(c)) {
        std::string id;
        while (i_ < text_.size() && is_ident_char(text_[i_])) {
          if (text_[i_] == '-' && i_ + 1 < text_.size() && text_[i_ + 1] == '>') break;
          id += text_[i_];
          advance();
        }
        out.push_back({Tok::ident, std::move(id), start});
      } else if (c == '"') {
        if (auto s = lex_string()) out.push_back({Tok::string, std::move(*s), start});
      } else if (c == '{') {
        advance();
        out.push_back({Tok::lbrace, "{", start});
      } else if (c == '}') {
        advance();
        out.push_back({Tok::rbrace, "}", start});
      } else if (c == ':') {
        advance();
        out.push_back({Tok::colon, ":", start});
      } else if (c == '=') {
        advance();
        out.push_back({Tok::equals, "=", start});
      } else if (c == '-' && i_ + 1 < text_.size() && text_[i_ + 1] == '>') {
        advance();
        advance();
        out.push_back({Tok::arrow, "->", start});
      } else {
        // Collapse a run of unusable bytes into one diagnostic.
        while (i_ < text_.size() && !starts_token(text_[i_])) advance();
        diags_.push_back(make_error("SyntaxError", "unexpected character", start));
      }
    }
  }

 private:
  bool starts_token(char c) const {
    return is_ident_start(c) || c == '"' || c == '{' || c == '}' || c == ':' || c == '=' ||
           c == '#' || c == ' ' || c == '\t' || c == '\r' || c == '\n' ||
           (c == '-' && i_ + 1 < text_.size() && text_[i_ + 1] == '>');
  }

  void advance() {
    unsigned char c = static_cast<unsigned char>(text_[i_++]);
    if (c == '\n') {
      ++pos_.line;
      pos_.column = 1;
    } else if (c != '\r' && (c & 0xC0) != 0x80) {
      // CR is ignored; UTF-8 continuation bytes do not start a new column.
      ++pos_.column;
    }
  }

  void skip_trivia() {
    while (i_ < text_.size()) {
      char c = text_[i_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '#') {
        while (i_ < text_.size() && text_[i_] != '\n') advance();
      } else {
        return;
      }
    }
  }

  std::optional<std::string> lex_string() {
    Position start = pos_;
    advance();  // opening quote
    std::string value;
    bool bad_escape = false;
    while (i_ < text_.size()) {
      char c = text_[i_];
      if (c == '"') {
        advance();
        if (bad_escape) return std::nullopt;
        return value;
      }
      if (c == '\\') {
        Position esc = pos_;
        advance();
        if (i_ < text_.size() && (text_[i_] == '"' || text_[i_] == '\\')) {
          value += text_[i_];
          advance();
        } else {
          diags_.push_back(make_error("SyntaxError", "invalid escape in string", esc));
          bad_escape = true;
        }
        continue;
      }
      value += c;
      advance();
    }
    diags_.push_back(make_error("SyntaxError", "unterminated string", start));
    return std::nullopt;
  }

  std::string_view text_;
  Diagnostics& diags_;
  std::size_t i_ = 0;
  Position pos_;
};

class Parser {
 public:
  Parser(std::vector<Token> toks, const Taxonomy& t, Diagnostics& diags)
      : toks_(std::move(toks)), taxonomy_(t), diags_(diags) {}

  std::vector<ParsedPattern> run() {
    std::vector<ParsedPattern> out;
    std::set<std::string> names;
    while (peek().kind != Tok::end) {
      if (!at_keyword("pattern")) {
        error_here("expected 'pattern'");
        while (peek().kind != Tok::end && !at_keyword("pattern")) ++k_;
        continue;
      }
      std::size_t errors_before = error_count();
      Position at = peek().pos;
      auto parsed = parse_pattern();
      if (!parsed) continue;
      if (!names.insert(parsed->graph.name()).second) {
        diags_.push_back(make_error(
            "DuplicatePatternName", "duplicate pattern name \"" + parsed->graph.name() + "\"", at));
        continue;
      }
      if (error_count() == errors_before) out.push_back(std::move(*parsed));
    }
    return out;
  }

 private:
  struct PendingEdge {
    std::string from, to;
    Position pos, from_pos, to_pos;
  };

  const Token& peek() const { return toks_[k_]; }
  const Token& take() {
    const Token& t = toks_[k_];
    if (t.kind != Tok::end) ++k_;
    return t;
  }
  bool at_keyword(std::string_view kw) const {
    return peek().kind == Tok::ident && peek().text == kw;
  }
  bool at_statement_start() const {
    return at_keyword("node") || at_keyword("edge") || at_keyword("meta");
  }

  std::size_t error_count() const {
    return static_cast<std::size_t>(std::count_if(
        diags_.begin(), diags_.end(),
        [](const Diagnostic& d) { return d.severity == Severity::error; }));
  }

  void error_here(const std::string& what) {
    const Token& t = peek();
    std::string found = t.kind == Tok::ident ? "'" + t.text + "'" : describe(t.kind);
    diags_.push_back(make_error("SyntaxError", what + ", found " + found, t.pos));
  }

  bool expect(Tok kind, const char* what) {
    if (peek().kind == kind) {
      take();
      return true;
    }
    error_here(std::string("expected ") + what);
    return false;
  }

  // Skip to the next statement keyword, '}' or 'pattern'.
  void recover_statement() {
    while (peek().kind != Tok::end && peek().kind != Tok::rbrace && !at_statement_start() &&
           !at_keyword("pattern")) {
      ++k_;
    }
  }

  std::optional<ParsedPattern> parse_pattern() {
    ParsedPattern pp;
    pp.map.pattern = take().pos;  // 'pattern'
    if (peek().kind != Tok::string) {
      error_here("expected pattern name string");
      while (peek().kind != Tok::end && !at_keyword("pattern")) ++k_;
      return std::nullopt;
    }
    PatternGraph::Builder b(take().text);
    if (!expect(Tok::lbrace, "'{'")) {
      while (peek().kind != Tok::end && !at_keyword("pattern")) ++k_;
      return std::nullopt;
    }
    std::vector<PendingEdge> edges;
    while (true) {
      if (peek().kind == Tok::rbrace) {
        take();
        break;
      }
      if (peek().kind == Tok::end || at_keyword("pattern")) {
        error_here("expected '}' to close pattern");
        break;
      }
      bool ok = false;
      if (at_keyword("node")) {
        ok = parse_node(b, pp.map);
      } else if (at_keyword("edge")) {
        ok = parse_edge(edges);
      } else if (at_keyword("meta")) {
        ok = parse_meta(b, pp.map);
      } else {
        error_here("expected 'node', 'edge', 'meta' or '}'");
        ++k_;
      }
      if (!ok) recover_statement();
    }
    for (const auto& e : edges) {
      bool known = true;
      for (const auto& [id, p] : {std::pair{e.from, e.from_pos}, std::pair{e.to, e.to_pos}}) {
        if (!b.has_node(id)) {
          diags_.push_back(
              make_error("UnknownNodeRef", "edge endpoint '" + id + "' is not declared", p));
          known = false;
        }
      }
      if (!known) continue;
      if (e.from == e.to) {
        diags_.push_back(make_error("SelfLoop", "self-loop on '" + e.from + "'", e.pos));
        continue;
      }
      Edge key{e.from, e.to};
      if (pp.map.edges.contains(key)) {
        diags_.push_back(
            make_error("DuplicateEdge", "duplicate edge " + e.from + " -> " + e.to, e.pos));
        continue;
      }
      b.edge(e.from, e.to);
      pp.map.edges.emplace(std::move(key), e.pos);
    }
    pp.graph = b.build();
    return pp;
  }

  bool parse_node(PatternGraph::Builder& b, SourceMap& map) {
    Position at = take().pos;
    if (peek().kind != Tok::ident) {
      error_here("expected node id");
      return false;
    }
    Token id = take();
    if (!expect(Tok::colon, "':' after node id")) return false;
    if (peek().kind != Tok::ident) {
      error_here("expected type path");
      return false;
    }
    Position type_pos = peek().pos;
    std::string path = take().text;
    while (peek().kind == Tok::colon) {
      take();
      if (peek().kind != Tok::ident) {
        error_here("expected type path segment");
        return false;
      }
      path += ':' + take().text;
    }
    std::optional<std::string> label;
    if (peek().kind == Tok::string) label = take().text;

    std::optional<TypePath> type;
    try {
      type = parse_type_path(path, taxonomy_);
    } catch (const TaxonomyError& e) {
      diags_.push_back(make_error("UnknownType", e.what(), type_pos));
      return true;  // statement itself was well-formed
    }
    if (b.has_node(id.text)) {
      diags_.push_back(make_error("DuplicateId", "duplicate node id '" + id.text + "'", id.pos));
      return true;
    }
    b.node(id.text, std::move(*type), std::move(label));
    map.nodes.emplace(id.text, at);
    return true;
  }

  bool parse_edge(std::vector<PendingEdge>& edges) {
    PendingEdge e;
    e.pos = take().pos;
    if (peek().kind != Tok::ident) {
      error_here("expected edge source id");
      return false;
    }
    e.from_pos = peek().pos;
    e.from = take().text;
    if (!expect(Tok::arrow, "'->'")) return false;
    if (peek().kind != Tok::ident) {
      error_here("expected edge target id");
      return false;
    }
    e.to_pos = peek().pos;
    e.to = take().text;
    edges.push_back(std::move(e));
    return true;
  }

  bool parse_meta(PatternGraph::Builder& b, SourceMap& map) {
    Position at = take().pos;
    if (peek().kind != Tok::ident) {
      error_here("expected meta key");
      return false;
    }
    Token key = take();
    if (!expect(Tok::equals, "'='")) return false;
    if (peek().kind != Tok::string) {
      error_here("expected meta value string");
      return false;
    }
    std::string value = take().text;
    if (map.meta.contains(key.text)) {
      diags_.push_back(
          make_error("DuplicateMetaKey", "duplicate meta key '" + key.text + "'", key.pos));
      return true;
    }
    map.meta.emplace(key.text, at);
    b.meta(key.text, std::move(value));
    return true;
  }

  std::vector<Token> toks_;
  std::size_t k_ = 0;
  const Taxonomy& taxonomy_;
  Diagnostics& diags_;
};

inline std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace detail

/// Parses every `pattern` block. Never throws on malformed input; problems are
/// reported as positioned diagnostics, in source order.
inline ParseResult parse(const SourceFile& src, const Taxonomy& taxonomy) {
  ParseResult r;
  auto tokens = detail::Lexer(src.text, r.diagnostics).run();
  r.patterns = detail::Parser(std::move(tokens), taxonomy, r.diagnostics).run();
  std::stable_sort(r.diagnostics.begin(), r.diagnostics.end(),
                   [](const Diagnostic& a, const Diagnostic& b) {
                     return a.position.value_or(Position{}) < b.position.value_or(Position{});
                   });
  return r;
}

inline ParseResult parse(std::string_view text, const Taxonomy& taxonomy) {
  return parse(SourceFile{"<memory>", std::string(text)}, taxonomy);
}

/// Canonical text: meta sorted by key, nodes by id, edges by (from, to).
inline std::string print(const PatternGraph& g) {
  std::string out = "pattern " + detail::quote(g.name()) + " {\n";
  for (const auto& [k, v] : g.meta()) out += "  meta " + k + " = " + detail::quote(v) + "\n";
  for (const auto& [id, n] : g.nodes()) {
    out += "  node " + id + ": " + n.type.str();
    if (n.label) out += " " + detail::quote(*n.label);
    out += "\n";
  }
  for (const auto& e : g.edges()) out += "  edge " + e.from + " -> " + e.to + "\n";
  out += "}\n";
  return out;
}

/// Patterns separated by one blank line.
inline std::string print(const std::vector<PatternGraph>& gs) {
  std::string out;
  for (std::size_t i = 0; i < gs.size(); ++i) {
    if (i) out += "\n";
    out += print(gs[i]);
  }
  return out;
}

}  // namespace boxology
