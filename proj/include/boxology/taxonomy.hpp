#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "boxology/diagnostic.hpp"

namespace boxology {

/// The four top-level kinds of box. The first segment of every type path.
enum class Kind { instance, model, process, actor };

inline constexpr std::array<std::string_view, 4> kKindNames = {"instance", "model", "process",
                                                               "actor"};

inline std::string_view to_string(Kind k) { return kKindNames[static_cast<std::size_t>(k)]; }

inline std::optional<Kind> kind_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kKindNames.size(); ++i) {
    if (kKindNames[i] == name) return static_cast<Kind>(i);
  }
  return std::nullopt;
}

inline bool is_ident_start(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
}

inline bool is_ident_char(char c) {
  return is_ident_start(c) || (c >= '0' && c <= '9') || c == '-';
}

inline bool is_identifier(std::string_view s) {
  if (s.empty() || !is_ident_start(s.front())) return false;
  return std::all_of(s.begin() + 1, s.end(), is_ident_char);
}

class TaxonomyError : public std::runtime_error {
 public:
  enum class Code { unknown_root, unknown_segment, malformed_path, no_common_ancestor };

  TaxonomyError(Code code, std::string message, std::size_t position = 0)
      : std::runtime_error(std::move(message)), code_(code), position_(position) {}

  Code code() const noexcept { return code_; }
  /// 1-based index of the offending segment (unknown_segment / malformed_path), else 0.
  std::size_t position() const noexcept { return position_; }

 private:
  Code code_;
  std::size_t position_;
};

/// A colon-separated path into the type tree, e.g. `model:stat:NN`.
///
/// Construction only checks the shape of the path (identifier segments, one of
/// the four roots). Membership in a particular taxonomy is checked by
/// `parse_type_path` and `Taxonomy::contains`.
class TypePath {
 public:
  explicit TypePath(std::vector<std::string> segments) : segments_(std::move(segments)) {
    if (segments_.empty()) {
      throw TaxonomyError(TaxonomyError::Code::malformed_path, "empty type path");
    }
    for (std::size_t i = 0; i < segments_.size(); ++i) {
      if (!is_identifier(segments_[i])) {
        throw TaxonomyError(TaxonomyError::Code::malformed_path,
                            "malformed segment " + std::to_string(i + 1) + " '" + segments_[i] +
                                "'",
                            i + 1);
      }
    }
    auto k = kind_from_name(segments_.front());
    if (!k) {
      throw TaxonomyError(TaxonomyError::Code::unknown_root,
                          "unknown root '" + segments_.front() +
                              "' (expected instance, model, process or actor)",
                          1);
    }
    kind_ = *k;
  }

  /// Splits on ':' and validates shape only.
  static TypePath from_string(std::string_view text) {
    std::vector<std::string> segs;
    std::size_t start = 0;
    while (true) {
      auto colon = text.find(':', start);
      segs.emplace_back(text.substr(start, colon == std::string_view::npos ? colon : colon - start));
      if (colon == std::string_view::npos) break;
      start = colon + 1;
    }
    return TypePath(std::move(segs));
  }

  const std::vector<std::string>& segments() const noexcept { return segments_; }
  std::size_t depth() const noexcept { return segments_.size(); }
  Kind kind() const noexcept { return kind_; }
  bool is_root() const noexcept { return segments_.size() == 1; }

  std::string str() const {
    std::string out = segments_.front();
    for (std::size_t i = 1; i < segments_.size(); ++i) {
      out += ':';
      out += segments_[i];
    }
    return out;
  }

  /// The first `n` segments (1 <= n <= depth()).
  TypePath prefix(std::size_t n) const {
    return TypePath(std::vector<std::string>(segments_.begin(),
                                             segments_.begin() + static_cast<std::ptrdiff_t>(n)));
  }

  friend bool operator==(const TypePath& a, const TypePath& b) { return a.segments_ == b.segments_; }
  friend auto operator<=>(const TypePath& a, const TypePath& b) {
    return a.segments_ <=> b.segments_;
  }

 private:
  std::vector<std::string> segments_;
  Kind kind_ = Kind::instance;
};

/// a <: b iff b's segments are a prefix of a's.
inline bool is_subtype(const TypePath& a, const TypePath& b) {
  const auto& sa = a.segments();
  const auto& sb = b.segments();
  if (sb.size() > sa.size()) return false;
  return std::equal(sb.begin(), sb.end(), sa.begin());
}

inline bool is_strict_subtype(const TypePath& a, const TypePath& b) {
  return a.depth() > b.depth() && is_subtype(a, b);
}

/// Longest common prefix. Throws NoCommonAncestor for paths of different kinds.
inline TypePath least_common_ancestor(const TypePath& a, const TypePath& b) {
  if (a.kind() != b.kind()) {
    throw TaxonomyError(TaxonomyError::Code::no_common_ancestor,
                        "no common ancestor of '" + a.str() + "' and '" + b.str() + "'");
  }
  const auto& sa = a.segments();
  const auto& sb = b.segments();
  std::size_t n = 0;
  while (n < sa.size() && n < sb.size() && sa[n] == sb[n]) ++n;
  return a.prefix(n);
}

/// The more specific of two comparable paths; nullopt when incomparable.
inline std::optional<TypePath> meet(const TypePath& a, const TypePath& b) {
  if (is_subtype(a, b)) return a;
  if (is_subtype(b, a)) return b;
  return std::nullopt;
}

/// The type tree. Immutable once built; extensions return a new taxonomy.
class Taxonomy {
 public:
  /// The four bare roots and nothing else.
  static Taxonomy roots_only() {
    Taxonomy t;
    for (auto name : kKindNames) t.add_node(TypePath({std::string(name)}));
    return t;
  }

  /// The default vocabulary, including the example model leaves used by the
  /// shipped catalog and corpus.
  static Taxonomy default_taxonomy() {
    Taxonomy t = roots_only();
    for (const char* p : {
             "instance:data",         "instance:data:number",  "instance:data:text",
             "instance:data:tensor",  "instance:data:stream",  "instance:sym",
             "instance:sym:label",    "instance:sym:relation", "instance:sym:trace",
             "model:stat",            "model:stat:NN",         "model:stat:bayesian",
             "model:stat:markov",     "model:sem",             "model:sem:taxonomy",
             "model:sem:ontology",    "model:sem:KG",          "model:sem:rulebase",
             "model:sem:diffeq",      "process:generate",      "process:generate:train",
             "process:generate:engineer",                      "process:transform",
             "process:infer",         "process:infer:induce",  "process:infer:deduce",
             "process:infer:deduce:classify",                  "process:infer:deduce:predict",
             "actor:human",           "actor:agent",           "actor:robot",
         }) {
      t.add_node(TypePath::from_string(p));
    }
    return t;
  }

  bool contains(const TypePath& p) const { return index_.contains(p.str()); }

  /// Every path in the tree, depth-first, children in insertion order.
  std::vector<TypePath> all_paths() const {
    std::vector<TypePath> out;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      if (nodes_[i].parent == kNone) collect(i, out);
    }
    return out;
  }

  std::vector<TypePath> children(const TypePath& p) const {
    std::vector<TypePath> out;
    auto it = index_.find(p.str());
    if (it == index_.end()) return out;
    for (auto c : nodes_[it->second].children) out.push_back(nodes_[c].path);
    return out;
  }

  /// Adds one leaf whose parent already exists. Adding an existing path is a no-op.
  Taxonomy with_leaf(const TypePath& leaf) const {
    if (contains(leaf)) return *this;
    if (leaf.is_root()) {
      throw TaxonomyError(TaxonomyError::Code::unknown_root,
                          "cannot add root kind '" + leaf.str() + "'", 1);
    }
    if (!contains(leaf.prefix(leaf.depth() - 1))) {
      throw TaxonomyError(TaxonomyError::Code::unknown_segment,
                          "parent of '" + leaf.str() + "' is not in the taxonomy",
                          leaf.depth() - 1);
    }
    Taxonomy t = *this;
    t.add_node(leaf);
    return t;
  }

  friend bool operator==(const Taxonomy& a, const Taxonomy& b) { return a.index_ == b.index_; }

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  struct TreeNode {
    TypePath path;
    std::size_t parent;
    std::vector<std::size_t> children;
  };

  void add_node(const TypePath& p) {
    std::size_t parent = kNone;
    if (!p.is_root()) parent = index_.at(p.prefix(p.depth() - 1).str());
    nodes_.push_back(TreeNode{p, parent, {}});
    index_.emplace(p.str(), nodes_.size() - 1);
    if (parent != kNone) nodes_[parent].children.push_back(nodes_.size() - 1);
  }

  void collect(std::size_t i, std::vector<TypePath>& out) const {
    out.push_back(nodes_[i].path);
    for (auto c : nodes_[i].children) collect(c, out);
  }

  std::vector<TreeNode> nodes_;
  std::map<std::string, std::size_t> index_;
};

/// Shared immutable instance of Taxonomy::default_taxonomy().
inline const Taxonomy& default_taxonomy() {
  static const Taxonomy t = Taxonomy::default_taxonomy();
  return t;
}

/// Parses `a:b:c` and checks that every prefix exists in `t`.
inline TypePath parse_type_path(std::string_view text, const Taxonomy& t) {
  TypePath p = TypePath::from_string(text);
  for (std::size_t n = 1; n <= p.depth(); ++n) {
    if (!t.contains(p.prefix(n))) {
      throw TaxonomyError(TaxonomyError::Code::unknown_segment,
                          "unknown type '" + p.prefix(n).str() + "' (segment " +
                              std::to_string(n) + " of '" + p.str() + "')",
                          n);
    }
  }
  return p;
}

struct ExtensionResult {
  Taxonomy taxonomy;
  Diagnostics diagnostics;
};

/// Reads a taxonomy-extension file: one type path per line, `#` comments.
/// Each line adds one leaf; lines are applied in order.
inline ExtensionResult extend_taxonomy(const Taxonomy& base, std::string_view text) {
  ExtensionResult r{base, {}};
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto nl = text.find('\n', start);
    std::string_view line =
        text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    while (!line.empty() && (line.back() == ' ' || line.back() == '\t' || line.back() == '\r'))
      line.remove_suffix(1);
    std::size_t lead = 0;
    while (lead < line.size() && (line[lead] == ' ' || line[lead] == '\t')) ++lead;
    line.remove_prefix(lead);
    if (!line.empty()) {
      try {
        r.taxonomy = r.taxonomy.with_leaf(TypePath::from_string(line));
      } catch (const TaxonomyError& e) {
        r.diagnostics.push_back(make_error("BadExtension", e.what(), Position{line_no, lead + 1}));
      }
    }
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  return r;
}

}  // namespace boxology
