#pragma once

#include <algorithm>
#include <compare>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "boxology/taxonomy.hpp"

namespace boxology {

struct Node {
  std::string id;
  TypePath type;
  std::optional<std::string> label;

  Kind kind() const noexcept { return type.kind(); }
  bool is_process() const noexcept { return kind() == Kind::process; }

  friend bool operator==(const Node&, const Node&) = default;
};

struct Edge {
  std::string from;
  std::string to;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A named directed graph of typed boxes and process ovals.
///
/// Immutable; build one with PatternGraph::Builder. The builder enforces the
/// structural invariants (unique ids, known endpoints, no self-loops, no
/// duplicate edges). Typing rules are checked separately by check_well_formed.
class PatternGraph {
 public:
  class Builder;

  PatternGraph() = default;

  const std::string& name() const noexcept { return name_; }
  const std::map<std::string, Node>& nodes() const noexcept { return nodes_; }
  const std::set<Edge>& edges() const noexcept { return edges_; }
  const std::map<std::string, std::string>& meta() const noexcept { return meta_; }

  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  const Node* find(const std::string& id) const {
    auto it = nodes_.find(id);
    return it == nodes_.end() ? nullptr : &it->second;
  }
  const Node& node(const std::string& id) const { return nodes_.at(id); }

  bool has_edge(const std::string& from, const std::string& to) const {
    return edges_.contains(Edge{from, to});
  }

  /// Successor / predecessor ids, sorted.
  const std::vector<std::string>& successors(const std::string& id) const { return succ_.at(id); }
  const std::vector<std::string>& predecessors(const std::string& id) const {
    return pred_.at(id);
  }

  /// Ids of process nodes, sorted.
  std::vector<std::string> process_ids() const {
    std::vector<std::string> out;
    for (const auto& [id, n] : nodes_)
      if (n.is_process()) out.push_back(id);
    return out;
  }

  friend bool operator==(const PatternGraph& a, const PatternGraph& b) {
    return a.name_ == b.name_ && a.nodes_ == b.nodes_ && a.edges_ == b.edges_ &&
           a.meta_ == b.meta_;
  }

 private:
  std::string name_;
  std::map<std::string, Node> nodes_;
  std::set<Edge> edges_;
  std::map<std::string, std::string> meta_;
  std::map<std::string, std::vector<std::string>> succ_;
  std::map<std::string, std::vector<std::string>> pred_;
};

class PatternGraph::Builder {
 public:
  explicit Builder(std::string name = {}) { g_.name_ = std::move(name); }

  /// Starts from a copy of an existing graph.
  explicit Builder(const PatternGraph& from) : g_(from) {}

  Builder& name(std::string n) {
    g_.name_ = std::move(n);
    return *this;
  }

  Builder& node(std::string id, TypePath type, std::optional<std::string> label = std::nullopt) {
    if (!is_identifier(id)) throw GraphError("invalid node id '" + id + "'");
    if (g_.nodes_.contains(id)) throw GraphError("duplicate node id '" + id + "'");
    Node n{id, std::move(type), std::move(label)};
    g_.nodes_.emplace(std::move(id), std::move(n));
    return *this;
  }

  Builder& node(std::string id, std::string_view type) {
    return node(std::move(id), TypePath::from_string(type));
  }

  Builder& edge(std::string from, std::string to) {
    if (!g_.nodes_.contains(from)) throw GraphError("edge from unknown node '" + from + "'");
    if (!g_.nodes_.contains(to)) throw GraphError("edge to unknown node '" + to + "'");
    if (from == to) throw GraphError("self-loop on '" + from + "'");
    if (!g_.edges_.insert(Edge{std::move(from), std::move(to)}).second) {
      throw GraphError("duplicate edge");
    }
    return *this;
  }

  Builder& remove_edge(const Edge& e) {
    g_.edges_.erase(e);
    return *this;
  }

  Builder& set_type(const std::string& id, TypePath type) {
    auto it = g_.nodes_.find(id);
    if (it == g_.nodes_.end()) throw GraphError("unknown node '" + id + "'");
    it->second.type = std::move(type);
    return *this;
  }

  Builder& set_label(const std::string& id, std::optional<std::string> label) {
    auto it = g_.nodes_.find(id);
    if (it == g_.nodes_.end()) throw GraphError("unknown node '" + id + "'");
    it->second.label = std::move(label);
    return *this;
  }

  Builder& meta(std::string key, std::string value) {
    if (!is_identifier(key)) throw GraphError("invalid meta key '" + key + "'");
    g_.meta_[std::move(key)] = std::move(value);
    return *this;
  }

  Builder& clear_meta() {
    g_.meta_.clear();
    return *this;
  }

  bool has_node(const std::string& id) const { return g_.nodes_.contains(id); }

  PatternGraph build() const {
    PatternGraph g = g_;
    g.succ_.clear();
    g.pred_.clear();
    for (const auto& [id, n] : g.nodes_) {
      g.succ_[id];
      g.pred_[id];
    }
    // edges_ is ordered by (from, to), so successor lists come out sorted.
    for (const auto& e : g.edges_) g.succ_[e.from].push_back(e.to);
    for (const auto& e : g.edges_) g.pred_[e.to].push_back(e.from);
    for (auto& [id, v] : g.pred_) std::sort(v.begin(), v.end());
    return g;
  }

 private:
  PatternGraph g_;
};

}  // namespace boxology
