#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "boxology/catalog.hpp"
#include "boxology/graph.hpp"
#include "boxology/taxonomy.hpp"

namespace boxology {

/// How a target node's type must relate to the pattern node's type.
enum class TypeMode {
  subtype,  // target type is equal to or below the pattern type
  exact,    // types must be identical (used for isomorphism)
};

/// An injective, edge-preserving, type-compatible map from pattern nodes to
/// target nodes.
struct Match {
  std::string pattern;
  std::map<std::string, std::string> mapping;  // pattern id -> target id

  /// Target ids in pattern-node id order.
  std::vector<std::string> image() const {
    std::vector<std::string> out;
    out.reserve(mapping.size());
    for (const auto& [p, t] : mapping) out.push_back(t);
    return out;
  }

  friend bool operator==(const Match&, const Match&) = default;
};

inline bool type_admits(const TypePath& target, const TypePath& pattern, TypeMode mode) {
  return mode == TypeMode::exact ? target == pattern : is_subtype(target, pattern);
}

namespace detail {

class MatchSearch {
 public:
  MatchSearch(const PatternGraph& pattern, const PatternGraph& target, TypeMode mode)
      : pattern_(pattern), target_(target), mode_(mode) {
    order_nodes();
  }

  std::vector<Match> run() {
    assignment_.assign(order_.size(), nullptr);
    extend(0);
    std::sort(results_.begin(), results_.end(),
              [](const Match& a, const Match& b) { return a.image() < b.image(); });
    results_.erase(std::unique(results_.begin(), results_.end()), results_.end());
    return std::move(results_);
  }

 private:
  // Processes first (rare and strongly typed), then boxes, each time picking
  // the node with the most already-ordered neighbours.
  void order_nodes() {
    std::set<std::string> placed;
    auto links_to_placed = [&](const std::string& id) {
      std::size_t n = 0;
      for (const auto& s : pattern_.successors(id)) n += placed.count(s);
      for (const auto& p : pattern_.predecessors(id)) n += placed.count(p);
      return n;
    };
    for (const auto& id : pattern_.process_ids()) {
      order_.push_back(id);
      placed.insert(id);
    }
    while (placed.size() < pattern_.node_count()) {
      const std::string* best = nullptr;
      std::size_t best_links = 0;
      for (const auto& [id, n] : pattern_.nodes()) {
        if (placed.contains(id)) continue;
        std::size_t links = links_to_placed(id);
        if (!best || links > best_links) {
          best = &id;
          best_links = links;
        }
      }
      order_.push_back(*best);
      placed.insert(*best);
    }
    for (std::size_t i = 0; i < order_.size(); ++i) position_[order_[i]] = i;
  }

  bool compatible(const Node& p, const Node& t) const {
    if (!type_admits(t.type, p.type, mode_)) return false;
    if (target_.successors(t.id).size() < pattern_.successors(p.id).size()) return false;
    if (target_.predecessors(t.id).size() < pattern_.predecessors(p.id).size()) return false;
    return true;
  }

  // Edges between pattern node `depth` and earlier-assigned nodes must exist in
  // the target.
  bool consistent(std::size_t depth, const std::string& tid) const {
    const std::string& pid = order_[depth];
    for (const auto& s : pattern_.successors(pid)) {
      auto k = position_.at(s);
      if (k < depth && !target_.has_edge(tid, *assignment_[k])) return false;
    }
    for (const auto& p : pattern_.predecessors(pid)) {
      auto k = position_.at(p);
      if (k < depth && !target_.has_edge(*assignment_[k], tid)) return false;
    }
    return true;
  }

  std::vector<std::string> candidates(std::size_t depth) const {
    const std::string& pid = order_[depth];
    // Any neighbour already mapped narrows the search to its target neighbours.
    for (const auto& s : pattern_.successors(pid)) {
      auto k = position_.at(s);
      if (k < depth) return target_.predecessors(*assignment_[k]);
    }
    for (const auto& p : pattern_.predecessors(pid)) {
      auto k = position_.at(p);
      if (k < depth) return target_.successors(*assignment_[k]);
    }
    std::vector<std::string> all;
    for (const auto& [id, n] : target_.nodes()) all.push_back(id);
    return all;
  }

  void extend(std::size_t depth) {
    if (depth == order_.size()) {
      Match m{pattern_.name(), {}};
      for (std::size_t i = 0; i < order_.size(); ++i) m.mapping.emplace(order_[i], *assignment_[i]);
      results_.push_back(std::move(m));
      return;
    }
    const Node& pn = pattern_.node(order_[depth]);
    for (const auto& tid : candidates(depth)) {
      if (used_.contains(tid)) continue;
      const Node& tn = target_.node(tid);
      if (!compatible(pn, tn) || !consistent(depth, tid)) continue;
      assignment_[depth] = &tn.id;
      used_.insert(tid);
      extend(depth + 1);
      used_.erase(tid);
      assignment_[depth] = nullptr;
    }
  }

  const PatternGraph& pattern_;
  const PatternGraph& target_;
  TypeMode mode_;
  std::vector<std::string> order_;
  std::map<std::string, std::size_t> position_;
  std::vector<const std::string*> assignment_;
  std::set<std::string> used_;
  std::vector<Match> results_;
};

}  // namespace detail

/// All occurrences of `pattern` in `target`, sorted by image. Extra target
/// edges around the matched nodes are allowed.
inline std::vector<Match> find_matches(const PatternGraph& pattern, const PatternGraph& target,
                                       TypeMode mode = TypeMode::subtype) {
  return detail::MatchSearch(pattern, target, mode).run();
}

/// Re-checks a match from scratch. Returns the violated conditions (empty if valid).
inline std::vector<std::string> verify_match(const Match& m, const PatternGraph& pattern,
                                             const PatternGraph& target,
                                             TypeMode mode = TypeMode::subtype) {
  std::vector<std::string> problems;
  std::set<std::string> seen;
  for (const auto& [pid, n] : pattern.nodes()) {
    auto it = m.mapping.find(pid);
    if (it == m.mapping.end()) {
      problems.push_back("pattern node '" + pid + "' is unmapped");
      continue;
    }
    const Node* t = target.find(it->second);
    if (!t) {
      problems.push_back("'" + pid + "' maps to missing target node '" + it->second + "'");
      continue;
    }
    if (!seen.insert(it->second).second) {
      problems.push_back("target node '" + it->second + "' is hit twice");
    }
    if (!type_admits(t->type, n.type, mode)) {
      problems.push_back("'" + it->second + "' (" + t->type.str() + ") does not fit '" + pid +
                         "' (" + n.type.str() + ")");
    }
  }
  if (m.mapping.size() != pattern.node_count()) problems.push_back("mapping has extra keys");
  if (!problems.empty()) return problems;
  for (const auto& e : pattern.edges()) {
    const auto& a = m.mapping.at(e.from);
    const auto& b = m.mapping.at(e.to);
    if (!target.has_edge(a, b)) {
      problems.push_back("edge " + e.from + " -> " + e.to + " maps to missing " + a + " -> " + b);
    }
  }
  return problems;
}

/// Same shape and identical types, ignoring ids, names and meta.
inline bool is_isomorphic(const PatternGraph& a, const PatternGraph& b) {
  if (a.node_count() != b.node_count() || a.edge_count() != b.edge_count()) return false;
  return !find_matches(a, b, TypeMode::exact).empty();
}

/// A cover of a graph's process nodes by elementary-pattern matches.
struct Decomposition {
  std::vector<Match> parts;
  std::vector<std::string> uncovered;  // process ids, sorted

  friend bool operator==(const Decomposition&, const Decomposition&) = default;
};

class DecompositionLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kDefaultMaxProcesses = 64;

namespace detail {

struct Candidate {
  std::size_t catalog_index;
  Match match;
  std::vector<std::size_t> processes;  // indices into the target's process list
};

/// Exact maximum-coverage packing of candidates onto processes.
class CoverSearch {
 public:
  CoverSearch(std::size_t process_count, const std::vector<Candidate>& candidates)
      : n_(process_count), candidates_(candidates), by_process_(process_count),
        taken_(process_count, false) {
    for (std::size_t c = 0; c < candidates_.size(); ++c) {
      for (auto p : candidates_[c].processes) by_process_[p].push_back(c);
    }
  }

  std::vector<std::size_t> run() {
    search(0, 0);
    return best_;
  }

 private:
  void search(std::size_t p, std::size_t covered) {
    while (p < n_ && taken_[p]) ++p;
    if (p == n_) {
      if (!found_ || covered > best_covered_) {
        found_ = true;
        best_covered_ = covered;
        best_ = chosen_;
      }
      return;
    }
    std::size_t open = 0;
    for (std::size_t q = p; q < n_; ++q) open += taken_[q] ? 0 : 1;
    if (found_ && covered + open <= best_covered_) return;

    for (auto c : by_process_[p]) {
      const auto& procs = candidates_[c].processes;
      if (std::any_of(procs.begin(), procs.end(), [&](std::size_t q) { return taken_[q]; }))
        continue;
      for (auto q : procs) taken_[q] = true;
      chosen_.push_back(c);
      search(p + 1, covered + procs.size());
      chosen_.pop_back();
      for (auto q : procs) taken_[q] = false;
    }
    // Leave p uncovered.
    taken_[p] = true;
    search(p + 1, covered);
    taken_[p] = false;
  }

  std::size_t n_;
  const std::vector<Candidate>& candidates_;
  std::vector<std::vector<std::size_t>> by_process_;
  std::vector<bool> taken_;
  std::vector<std::size_t> chosen_;
  std::vector<std::size_t> best_;
  std::size_t best_covered_ = 0;
  bool found_ = false;
};

}  // namespace detail

/// Covers as many process nodes as possible with non-overlapping elementary
/// matches. Boxes may be shared between parts; processes may not. Ties go to
/// the earlier catalog entry, then to the smaller image.
inline Decomposition decompose(const PatternGraph& target, const Catalog& catalog,
                               std::size_t max_processes = kDefaultMaxProcesses) {
  const auto processes = target.process_ids();
  if (processes.size() > max_processes) {
    throw DecompositionLimitError("graph \"" + target.name() + "\" has " +
                                  std::to_string(processes.size()) +
                                  " process nodes; decomposition is limited to " +
                                  std::to_string(max_processes));
  }
  std::map<std::string, std::size_t> process_index;
  for (std::size_t i = 0; i < processes.size(); ++i) process_index[processes[i]] = i;

  std::vector<detail::Candidate> candidates;
  const auto elementary = catalog.elementary();
  for (std::size_t ci = 0; ci < elementary.size(); ++ci) {
    for (auto& m : find_matches(*elementary[ci], target)) {
      detail::Candidate c{ci, std::move(m), {}};
      for (const auto& [pid, tid] : c.match.mapping) {
        if (auto it = process_index.find(tid); it != process_index.end())
          c.processes.push_back(it->second);
      }
      std::sort(c.processes.begin(), c.processes.end());
      if (!c.processes.empty()) candidates.push_back(std::move(c));
    }
  }

  auto chosen = detail::CoverSearch(processes.size(), candidates).run();
  std::sort(chosen.begin(), chosen.end());  // candidates are already in (catalog, image) order

  Decomposition d;
  std::vector<bool> covered(processes.size(), false);
  for (auto c : chosen) {
    for (auto q : candidates[c].processes) {
      if (covered[q]) throw std::logic_error("decomposition reused process " + processes[q]);
      covered[q] = true;
    }
    d.parts.push_back(candidates[c].match);
  }
  for (std::size_t i = 0; i < processes.size(); ++i)
    if (!covered[i]) d.uncovered.push_back(processes[i]);
  return d;
}

}  // namespace boxology
