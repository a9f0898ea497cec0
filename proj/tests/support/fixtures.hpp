#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "boxology/catalog.hpp"
#include "boxology/dsl.hpp"

#ifndef BOXOLOGY_SOURCE_DIR
#error "BOXOLOGY_SOURCE_DIR must point at the repository root"
#endif

namespace boxology::testing {

inline std::string source_path(const std::string& rel) {
  return std::string(BOXOLOGY_SOURCE_DIR) + "/" + rel;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline const PatternGraph& builtin(const std::string& name) { return builtin_catalog().at(name); }

/// First pattern of a repository file; throws if it does not parse cleanly.
inline PatternGraph load_pattern(const std::string& rel) {
  auto r = parse(SourceFile{rel, read_file(source_path(rel))}, default_taxonomy());
  if (!r.ok() || r.patterns.empty()) throw std::runtime_error(rel + " does not parse");
  return r.patterns.front().graph;
}

inline PatternGraph parse_one(std::string_view text) {
  auto r = parse(text, default_taxonomy());
  if (!r.ok() || r.patterns.size() != 1) throw std::runtime_error("expected one clean pattern");
  return r.patterns.front().graph;
}

}  // namespace boxology::testing
