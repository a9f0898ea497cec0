#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace boxology {

enum class Severity { error, warning };

inline const char* to_string(Severity s) {
  return s == Severity::error ? "error" : "warning";
}

/// 1-based line/column into a source text.
struct Position {
  std::size_t line = 1;
  std::size_t column = 1;

  friend bool operator==(const Position&, const Position&) = default;
  friend auto operator<=>(const Position&, const Position&) = default;
};

/// What a graph-level diagnostic is about. Empty for file-level problems.
struct Subject {
  std::string node;                                   // node id, or empty
  std::optional<std::pair<std::string, std::string>> edge;  // (from, to)

  friend bool operator==(const Subject&, const Subject&) = default;
};

struct Diagnostic {
  Severity severity = Severity::error;
  std::string code;
  std::string message;
  std::optional<Position> position;
  Subject subject;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

using Diagnostics = std::vector<Diagnostic>;

inline bool has_errors(const Diagnostics& ds) {
  return std::any_of(ds.begin(), ds.end(),
                     [](const Diagnostic& d) { return d.severity == Severity::error; });
}

inline Diagnostic make_error(std::string code, std::string message,
                             std::optional<Position> pos = std::nullopt) {
  return Diagnostic{Severity::error, std::move(code), std::move(message), pos, {}};
}

/// `file:line:col: severity[code]: message`
inline std::string format_diagnostic(const std::string& file, const Diagnostic& d) {
  std::string out = file;
  if (d.position) {
    out += ':' + std::to_string(d.position->line) + ':' + std::to_string(d.position->column);
  }
  out += ": ";
  out += to_string(d.severity);
  out += '[' + d.code + "]: " + d.message;
  return out;
}

}  // namespace boxology
