#pragma once

// Command-line front end. `run` is kept separate from main() so tests can
// drive it with in-memory streams.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "boxology/boxology.hpp"

namespace boxology::cli {

enum ExitStatus : int { kOk = 0, kDiagnostics = 1, kUsage = 2 };

struct Environment {
  std::optional<std::string> catalog;  // BOXOLOGY_CATALOG
};

inline Environment environment_from_process() {
  Environment env;
  if (const char* c = std::getenv("BOXOLOGY_CATALOG"); c && *c) env.catalog = c;
  return env;
}

namespace detail {

inline std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) return std::nullopt;
  return ss.str();
}

struct Options {
  std::string taxonomy_file;
  std::string catalog_file;
  std::string file;
  std::string pattern;
  bool all = false;
  bool json = false;
  std::string left, right, glue, name, output;
  std::string format = "dot";
  std::string rankdir = "LR";
  bool show_meta = false;
  std::string catalog_name;
};

class Session {
 public:
  Session(const Options& o, const Environment& env, std::ostream& out, std::ostream& err)
      : opts_(o), env_(env), out_(out), err_(err) {}

  int load_taxonomy() {
    taxonomy_ = default_taxonomy();
    if (opts_.taxonomy_file.empty()) return kOk;
    auto text = read_file(opts_.taxonomy_file);
    if (!text) return unreadable(opts_.taxonomy_file);
    auto ext = extend_taxonomy(taxonomy_, *text);
    for (const auto& d : ext.diagnostics) err_ << format_diagnostic(opts_.taxonomy_file, d) << "\n";
    if (has_errors(ext.diagnostics)) return kDiagnostics;
    taxonomy_ = std::move(ext.taxonomy);
    return kOk;
  }

  int load_catalog() {
    std::string path = opts_.catalog_file;
    if (path.empty() && env_.catalog) path = *env_.catalog;
    if (path.empty()) {
      if (opts_.taxonomy_file.empty()) {
        catalog_ = builtin_catalog();
        return kOk;
      }
      // Re-load the builtin text so it is checked against the extended taxonomy.
      return load_catalog_text("catalog/builtin.box", std::string(builtin_catalog_source()));
    }
    auto text = read_file(path);
    if (!text) return unreadable(path);
    return load_catalog_text(path, *text);
  }

  /// Parses and (optionally) type-checks the input file, printing diagnostics
  /// in source order.
  int load_input(bool check) {
    auto text = read_file(opts_.file);
    if (!text) return unreadable(opts_.file);
    ParseResult parsed = parse(SourceFile{opts_.file, *text}, taxonomy_);
    Diagnostics all = parsed.diagnostics;
    if (check) {
      for (const auto& p : parsed.patterns) {
        for (auto d : check_well_formed(p.graph, default_rules(), taxonomy_)) {
          d.position = p.map.locate(d.subject);
          all.push_back(std::move(d));
        }
      }
    }
    std::stable_sort(all.begin(), all.end(), [](const Diagnostic& a, const Diagnostic& b) {
      return a.position.value_or(Position{}) < b.position.value_or(Position{});
    });
    for (const auto& d : all) err_ << format_diagnostic(opts_.file, d) << "\n";
    if (has_errors(all)) return kDiagnostics;
    graphs_ = parsed.graphs();
    return kOk;
  }

  int cmd_check() {
    if (int rc = load_taxonomy()) return rc;
    return load_input(true);
  }

  int cmd_match() {
    if (int rc = prepare(true)) return rc;
    std::vector<const PatternGraph*> queries;
    if (opts_.all) {
      for (const auto& n : catalog_.names()) queries.push_back(&catalog_.at(n));
    } else if (const PatternGraph* p = catalog_.find(opts_.pattern)) {
      queries.push_back(p);
    } else {
      err_ << "error: unknown pattern \"" << opts_.pattern << "\"\n";
      return kUsage;
    }
    nlohmann::json doc = nlohmann::json::array();
    for (const auto& target : graphs_) {
      header(target);
      for (const auto* q : queries) {
        for (const auto& m : find_matches(*q, target)) {
          if (opts_.json) {
            doc.push_back({{"target", target.name()}, {"pattern", m.pattern},
                           {"mapping", m.mapping}});
          } else {
            out_ << format_match(m) << "\n";
          }
        }
      }
    }
    if (opts_.json) out_ << doc.dump(2) << "\n";
    return kOk;
  }

  int cmd_decompose() {
    if (int rc = prepare(true)) return rc;
    nlohmann::json doc = nlohmann::json::array();
    for (const auto& target : graphs_) {
      Decomposition d;
      if (int rc = guarded_decompose(target, d)) return rc;
      if (opts_.json) {
        nlohmann::json parts = nlohmann::json::array();
        for (const auto& m : d.parts) parts.push_back({{"pattern", m.pattern}, {"mapping", m.mapping}});
        doc.push_back({{"target", target.name()}, {"parts", parts}, {"uncovered", d.uncovered}});
        continue;
      }
      header(target);
      for (const auto& m : d.parts) out_ << format_match(m) << "\n";
      out_ << "uncovered:";
      for (const auto& u : d.uncovered) out_ << " " << u;
      out_ << "\n";
    }
    if (opts_.json) out_ << doc.dump(2) << "\n";
    return kOk;
  }

  int cmd_classify() {
    if (int rc = prepare(true)) return rc;
    nlohmann::json doc = nlohmann::json::array();
    for (const auto& target : graphs_) {
      Decomposition d;
      if (int rc = guarded_decompose(target, d)) return rc;
      SystemKind k = classify_decomposition(d);
      if (opts_.json) {
        std::vector<std::string> parts;
        for (const auto& m : d.parts) parts.push_back(m.pattern);
        doc.push_back({{"target", target.name()}, {"class", to_string(k)}, {"parts", parts},
                       {"uncovered", d.uncovered}});
        continue;
      }
      header(target);
      out_ << to_string(k) << "\n";
    }
    if (opts_.json) out_ << doc.dump(2) << "\n";
    return kOk;
  }

  int cmd_kautz() {
    if (int rc = prepare(true)) return rc;
    nlohmann::json doc = nlohmann::json::array();
    for (const auto& target : graphs_) {
      KautzReport r = kautz_types(target, catalog_);
      if (opts_.json) {
        nlohmann::json evidence = nlohmann::json::object();
        for (const auto& [t, names] : r.evidence) evidence[std::to_string(t)] = names;
        doc.push_back({{"target", target.name()}, {"types", r.types}, {"evidence", evidence}});
        continue;
      }
      header(target);
      for (const auto& [t, names] : r.evidence) {
        out_ << "type " << t << ":";
        for (std::size_t i = 0; i < names.size(); ++i) out_ << (i ? ", " : " ") << names[i];
        out_ << "\n";
      }
    }
    if (opts_.json) out_ << doc.dump(2) << "\n";
    return kOk;
  }

  int cmd_compose() {
    if (int rc = load_taxonomy()) return rc;
    if (int rc = load_catalog()) return rc;
    const PatternGraph* l = catalog_.find(opts_.left);
    const PatternGraph* r = catalog_.find(opts_.right);
    for (const auto& [name, p] : {std::pair{opts_.left, l}, std::pair{opts_.right, r}}) {
      if (!p) {
        err_ << "error: unknown pattern \"" << name << "\"\n";
        return kUsage;
      }
    }
    std::string name = opts_.name.empty() ? opts_.left + "+" + opts_.right : opts_.name;
    PatternGraph g;
    try {
      g = compose(*l, *r, GlueMap::parse(opts_.glue), name, default_rules(), taxonomy_);
    } catch (const ComposeError& e) {
      switch (e.code()) {
        case ComposeError::Code::bad_glue:
          err_ << "error: " << e.what() << "\n";
          return kUsage;
        case ComposeError::Code::incompatible_glue:
          err_ << "compose: error[IncompatibleGlue]: " << e.what() << "\n";
          return kDiagnostics;
        default:
          err_ << "compose: error[ResultIllTyped]: " << e.what() << "\n";
          return kDiagnostics;
      }
    }
    return emit(print(g));
  }

  int cmd_render() {
    if (int rc = load_taxonomy()) return rc;
    if (int rc = load_input(false)) return rc;
    RenderOptions ro;
    ro.rankdir = opts_.rankdir == "TB" ? RankDir::TB : RankDir::LR;
    ro.show_meta = opts_.show_meta;
    std::string text;
    bool found = opts_.pattern.empty();
    for (const auto& g : graphs_) {
      if (!opts_.pattern.empty() && g.name() != opts_.pattern) continue;
      found = true;
      text += to_dot(g, ro);
    }
    if (!found) {
      err_ << "error: no pattern \"" << opts_.pattern << "\" in " << opts_.file << "\n";
      return kUsage;
    }
    return emit(text);
  }

  int cmd_catalog_list() {
    if (int rc = load_taxonomy()) return rc;
    if (int rc = load_catalog()) return rc;
    for (const auto& n : catalog_.names()) out_ << n << "\n";
    return kOk;
  }

  int cmd_catalog_show() {
    if (int rc = load_taxonomy()) return rc;
    if (int rc = load_catalog()) return rc;
    const PatternGraph* p = catalog_.find(opts_.catalog_name);
    if (!p) {
      err_ << "error: unknown pattern \"" << opts_.catalog_name << "\"\n";
      return kUsage;
    }
    out_ << print(*p);
    return kOk;
  }

  int cmd_catalog_dump() {
    if (int rc = load_taxonomy()) return rc;
    if (int rc = load_catalog()) return rc;
    return emit(print(catalog_.graphs()));
  }

  /// Loads the catalog and checks that its text is already in canonical form.
  int cmd_catalog_verify() {
    if (int rc = load_taxonomy()) return rc;
    if (int rc = load_catalog()) return rc;
    std::string path = !opts_.catalog_file.empty() ? opts_.catalog_file
                                                   : env_.catalog.value_or(std::string());
    std::string text = path.empty() ? std::string(builtin_catalog_source())
                                    : read_file(path).value_or(std::string());
    if (print(catalog_.graphs()) != text) {
      err_ << (path.empty() ? "catalog/builtin.box" : path)
           << ": error[NotCanonical]: catalog text differs from its canonical print\n";
      return kDiagnostics;
    }
    out_ << "ok: " << catalog_.size() << " patterns\n";
    return kOk;
  }

 private:
  int prepare(bool check) {
    if (int rc = load_taxonomy()) return rc;
    if (int rc = load_catalog()) return rc;
    return load_input(check);
  }

  int load_catalog_text(const std::string& path, std::string text) {
    auto r = boxology::load_catalog(SourceFile{path, std::move(text)}, taxonomy_, default_rules());
    for (const auto& d : r.diagnostics) err_ << format_diagnostic(path, d) << "\n";
    if (!r.ok()) return kDiagnostics;
    catalog_ = std::move(*r.catalog);
    return kOk;
  }

  int guarded_decompose(const PatternGraph& g, Decomposition& d) {
    try {
      d = decompose(g, catalog_);
    } catch (const DecompositionLimitError& e) {
      err_ << opts_.file << ": error[TooManyProcesses]: " << e.what() << "\n";
      return kDiagnostics;
    }
    return kOk;
  }

  void header(const PatternGraph& g) {
    if (graphs_.size() > 1 && !opts_.json) out_ << "== " << g.name() << "\n";
  }

  static std::string format_match(const Match& m) {
    std::string line = m.pattern + ":";
    for (const auto& [p, t] : m.mapping) line += " " + p + "=" + t;
    return line;
  }

  int emit(const std::string& text) {
    if (opts_.output.empty() || opts_.output == "-") {
      out_ << text;
      return kOk;
    }
    std::ofstream f(opts_.output, std::ios::binary);
    if (!(f << text)) {
      err_ << "error: cannot write " << opts_.output << "\n";
      return kUsage;
    }
    return kOk;
  }

  int unreadable(const std::string& path) {
    err_ << "error: cannot read " << path << "\n";
    return kUsage;
  }

  const Options& opts_;
  const Environment& env_;
  std::ostream& out_;
  std::ostream& err_;
  Taxonomy taxonomy_;
  Catalog catalog_;
  std::vector<PatternGraph> graphs_;
};

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
               const Environment& env = {}) {
  detail::Options o;
  CLI::App app{"Typed dataflow patterns for hybrid learning-and-reasoning systems", "boxology"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--taxonomy", o.taxonomy_file, "Taxonomy extension file (one type path per line)");
  app.add_option("--catalog", o.catalog_file,
                 "Pattern catalog (.box); defaults to $BOXOLOGY_CATALOG, then the builtin catalog");

  auto* check = app.add_subcommand("check", "Type-check a .box file");
  check->add_option("file", o.file)->required();

  auto* match = app.add_subcommand("match", "Find catalog patterns inside a .box file");
  match->add_option("file", o.file)->required();
  auto* pat = match->add_option("--pattern", o.pattern, "Catalog pattern name");
  auto* all = match->add_flag("--all", o.all, "Match every catalog pattern");
  pat->excludes(all);
  match->add_flag("--json", o.json, "Emit one JSON document");

  auto* dec = app.add_subcommand("decompose", "Cover processes with elementary patterns");
  dec->add_option("file", o.file)->required();
  dec->add_flag("--json", o.json);
  auto* cls = app.add_subcommand("classify", "Classify as ML, KR, HYBRID or UNCLASSIFIED");
  cls->add_option("file", o.file)->required();
  cls->add_flag("--json", o.json);
  auto* kz = app.add_subcommand("kautz", "Report Kautz neuro-symbolic types");
  kz->add_option("file", o.file)->required();
  kz->add_flag("--json", o.json);

  auto* cmp = app.add_subcommand("compose", "Stitch two catalog patterns on glue nodes");
  cmp->add_option("--left", o.left)->required();
  cmp->add_option("--right", o.right)->required();
  cmp->add_option("--glue", o.glue, "leftId=rightId[,leftId=rightId...]")->required();
  cmp->add_option("--name", o.name, "Name of the composed pattern");
  cmp->add_option("-o,--output", o.output);

  auto* ren = app.add_subcommand("render", "Emit a Graphviz diagram");
  ren->add_option("file", o.file)->required();
  ren->add_option("--format", o.format)->check(CLI::IsMember({"dot"}));
  ren->add_option("--rankdir", o.rankdir)->check(CLI::IsMember({"LR", "TB"}));
  ren->add_flag("--show-meta", o.show_meta);
  ren->add_option("--pattern", o.pattern, "Render only this pattern");
  ren->add_option("-o,--output", o.output);

  auto* cat = app.add_subcommand("catalog", "Inspect the pattern catalog");
  cat->require_subcommand(1);
  auto* cat_list = cat->add_subcommand("list", "Print pattern names in order");
  auto* cat_show = cat->add_subcommand("show", "Print one pattern as .box text");
  cat_show->add_option("name", o.catalog_name)->required();
  auto* cat_dump = cat->add_subcommand("dump", "Print the whole catalog as .box text");
  cat_dump->add_option("-o,--output", o.output);
  auto* cat_verify = cat->add_subcommand("verify", "Self-check the catalog");

  std::vector<const char*> argv{"boxology"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  if (match->parsed() && !o.all && o.pattern.empty()) {
    err << "error: match needs --pattern NAME or --all\n";
    return kUsage;
  }

  detail::Session s(o, env, out, err);
  if (check->parsed()) return s.cmd_check();
  if (match->parsed()) return s.cmd_match();
  if (dec->parsed()) return s.cmd_decompose();
  if (cls->parsed()) return s.cmd_classify();
  if (kz->parsed()) return s.cmd_kautz();
  if (cmp->parsed()) return s.cmd_compose();
  if (ren->parsed()) return s.cmd_render();
  if (cat_list->parsed()) return s.cmd_catalog_list();
  if (cat_show->parsed()) return s.cmd_catalog_show();
  if (cat_dump->parsed()) return s.cmd_catalog_dump();
  if (cat_verify->parsed()) return s.cmd_catalog_verify();
  return kUsage;
}

}  // namespace boxology::cli
