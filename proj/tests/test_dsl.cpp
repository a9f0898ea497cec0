#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "boxology/dsl.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"

using namespace boxology;
using boxology::testing::Gen;

namespace {

ParseResult parse_text(std::string_view text) { return parse(text, default_taxonomy()); }

std::vector<std::string> codes(const Diagnostics& ds) {
  std::vector<std::string> out;
  for (const auto& d : ds) out.push_back(d.code);
  return out;
}

constexpr std::string_view kOneA =
    R"(pattern "1a" { node d: instance:data  node m: model:stat  node tr: process:generate:train  edge d -> tr  edge tr -> m })";

}  // namespace

TEST(Parse, InlineElementaryPattern) {
  auto r = parse_text(kOneA);
  ASSERT_TRUE(r.ok());
  ASSERT_EQ(r.patterns.size(), 1u);
  const auto& g = r.patterns[0].graph;
  EXPECT_EQ(g.name(), "1a");
  EXPECT_EQ(g.node_count(), 3u);
  EXPECT_EQ(g.edge_count(), 2u);
  EXPECT_TRUE(g.has_edge("d", "tr"));
  EXPECT_EQ(g.node("m").type.str(), "model:stat");
}

TEST(Parse, UndeclaredEdgeEndpoints) {
  auto r = parse_text("pattern \"x\" {\n  edge a -> b\n}\n");
  ASSERT_FALSE(r.ok());
  EXPECT_TRUE(r.patterns.empty());
  ASSERT_EQ(r.diagnostics.size(), 2u);
  for (const auto& d : r.diagnostics) {
    EXPECT_EQ(d.code, "UnknownNodeRef");
    ASSERT_TRUE(d.position);
    EXPECT_EQ(d.position->line, 2u);
  }
  EXPECT_EQ(r.diagnostics[0].position->column, 8u);
  EXPECT_EQ(r.diagnostics[1].position->column, 13u);
}

TEST(Parse, EmptyInput) {
  for (std::string_view text : {"", "   \n\n", "# only a comment\n"}) {
    auto r = parse_text(text);
    EXPECT_TRUE(r.patterns.empty());
    EXPECT_TRUE(r.diagnostics.empty());
  }
}

TEST(Parse, ForwardReferencesAndLabels) {
  auto r = parse_text(
      "pattern \"fw\" {\n"
      "  edge d -> tr  # declared below\n"
      "  node d: instance:data \"raw \\\"csv\\\" rows\"\n"
      "  node tr: process:generate:train\n"
      "}\n");
  ASSERT_TRUE(r.ok()) << codes(r.diagnostics).size();
  const auto& g = r.patterns[0].graph;
  EXPECT_EQ(g.node("d").label, std::optional<std::string>("raw \"csv\" rows"));
  EXPECT_FALSE(g.node("tr").label);
  EXPECT_TRUE(g.has_edge("d", "tr"));
}

TEST(Parse, HyphenatedIdsBesideArrows) {
  auto g = boxology::testing::parse_one(
      "pattern \"h\" { node in-box: instance node p: process edge in-box->p }");
  EXPECT_TRUE(g.has_edge("in-box", "p"));
}

TEST(Parse, SemanticErrors) {
  auto r = parse_text(
      "pattern \"a\" {\n"
      "  node x: instance\n"
      "  node x: model\n"
      "  node p: process\n"
      "  node q: model:semantic\n"
      "  edge x -> x\n"
      "  edge x -> p\n"
      "  edge x -> p\n"
      "  meta k = \"1\"\n"
      "  meta k = \"2\"\n"
      "}\n"
      "pattern \"a\" { }\n");
  auto cs = codes(r.diagnostics);
  for (std::string_view c : {"DuplicateId", "UnknownType", "SelfLoop", "DuplicateEdge",
                             "DuplicateMetaKey", "DuplicatePatternName"}) {
    EXPECT_NE(std::find(cs.begin(), cs.end(), c), cs.end()) << c;
  }
  for (const auto& d : r.diagnostics) EXPECT_TRUE(d.position);
  EXPECT_TRUE(std::is_sorted(r.diagnostics.begin(), r.diagnostics.end(),
                             [](const Diagnostic& a, const Diagnostic& b) { return *a.position < *b.position; }));
  auto unknown = std::find_if(r.diagnostics.begin(), r.diagnostics.end(),
                              [](const Diagnostic& d) { return d.code == "UnknownType"; });
  EXPECT_EQ(unknown->position->line, 5u);
}

TEST(Parse, RecoversAcrossPatterns) {
  auto r = parse_text(
      "pattern \"broken\" {\n"
      "  node : instance\n"
      "  node ok: instance\n"
      "  edge ok ->\n"
      "}\n"
      "pattern oops {\n"
      "pattern \"fine\" { node a: instance }\n"
      "pattern \"unterminated\" { node b: model\n");
  auto cs = codes(r.diagnostics);
  EXPECT_GE(std::count(cs.begin(), cs.end(), "SyntaxError"), 3);
  // The clean pattern in the middle still comes through.
  ASSERT_EQ(r.patterns.size(), 1u);
  EXPECT_EQ(r.patterns[0].graph.name(), "fine");
}

TEST(Parse, ColumnsCountCodepoints) {
  auto r = parse_text("pattern \"é\" { node é: instance }");
  ASSERT_FALSE(r.diagnostics.empty());
  EXPECT_EQ(r.diagnostics[0].code, "SyntaxError");
  EXPECT_EQ(r.diagnostics[0].position->line, 1u);
  EXPECT_EQ(r.diagnostics[0].position->column, 20u);
}

TEST(Parse, SourceMapPositions) {
  auto r = parse_text("pattern \"p\" {\n  node a: instance\n  node b: process\n  edge a -> b\n}\n");
  ASSERT_TRUE(r.ok());
  const auto& map = r.patterns[0].map;
  EXPECT_EQ(map.pattern, (Position{1, 1}));
  EXPECT_EQ(map.nodes.at("b"), (Position{3, 3}));
  EXPECT_EQ(map.locate(Subject{"a", std::pair<std::string, std::string>{"a", "b"}}), (Position{4, 3}));
  EXPECT_EQ(map.locate(Subject{"zzz", std::nullopt}), (Position{1, 1}));
}

TEST(Print, CanonicalLayout) {
  auto g = PatternGraph::Builder("x")
               .node("tr", TypePath::from_string("process:generate:train"))
               .node("d", TypePath::from_string("instance:data"), "two\nlines")
               .edge("d", "tr")
               .meta("origin", "figure 3a")
               .meta("a", "q\"uote")
               .build();
  EXPECT_EQ(print(g),
            "pattern \"x\" {\n"
            "  meta a = \"q\\\"uote\"\n"
            "  meta origin = \"figure 3a\"\n"
            "  node d: instance:data \"two\nlines\"\n"
            "  node tr: process:generate:train\n"
            "  edge d -> tr\n"
            "}\n");
}

TEST(Print, RoundTripOfInlinePattern) {
  auto g = boxology::testing::parse_one(kOneA);
  EXPECT_EQ(boxology::testing::parse_one(print(g)), g);
}

TEST(Print, CatalogFixpoint) {
  for (const auto& g : builtin_catalog().graphs()) {
    std::string once = print(g);
    auto again = boxology::testing::parse_one(once);
    EXPECT_EQ(again, g) << g.name();
    EXPECT_EQ(print(again), once) << g.name();
  }
  auto all = print(builtin_catalog().graphs());
  EXPECT_EQ(all, builtin_catalog_source());
}

TEST(PrintProperty, ParseInvertsPrint) {
  Gen gen(7);
  for (int i = 0; i < 1000; ++i) {
    auto g = boxology::testing::random_graph(gen);
    std::string text = print(g);
    auto r = parse_text(text);
    ASSERT_TRUE(r.ok()) << text << format_diagnostic("gen", r.diagnostics.front());
    ASSERT_EQ(r.patterns.size(), 1u);
    EXPECT_EQ(r.patterns[0].graph, g) << text;
    EXPECT_EQ(print(r.patterns[0].graph), text);
  }
}

TEST(PrintProperty, MultiPatternFilesRoundTrip) {
  Gen gen(11);
  for (int i = 0; i < 100; ++i) {
    std::vector<PatternGraph> gs;
    std::size_t n = gen.between(1, 4);
    for (std::size_t k = 0; k < n; ++k) {
      auto g = boxology::testing::random_graph(gen);
      gs.push_back(PatternGraph::Builder(g).name("p" + std::to_string(k)).build());
    }
    auto r = parse_text(print(gs));
    ASSERT_TRUE(r.ok());
    EXPECT_EQ(r.graphs(), gs);
  }
}

// Random bytes and token soup: no crash, every diagnostic positioned in bounds.
TEST(ParseFuzz, RandomBytes) {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 5000; ++i) {
    std::string s(rng() % 200, '\0');
    for (auto& c : s) c = static_cast<char>(rng() & 0xff);
    auto r = parse_text(s);
    std::size_t lines = std::count(s.begin(), s.end(), '\n') + 1;
    for (const auto& d : r.diagnostics) {
      ASSERT_TRUE(d.position);
      EXPECT_GE(d.position->line, 1u);
      EXPECT_LE(d.position->line, lines);
      EXPECT_GE(d.position->column, 1u);
    }
  }
}

TEST(ParseFuzz, TokenSoup) {
  static const std::vector<std::string> pieces = {
      "pattern", "node", "edge", "meta", "\"s\"", "\"", "{", "}", ":", "->", "=", "-", ">",
      "a", "instance", "model:stat", "process:infer", "x:y", " ", "\n", "#c\n", "\\"};
  Gen gen(123);
  for (int i = 0; i < 5000; ++i) {
    std::string s;
    std::size_t n = gen.below(40);
    for (std::size_t k = 0; k < n; ++k) s += gen.pick(pieces);
    auto r = parse_text(s);
    for (const auto& d : r.diagnostics) ASSERT_TRUE(d.position) << s;
    if (r.ok()) {
      // Anything accepted must print and reparse to the same graphs.
      EXPECT_EQ(parse_text(print(r.graphs())).graphs(), r.graphs()) << s;
    }
  }
}
