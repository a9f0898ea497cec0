#include <gtest/gtest.h>

#include "boxology/classifier.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"

using namespace boxology;
using boxology::testing::builtin;

namespace {

SystemKind kind_of(const PatternGraph& g) { return classify_system(g, builtin_catalog()).kind; }

}  // namespace

TEST(Classify, Definition) {
  EXPECT_EQ(kind_of(builtin("3a")), SystemKind::ml);
  EXPECT_EQ(kind_of(builtin("2b")), SystemKind::kr);
  EXPECT_EQ(kind_of(builtin("7")), SystemKind::hybrid);
  // 3b is neither the ML nor the KR combination.
  EXPECT_EQ(kind_of(builtin("3b")), SystemKind::hybrid);
  EXPECT_EQ(kind_of(PatternGraph::Builder("e").build()), SystemKind::unclassified);
  EXPECT_EQ(kind_of(builtin("10")), SystemKind::unclassified);
}

TEST(Classify, StrictReadingOfMl) {
  // A lone 2a is not ML, and 3a plus a transform is HYBRID.
  EXPECT_EQ(kind_of(builtin("2a")), SystemKind::hybrid);
  EXPECT_EQ(kind_of(builtin("9")), SystemKind::hybrid);
  Decomposition twice;
  twice.parts = {Match{"1a", {}}, Match{"2a", {}}, Match{"2a", {}}};
  EXPECT_EQ(classify_decomposition(twice), SystemKind::hybrid);
  Decomposition partial{{Match{"1a", {}}, Match{"2a", {}}}, {"p"}};
  EXPECT_EQ(classify_decomposition(partial), SystemKind::unclassified);
}

TEST(Classify, UseCasesAreHybrid) {
  EXPECT_EQ(kind_of(boxology::testing::load_pattern("corpus/usecase1.box")), SystemKind::hybrid);
  EXPECT_EQ(kind_of(boxology::testing::load_pattern("corpus/usecase2.box")), SystemKind::hybrid);
}

TEST(ClassifyProperty, DisconnectedActorsChangeNothing) {
  boxology::testing::Gen gen(77);
  std::vector<PatternGraph> graphs = builtin_catalog().graphs();
  for (int i = 0; i < 100; ++i) graphs.push_back(boxology::testing::random_well_formed(gen));
  for (const auto& g : graphs) {
    auto with_actors = PatternGraph::Builder(g)
                           .node("lurker_h", "actor:human")
                           .node("lurker_r", "actor:robot")
                           .build();
    EXPECT_EQ(kind_of(with_actors), kind_of(g)) << g.name();
  }
}

TEST(Kautz, TableRows) {
  auto report = [](const std::string& n) { return kautz_types(builtin(n), builtin_catalog()); };
  auto seven = report("7");
  EXPECT_EQ(seven.types, std::set<int>{5});
  EXPECT_EQ(seven.evidence, (std::map<int, std::vector<std::string>>{{5, {"7"}}}));
  EXPECT_EQ(report("3b").types, (std::set<int>{1, 4}));
  EXPECT_EQ(report("11").types, std::set<int>{2});
  EXPECT_EQ(report("6b").types, std::set<int>{3});
  EXPECT_EQ(report("8").types, std::set<int>{4});
  EXPECT_EQ(report("10").types, std::set<int>{4});
  // 6a embeds a full 3b (its symbolic half), so it also evidences 1 and 4;
  // the more abstract 6b matches inside it too.
  auto six_a = report("6a");
  EXPECT_EQ(six_a.types, (std::set<int>{1, 3, 4}));
  EXPECT_EQ(six_a.evidence.at(3), (std::vector<std::string>{"6a", "6b"}));
}

TEST(Kautz, EveryRowEvidencesItself) {
  for (const auto& [name, types] : kautz_table()) {
    auto r = kautz_types(builtin(name), builtin_catalog());
    for (int t : types) {
      ASSERT_TRUE(r.evidence.contains(t)) << name;
      const auto& ev = r.evidence.at(t);
      EXPECT_NE(std::find(ev.begin(), ev.end(), name), ev.end()) << name;
    }
  }
}

TEST(Kautz, NoCompositeMatches) {
  EXPECT_TRUE(kautz_types(builtin("1a"), builtin_catalog()).types.empty());
  EXPECT_TRUE(kautz_types(PatternGraph::Builder("e").build(), builtin_catalog()).types.empty());
}

TEST(KautzProperty, NeverTypeSix) {
  boxology::testing::Gen gen(66);
  for (const auto& g : builtin_catalog().graphs())
    EXPECT_FALSE(kautz_types(g, builtin_catalog()).types.contains(6));
  for (int i = 0; i < 200; ++i) {
    auto r = kautz_types(boxology::testing::random_well_formed(gen), builtin_catalog());
    EXPECT_FALSE(r.types.contains(6));
    for (int t : r.types) EXPECT_TRUE(t >= 1 && t <= 5);
  }
}
