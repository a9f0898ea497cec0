#include <gtest/gtest.h>

#include <set>

#include "boxology/composer.hpp"
#include "boxology/matcher.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "support/oracle.hpp"

using namespace boxology;
using boxology::testing::brute_force_matches;
using boxology::testing::builtin;
using boxology::testing::mappings_of;

namespace {

std::multiset<std::string> part_names(const Decomposition& d) {
  std::multiset<std::string> out;
  for (const auto& p : d.parts) out.insert(p.pattern);
  return out;
}

}  // namespace

TEST(Matcher, OneAAgainstItselfIsIdentity) {
  auto ms = find_matches(builtin("1a"), builtin("1a"));
  ASSERT_EQ(ms.size(), 1u);
  for (const auto& [p, t] : ms[0].mapping) EXPECT_EQ(p, t);
}

TEST(Matcher, IdentityForEveryBuiltin) {
  for (const auto& g : builtin_catalog().graphs()) {
    Match identity{g.name(), {}};
    for (const auto& [id, n] : g.nodes()) identity.mapping[id] = id;
    auto ms = find_matches(g, g);
    EXPECT_NE(std::find(ms.begin(), ms.end(), identity), ms.end()) << g.name();
    EXPECT_TRUE(is_isomorphic(g, g));
  }
}

TEST(Matcher, RobotUseCaseHasTwoTrainedNetworks) {
  auto robot = boxology::testing::load_pattern("corpus/usecase2.box");
  auto ms = find_matches(builtin("1a"), robot);
  ASSERT_EQ(ms.size(), 2u);
  EXPECT_EQ(ms[0].mapping.at("m"), "detector");
  EXPECT_EQ(ms[1].mapping.at("m"), "tracker");
}

TEST(Matcher, NonInducedMatching) {
  // 1a still matches when the trainer has an extra symbolic input.
  auto ms = find_matches(builtin("1a"), builtin("7"));
  ASSERT_EQ(ms.size(), 1u);
  EXPECT_EQ(ms[0].mapping.at("tr"), "tr");
}

TEST(Matcher, ExactModeRejectsSubtypes) {
  auto ms = find_matches(builtin("3-abstract"), builtin("3a"), TypeMode::subtype);
  EXPECT_EQ(ms.size(), 1u);
  EXPECT_TRUE(find_matches(builtin("3-abstract"), builtin("3a"), TypeMode::exact).empty());
  EXPECT_FALSE(is_isomorphic(builtin("3-abstract"), builtin("3a")));
  EXPECT_FALSE(is_isomorphic(builtin("3a"), builtin("7")));
}

TEST(Matcher, EmptyPatternAndEmptyTarget) {
  PatternGraph empty = PatternGraph::Builder("e").build();
  EXPECT_TRUE(find_matches(builtin("1a"), empty).empty());
  auto ms = find_matches(empty, builtin("1a"));
  ASSERT_EQ(ms.size(), 1u);
  EXPECT_TRUE(ms[0].mapping.empty());
}

TEST(Matcher, VerifierCatchesBrokenMappings) {
  const auto& p = builtin("1a");
  const auto& t = builtin("3a");
  auto ms = find_matches(p, t);
  ASSERT_EQ(ms.size(), 1u);
  EXPECT_TRUE(verify_match(ms[0], p, t).empty());

  Match wrong_type = ms[0];
  wrong_type.mapping["m"] = "x";
  EXPECT_FALSE(verify_match(wrong_type, p, t).empty());
  Match not_injective = ms[0];
  not_injective.mapping["m"] = not_injective.mapping["d"];
  EXPECT_FALSE(verify_match(not_injective, p, t).empty());
  Match partial = ms[0];
  partial.mapping.erase("d");
  EXPECT_FALSE(verify_match(partial, p, t).empty());
  Match unknown = ms[0];
  unknown.mapping["d"] = "nowhere";
  EXPECT_FALSE(verify_match(unknown, p, t).empty());
}

TEST(MatcherProperty, AgreesWithBruteForceOnCatalog) {
  for (const auto& target : builtin_catalog().graphs()) {
    if (target.node_count() > 9) continue;
    for (const auto* p : builtin_catalog().elementary()) {
      auto got = find_matches(*p, target);
      EXPECT_EQ(mappings_of(got), brute_force_matches(*p, target)) << p->name() << " in " << target.name();
      for (const auto& m : got) EXPECT_TRUE(verify_match(m, *p, target).empty());
    }
  }
}

TEST(MatcherProperty, AgreesWithBruteForceOnRandomGraphs) {
  boxology::testing::Gen gen(4242);
  std::size_t total = 0;
  for (int i = 0; i < 150; ++i) {
    auto target = boxology::testing::random_well_formed(gen);
    for (const auto* p : builtin_catalog().elementary()) {
      for (auto mode : {TypeMode::subtype, TypeMode::exact}) {
        auto got = find_matches(*p, target, mode);
        ASSERT_EQ(mappings_of(got), brute_force_matches(*p, target, mode)) << print(target);
        for (const auto& m : got) {
          EXPECT_EQ(m.pattern, p->name());
          for (const auto& [pid, tid] : m.mapping)
            EXPECT_TRUE(is_subtype(target.node(tid).type, p->node(pid).type));
        }
        total += got.size();
      }
    }
  }
  EXPECT_GT(total, 50u);  // the generator must actually produce matchable graphs
}

TEST(MatcherProperty, AbstractionIsMonotone) {
  // Lift every lifted-able node of each elementary pattern one level; every
  // match of the original survives with the same mapping.
  boxology::testing::Gen gen(17);
  for (int i = 0; i < 60; ++i) {
    auto target = boxology::testing::random_well_formed(gen);
    for (const auto* p : builtin_catalog().elementary()) {
      TypeReplacements lift;
      for (const auto& [id, n] : p->nodes()) {
        if (!n.is_process() && !n.type.is_root() && gen.coin()) lift.insert_or_assign(id, n.type.prefix(n.type.depth() - 1));
      }
      if (lift.empty()) continue;
      PatternGraph abstract = abstract_types(*p, lift);
      auto coarse = find_matches(abstract, target);
      for (const auto& m : find_matches(*p, target)) {
        EXPECT_NE(std::find_if(coarse.begin(), coarse.end(),
                               [&](const Match& c) { return c.mapping == m.mapping; }),
                  coarse.end());
      }
    }
  }
}

TEST(Decompose, ComposedPatterns) {
  const auto& cat = builtin_catalog();
  auto d3a = decompose(builtin("3a"), cat);
  EXPECT_EQ(part_names(d3a), (std::multiset<std::string>{"1a", "2a"}));
  EXPECT_TRUE(d3a.uncovered.empty());
  EXPECT_EQ(part_names(decompose(builtin("3b"), cat)), (std::multiset<std::string>{"1b", "2b"}));
  auto d5a = decompose(builtin("5a"), cat);
  EXPECT_EQ(part_names(d5a), (std::multiset<std::string>{"1a", "2a", "2b"}));
  EXPECT_TRUE(d5a.uncovered.empty());
}

TEST(Decompose, EmptyGraph) {
  auto d = decompose(PatternGraph::Builder("e").build(), builtin_catalog());
  EXPECT_TRUE(d.parts.empty());
  EXPECT_TRUE(d.uncovered.empty());
}

TEST(Decompose, UncoveredResidue) {
  // In 10 the learned model answers a symbolic query: a stat model with a sym
  // input fits neither 2a (data input) nor 2b (sem model).
  auto d = decompose(builtin("10"), builtin_catalog());
  EXPECT_EQ(d.uncovered, std::vector<std::string>{"inf"});
  EXPECT_TRUE(std::is_sorted(d.uncovered.begin(), d.uncovered.end()));
}

TEST(Decompose, UseCases) {
  const auto& cat = builtin_catalog();
  auto d1 = decompose(boxology::testing::load_pattern("corpus/usecase1.box"), cat);
  auto n1 = part_names(d1);
  for (std::string_view p : {"1c", "1d", "1a", "2a", "2b"}) EXPECT_TRUE(n1.contains(std::string(p))) << p;
  EXPECT_TRUE(d1.uncovered.empty());

  auto d2 = decompose(boxology::testing::load_pattern("corpus/usecase2.box"), cat);
  auto n2 = part_names(d2);
  EXPECT_EQ(n2.count("1a"), 2u);
  EXPECT_EQ(n2.count("2a"), 2u);
  EXPECT_EQ(n2.count("1c"), 1u);
  EXPECT_EQ(n2.count("2c"), 1u);
  EXPECT_EQ(n2.count("2b"), 1u);
  EXPECT_TRUE(d2.uncovered.empty());
}

TEST(DecomposeProperty, PartsAreDisjointOnProcesses) {
  boxology::testing::Gen gen(5);
  for (int i = 0; i < 200; ++i) {
    auto g = boxology::testing::random_well_formed(gen);
    auto d = decompose(g, builtin_catalog());
    std::set<std::string> used;
    std::size_t covered = 0;
    for (const auto& part : d.parts) {
      const auto& pat = builtin(part.pattern);
      EXPECT_TRUE(verify_match(part, pat, g).empty());
      for (const auto& [pid, tid] : part.mapping) {
        if (!pat.node(pid).is_process()) continue;
        EXPECT_TRUE(used.insert(tid).second) << "process " << tid << " used twice";
        ++covered;
      }
    }
    EXPECT_EQ(covered + d.uncovered.size(), g.process_ids().size());
    EXPECT_EQ(d, decompose(g, builtin_catalog()));
  }
}

// Coverage is maximal: compare against an exhaustive subset search.
TEST(DecomposeProperty, CoverageIsMaximum) {
  boxology::testing::Gen gen(8);
  for (int i = 0; i < 150; ++i) {
    auto g = boxology::testing::random_well_formed(gen);
    std::vector<std::string> cands;  // one process id per candidate match
    for (const auto* p : builtin_catalog().elementary()) {
      auto pid = p->process_ids().front();
      for (const auto& m : find_matches(*p, g)) cands.push_back(m.mapping.at(pid));
    }
    std::set<std::string> reachable(cands.begin(), cands.end());
    auto d = decompose(g, builtin_catalog());
    // Each elementary match covers one process, so the best cover reaches every
    // process that has any candidate at all.
    EXPECT_EQ(d.parts.size(), reachable.size());
  }
}

TEST(Decompose, ProcessGuard) {
  PatternGraph::Builder b("big");
  for (int i = 0; i < 65; ++i) {
    std::string s = std::to_string(i);
    b.node("d" + s, "instance:data").node("t" + s, "process:transform").node("o" + s, "instance:data:tensor");
    b.edge("d" + s, "t" + s).edge("t" + s, "o" + s);
  }
  auto g = b.build();
  EXPECT_THROW(decompose(g, builtin_catalog()), DecompositionLimitError);
  auto d = decompose(g, builtin_catalog(), 65);
  EXPECT_EQ(d.parts.size(), 65u);
}
