#include <gtest/gtest.h>

#include <coverhunter/groups.hpp>
#include <coverhunter/subgroups.hpp>

#include <random>

using namespace coverhunter;

TEST(Permutation, ProductActsLeftFactorFirst) {
  auto g = Permutation::from_cycles(3, {{1, 2}});
  auto h = Permutation::from_cycles(3, {{2, 3}});
  // 1 -g-> 2 -h-> 3
  EXPECT_EQ((g * h)[0], 2u);
  EXPECT_EQ(to_cycle_string(g * h), "(1,3,2)");
}

TEST(Permutation, CycleStringRoundTrip) {
  for (const char *s : {"()", "(1,2)", "(2,4,3,5)", "(1,2,3)(4,5,6)"}) {
    auto p = parse_cycles(s, 6);
    EXPECT_EQ(to_cycle_string(p), s);
  }
  EXPECT_THROW(parse_cycles("(1,7)", 6), std::invalid_argument);
  EXPECT_THROW(parse_cycles("(1,2)(2,3)", 6), std::invalid_argument);
}

TEST(Permutation, OrderIsLcmOfCycleLengths) {
  EXPECT_EQ(parse_cycles("(1,2,3)(4,5)", 6).order(), 6u);
  EXPECT_EQ(parse_cycles("(1,2,3,4)(5,6)", 6).order(), 4u);
  EXPECT_EQ(Permutation::identity(4).order(), 1u);
}

TEST(StabChain, OrdersOfClassicalGroups) {
  EXPECT_EQ(symmetric_group(5).order(), 120u);
  EXPECT_EQ(symmetric_group(8).order(), 40320u);
  EXPECT_EQ(alternating_group(6).order(), 360u);
  EXPECT_EQ(alternating_group(9).order(), 181440u);
  for (std::uint64_t p : {5u, 7u, 11u, 13u, 23u})
    EXPECT_EQ(psl2_prime(p).order(), p * (p * p - 1) / 2) << "p = " << p;
  EXPECT_EQ(psl2_8().order(), 504u);
}

TEST(StabChain, MembershipMatchesParity) {
  PermGroup a7 = alternating_group(7);
  std::mt19937 rng(7);
  for (int t = 0; t < 200; ++t) {
    std::vector<Point> img(7);
    std::iota(img.begin(), img.end(), Point{0});
    std::shuffle(img.begin(), img.end(), rng);
    Permutation g(img);
    std::size_t transpositions = 0;
    for (auto len : g.cycle_lengths())
      transpositions += len - 1;
    EXPECT_EQ(a7.contains(g), transpositions % 2 == 0);
  }
}

TEST(StabChain, ElementsMatchOrder) {
  PermGroup g = psl2_prime(7);
  EXPECT_EQ(g.elements(1000).size(), 168u);
  EXPECT_THROW(g.elements(100), ResourceLimit);
}

TEST(Subgroups, A5HasNineClassesFiftyNineSubgroups) {
  auto list = enumerate_subgroups(alternating_group(5), 10000);
  EXPECT_EQ(list.classes.size(), 9u);
  EXPECT_EQ(list.total_subgroups(), 59u);
  EXPECT_EQ(list.classes.front().order, 60u);
  EXPECT_EQ(list.classes.back().order, 1u);
}

TEST(Subgroups, S4HasElevenClasses) {
  auto list = enumerate_subgroups(symmetric_group(4), 10000);
  EXPECT_EQ(list.classes.size(), 11u);
  EXPECT_EQ(list.total_subgroups(), 30u);
}

TEST(Groups, NamedGroups) {
  EXPECT_EQ(named_group("A5").order(), 60u);
  EXPECT_EQ(named_group("S4").order(), 24u);
  EXPECT_EQ(named_group("L2(8)").order(), 504u);
  EXPECT_EQ(named_group("L2(11)").order(), 660u);
  EXPECT_THROW(named_group("U4(2)"), std::invalid_argument);
}
