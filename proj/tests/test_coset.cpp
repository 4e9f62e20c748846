#include <gtest/gtest.h>

#include <coverhunter/amalgam.hpp>
#include <coverhunter/coset.hpp>
#include <coverhunter/groups.hpp>
#include <coverhunter/orbifold.hpp>

#include <set>

using namespace coverhunter;

namespace {

std::uint64_t order_of(const Presentation &p, std::size_t cap = kDefaultMaxCosets) {
  auto r = todd_coxeter(p, {}, cap);
  if (auto *t = std::get_if<CosetTable>(&r))
    return t->index();
  return 0;
}

// Conjugacy classes of index-n subgroups of F2, counted as orbits of S_n on
// transitive pairs of permutations.
std::size_t f2_classes_brute_force(std::size_t n) {
  auto sn = symmetric_group(n).elements(1000);
  std::set<std::pair<Permutation, Permutation>> seen;
  std::size_t orbits = 0;
  for (const auto &x : sn)
    for (const auto &y : sn) {
      std::vector<bool> reach(n, false);
      std::vector<Point> q{0};
      reach[0] = true;
      for (std::size_t i = 0; i < q.size(); ++i)
        for (const auto *g : {&x, &y})
          if (!reach[(*g)[q[i]]]) {
            reach[(*g)[q[i]]] = true;
            q.push_back((*g)[q[i]]);
          }
      if (q.size() != n || seen.count({x, y}))
        continue;
      ++orbits;
      for (const auto &c : sn)
        seen.insert({x.conjugate_by(c), y.conjugate_by(c)});
    }
  return orbits;
}

} // namespace

TEST(ToddCoxeter, SmallGroupOrders) {
  EXPECT_EQ(order_of(parse_presentation("<a,b | a^3, b^2, (a*b)^2>")), 6u);
  EXPECT_EQ(order_of(triangle_presentation(2, 3, 5)), 60u);
  EXPECT_EQ(order_of(triangle_presentation(2, 3, 4)), 24u);
  EXPECT_EQ(order_of(parse_presentation("<a | a^7>")), 7u);
  EXPECT_EQ(order_of(parse_presentation("<a,b | a^2, b^3, (a*b)^7, (a*b*a^-1*b^-1)^4>")),
            168u);
}

TEST(ToddCoxeter, SubgroupIndex) {
  auto p = triangle_presentation(2, 3, 5);
  auto r = todd_coxeter(p, {Word{2}});
  ASSERT_TRUE(std::holds_alternative<CosetTable>(r));
  EXPECT_EQ(std::get<CosetTable>(r).index(), 20u);
  EXPECT_TRUE(std::get<CosetTable>(r).is_valid_for(p));
}

TEST(ToddCoxeter, InfiniteGroupOverflows) {
  auto r = todd_coxeter(triangle_presentation(2, 3, 7), {}, 5000);
  ASSERT_TRUE(std::holds_alternative<Overflow>(r));
  EXPECT_GE(std::get<Overflow>(r).high_water, 5000u);
}

TEST(ToddCoxeter, SisterQuotientRegressionOrders) {
  const std::uint64_t expected[] = {1, 2, 1, 36, 1, 120, 168, 1152, 2448};
  for (long n = 1; n <= 9; ++n)
    EXPECT_EQ(order_of(sister_gamma_n(n)), expected[n - 1]) << "n = " << n;
}

TEST(LowIndex, FreeGroupClassCountsMatchBruteForce) {
  auto f2 = parse_presentation("<a,b | >");
  for (std::size_t n = 1; n <= 4; ++n) {
    auto all = low_index_subgroups(f2, n);
    std::size_t exact = 0;
    for (const auto &t : all)
      exact += t.index() == n;
    EXPECT_EQ(exact, f2_classes_brute_force(n)) << "index " << n;
  }
}

TEST(LowIndex, A5SubgroupsOfSmallIndex) {
  // Subgroups of A5 of index <= 6: A5, A4 (5), D10 (6).
  auto tables = low_index_subgroups(triangle_presentation(2, 3, 5), 6);
  std::multiset<std::size_t> idx;
  for (const auto &t : tables)
    idx.insert(t.index());
  EXPECT_EQ(idx, (std::multiset<std::size_t>{1, 5, 6}));
}

TEST(LowIndex, NodeCapThrows) {
  EXPECT_THROW(low_index_subgroups(parse_presentation("<a,b,c | >"), 6, 1000),
               ResourceLimit);
}

TEST(CosetTable, ActionRoundTrip) {
  auto p = triangle_presentation(2, 3, 5);
  auto t = std::get<CosetTable>(todd_coxeter(p, {Word{2}}));
  auto f = action_homomorphism(t);
  EXPECT_EQ(f.degree, 20u);
  EXPECT_EQ(image_group(f).order(), 60u);
  auto back = table_from_action(f);
  EXPECT_EQ(back.index(), 20u);
  EXPECT_TRUE(back.is_valid_for(p));
}

TEST(CosetTable, PullbackIndexIsSubgroupIndex) {
  auto p = triangle_presentation(2, 3, 7);
  auto cq = congruence_quotient(2, 3, 7, Word{1, 2, -1, -2}, 4);
  ASSERT_TRUE(cq.has_value());
  ASSERT_EQ(cq->p, 7u);
  const Homomorphism &f = cq->images;
  // Any relator failure would make the pullback meaningless.
  for (const auto &r : p.relators)
    ASSERT_TRUE(evaluate_word(f, r).is_identity());
  PermGroup q = image_group(f);
  ASSERT_EQ(q.order(), 168u);
  auto kernel = pullback_subgroup(f, PermGroup(8, {}));
  EXPECT_EQ(kernel.index(), 168u);
  EXPECT_TRUE(kernel.is_valid_for(p));
  auto stab = pullback_subgroup(f, q.base_stabilizer(1));
  EXPECT_EQ(stab.index(), 8u);
}
