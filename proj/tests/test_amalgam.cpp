#include <gtest/gtest.h>

#include <coverhunter/amalgam.hpp>
#include <coverhunter/coset.hpp>
#include <coverhunter/homology.hpp>

#include <random>

using namespace coverhunter;

namespace {

// Oracle: reduce syllables directly. Merge neighbours from the same factor,
// drop identities, and move syllables lying in C to the other factor.
bool oracle_trivial(const Word &w) {
  Permutation a = Permutation::from_cycles(3, {{1, 2, 3}});
  Permutation b2a = Permutation::from_cycles(3, {{1, 2}});
  Permutation b = Permutation::from_cycles(4, {{1, 2, 3, 4}});
  Permutation b2b = b * b;
  struct Syl {
    bool in_a;
    Permutation g;
  };
  std::vector<Syl> s;
  for (int x : w) {
    bool ina = std::abs(x) == 1;
    Permutation g = ina ? a : b;
    if (x < 0)
      g = g.inverse();
    s.push_back({ina, g});
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i].g.is_identity()) {
        s.erase(s.begin() + static_cast<long>(i));
        changed = true;
        break;
      }
      if (i + 1 < s.size() && s[i].in_a == s[i + 1].in_a) {
        s[i].g = s[i].g * s[i + 1].g;
        s.erase(s.begin() + static_cast<long>(i) + 1);
        changed = true;
        break;
      }
      // Nontrivial elements of C: (1,2) in A and b^2 in B.
      if (s.size() > 1) {
        if (s[i].in_a && s[i].g == b2a) {
          s[i] = {false, b2b};
          changed = true;
          break;
        }
        if (!s[i].in_a && s[i].g == b2b) {
          s[i] = {true, b2a};
          changed = true;
          break;
        }
      }
    }
  }
  return s.empty();
}

Word random_word(std::mt19937 &rng, std::size_t len) {
  std::uniform_int_distribution<int> d(0, 3);
  std::vector<int> l;
  const int letters[] = {1, -1, 2, -2};
  for (std::size_t i = 0; i < len; ++i)
    l.push_back(letters[d(rng)]);
  return Word(l);
}

} // namespace

TEST(Amalgam, RelatorsAreTrivial) {
  AmalgamNormalizer n(sister_amalgam_spec());
  for (const auto &r : sister_gamma_presentation().relators)
    EXPECT_TRUE(n.normal_form(r).is_trivial());
  EXPECT_TRUE(n.normal_form(Word{}).is_trivial());
}

TEST(Amalgam, InverseOfB) {
  AmalgamNormalizer first(sister_amalgam_spec(TransversalChoice::lex_first));
  auto nf = first.normal_form(Word{-2});
  ASSERT_EQ(nf.syllables.size(), 1u);
  EXPECT_EQ(nf.syllables[0].first, Factor::B);
  EXPECT_EQ(first.to_string(nf), "(1,2) * B:(1,2,3,4)");
  EXPECT_FALSE(nf.is_trivial());

  AmalgamNormalizer last(sister_amalgam_spec(TransversalChoice::lex_last));
  auto nl = last.normal_form(Word{-2});
  ASSERT_EQ(nl.syllables.size(), 1u);
  EXPECT_TRUE(nl.c.is_identity());
}

TEST(Amalgam, RepresentativesStartWithIdentity) {
  for (auto t : {TransversalChoice::lex_first, TransversalChoice::lex_last}) {
    AmalgamNormalizer n(sister_amalgam_spec(t));
    EXPECT_EQ(n.representatives(Factor::A).size(), 3u);
    EXPECT_EQ(n.representatives(Factor::B).size(), 2u);
    EXPECT_TRUE(n.representatives(Factor::A)[0].is_identity());
    EXPECT_TRUE(n.representatives(Factor::B)[0].is_identity());
  }
}

TEST(Amalgam, AgreesWithSyllableOracle) {
  AmalgamNormalizer first(sister_amalgam_spec(TransversalChoice::lex_first));
  AmalgamNormalizer last(sister_amalgam_spec(TransversalChoice::lex_last));
  std::mt19937 rng(20240601);
  int trivial = 0;
  for (int i = 0; i < 3000; ++i) {
    Word w = random_word(rng, 1 + i % 14);
    // Conjugated relators give trivial words often enough to matter.
    if (i % 3 == 0) {
      const auto &rels = sister_gamma_presentation().relators;
      Word u = random_word(rng, i % 5);
      w = u * rels[static_cast<std::size_t>(i) % rels.size()] * u.inverse();
    }
    bool want = oracle_trivial(w);
    trivial += want;
    EXPECT_EQ(first.normal_form(w).is_trivial(), want) << format_word(w, {"a", "b"});
    EXPECT_EQ(last.normal_form(w).is_trivial(), want) << format_word(w, {"a", "b"});
  }
  EXPECT_GT(trivial, 900);
}

TEST(Amalgam, NormalFormIsAWordInvariant) {
  AmalgamNormalizer n(sister_amalgam_spec());
  std::mt19937 rng(7);
  for (int i = 0; i < 500; ++i) {
    Word u = random_word(rng, 8), v = random_word(rng, 8);
    EXPECT_EQ(n.normal_form(u * v * v.inverse()), n.normal_form(u));
    EXPECT_EQ(n.normal_form(u * Word{1, 1, 1}), n.normal_form(u));
  }
}

TEST(SpecialRep, BasesPassAllChecks) {
  for (std::size_t n : {6u, 7u, 15u, 16u, 17u}) {
    auto r = detail::special_base(n);
    auto rep = verify_special(r);
    for (const auto &c : rep.checks)
      EXPECT_TRUE(c.passed) << "n = " << n << ": " << c.name;
  }
  EXPECT_EQ(detail::special_base(16).kind, SpecialKind::almost_special);
  EXPECT_EQ(detail::special_base(15).kind, SpecialKind::special);
}

TEST(SpecialRep, AllDegreesUpToSixty) {
  for (std::size_t n = 12; n <= 60; ++n) {
    auto r = special_rep(n);
    EXPECT_EQ(r.degree, n);
    auto rep = verify_special(r);
    EXPECT_TRUE(rep.ok()) << "n = " << n;
    auto f = to_homomorphism(r);
    for (const auto &rel : sister_gamma_presentation().relators)
      EXPECT_TRUE(evaluate_word(f, rel).is_identity());
    EXPECT_EQ(evaluate_word(f, Word{1, 2}).order(), n);
  }
  EXPECT_THROW(special_rep(8), std::invalid_argument);
  EXPECT_THROW(special_rep(11), std::invalid_argument);
}

TEST(SpecialRep, RankFormulas) {
  EXPECT_EQ(sister_euler_char(), Rational(-1, 12));
  EXPECT_EQ(kernel_rank_prediction(120), 11u);
  EXPECT_EQ(kernel_rank_prediction(12), 2u);
  EXPECT_THROW(kernel_rank_prediction(60 + 1), std::invalid_argument);
  EXPECT_EQ(gamma_n_relator_bound(84, 12), 1);
  EXPECT_EQ(gamma_n_relator_bound(168, 7), 15 - 24);
  EXPECT_THROW(gamma_n_relator_bound(60, 7), std::invalid_argument);
  EXPECT_THROW(gamma_n_relator_bound(30, 5), std::invalid_argument);
}

TEST(SpecialRep, KernelBettiMatchesRank) {
  for (std::size_t n : {6u, 7u, 13u}) {
    auto f = to_homomorphism(n == 13 ? special_rep(13) : detail::special_base(n));
    auto q = image_group(f);
    auto t = pullback_subgroup(f, PermGroup(f.degree, {}), 100000);
    auto rep = betti(sister_gamma_presentation(), t, BettiMode::certify);
    EXPECT_EQ(rep.betti, kernel_rank_prediction(q.order())) << "n = " << n;
  }
}
