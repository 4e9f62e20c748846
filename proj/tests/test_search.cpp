#include <gtest/gtest.h>

#include <coverhunter/amalgam.hpp>
#include <coverhunter/search.hpp>

using namespace coverhunter;

namespace {

Certificate expect_certificate(const Presentation &p, Strategy s = default_strategy()) {
  auto out = search_pipeline(p, s);
  if (auto *nf = std::get_if<NotFound>(&out)) {
    std::string d;
    for (const auto &x : nf->diagnostics)
      d += x + "; ";
    ADD_FAILURE() << "not found: " << d;
    return {};
  }
  return std::get<Certificate>(out);
}

} // namespace

TEST(Search, TrefoilGivesDegreeTwo) {
  auto c = expect_certificate(parse_presentation("<a,b | a*b*a*b^-1*a^-1*b^-1>"));
  EXPECT_EQ(c.hom.degree, 2u);
  EXPECT_GE(c.betti, 1u);
  EXPECT_TRUE(verify_certificate(c).ok);
}

TEST(Search, FiniteCyclicIsNotFound) {
  auto out = search_pipeline(parse_presentation("<a | a^5>"), default_strategy());
  ASSERT_TRUE(std::holds_alternative<NotFound>(out));
  EXPECT_FALSE(std::get<NotFound>(out).diagnostics.empty());
  EXPECT_FALSE(std::get<NotFound>(out).hit_limit);
}

TEST(Search, AbelianCoverSubgroupIndex) {
  // H_1 = Z/2 x Z/2 x Z/3.
  auto p = parse_presentation("<a,b,c | a^2, b^2, c^3, a*b*a^-1*b^-1, a*c*a^-1*c^-1, b*c*b^-1*c^-1>");
  auto t2 = abelian_cover_subgroup(p, 2);
  ASSERT_TRUE(t2.has_value());
  EXPECT_EQ(t2->index(), 4u);
  auto t3 = abelian_cover_subgroup(p, 3);
  ASSERT_TRUE(t3.has_value());
  EXPECT_EQ(t3->index(), 3u);
  EXPECT_FALSE(abelian_cover_subgroup(p, 5).has_value());
}

TEST(Search, EpimorphismsOntoA5FromTriangleGroup) {
  auto homs = find_epimorphisms(triangle_presentation(2, 3, 5), alternating_group(5),
                                kDefaultMaxNodes, kDefaultSubgroupOrderBound, nullptr);
  ASSERT_FALSE(homs.empty());
  for (const auto &f : homs) {
    EXPECT_EQ(image_group(f).order(), 60u);
    for (const auto &r : triangle_presentation(2, 3, 5).relators)
      EXPECT_TRUE(evaluate_word(f, r).is_identity());
  }
}

TEST(Search, Gamma10FindsDegreeTwelve) {
  auto c = expect_certificate(sister_gamma_n(10));
  EXPECT_EQ(c.hom.degree, 12u);
  auto rep = verify_certificate(c);
  EXPECT_TRUE(rep.ok) << rep.failed_invariant << ": " << rep.message;
  EXPECT_GE(rep.recomputed_betti, 1u);
}

TEST(Search, HoltPleskenGamma3Of6) {
  auto c = expect_certificate(parse_presentation("<a,b | a^3, b^3, (a*b)^4, (a*b^-1)^6>"));
  EXPECT_TRUE(verify_certificate(c).ok);
}

TEST(Search, FalseScreenHitsAreNotCertified) {
  // Z/31991 * Z/2: every finite-index subgroup has betti 0, but the
  // index-2 kernel screens positive mod 31991.
  auto p = parse_presentation("<a,b | a^31991, b^2>");
  auto t = abelian_cover_subgroup(p, 2);
  ASSERT_TRUE(t.has_value());
  EXPECT_GT(betti(p, *t, BettiMode::screen).betti, 0u);
  EXPECT_EQ(betti(p, *t, BettiMode::certify).betti, 0u);
  Strategy s{{AbelianCover{2}, AbelianCover{3}, LowIndex{4, true}}, {}};
  EXPECT_TRUE(std::holds_alternative<NotFound>(search_pipeline(p, s)));
}

TEST(Search, CertifiedBettiIsTheRationalOne) {
  // Z/31991 * Z/2 * Z/2: the index-4 kernel is four copies of Z/31991
  // and one Z (count Euler characteristics), so it screens 5 but has betti 1.
  auto p = parse_presentation("<a,b,c | a^31991, b^2, c^2>");
  auto t = abelian_cover_subgroup(p, 2);
  ASSERT_TRUE(t.has_value());
  EXPECT_EQ(betti(p, *t, BettiMode::screen).betti, 5u);
  Strategy s{{AbelianCover{2}}, {}};
  auto c = expect_certificate(p, s);
  EXPECT_EQ(c.betti, 1u);
  EXPECT_TRUE(verify_certificate(c).ok);
}

TEST(Certificate, TextRoundTrip) {
  auto c = expect_certificate(sister_gamma_n(10));
  auto text = to_vhc(c);
  auto back = parse_vhc(text);
  EXPECT_EQ(to_vhc(back), text);
  EXPECT_EQ(back.hom, c.hom);
  EXPECT_EQ(back.betti, c.betti);
}

TEST(Certificate, TamperedBettiNamesBetti) {
  auto c = expect_certificate(parse_presentation("<a,b | a^3, b^3, (a*b)^4, (a*b^-1)^6>"));
  c.betti += 1;
  auto rep = verify_certificate(c);
  EXPECT_FALSE(rep.ok);
  EXPECT_EQ(rep.failed_invariant, "betti-q");
}

TEST(Certificate, BrokenRelatorNamesRelator) {
  auto c = expect_certificate(parse_presentation("<a,b | a^3, b^3, (a*b)^4, (a*b^-1)^6>"));
  c.hom.images[0] = Permutation::from_cycles(c.hom.degree, {{1, 2}});
  auto rep = verify_certificate(c);
  EXPECT_FALSE(rep.ok);
  EXPECT_EQ(rep.failed_invariant, "relator");
  EXPECT_NE(rep.message.find("a^3"), std::string::npos);
}

TEST(Certificate, ParseErrorsNameTheField) {
  try {
    parse_vhc("vhc 2\n");
    FAIL();
  } catch (const CertificateError &e) {
    EXPECT_EQ(e.invariant(), "version");
  }
  try {
    parse_vhc("vhc 1\npresentation <a | a^2>\ndegree 2\ngen a = (1,3)\n");
    FAIL();
  } catch (const CertificateError &e) {
    EXPECT_EQ(e.invariant(), "degree");
  }
}

TEST(Certificate, TableMustContainKernel) {
  auto c = expect_certificate(sister_gamma_n(10));
  ASSERT_EQ(c.selector, SubgroupSelector::table);
  // Replace the homomorphism by a different one of the same degree whose
  // kernel is not inside the table subgroup.
  Certificate bad = c;
  bad.hom.images[0] = Permutation::identity(c.hom.degree);
  auto rep = verify_certificate(bad);
  EXPECT_FALSE(rep.ok);
}
