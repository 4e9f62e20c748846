#include <gtest/gtest.h>

#include <coverhunter/presentation.hpp>

using namespace coverhunter;

TEST(Word, FreeReduceCancelsAdjacentInverses) {
  EXPECT_EQ(free_reduce(Word{1, 2, -2, -1, 1}), (Word{1}));
  EXPECT_TRUE(free_reduce(Word{1, -1, 2, -2}).empty());
}

TEST(Word, CyclicReduceStripsConjugation) {
  EXPECT_EQ(cyclic_reduce(Word{2, 1, 1, -2}), (Word{1, 1}));
}

TEST(Word, PowerAndInverse) {
  Word w{1, 2};
  EXPECT_EQ(w.power(3), (Word{1, 2, 1, 2, 1, 2}));
  EXPECT_EQ(w.power(-1), (Word{-2, -1}));
  EXPECT_EQ(w.inverse().inverse(), w);
}

TEST(Presentation, ParsesPowersAndBrackets) {
  auto p = parse_presentation("<a,b | a^3, b^4, (a*b^2)^2>");
  ASSERT_EQ(p.generator_count(), 2);
  ASSERT_EQ(p.relators.size(), 3u);
  EXPECT_EQ(p.relators[0], (Word{1, 1, 1}));
  EXPECT_EQ(p.relators[2], (Word{1, 2, 2, 1, 2, 2}));
}

TEST(Presentation, FormatRoundTrip) {
  for (const char *text : {"<a,b | a^3, b^4, (a*b^2)^2>",
                           "<x1,x2 | x1^2, x2^3, (x1*x2)^7>",
                           "<a,b | a*b*a*b^-1*a^-1*b^-1>", "<a | a^5>"}) {
    auto p = parse_presentation(text);
    EXPECT_EQ(to_string(p), text);
    EXPECT_EQ(parse_presentation(to_string(p)).relators, p.relators);
  }
}

TEST(Presentation, ParseErrorReportsOffset) {
  try {
    parse_presentation("<a,b | a^3 b");
    FAIL() << "expected ParseError";
  } catch (const ParseError &e) {
    EXPECT_EQ(e.offset(), 12u); // juxtaposition is a product, so the error is at the end
  }
  EXPECT_THROW(parse_presentation("<a | c>"), ParseError);
}

TEST(Presentation, QuotientAddsPower) {
  auto p = parse_presentation("<a,b | a^3, b^4, (a*b^2)^2>");
  auto q = quotient_presentation(p, Word{1, 2}, 10);
  ASSERT_EQ(q.relators.size(), 4u);
  EXPECT_EQ(q.relators.back(), (Word{1, 2}).power(10));
  EXPECT_THROW(quotient_presentation(p, Word{}, 3), std::invalid_argument);
  EXPECT_THROW(quotient_presentation(p, Word{3}, 3), std::invalid_argument);
}

TEST(Presentation, ParseWordOverNames) {
  EXPECT_EQ(parse_word("x1*x2*x1^-1*x2^-1", {"x1", "x2"}), (Word{1, 2, -1, -2}));
}
