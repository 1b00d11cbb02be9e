#include <gtest/gtest.h>

#include "gtpush/rational.hpp"
#include "gtpush/rng.hpp"

using namespace gtpush;

TEST(Rational, ParsesFractionsAndIntegers) {
  EXPECT_EQ(parse_rational("1/2"), Rational(1, 2));
  EXPECT_EQ(parse_rational("6/4"), Rational(3, 2));
  EXPECT_EQ(parse_rational("-3"), Rational(-3));
  EXPECT_EQ(parse_rational(" 7 "), Rational(7));
}

TEST(Rational, RejectsInexactAndMalformedInput) {
  EXPECT_THROW(parse_rational("0.5"), std::invalid_argument);
  EXPECT_THROW(parse_rational("1e-3"), std::invalid_argument);
  EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
  EXPECT_THROW(parse_rational(""), std::invalid_argument);
  EXPECT_THROW(parse_rational("a/b"), std::invalid_argument);
}

TEST(Rational, ParsesLists) {
  auto v = parse_rational_list("1/2,1/3,1/5");
  ASSERT_EQ(v.size(), 3u);
  EXPECT_EQ(v[2], Rational(1, 5));
  EXPECT_THROW(parse_rational_list("1/2,,1/3"), std::invalid_argument);
}

TEST(Rational, IntegerPowers) {
  EXPECT_EQ(ipow(Rational(1, 2), 3), Rational(1, 8));
  EXPECT_EQ(ipow(Rational(1, 2), -2), Rational(4));
  EXPECT_EQ(ipow(Rational(5), 0), Rational(1));
  EXPECT_THROW(ipow(Rational(0), -1), std::domain_error);
}

TEST(Rational, PrintsCanonicalForm) {
  EXPECT_EQ(to_string(Rational(10, 12)), "5/6");
  EXPECT_EQ(to_string(Rational(4, 2)), "2");
}

TEST(Rng, StreamsAreReproducibleAndDistinct) {
  Rng a = make_stream(42, 0), b = make_stream(42, 0), c = make_stream(42, 1);
  auto x = a(), y = b(), z = c();
  EXPECT_EQ(x, y);
  EXPECT_NE(x, z);
  for (int i = 0; i < 1000; ++i) {
    double u = uniform01(a);
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}
