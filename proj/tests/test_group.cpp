#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "vilenkin/error.hpp"
#include "vilenkin/group.hpp"

using namespace vilenkin;

TEST(ScaledBases, SmallSequences) {
  EXPECT_EQ(scaled_bases(GeneratorSequence({2, 2, 2}), 3), (std::vector<Index>{1, 2, 4, 8}));
  EXPECT_EQ(scaled_bases(GeneratorSequence({2, 3, 4}), 3), (std::vector<Index>{1, 2, 6, 24}));
}

TEST(ScaledBases, WalshIsPowersOfTwo) {
  const auto m = GeneratorSequence::parse("2^");
  for (std::size_t k = 0; k < 40; ++k) EXPECT_EQ(m.scaled_base(k), Index{1} << k);
}

TEST(ScaledBases, ResolutionBeyondSequenceThrows) {
  EXPECT_THROW(scaled_bases(GeneratorSequence({2, 3}), 3), Error);
}

TEST(GeneratorSequence, RejectsSmallRadix) {
  EXPECT_THROW(GeneratorSequence({2, 1}), Error);
  EXPECT_THROW(GeneratorSequence::parse("1^"), ParseError);
}

TEST(GeneratorSequence, OverflowIsDetected) {
  std::vector<Radix> huge(70, 2);
  EXPECT_THROW(GeneratorSequence{huge}, Error);
}

TEST(GeneratorSequence, ParsesTextForms) {
  const auto explicit_list = GeneratorSequence::parse("2,3,4");
  EXPECT_EQ(explicit_list.radix(0), 2u);
  EXPECT_EQ(explicit_list.radix(1), 3u);
  EXPECT_EQ(explicit_list.radix(2), 4u);
  EXPECT_EQ(explicit_list.radix(7), 4u);
  EXPECT_EQ(explicit_list.lambda(), 4u);

  const auto periodic = GeneratorSequence::parse("(2,3,4)^");
  for (std::size_t k = 0; k < 12; ++k) EXPECT_EQ(periodic.radix(k), Radix(2 + k % 3));

  const auto constant = GeneratorSequence::parse("3^");
  EXPECT_EQ(constant.radix(20), 3u);
  EXPECT_EQ(constant, GeneratorSequence::constant(3));
}

TEST(GeneratorSequence, TextRoundTrips) {
  for (const char* text : {"2^", "5^", "2,3,4", "(2,3)^", "(2,3,4)^", "7"}) {
    const auto m = GeneratorSequence::parse(text);
    EXPECT_EQ(GeneratorSequence::parse(m.text()), m) << text;
  }
}

TEST(GeneratorSequence, MalformedTextThrows) {
  for (const char* text : {"", "^", "2,,3", "x", "(2,3", "2^^", "-2^", "()^"})
    EXPECT_THROW(GeneratorSequence::parse(text), ParseError) << text;
}

TEST(GeneratorSequence, ExpansionStopsBeforeOverflow) {
  const auto m = GeneratorSequence::parse("2^");
  EXPECT_EQ(m.max_resolution(), 62u);
  EXPECT_LE(m.scaled_base(m.max_resolution()), Index(INT64_MAX));
}

TEST(Decompose, DigitStatisticsOfSpecialIndices) {
  for (const char* text : {"2^", "(2,3,4)^", "3^"}) {
    const auto m = GeneratorSequence::parse(text);
    for (std::size_t k = 1; k < 10; ++k) {
      const auto a = decompose(m.scaled_base(k) + 1, m);
      EXPECT_EQ(a.top, k);
      EXPECT_EQ(a.bottom, 0u);
      EXPECT_EQ(a.rho(), k);

      const auto b = decompose(m.scaled_base(k) + m.scaled_base(k - 1), m);
      EXPECT_EQ(b.top, k);
      EXPECT_EQ(b.bottom, k - 1);
      EXPECT_EQ(b.rho(), 1u);

      const auto c = decompose(m.scaled_base(k), m);
      EXPECT_EQ(c.top, k);
      EXPECT_EQ(c.bottom, k);
      EXPECT_EQ(c.rho(), 0u);
    }
  }
}

TEST(Decompose, ZeroAndOutOfRangeThrow) {
  const auto m = GeneratorSequence::parse("2^");
  EXPECT_THROW(decompose(0, m), Error);
  EXPECT_THROW(decompose(m.scaled_base(m.max_resolution()), m), Error);
}

TEST(Decompose, ExhaustiveRoundTripAgainstOracle) {
  for (const char* text : {"2^", "(2,3,4)^", "3^", "(2,3)^"}) {
    const auto m = GeneratorSequence::parse(text);
    std::size_t N = 0;
    while (m.scaled_base(N + 1) <= 4096) ++N;
    oracle::Radices radices(m.radices().begin(), m.radices().begin() + N);
    for (Index n = 1; n < m.scaled_base(N); ++n) {
      const auto v = decompose(n, m);
      EXPECT_EQ(reconstruct(v.digits, m), n);
      const auto d = oracle::digits(n, radices);
      for (std::size_t j = 0; j < N; ++j) ASSERT_EQ(v.digit(j), d[j]) << text << " n=" << n;
      EXPECT_NE(v.digit(v.top), 0u);
      EXPECT_NE(v.digit(v.bottom), 0u);
      for (std::size_t j = 0; j < v.bottom; ++j) EXPECT_EQ(v.digit(j), 0u);
    }
  }
}

TEST(Decompose, RatioBracketedByRho) {
  for (const char* text : {"2^", "(2,3,4)^", "3^", "(2,5)^"}) {
    const auto m = GeneratorSequence::parse(text);
    for (Index n = 1; n < 5000; ++n) {
      const auto v = decompose(n, m);
      const double ratio = static_cast<double>(m.scaled_base(v.top)) / m.scaled_base(v.bottom);
      EXPECT_LE(std::pow(2.0, v.rho()), ratio);
      EXPECT_LE(ratio, std::pow(m.lambda(), v.rho()));
    }
  }
}

TEST(Variation, WalshExamples) {
  const auto m = GeneratorSequence::parse("2^");
  const auto one = variation(decompose(1, m), m, DigitConvention::from1);
  EXPECT_EQ(one.v, 1u);
  EXPECT_EQ(one.v_star, 0u);
  const auto five = variation(decompose(5, m), m, DigitConvention::from1);
  EXPECT_EQ(five.v, 3u);
  EXPECT_EQ(five.v_star, 0u);
}

TEST(Variation, WalshStarVanishes) {
  const auto m = GeneratorSequence::parse("2^");
  for (Index n = 1; n < 1024; ++n) {
    EXPECT_EQ(variation(decompose(n, m), m, DigitConvention::from0).v_star, 0u);
    EXPECT_EQ(variation(decompose(n, m), m, DigitConvention::from1).v_star, 0u);
  }
}

TEST(Variation, ConventionsDifferOnTheZeroDigit) {
  const auto m = GeneratorSequence::parse("3^");
  EXPECT_EQ(variation(decompose(1, m), m, DigitConvention::from0).v_star, 1u);
  EXPECT_EQ(variation(decompose(1, m), m, DigitConvention::from1).v_star, 0u);
}

TEST(Variation, DefaultsToFrom1) {
  const auto m = GeneratorSequence::parse("3^");
  const auto v = decompose(7, m);
  const auto a = variation(v, m);
  const auto b = variation(v, m, DigitConvention::from1);
  EXPECT_EQ(a.v, b.v);
  EXPECT_EQ(a.v_star, b.v_star);
}

TEST(Convention, ParsesAndPrints) {
  EXPECT_EQ(parse_convention("from0"), DigitConvention::from0);
  EXPECT_EQ(parse_convention(to_string(DigitConvention::from1)), DigitConvention::from1);
  EXPECT_THROW(parse_convention("from2"), ParseError);
}

TEST(GroupPoint, Examples) {
  const GeneratorSequence m32({3, 2});
  EXPECT_EQ(group_add(m32, GroupPoint{{2, 1}}, GroupPoint{{2, 1}}), (GroupPoint{{1, 0}}));
  const auto w = GeneratorSequence::parse("2^");
  for (Index x = 0; x < 64; ++x) EXPECT_EQ(index_add(w, 6, x, x), 0u);
}

TEST(GroupPoint, MismatchedResolutionThrows) {
  const auto m = GeneratorSequence::parse("2^");
  EXPECT_THROW(group_add(m, GroupPoint{{1, 0}}, GroupPoint{{1}}), Error);
  EXPECT_THROW(group_sub(m, GroupPoint{{1}}, GroupPoint{{1, 0, 1}}), Error);
}

TEST(GroupPoint, IndexMapIsBijection) {
  const auto m = GeneratorSequence::parse("(2,3,4)^");
  const std::size_t N = 5;
  std::vector<bool> seen(m.scaled_base(N));
  for (Index i = 0; i < m.scaled_base(N); ++i) {
    const auto x = point_from_index(i, m, N);
    ASSERT_EQ(x.resolution(), N);
    for (std::size_t k = 0; k < N; ++k) ASSERT_LT(x.coords[k], m.radix(k));
    const Index back = index_of(x, m);
    ASSERT_EQ(back, i);
    seen[back] = true;
  }
  EXPECT_TRUE(std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }));
}

TEST(GroupPoint, AbelianGroupLawsOnRandomTriples) {
  std::mt19937_64 rng(11);
  for (const char* text : {"2^", "(2,3,4)^", "3^", "(5,2)^"}) {
    const auto m = GeneratorSequence::parse(text);
    const std::size_t N = 6;
    std::uniform_int_distribution<Index> pick(0, m.scaled_base(N) - 1);
    for (int trial = 0; trial < 500; ++trial) {
      const Index x = pick(rng), y = pick(rng), z = pick(rng);
      EXPECT_EQ(index_add(m, N, index_add(m, N, x, y), z), index_add(m, N, x, index_add(m, N, y, z)));
      EXPECT_EQ(index_add(m, N, x, y), index_add(m, N, y, x));
      EXPECT_EQ(index_add(m, N, x, 0), x);
      EXPECT_EQ(index_add(m, N, x, index_sub(m, N, 0, x)), 0u);
      EXPECT_EQ(index_sub(m, N, x, x), 0u);
      EXPECT_EQ(index_sub(m, N, index_add(m, N, x, y), y), x);
      const auto px = point_from_index(x, m, N), py = point_from_index(y, m, N);
      EXPECT_EQ(index_of(group_add(m, px, py), m), index_add(m, N, x, y));
      EXPECT_EQ(index_of(group_sub(m, px, py), m), index_sub(m, N, x, y));
    }
  }
}

TEST(Cosets, DepthCountsLeadingZeros) {
  const auto m = GeneratorSequence::parse("(2,3,4)^");
  const std::size_t N = 6;
  oracle::Radices r(m.radices().begin(), m.radices().begin() + N);
  for (Index x = 0; x < m.scaled_base(N); ++x) {
    EXPECT_EQ(coset_depth(x, m, N), oracle::depth(x, r));
    for (std::size_t s = 0; s <= N; ++s) EXPECT_EQ(in_coset(x, 0, s, m), coset_depth(x, m, N) >= s);
  }
}
