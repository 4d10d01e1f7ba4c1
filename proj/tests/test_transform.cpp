#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "oracles.hpp"
#include "vilenkin/error.hpp"
#include "vilenkin/transform.hpp"

using namespace vilenkin;

namespace {

oracle::Radices first(const GeneratorSequence& m, std::size_t N) {
  return oracle::Radices(m.radices().begin(), m.radices().begin() + N);
}

GridFunction random_grid(const GeneratorSequence& m, std::size_t N, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return GridFunction(m, N, oracle::random_function(m.scaled_base(N), rng));
}

double max_diff(std::span<const Complex> a, std::span<const Complex> b) {
  double e = 0;
  for (std::size_t i = 0; i < a.size(); ++i) e = std::max(e, std::abs(a[i] - b[i]));
  return e;
}

const char* const kSequences[] = {"2^", "(2,3,4)^", "3^", "(2,3)^", "(5,2)^"};

}  // namespace

TEST(Character, Examples) {
  const auto w = GeneratorSequence::parse("2^");
  const auto m3 = GeneratorSequence::parse("3^");
  for (Index x = 0; x < 16; ++x) {
    const auto px = point_from_index(x, w, 4);
    EXPECT_EQ(character(0, px, w), Complex(1));
    EXPECT_NEAR(std::abs(character(1, px, w) - Complex(x % 2 ? -1.0 : 1.0)), 0, 1e-15);
  }
  EXPECT_NEAR(std::abs(character(1, GroupPoint{{1, 0}}, m3) - std::polar(1.0, 2 * std::numbers::pi / 3)), 0, 1e-15);
}

TEST(Character, UnitModulusAndOracleAgreement) {
  for (const char* text : kSequences) {
    const auto m = GeneratorSequence::parse(text);
    const std::size_t N = 4;
    const auto r = first(m, N);
    for (Index n = 0; n < m.scaled_base(N); ++n) {
      const auto row = character_function(m, n, N);
      for (Index x = 0; x < m.scaled_base(N); ++x) {
        ASSERT_NEAR(std::abs(row[x]), 1.0, 1e-12);
        ASSERT_NEAR(std::abs(row[x] - oracle::character(n, x, r)), 0, 1e-12);
        ASSERT_NEAR(std::abs(row[x] - character(n, point_from_index(x, m, N), m)), 0, 1e-12);
      }
    }
  }
}

TEST(Character, UnresolvedIndexThrows) {
  const auto w = GeneratorSequence::parse("2^");
  EXPECT_THROW(character_function(w, 16, 4), Error);
  EXPECT_THROW(character(16, GroupPoint{{0, 0, 0, 0}}, w), Error);
}

TEST(Forward, ConstantAndCharacters) {
  const auto m = GeneratorSequence::parse("(2,3,4)^");
  GridFunction one(m, 3);
  for (auto& v : one.values()) v = 1;
  const auto c = forward(one);
  for (Index n = 0; n < c.size(); ++n) EXPECT_NEAR(std::abs(c[n] - Complex(n == 0)), 0, 1e-12);
  for (Index j = 0; j < 24; ++j) {
    const auto cj = forward(character_function(m, j, 3));
    for (Index n = 0; n < cj.size(); ++n) ASSERT_NEAR(std::abs(cj[n] - Complex(n == j)), 0, 1e-12);
  }
}

TEST(Forward, MatchesNaiveOnAlternatingRadices) {
  const GeneratorSequence m({2, 3, 2, 3, 2, 3});
  const auto f = random_grid(m, 6, 3);
  const auto fast = forward(f);
  const auto naive = oracle::dft(f.data(), first(m, 6));
  EXPECT_LE(max_diff(fast.values(), naive), 1e-10);
}

TEST(Forward, FastEqualsNaiveEverywhere) {
  for (const char* text : kSequences) {
    const auto m = GeneratorSequence::parse(text);
    for (std::size_t N = 0; m.scaled_base(N) <= 256; ++N) {
      const auto f = random_grid(m, N, 10 + N);
      const auto r = first(m, N);
      const auto naive = oracle::dft(f.data(), r);
      const auto fast = forward(f);
      EXPECT_LE(max_diff(fast.values(), naive), 1e-10) << text << " N=" << N;
      const auto back = inverse(fast);
      EXPECT_LE(max_diff(back.values(), oracle::idft(naive, r)), 1e-10);
      EXPECT_LE(max_diff(back.values(), f.values()), 1e-10);
    }
  }
}

TEST(Forward, Plancherel) {
  for (const char* text : kSequences) {
    const auto m = GeneratorSequence::parse(text);
    std::size_t N = 0;
    while (m.scaled_base(N + 1) <= 4096) ++N;
    const auto f = random_grid(m, N, 5);
    const auto c = forward(f);
    double lhs = 0, rhs = 0;
    for (auto v : f.values()) lhs += std::norm(v);
    lhs /= static_cast<double>(f.size());
    for (auto v : c.values()) rhs += std::norm(v);
    EXPECT_NEAR(lhs, rhs, 1e-9 * lhs) << text;
  }
}

TEST(Forward, OverCapThrows) {
  const auto w = GeneratorSequence::parse("2^");
  EXPECT_THROW(check_resolution(w, 21), Error);
  EXPECT_THROW(GridFunction(w, 21), Error);
  EXPECT_NO_THROW(check_resolution(w, 20));
}

TEST(GridFunctionOps, ShapeChecksAndIntegral) {
  const auto w = GeneratorSequence::parse("2^");
  GridFunction a(w, 3), b(w, 4);
  EXPECT_THROW(a += b, Error);
  EXPECT_THROW(GridFunction(w, 3, std::vector<Complex>(7)), Error);
  for (Index i = 0; i < 8; ++i) a[i] = static_cast<double>(i);
  EXPECT_NEAR(a.integral().real(), 3.5, 1e-15);
  const auto fine = a.refine(6);
  ASSERT_EQ(fine.size(), 64u);
  for (Index i = 0; i < 64; ++i) EXPECT_EQ(fine[i], a[i % 8]);
  EXPECT_NEAR(fine.integral().real(), 3.5, 1e-15);
  EXPECT_THROW(b.refine(3), Error);
}

TEST(Dirichlet, ScaleIdentity) {
  for (const char* text : kSequences) {
    const auto m = GeneratorSequence::parse(text);
    for (std::size_t N = 1; N <= 6 && m.scaled_base(N) <= 4096; ++N)
      for (std::size_t k = 0; k <= N; ++k) {
        const double Mk = static_cast<double>(m.scaled_base(k));
        const auto D = dirichlet_direct(m, m.scaled_base(k), N);
        const auto S = dirichlet_at_scale(m, k, N);
        for (Index x = 0; x < D.size(); ++x) {
          const double expect = x % m.scaled_base(k) == 0 ? Mk : 0.0;
          ASSERT_NEAR(std::abs(D[x] - expect), 0, 1e-9) << text << " k=" << k << " x=" << x;
          ASSERT_EQ(S[x], Complex(expect));
        }
      }
  }
}

TEST(Dirichlet, DirectMatchesOracleAndClosedForm) {
  for (const char* text : kSequences) {
    const auto m = GeneratorSequence::parse(text);
    std::size_t N = 0;
    while (m.scaled_base(N + 1) <= 128) ++N;
    const auto r = first(m, N);
    for (Index n = 1; n <= m.scaled_base(N); ++n) {
      const auto direct = dirichlet_direct(m, n, N);
      EXPECT_LE(max_diff(direct.values(), oracle::dirichlet(n, r)), 1e-9) << text << " n=" << n;
      EXPECT_LE(max_diff(direct.values(), dirichlet_closed(m, n, N).values()), 1e-9) << text << " n=" << n;
    }
  }
}

TEST(Dirichlet, WalshFive) {
  const auto w = GeneratorSequence::parse("2^");
  EXPECT_LE(max_diff(dirichlet_direct(w, 5, 4).values(), dirichlet_closed(w, 5, 4).values()), 1e-9);
}

TEST(Dirichlet, ZeroOneAndRangeErrors) {
  const auto m = GeneratorSequence::parse("(2,3)^");
  const auto d0 = dirichlet_direct(m, 0, 3), d1 = dirichlet_direct(m, 1, 3);
  for (auto v : d0.values()) EXPECT_EQ(v, Complex(0));
  for (auto v : d1.values()) EXPECT_NEAR(std::abs(v - Complex(1)), 0, 1e-15);
  EXPECT_THROW(dirichlet_direct(m, 13, 3), Error);
  EXPECT_THROW(dirichlet_closed(m, 13, 3), Error);
}

TEST(Dirichlet, SweepMatchesDirect) {
  const auto m = GeneratorSequence::parse("(2,3,4)^");
  DirichletSweep sweep(m, 3);
  for (Index n = 0; n <= 24; ++n) {
    EXPECT_EQ(sweep.n(), n);
    EXPECT_LE(max_diff(sweep.kernel().values(), dirichlet_direct(m, n, 3).values()), 1e-12);
    if (n < 24) sweep.advance();
  }
  EXPECT_THROW(sweep.advance(), Error);
}

TEST(PartialSum, BothPathsAgreeWithOracle) {
  for (const char* text : kSequences) {
    const auto m = GeneratorSequence::parse(text);
    std::size_t N = 0;
    while (m.scaled_base(N + 1) <= 64) ++N;
    const auto f = random_grid(m, N, 9);
    const auto r = first(m, N);
    for (Index n = 0; n <= m.scaled_base(N); ++n) {
      const auto spectral = partial_sum(f, n);
      EXPECT_LE(max_diff(spectral.values(), oracle::truncate(f.data(), n, r)), 1e-10);
      EXPECT_LE(max_diff(spectral.values(), partial_sum_convolution(f, n).values()), 1e-10);
    }
  }
}

TEST(PartialSum, FullSpectrumAndCharacters) {
  const auto m = GeneratorSequence::parse("(2,3)^");
  const auto f = random_grid(m, 4, 2);
  EXPECT_LE(max_diff(partial_sum(f, 36).values(), f.values()), 1e-12);
  for (Index j = 0; j < 12; ++j) {
    const auto psi = character_function(m, j, 3);
    for (Index n = 0; n <= 12; ++n) {
      const auto s = partial_sum(psi, n);
      for (Index x = 0; x < 12; ++x) ASSERT_NEAR(std::abs(s[x] - (j < n ? psi[x] : Complex(0))), 0, 1e-12);
    }
  }
  EXPECT_THROW(partial_sum(f, 37), Error);
}

TEST(PartialSum, ScaleSumIsConditionalExpectation) {
  for (const char* text : kSequences) {
    const auto m = GeneratorSequence::parse(text);
    const std::size_t N = 4;
    const auto f = random_grid(m, N, 4);
    for (std::size_t k = 0; k <= N; ++k) {
      const auto avg = oracle::coset_average(f.data(), first(m, N), k);
      EXPECT_LE(max_diff(conditional_expectation(f, k).values(), avg), 1e-12);
      EXPECT_LE(max_diff(partial_sum(f, m.scaled_base(k)).values(), avg), 1e-10);
    }
  }
}

TEST(PartialSum, SweepMatchesTruncation) {
  const auto m = GeneratorSequence::parse("(2,3,4)^");
  const auto f = random_grid(m, 3, 8);
  PartialSumSweep sweep(f);
  for (Index n = 0; n <= 24; ++n) {
    EXPECT_LE(max_diff(sweep.current().values(), partial_sum(f, n).values()), 1e-10);
    if (n < 24) sweep.advance();
  }
  PartialSumSweep jump(f);
  jump.advance_to(17);
  EXPECT_EQ(jump.n(), 17u);
  EXPECT_LE(max_diff(jump.current().values(), partial_sum(f, 17).values()), 1e-10);
  EXPECT_THROW(jump.advance_to(3), Error);
}
