#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "vilenkin/error.hpp"
#include "vilenkin/martingale.hpp"
#include "vilenkin/norms.hpp"

using namespace vilenkin;

namespace {

double max_diff(std::span<const Complex> a, std::span<const Complex> b) {
  double e = 0;
  for (std::size_t i = 0; i < a.size(); ++i) e = std::max(e, std::abs(a[i] - b[i]));
  return e;
}

std::vector<AtomViolation> violations_of(const GridFunction& a, double p, std::size_t r, const GroupPoint& base) {
  try {
    validate_atom(a, p, r, base);
  } catch (const AtomError& e) {
    return e.violations();
  }
  return {};
}

}  // namespace

TEST(Atom, TwoLevelFunctionIsValid) {
  // M_r^{1/p} (1_{I_{r+1}} - (1/m_r) 1_{I_r}) = M_r^{1/p} / M_{r+1} (D_{M_{r+1}} - D_{M_r}).
  const auto m = GeneratorSequence::parse("(2,3,4)^");
  for (std::size_t r = 0; r < 4; ++r)
    for (double p : {0.5, 2.0 / 3, 1.0}) {
      const double scale = std::pow(static_cast<double>(m.scaled_base(r)), 1 / p) / m.scaled_base(r + 1);
      const GridFunction a = Complex(scale) * (dirichlet_at_scale(m, r + 1, 5) - dirichlet_at_scale(m, r, 5));
      EXPECT_TRUE(violations_of(a, p, r, GroupPoint{std::vector<Radix>(r, 0)}).empty()) << r << " " << p;
    }
}

TEST(Atom, ConstantOneIsNotAnAtom) {
  const auto w = GeneratorSequence::parse("2^");
  GridFunction one(w, 4);
  for (auto& v : one.values()) v = 1;
  const auto v = violations_of(one, 0.5, 0, GroupPoint{});
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0], AtomViolation::NonzeroMean);
}

TEST(Atom, ReportsEveryViolation) {
  const auto w = GeneratorSequence::parse("2^");
  GridFunction a(w, 4);
  a[0] = 100;   // inside I_2(0): too large, nonzero mean
  a[1] = 1;     // outside I_2(0)
  const auto v = violations_of(a, 1, 2, GroupPoint{{0, 0}});
  EXPECT_EQ(v, (std::vector<AtomViolation>{AtomViolation::NonzeroMean, AtomViolation::SupBound,
                                           AtomViolation::Support}));
  EXPECT_EQ(to_string(AtomViolation::NonzeroMean), "mean");
  EXPECT_EQ(to_string(AtomViolation::SupBound), "bound");
  EXPECT_EQ(to_string(AtomViolation::Support), "support");
  EXPECT_THROW(validate_atom(a, 1.5, 2, GroupPoint{{0, 0}}), Error);
}

TEST(Atom, CounterexampleAtomValues) {
  const auto w = GeneratorSequence::parse("2^");
  const auto a = counterexample_atom(w, decompose(3, w), 0.5, 4);  // |alpha| = 1
  for (Index x = 0; x < 16; ++x) {
    const double expect = x % 4 == 0 ? 2.0 : (x % 2 == 0 ? -2.0 : 0.0);
    EXPECT_EQ(a.values[x], Complex(expect)) << x;
  }
  EXPECT_THROW(counterexample_atom(w, decompose(9, w), 0.5, 3), Error);
}

TEST(Atom, CounterexampleAtomsValidate) {
  for (const char* text : {"2^", "(2,3,4)^", "3^"}) {
    const auto m = GeneratorSequence::parse(text);
    for (std::size_t t = 0; t + 1 < 6; ++t)
      for (double p : {0.5, 2.0 / 3, 1.0}) {
        const auto a = counterexample_atom(m, decompose(m.scaled_base(t) + (t ? 1 : 0), m), p, 6);
        EXPECT_NEAR(std::abs(a.values.integral()), 0, 1e-12);
        EXPECT_NO_THROW(validate_atom(a.values, p, a.support_rank, a.base_point)) << text << " t=" << t;
      }
  }
}

TEST(Atom, RandomAtomsValidateAndAreDeterministic) {
  const auto m = GeneratorSequence::parse("(2,3)^");
  std::mt19937_64 rng(3), again(3);
  std::uniform_int_distribution<int> coord(0, 5);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t r = static_cast<std::size_t>(trial % 5);
    GroupPoint base;
    for (std::size_t k = 0; k < r; ++k) base.coords.push_back(static_cast<Radix>(coord(rng) % m.radix(k)));
    const auto a = random_atom(m, 5, 0.5, r, base, rng);
    EXPECT_NO_THROW(validate_atom(a.values, 0.5, r, base));
    double sup = 0;
    for (auto v : a.values.values()) sup = std::max(sup, std::abs(v));
    EXPECT_NEAR(sup, 0.9 * a.sup_bound(), 1e-9 * a.sup_bound());
  }
  std::mt19937_64 r1(8), r2(8);
  EXPECT_EQ(random_atom(m, 4, 0.5, 1, GroupPoint{{1}}, r1).values.data(),
            random_atom(m, 4, 0.5, 1, GroupPoint{{1}}, r2).values.data());
}

TEST(Phi, ParseAndEvaluate) {
  const auto w = GeneratorSequence::parse("2^");
  const auto c = PhiSequence::parse("constant:2.5");
  EXPECT_EQ(c(w, 100), 2.5);
  const auto l = PhiSequence::parse("log");
  EXPECT_NEAR(l(w, 9), 1 + std::log(8.0), 1e-15);
  const auto pw = PhiSequence::parse("power:0.5");
  EXPECT_NEAR(pw(w, 17), 4.0, 1e-15);
  for (const auto& phi : {c, l, pw}) {
    const auto back = PhiSequence::parse(phi.to_string());
    EXPECT_EQ(back.kind, phi.kind);
    EXPECT_EQ(back.parameter, phi.parameter);
  }
  for (const char* bad : {"", "constant:", "constant:-1", "power:x", "exp"})
    EXPECT_THROW(PhiSequence::parse(bad), ParseError) << bad;
}

TEST(LambdaRuleText, RoundTrip) {
  for (auto r : {LambdaRule::divergent, LambdaRule::gap, LambdaRule::explicit_list})
    EXPECT_EQ(parse_lambda_rule(to_string(r)), r);
  EXPECT_THROW(parse_lambda_rule("other"), ParseError);
}

TEST(Counterexample, CoefficientsMatchTransform) {
  for (const char* text : {"2^", "(2,3,4)^", "3^"}) {
    const auto m = GeneratorSequence::parse(text);
    std::size_t N = 0;
    while (m.scaled_base(N + 1) <= 4096) ++N;
    const auto spec = build_counterexample(m, 0.5, default_alphas(m, N), LambdaRule::divergent, PhiSequence{}, N);
    ASSERT_GE(spec.realized_terms(), 2u);
    const auto fast = forward(spec.realized);
    const auto closed = closed_coefficients(spec);
    EXPECT_LE(max_diff(fast.values(), closed.values()), 1e-9) << text;
    for (std::size_t k = 0; k < spec.realized_terms(); ++k) {
      const Index lo = m.scaled_base(spec.top(k));
      EXPECT_NEAR(closed[lo].real(),
                  spec.lambdas[k] * std::pow(static_cast<double>(lo), 1.0) / m.lambda(), 1e-12);
    }
  }
}

TEST(Counterexample, RealizedIsSumOfScaledAtoms) {
  const auto m = GeneratorSequence::parse("(2,3)^");
  const std::size_t N = 7;
  const auto spec = build_counterexample(m, 2.0 / 3, default_alphas(m, N), LambdaRule::divergent, PhiSequence{}, N);
  GridFunction sum(m, N);
  for (std::size_t k = 0; k < spec.realized_terms(); ++k)
    sum += Complex(spec.lambdas[k]) * counterexample_atom(m, decompose(spec.alphas[k], m), spec.p, N).values;
  EXPECT_LE(max_diff(sum.values(), spec.realized.values()), 1e-9);
}

TEST(Counterexample, SingleAtomSpec) {
  const auto w = GeneratorSequence::parse("2^");
  const auto spec = build_counterexample(w, 0.5, {5}, LambdaRule::explicit_list, PhiSequence{}, 5, {1.0});
  const auto a = counterexample_atom(w, decompose(5, w), 0.5, 5);
  EXPECT_EQ(spec.realized.data(), a.values.data());
  EXPECT_TRUE(std::isfinite(hardy_norm(spec.realized, 0.5)));
  EXPECT_LE(std::pow(hardy_norm(spec.realized, 0.5), 0.5), 1 + 1e-12);
}

TEST(Counterexample, OrderingAndGrowthErrors) {
  const auto w = GeneratorSequence::parse("2^");
  EXPECT_THROW(build_counterexample(w, 0.5, {}, LambdaRule::divergent, PhiSequence{}, 6), Error);
  try {
    build_counterexample(w, 0.5, {3, 5, 6, 17}, LambdaRule::divergent, PhiSequence{}, 6);
    FAIL() << "expected an ordering error";
  } catch (const GrowthConditionError& e) {
    EXPECT_EQ(e.failing(), std::vector<std::size_t>{2});
  }
  // Phi growing fast makes lambda_k^p increase.
  EXPECT_THROW(build_counterexample(w, 0.5, {3, 5, 9, 17}, LambdaRule::divergent, PhiSequence::parse("power:2"), 6),
               GrowthConditionError);
  // R = 2, 4, 8: the squaring gap fails from the third term on.
  try {
    build_counterexample(w, 0.5, {3, 5, 9}, LambdaRule::gap, PhiSequence{}, 6);
    FAIL() << "expected a gap error";
  } catch (const GrowthConditionError& e) {
    EXPECT_EQ(e.failing(), std::vector<std::size_t>{2});
  }
  EXPECT_THROW(build_counterexample(w, 0.5, {3, 5}, LambdaRule::explicit_list, PhiSequence{}, 6, {1.0}), Error);
}

TEST(Counterexample, GapSubsequence) {
  const auto w = GeneratorSequence::parse("2^");
  std::vector<Index> cands;
  for (std::size_t k = 1; k < 20; ++k) cands.push_back(w.scaled_base(k) + 1);
  EXPECT_EQ(extract_gap_subsequence(w, cands), (std::vector<Index>{3, 5, 17, 257, 65537}));
  const auto spec = build_counterexample(w, 0.5, {3, 5, 17, 257}, LambdaRule::gap, PhiSequence{}, 10);
  // sum lambda_k^p = sum 2^{1/2} R_k^{-1/2} with R = 2, 4, 16, 256.
  double expect = 0;
  for (double R : {2.0, 4.0, 16.0, 256.0}) expect += std::sqrt(2.0 / R);
  EXPECT_NEAR(spec.budget(), expect, 1e-12);
  for (std::size_t n = 0; n < 10; ++n) EXPECT_LE(spec.tail_budget(n + 1), spec.tail_budget(n));
}

TEST(Counterexample, DefaultAlphas) {
  const auto w = GeneratorSequence::parse("2^");
  EXPECT_EQ(default_alphas(w, 14), (std::vector<Index>{3, 5, 17, 257}));
  EXPECT_EQ(default_alphas(w, 9), (std::vector<Index>{3, 5, 17, 257}));
  EXPECT_EQ(default_alphas(w, 8), (std::vector<Index>{3, 5, 17}));
}

TEST(Counterexample, HardyBudget) {
  for (const char* text : {"2^", "(2,3,4)^", "3^"}) {
    const auto m = GeneratorSequence::parse(text);
    for (double p : {0.5, 2.0 / 3}) {
      const auto spec = build_counterexample(m, p, default_alphas(m, 9), LambdaRule::divergent, PhiSequence{},
                                             9);
      double realized = 0;
      for (std::size_t k = 0; k < spec.realized_terms(); ++k) realized += std::pow(spec.lambdas[k], p);
      EXPECT_LE(std::pow(hardy_norm(spec.realized, p), p), realized * (1 + 1e-9)) << text;
    }
  }
}

TEST(ClosedPartialSum, EqualsTruncationEverywhere) {
  for (const char* text : {"2^", "(2,3,4)^", "3^"}) {
    const auto m = GeneratorSequence::parse(text);
    std::size_t N = 0;
    while (m.scaled_base(N + 1) <= 1024) ++N;
    const auto spec = build_counterexample(m, 0.5, default_alphas(m, N), LambdaRule::divergent, PhiSequence{}, N);
    PartialSumSweep sweep(spec.realized);
    for (Index j = 0; j <= m.scaled_base(N); ++j) {
      const auto closed = closed_partial_sum(spec, j);
      const double scale = std::max(1.0, sup_norm(sweep.current()));
      ASSERT_LE(max_diff(closed.values(), sweep.current().values()), 1e-9 * scale) << text << " j=" << j;
      if (j < m.scaled_base(N)) sweep.advance();
    }
  }
}

TEST(ClosedPartialSum, BlockStartHasNoTail) {
  const auto w = GeneratorSequence::parse("2^");
  const auto spec = build_counterexample(w, 0.5, default_alphas(w, 10), LambdaRule::divergent, PhiSequence{}, 10);
  for (std::size_t k = 0; k < spec.realized_terms(); ++k) {
    const Index j = w.scaled_base(spec.top(k));
    const auto parts = split_partial_sum(spec, j);
    ASSERT_TRUE(parts.block.has_value());
    EXPECT_EQ(*parts.block, k);
    EXPECT_EQ(sup_norm(parts.tail), 0.0);
    EXPECT_LE(max_diff(parts.head.values(), partial_sum(spec.realized, j).values()), 1e-9);
  }
  EXPECT_THROW(split_partial_sum(spec, w.scaled_base(10) + 1), Error);
}

TEST(ClosedPartialSum, LowerEstimateAtAlphas) {
  // |D_{alpha_k - M_{|alpha_k|}}| >= M_{<alpha_k>} on I_{<alpha_k>} \ I_{<alpha_k>+1}.
  const auto w = GeneratorSequence::parse("2^");
  const std::size_t N = 10;
  for (Index a : default_alphas(w, N)) {
    const auto v = decompose(a, w);
    const auto D = dirichlet_direct(w, a - w.scaled_base(v.top), N);
    for (Index x = 1; x < D.size(); ++x) {
      if (coset_depth(x, w, N) != v.bottom) continue;
      EXPECT_GE(std::abs(D[x]), static_cast<double>(w.scaled_base(v.bottom)) - 1e-9);
    }
  }
}
