#include "selftest.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "vilenkin/experiments.hpp"
#include "vilenkin/martingale.hpp"
#include "vilenkin/norms.hpp"

namespace vilenkin::cli {
namespace {

constexpr double kTol = 1e-9;

bool close(double a, double b, double tol = kTol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }
bool close(Complex a, Complex b, double tol = kTol) { return std::abs(a - b) <= tol; }

bool all_close(const GridFunction& f, const std::function<Complex(Index)>& g) {
  for (Index i = 0; i < f.size(); ++i)
    if (!close(f[i], g(i))) return false;
  return true;
}

GridFunction random_grid(const GeneratorSequence& m, std::size_t N, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  GridFunction f(m, N);
  for (auto& v : f.values()) {
    const double re = normal(rng);
    v = Complex(re, normal(rng));
  }
  return f;
}

const GeneratorSequence& walsh() {
  static const GeneratorSequence m = GeneratorSequence::parse("2^");
  return m;
}

}  // namespace

std::vector<SelfCheck> run_selftest() {
  std::vector<SelfCheck> out;
  auto check = [&](std::string name, const std::function<bool()>& body) {
    SelfCheck c{std::move(name), false, {}};
    try {
      c.passed = body();
    } catch (const std::exception& e) {
      c.detail = e.what();
    }
    out.push_back(std::move(c));
  };

  const auto& w = walsh();
  const auto m234 = GeneratorSequence::parse("(2,3,4)^");
  const auto m23 = GeneratorSequence::parse("(2,3)^");
  const auto m3 = GeneratorSequence::parse("3^");

  check("scaled bases of (2,2,2)", [] {
    return scaled_bases(GeneratorSequence({2, 2, 2}), 3) == std::vector<Index>{1, 2, 4, 8};
  });
  check("scaled bases of (2,3,4)", [] {
    return scaled_bases(GeneratorSequence({2, 3, 4}), 3) == std::vector<Index>{1, 2, 6, 24};
  });
  check("Walsh variation of n = 1", [&] {
    const auto v = variation(decompose(1, w), w, DigitConvention::from1);
    return v.v == 1 && v.v_star == 0;
  });
  check("Walsh variation of n = 5", [&] {
    const auto v = variation(decompose(5, w), w, DigitConvention::from1);
    return v.v == 3 && v.v_star == 0;
  });
  check("Walsh x + x = 0", [&] {
    for (Index x = 0; x < 16; ++x)
      if (index_add(w, 4, x, x) != 0) return false;
    return true;
  });
  check("(3,2): (2,1) + (2,1) = (1,0)", [] {
    const GeneratorSequence m({3, 2});
    return group_add(m, GroupPoint{{2, 1}}, GroupPoint{{2, 1}}) == GroupPoint{{1, 0}};
  });
  check("x - x = 0", [&] {
    for (Index x = 0; x < 24; ++x)
      if (index_sub(m234, 3, x, x) != 0) return false;
    return true;
  });
  check("psi_0 = 1", [&] { return all_close(character_function(m234, 0, 3), [](Index) { return Complex(1); }); });
  check("Walsh psi_1 = (-1)^{x_0}", [&] {
    return all_close(character_function(w, 1, 4), [](Index x) { return Complex(x % 2 ? -1.0 : 1.0); });
  });
  check("psi_1((1,0,...)) = exp(2 pi i/3) for m = 3^", [&] {
    return close(character(1, GroupPoint{{1, 0}}, m3), std::polar(1.0, 2 * std::numbers::pi / 3));
  });
  check("forward(1) = e_0", [&] {
    GridFunction one(m23, 3);
    for (auto& v : one.values()) v = 1;
    const auto c = forward(one);
    for (Index i = 0; i < c.size(); ++i)
      if (!close(c[i], Complex(i == 0 ? 1.0 : 0.0))) return false;
    return true;
  });
  check("forward(psi_j) = e_j", [&] {
    for (Index j = 0; j < 12; ++j) {
      const auto c = forward(character_function(m23, j, 3));
      for (Index i = 0; i < c.size(); ++i)
        if (!close(c[i], Complex(i == j ? 1.0 : 0.0))) return false;
    }
    return true;
  });
  check("D_1 = 1", [&] { return all_close(dirichlet_direct(m234, 1, 3), [](Index) { return Complex(1); }); });
  check("S_{M_N} f = f", [&] {
    const auto f = random_grid(m23, 4, 1);
    const auto s = partial_sum(f, m23.scaled_base(4));
    return all_close(s, [&](Index i) { return f[i]; });
  });
  check("S_n psi_j", [&] {
    for (Index j = 0; j < 8; ++j)
      for (Index n = 0; n <= 8; ++n) {
        const auto psi = character_function(w, j, 3);
        const auto s = partial_sum(psi, n);
        if (!all_close(s, [&](Index i) { return j < n ? psi[i] : Complex(0); })) return false;
      }
    return true;
  });
  check("L_p norm of a constant", [&] {
    GridFunction f(w, 3);
    for (auto& v : f.values()) v = Complex(3, 4);
    return close(lp_norm(f, 0.5), 5) && close(lp_norm(f, 1), 5) && close(lp_norm(f, 2), 5);
  });
  check("||D_{M_k}||_1 = 1", [&] {
    for (std::size_t k = 0; k <= 5; ++k)
      if (!close(lp_norm(dirichlet_at_scale(m234, k, 5), 1), 1)) return false;
    return true;
  });
  check("||D_{M_k}||_p = M_k^{1-1/p}", [&] {
    for (double p : {0.5, 2.0 / 3, 2.0})
      for (std::size_t k = 0; k <= 5; ++k) {
        const double Mk = static_cast<double>(m234.scaled_base(k));
        if (!close(lp_norm(dirichlet_at_scale(m234, k, 5), p), std::pow(Mk, 1 - 1 / p))) return false;
      }
    return true;
  });
  check("weak norm of the indicator of I_1", [&] {
    const auto f = dirichlet_at_scale(w, 1, 4);
    GridFunction ind = Complex(0.5) * f;
    return close(weak_lp_norm(ind, 0.5), std::pow(0.5, 2.0), 1e-9);
  });
  check("weak norm of a constant", [&] {
    GridFunction f(w, 3);
    for (auto& v : f.values()) v = -2;
    return close(weak_lp_norm(f, 0.5), 2, 1e-9);
  });
  check("L_1 = 1", [&] { return close(lebesgue_constant(w, 1, 4, DigitConvention::from0).value, 1); });
  check("L_{M_k} = 1", [&] {
    for (std::size_t k = 0; k < 5; ++k)
      if (!close(lebesgue_constant(m234, m234.scaled_base(k), 5, DigitConvention::from0).value, 1))
        return false;
    return true;
  });
  check("hardy norm of psi_0", [&] { return close(hardy_norm(character_function(m23, 0, 4), 0.5), 1); });
  check("hardy norm dominates L_p", [&] {
    const auto f = random_grid(m23, 4, 2);
    return hardy_norm(f, 0.5) >= lp_norm(f, 0.5) - kTol;
  });
  check("restricted maximal over {M_N}", [&] {
    const auto f = random_grid(w, 5, 3);
    const Index idx[] = {w.scaled_base(5)};
    const auto g = restricted_maximal(f, idx);
    return all_close(g, [&](Index i) { return Complex(std::abs(f[i])); });
  });
  check("restricted maximal over {M_0..M_N}", [&] {
    const auto f = random_grid(m23, 4, 4);
    std::vector<Index> idx;
    for (std::size_t k = 0; k <= 4; ++k) idx.push_back(m23.scaled_base(k));
    const auto g = restricted_maximal(f, idx);
    const auto h = maximal_function(f);
    return all_close(g, [&](Index i) { return h[i]; });
  });
  check("modulus at n = N vanishes", [&] { return close(modulus_hp(random_grid(w, 5, 5), 5, 0.5), 0); });
  check("modulus of psi_{M_k} for k >= n", [&] {
    const auto psi = character_function(w, w.scaled_base(3), 5);
    return close(modulus_hp(psi, 2, 0.5), hardy_norm(psi, 0.5));
  });
  check("a = 1 is not an atom", [&] {
    GridFunction one(w, 3);
    for (auto& v : one.values()) v = 1;
    try {
      validate_atom(one, 0.5, 0, GroupPoint{});
    } catch (const AtomError& e) {
      for (auto v : e.violations())
        if (v == AtomViolation::NonzeroMean) return true;
    }
    return false;
  });
  check("counterexample atom has mean zero", [&] {
    const auto a = counterexample_atom(w, decompose(w.scaled_base(3) + 1, w), 0.5, 6);
    return std::abs(a.values.integral()) <= kTol;
  });
  check("single-atom martingale has finite Hardy norm", [&] {
    const Index alpha[] = {w.scaled_base(2) + 1};
    const auto spec = build_counterexample(w, 0.5, {alpha[0]}, LambdaRule::explicit_list, PhiSequence{}, 5, {1.0});
    return std::isfinite(hardy_norm(spec.realized, 0.5));
  });
  check("split at j = M_{|alpha|}", [&] {
    const auto spec = build_counterexample(w, 0.5, default_alphas(w, 9), LambdaRule::divergent, PhiSequence{}, 9);
    const Index j = w.scaled_base(spec.top(1));
    const auto parts = split_partial_sum(spec, j);
    const auto s = partial_sum(spec.realized, j);
    return sup_norm(parts.tail) <= kTol && all_close(parts.head, [&](Index i) { return s[i]; });
  });
  check("general divergence scan refuses bounded rho", [&] {
    std::vector<Index> cands;
    for (std::size_t k = 1; k < 10; ++k) cands.push_back(w.scaled_base(k) + w.scaled_base(k - 1));
    const std::size_t res[] = {10};
    try {
      divergence_scan(w, 0.5, DivergenceVariant::general, PhiSequence{}, res, cands);
    } catch (const Error&) {
      return true;
    }
    return false;
  });
  check("Simon sum of psi_0", [&] {
    const double p = 0.5;
    const auto s = simon_sum(character_function(m23, 0, 4), p);
    double expect = 0;
    for (Index k = 1; k <= m23.scaled_base(4); ++k) expect += 1 / std::pow(static_cast<double>(k), 2 - p);
    return close(s.sum, expect) && close(s.ratio, expect);
  });
  check("modulus scan with n_k = M_k gives error = omega", [&] {
    const auto r = modulus_convergence_scan(w, 0.5, ModulusFunctionRule::gap, ModulusIndexRule::Mn, 10);
    for (const auto& row : r.rows)
      if (!close(row[5], row[4])) return false;
    return true;
  });
  check("S_n a = 0 for n <= M_r", [&] {
    std::mt19937_64 rng(7);
    const auto a = random_atom(m23, 5, 0.5, 2, GroupPoint{{1, 2}}, rng);
    for (Index n = 0; n <= m23.scaled_base(2); ++n)
      if (sup_norm(partial_sum(a.values, n)) > kTol) return false;
    return true;
  });
  check("n mu(supp D_n) = 1 at n = M_k", [&] {
    for (std::size_t k = 0; k < 6; ++k) {
      const Index n = m234.scaled_base(k);
      if (!close(static_cast<double>(n) * support_measure(dirichlet_direct(m234, n, 6)), 1)) return false;
    }
    return true;
  });
  check("D_{M_k} = M_k on I_k, 0 elsewhere", [&] {
    for (std::size_t k = 0; k <= 5; ++k) {
      const auto D = dirichlet_direct(m234, m234.scaled_base(k), 5);
      const double Mk = static_cast<double>(m234.scaled_base(k));
      if (!all_close(D, [&](Index x) { return Complex(x % m234.scaled_base(k) == 0 ? Mk : 0.0); }))
        return false;
    }
    return true;
  });
  return out;
}

}  // namespace vilenkin::cli
