#include "vilenkin/norms.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "vilenkin/error.hpp"

namespace vilenkin {
namespace {

void require_exponent(double p) {
  if (!(p > 0) || !std::isfinite(p)) throw Error("exponent p must be positive, got " + std::to_string(p));
}

}  // namespace

std::string_view to_string(NormKind kind) {
  switch (kind) {
    case NormKind::Lp: return "Lp";
    case NormKind::WeakLp: return "WeakLp";
    case NormKind::Hardy: return "Hardy";
  }
  return "?";
}

double lp_power(std::span<const Complex> values, double p) {
  require_exponent(p);
  double sum = 0;
  for (const auto& v : values) {
    const double a = std::abs(v);
    if (a != 0) sum += p == 1 ? a : std::pow(a, p);
  }
  return sum / static_cast<double>(values.size());
}

double lp_norm(std::span<const Complex> values, double p) {
  const double power = lp_power(values, p);
  return p == 1 ? power : std::pow(power, 1.0 / p);
}

double lp_norm(const GridFunction& f, double p) { return lp_norm(f.values(), p); }

double sup_norm(const GridFunction& f) {
  double best = 0;
  for (const auto& v : f.values()) best = std::max(best, std::abs(v));
  return best;
}

double weak_lp_norm(std::span<const Complex> values, double p) {
  require_exponent(p);
  std::vector<double> mags(values.size());
  std::transform(values.begin(), values.end(), mags.begin(), [](Complex v) { return std::abs(v); });
  std::sort(mags.begin(), mags.end(), std::greater<>());

  const double total = static_cast<double>(mags.size());
  double best = 0;
  for (std::size_t i = 0; i < mags.size(); ++i) {
    if (mags[i] == 0) break;
    if (i > 0 && mags[i] == mags[i - 1]) continue;
    const double level = mags[i] * (1.0 - kWeakLevelOffset);
    const auto above = std::partition_point(mags.begin(), mags.end(),
                                            [level](double a) { return a > level; });
    const double measure = static_cast<double>(above - mags.begin()) / total;
    best = std::max(best, level * std::pow(measure, 1.0 / p));
  }
  return best;
}

double weak_lp_norm(const GridFunction& f, double p) { return weak_lp_norm(f.values(), p); }

GridFunction maximal_function(const GridFunction& f) {
  GridFunction out(f.generators(), f.resolution());
  const auto& m = f.generators();
  const std::size_t N = f.resolution();
  // Coarsest first: level k averages over the rank-k coset containing x.
  for (std::size_t k = 0; k <= N; ++k) {
    const Index Mk = m.scaled_base(k);
    std::vector<Complex> sums(Mk);
    for (Index i = 0; i < f.size(); ++i) sums[i % Mk] += f[i];
    const double scale = static_cast<double>(Mk) / static_cast<double>(f.size());
    for (Index i = 0; i < f.size(); ++i) {
      const double level = std::abs(sums[i % Mk] * scale);
      if (level > out[i].real()) out[i] = level;
    }
  }
  return out;
}

double hardy_norm(const GridFunction& f, double p) {
  require_exponent(p);
  return lp_norm(maximal_function(f), p);
}

GridFunction restricted_maximal(const GridFunction& f, std::span<const Index> indices) {
  if (indices.empty()) throw Error("restricted maximal operator needs at least one index");
  for (Index n : indices)
    if (n > f.size())
      throw Error("S_" + std::to_string(n) + " is not resolvable at resolution " +
                  std::to_string(f.resolution()));

  const SpectralVector coeffs = forward(f);
  GridFunction out(f.generators(), f.resolution());
  for (Index n : indices) {
    SpectralVector truncated = coeffs;
    auto c = truncated.values();
    std::fill(c.begin() + static_cast<std::ptrdiff_t>(n), c.end(), Complex{});
    const GridFunction s = inverse(truncated);
    for (Index i = 0; i < out.size(); ++i) {
      const double a = std::abs(s[i]);
      if (a > out[i].real()) out[i] = a;
    }
  }
  return out;
}

double modulus_hp(const GridFunction& f, std::size_t n, double p) {
  require_exponent(p);
  if (n > f.resolution())
    throw Error("modulus index " + std::to_string(n) + " exceeds resolution " +
                std::to_string(f.resolution()));
  return hardy_norm(f - conditional_expectation(f, n), p);
}

LebesgueBounds lebesgue_bounds(const GeneratorSequence& m, Index n, DigitConvention convention) {
  const Variation var = variation(decompose(n, m), m, convention);
  const double lambda = m.lambda();
  const double v = static_cast<double>(var.v);
  const double vs = static_cast<double>(var.v_star);
  return {v / (4 * lambda) + vs / lambda + 1 / (2 * lambda), 1.5 * v + 4 * vs - 1};
}

LebesgueReport lebesgue_constant(const GeneratorSequence& m, Index n, std::size_t N,
                                 DigitConvention convention) {
  LebesgueReport row;
  row.n = n;
  row.resolution = N;
  row.convention = convention;
  row.value = lp_norm(dirichlet_direct(m, n, N), 1.0);
  row.bounds = lebesgue_bounds(m, n, convention);
  return row;
}

std::vector<LebesgueReport> lebesgue_table(const GeneratorSequence& m, std::size_t N,
                                           DigitConvention convention, Index limit) {
  check_resolution(m, N);
  Index end = m.scaled_base(N);
  if (limit != 0) end = std::min(end, limit);
  std::vector<LebesgueReport> rows;
  DirichletSweep sweep(m, N);
  sweep.advance();
  for (Index n = 1; n < end; ++n, sweep.advance()) {
    LebesgueReport row;
    row.n = n;
    row.resolution = N;
    row.convention = convention;
    row.value = lp_norm(sweep.kernel(), 1.0);
    row.bounds = lebesgue_bounds(m, n, convention);
    rows.push_back(row);
  }
  return rows;
}

ConventionVerdict select_convention(const GeneratorSequence& m, std::size_t N, Index limit) {
  ConventionVerdict verdict;
  for (const auto& row : lebesgue_table(m, N, DigitConvention::from0, limit)) {
    ++verdict.rows;
    if (!row.within_bounds()) verdict.violations_from0.push_back(row.n);
    LebesgueReport other = row;
    other.bounds = lebesgue_bounds(m, row.n, DigitConvention::from1);
    if (!other.within_bounds()) verdict.violations_from1.push_back(row.n);
  }
  verdict.winner = verdict.violations_from1.size() < verdict.violations_from0.size()
                       ? DigitConvention::from1
                       : DigitConvention::from0;
  return verdict;
}

double support_measure(const GridFunction& f, double threshold) {
  std::size_t count = 0;
  for (const auto& v : f.values())
    if (std::abs(v) > threshold) ++count;
  return static_cast<double>(count) / static_cast<double>(f.size());
}

}  // namespace vilenkin
