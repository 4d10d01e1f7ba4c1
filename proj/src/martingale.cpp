#include "vilenkin/martingale.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace vilenkin {
namespace {

void require_atom_exponent(double p) {
  if (!(p > 0 && p <= 1)) throw Error("atoms need 0 < p <= 1, got " + std::to_string(p));
}

std::string describe(const std::vector<AtomViolation>& violations) {
  std::string out = "not a p-atom:";
  for (auto v : violations) {
    out += ' ';
    out += to_string(v);
  }
  return out;
}

std::string describe(const std::string& condition, const std::vector<std::size_t>& failing) {
  std::ostringstream os;
  os << condition << " fails at k =";
  for (auto k : failing) os << ' ' << k;
  return os.str();
}

// Adds c * (D_{M_{t+1}} - D_{M_t}) to f.
void add_block(GridFunction& f, std::size_t t, double c) {
  const auto& m = f.generators();
  const Index Mt = m.scaled_base(t);
  const Index Mt1 = m.scaled_base(t + 1);
  for (Index x = 0; x < f.size(); x += Mt)
    f[x] += x % Mt1 == 0 ? c * static_cast<double>(Mt1 - Mt) : -c * static_cast<double>(Mt);
}

}  // namespace

double PAtom::sup_bound() const {
  return std::pow(static_cast<double>(values.generators().scaled_base(support_rank)), 1.0 / p);
}

std::string_view to_string(AtomViolation v) {
  switch (v) {
    case AtomViolation::NonzeroMean: return "mean";
    case AtomViolation::SupBound: return "bound";
    case AtomViolation::Support: return "support";
  }
  return "?";
}

AtomError::AtomError(std::vector<AtomViolation> violations)
    : Error(describe(violations)), violations_(std::move(violations)) {}

PAtom validate_atom(const GridFunction& a, double p, std::size_t support_rank,
                    const GroupPoint& base_point) {
  require_atom_exponent(p);
  const auto& m = a.generators();
  const std::size_t N = a.resolution();
  if (support_rank > N) throw Error("atom support rank exceeds the function's resolution");
  if (base_point.resolution() < support_rank) throw Error("base point does not resolve the support");

  GroupPoint base = base_point;
  base.coords.resize(support_rank);
  const Index base_index = index_of(base, m);
  const double bound = std::pow(static_cast<double>(m.scaled_base(support_rank)), 1.0 / p);

  Complex inside = 0;
  double largest = 0;
  bool leaks = false;
  for (Index x = 0; x < a.size(); ++x) {
    if (in_coset(x, base_index, support_rank, m)) {
      inside += a[x];
      largest = std::max(largest, std::abs(a[x]));
    } else if (a[x] != Complex{}) {
      leaks = true;
    }
  }
  const Complex integral = inside / static_cast<double>(a.size());

  std::vector<AtomViolation> violations;
  if (std::abs(integral) > kAtomTolerance) violations.push_back(AtomViolation::NonzeroMean);
  if (largest > bound * (1 + kAtomTolerance)) violations.push_back(AtomViolation::SupBound);
  if (leaks) violations.push_back(AtomViolation::Support);
  if (!violations.empty()) throw AtomError(std::move(violations));

  return PAtom{p, support_rank, std::move(base), a};
}

PAtom counterexample_atom(const GeneratorSequence& m, const VIndex& alpha, double p, std::size_t N) {
  require_atom_exponent(p);
  if (alpha.top + 1 > N)
    throw Error("resolution " + std::to_string(N) + " is too small for an atom at |alpha| = " +
                std::to_string(alpha.top));
  GridFunction a(m, N);
  const double scale =
      std::pow(static_cast<double>(m.scaled_base(alpha.top)), 1.0 / p - 1) / m.lambda();
  add_block(a, alpha.top, scale);
  return PAtom{p, alpha.top, GroupPoint{std::vector<Radix>(alpha.top, 0)}, std::move(a)};
}

PAtom random_atom(const GeneratorSequence& m, std::size_t N, double p, std::size_t support_rank,
                  const GroupPoint& base_point, std::mt19937_64& rng, double fill) {
  require_atom_exponent(p);
  if (support_rank >= N) throw Error("random atoms need support rank < N");
  const Radix children = m.radix(support_rank);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  std::vector<double> level(children);
  for (auto& v : level) v = uniform(rng);
  double mean = 0;
  for (double v : level) mean += v;
  mean /= children;
  double largest = 0;
  for (auto& v : level) {
    v -= mean;
    largest = std::max(largest, std::abs(v));
  }
  const double bound = std::pow(static_cast<double>(m.scaled_base(support_rank)), 1.0 / p);
  const double scale = largest > 0 ? fill * bound / largest : 0;

  GroupPoint base = base_point;
  base.coords.resize(support_rank);
  const Index base_index = index_of(base, m);
  const Index Mr = m.scaled_base(support_rank);
  GridFunction a(m, N);
  for (Index x = 0; x < a.size(); ++x)
    if (in_coset(x, base_index, support_rank, m)) a[x] = scale * level[(x / Mr) % children];
  return PAtom{p, support_rank, std::move(base), std::move(a)};
}

double PhiSequence::operator()(const GeneratorSequence& m, Index n) const {
  const double Mtop = n == 0 ? 1.0 : static_cast<double>(m.scaled_base(decompose(n, m).top));
  switch (kind) {
    case Kind::constant: return parameter;
    case Kind::log_top: return 1.0 + std::log(Mtop);
    case Kind::power_top: return std::pow(Mtop, parameter);
  }
  return parameter;
}

std::string PhiSequence::to_string() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind) {
    case Kind::constant: os << "constant:" << parameter; break;
    case Kind::log_top: os << "log"; break;
    case Kind::power_top: os << "power:" << parameter; break;
  }
  return os.str();
}

PhiSequence PhiSequence::parse(std::string_view text) {
  auto number = [&](std::string_view s) {
    double v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
      throw ParseError("malformed Phi sequence '" + std::string(text) + "'");
    return v;
  };
  if (text == "log") return {Kind::log_top, 0};
  if (text.starts_with("constant:")) {
    const double c = number(text.substr(9));
    if (!(c > 0)) throw ParseError("constant Phi must be positive");
    return {Kind::constant, c};
  }
  if (text.starts_with("power:")) {
    const double s = number(text.substr(6));
    if (!(s >= 0)) throw ParseError("power Phi needs a nonnegative exponent");
    return {Kind::power_top, s};
  }
  throw ParseError("unknown Phi sequence '" + std::string(text) + "'");
}

std::string_view to_string(LambdaRule rule) {
  switch (rule) {
    case LambdaRule::divergent: return "divergent";
    case LambdaRule::gap: return "gap";
    case LambdaRule::explicit_list: return "explicit";
  }
  return "?";
}

LambdaRule parse_lambda_rule(std::string_view text) {
  if (text == "divergent") return LambdaRule::divergent;
  if (text == "gap") return LambdaRule::gap;
  if (text == "explicit") return LambdaRule::explicit_list;
  throw ParseError("unknown lambda rule '" + std::string(text) + "'");
}

GrowthConditionError::GrowthConditionError(const std::string& condition,
                                           std::vector<std::size_t> failing)
    : Error(describe(condition, failing)), failing_(std::move(failing)) {}

std::size_t MartingaleSpec::top(std::size_t k) const { return decompose(alphas.at(k), generators).top; }

std::size_t MartingaleSpec::bottom(std::size_t k) const {
  return decompose(alphas.at(k), generators).bottom;
}

std::size_t MartingaleSpec::realized_terms() const {
  std::size_t count = 0;
  while (count < alphas.size() && top(count) < resolution) ++count;
  return count;
}

double MartingaleSpec::atom_scale(std::size_t k) const {
  return std::pow(static_cast<double>(generators.scaled_base(top(k))), 1.0 / p - 1) / lambda_max;
}

double MartingaleSpec::block_coefficient(std::size_t k) const { return lambdas.at(k) * atom_scale(k); }

double MartingaleSpec::budget() const {
  double sum = 0;
  for (double l : lambdas) sum += std::pow(std::abs(l), p);
  return sum;
}

double MartingaleSpec::tail_budget(std::size_t n) const {
  double sum = 0;
  const std::size_t terms = realized_terms();
  for (std::size_t k = 0; k < terms; ++k)
    if (top(k) >= n) sum += std::pow(std::abs(lambdas[k]), p);
  return sum;
}

namespace {

void check_ordering(const GeneratorSequence& m, const std::vector<Index>& alphas) {
  if (alphas.empty()) throw Error("a counterexample needs at least one alpha");
  std::vector<std::size_t> failing;
  for (std::size_t k = 0; k < alphas.size(); ++k) {
    if (alphas[k] == 0) {
      failing.push_back(k);
      continue;
    }
    if (k > 0 && (alphas[k] <= alphas[k - 1] ||
                  decompose(alphas[k], m).top <= decompose(alphas[k - 1], m).top))
      failing.push_back(k);
  }
  if (!failing.empty())
    throw GrowthConditionError("alphas positive with strictly increasing |alpha_k|", failing);
}

double top_bottom_ratio(const GeneratorSequence& m, Index n) {
  const VIndex v = decompose(n, m);
  return static_cast<double>(m.scaled_base(v.top)) / static_cast<double>(m.scaled_base(v.bottom));
}

}  // namespace

MartingaleSpec assemble_counterexample(const GeneratorSequence& m, double p,
                                       std::vector<Index> alphas, std::vector<double> lambdas,
                                       LambdaRule rule, PhiSequence phi, std::size_t N) {
  require_atom_exponent(p);
  check_resolution(m, N);
  check_ordering(m, alphas);
  if (lambdas.size() != alphas.size())
    throw Error("need one lambda per alpha (" + std::to_string(alphas.size()) + "), got " +
                std::to_string(lambdas.size()));

  MartingaleSpec spec{m, p, std::move(alphas), std::move(lambdas), rule, phi, N, m.lambda(),
                      GridFunction(m, N)};
  const std::size_t terms = spec.realized_terms();
  for (std::size_t k = 0; k < terms; ++k)
    add_block(spec.realized, spec.top(k), spec.block_coefficient(k));
  return spec;
}

MartingaleSpec build_counterexample(const GeneratorSequence& m, double p, std::vector<Index> alphas,
                                    LambdaRule rule, PhiSequence phi, std::size_t N,
                                    std::vector<double> explicit_lambdas) {
  require_atom_exponent(p);
  check_ordering(m, alphas);
  const double s = 1.0 / p - 1;
  std::vector<double> lambdas;
  std::vector<std::size_t> failing;

  switch (rule) {
    case LambdaRule::divergent: {
      for (Index a : alphas)
        lambdas.push_back(std::pow(1.0 / top_bottom_ratio(m, a), s / 2) * std::sqrt(phi(m, a)));
      // The summands of sum |lambda_k|^p must not grow along the sequence.
      for (std::size_t k = 1; k < lambdas.size(); ++k)
        if (std::pow(lambdas[k], p) > std::pow(lambdas[k - 1], p) * (1 + 1e-12)) failing.push_back(k);
      if (!failing.empty()) throw GrowthConditionError("summable lambda_k^p tail", failing);
      break;
    }
    case LambdaRule::gap: {
      for (std::size_t k = 1; k < alphas.size(); ++k) {
        const double prev = top_bottom_ratio(m, alphas[k - 1]);
        const double next = top_bottom_ratio(m, alphas[k]);
        if (!(next > prev) || next < prev * prev) failing.push_back(k);
      }
      if (!failing.empty()) throw GrowthConditionError("gap conditions R_k increasing, R_{k+1} >= R_k^2", failing);
      for (Index a : alphas) lambdas.push_back(m.lambda() * std::pow(1.0 / top_bottom_ratio(m, a), s));
      break;
    }
    case LambdaRule::explicit_list:
      lambdas = std::move(explicit_lambdas);
      break;
  }
  return assemble_counterexample(m, p, std::move(alphas), std::move(lambdas), rule, phi, N);
}

std::vector<Index> default_alphas(const GeneratorSequence& m, std::size_t N) {
  std::vector<Index> out;
  for (std::size_t e = 1; e < N && e < m.max_resolution(); e *= 2) out.push_back(m.scaled_base(e) + 1);
  return out;
}

std::vector<Index> extract_gap_subsequence(const GeneratorSequence& m,
                                           std::span<const Index> candidates) {
  std::vector<Index> kept;
  double last = 0;
  for (Index n : candidates) {
    if (n == 0) continue;
    const double r = top_bottom_ratio(m, n);
    if (kept.empty() || (r > last && r >= last * last)) {
      if (!kept.empty() && n <= kept.back()) continue;
      kept.push_back(n);
      last = r;
    }
  }
  return kept;
}

SpectralVector closed_coefficients(const MartingaleSpec& spec) {
  const auto& m = spec.generators;
  SpectralVector c(m, spec.resolution);
  const std::size_t terms = spec.realized_terms();
  for (std::size_t k = 0; k < terms; ++k) {
    const std::size_t t = spec.top(k);
    const double value = spec.block_coefficient(k);
    for (Index j = m.scaled_base(t); j < m.scaled_base(t + 1); ++j) c[j] = value;
  }
  return c;
}

PartialSumParts split_partial_sum(const MartingaleSpec& spec, Index j) {
  const auto& m = spec.generators;
  const std::size_t N = spec.resolution;
  if (j > m.scaled_base(N))
    throw Error("S_" + std::to_string(j) + " is not resolvable at resolution " + std::to_string(N));

  PartialSumParts parts{GridFunction(m, N), GridFunction(m, N), std::nullopt};
  const std::size_t terms = spec.realized_terms();
  for (std::size_t k = 0; k < terms; ++k) {
    const std::size_t t = spec.top(k);
    const Index lo = m.scaled_base(t), hi = m.scaled_base(t + 1);
    if (hi <= j) {
      add_block(parts.head, t, spec.block_coefficient(k));
    } else if (lo <= j) {
      parts.block = k;
      if (j > lo) {
        parts.tail = dirichlet_closed(m, j - lo, N);
        parts.tail.multiply(character_function(m, lo, N));
        parts.tail *= spec.block_coefficient(k);
      }
    }
  }
  return parts;
}

GridFunction closed_partial_sum(const MartingaleSpec& spec, Index j) {
  auto parts = split_partial_sum(spec, j);
  return parts.head += parts.tail;
}

}  // namespace vilenkin
