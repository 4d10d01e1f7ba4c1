#include "vilenkin/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "vilenkin/error.hpp"
#include "vilenkin/norms.hpp"

namespace vilenkin {
namespace {

std::mt19937_64 make_rng(std::uint64_t seed, std::size_t N, std::uint32_t tag) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(N), tag};
  return std::mt19937_64(seq);
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string join(std::span<const std::size_t> values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(values[i]);
  }
  return out;
}

void check_scan_resolution(const GeneratorSequence& m, std::size_t N) {
  check_resolution(m, N);
  if (m.scaled_base(N) > kScanGridCap)
    throw Error("scan resolution " + std::to_string(N) + " exceeds the scan cap M_N <= " +
                std::to_string(kScanGridCap));
}

double top_bottom_ratio(const VIndex& v, const GeneratorSequence& m) {
  return static_cast<double>(m.scaled_base(v.top)) / static_cast<double>(m.scaled_base(v.bottom));
}

// (M_{<n>} / M_{|n|})^{1/p-1}; 1 for n = 0.
double rate(const GeneratorSequence& m, Index n, double p) {
  if (n == 0) return 1.0;
  return std::pow(1.0 / top_bottom_ratio(decompose(n, m), m), 1.0 / p - 1);
}

GridFunction random_function(const GeneratorSequence& m, std::size_t N, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  GridFunction f(m, N);
  for (auto& v : f.values()) {
    const double re = normal(rng);
    v = Complex(re, normal(rng));
  }
  return f;
}

double max_abs_difference(const GridFunction& a, const GridFunction& b) {
  double worst = 0;
  for (Index i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

MartingaleSpec default_counterexample(const GeneratorSequence& m, double p, std::size_t N) {
  return build_counterexample(m, p, default_alphas(m, N), LambdaRule::divergent,
                              PhiSequence{PhiSequence::Kind::constant, 1.0}, N);
}

}  // namespace

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::bounded: return "bounded";
    case Verdict::growing: return "growing";
    case Verdict::violated: return "violated";
  }
  return "?";
}

std::size_t trailing_increasing_run(std::span<const double> trace) {
  if (trace.empty()) return 0;
  std::size_t run = 1;
  for (std::size_t i = trace.size() - 1; i > 0 && trace[i] > trace[i - 1]; --i) ++run;
  return run;
}

bool is_growing(std::span<const double> trace, const ScanThresholds& thresholds) {
  const std::size_t run = trailing_increasing_run(trace);
  if (run < thresholds.growth_run || run < 2) return false;
  const double first = trace[trace.size() - run];
  return first > 0 && trace.back() / first >= thresholds.growth_factor;
}

double spread(std::span<const double> values) {
  if (values.empty()) return 1.0;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (*lo <= 0) return std::numeric_limits<double>::infinity();
  return *hi / *lo;
}

double atom_ratio(const PAtom& atom, Index n) {
  if (n == 0) return 0.0;
  return hardy_norm(partial_sum(atom.values, n), atom.p) *
         rate(atom.values.generators(), n, atom.p);
}

ScenarioResult atom_ratio_scan(const GeneratorSequence& m, double p, std::size_t N,
                               std::size_t trials, std::uint64_t seed,
                               const ScanThresholds& thresholds, std::size_t reference_N) {
  if (!(p > 0 && p < 1)) throw Error("atom ratio scan needs 0 < p < 1");
  if (reference_N == 0) reference_N = N >= 3 ? N - 2 : 1;
  if (reference_N >= N) throw Error("reference resolution must be below N");
  check_scan_resolution(m, N);

  ScenarioResult out;
  out.scenario = "atom_ratio";
  out.seed = seed;
  out.parameters = {{"m", m.text()},
                    {"p", format_double(p)},
                    {"N", std::to_string(N)},
                    {"reference_N", std::to_string(reference_N)},
                    {"trials", std::to_string(trials)}};
  out.columns = {"resolution", "trial", "support_rank", "max_ratio", "argmax_n"};

  for (std::size_t res : {reference_N, N}) {
    auto rng = make_rng(seed, res, 1);
    const Index MN = m.scaled_base(res);
    std::vector<double> rates(MN + 1, 0.0);
    for (Index n = 1; n <= MN; ++n) rates[n] = rate(m, n, p);

    double best = 0;
    for (std::size_t trial = 0; trial < trials; ++trial) {
      const auto rank = std::uniform_int_distribution<std::size_t>(0, res - 1)(rng);
      GroupPoint base;
      for (std::size_t k = 0; k < rank; ++k)
        base.coords.push_back(std::uniform_int_distribution<Radix>(0, m.radix(k) - 1)(rng));
      const PAtom atom = random_atom(m, res, p, rank, base, rng);

      // S_n a vanishes for n <= M_rank, so the sweep starts there.
      PartialSumSweep sweep(atom.values);
      const Index start = m.scaled_base(rank);
      sweep.advance_to(start);
      double trial_best = 0;
      Index argmax = 0;
      for (Index n = start + 1; n <= MN; ++n) {
        sweep.advance();
        const double r = hardy_norm(sweep.current(), p) * rates[n];
        if (r > trial_best) {
          trial_best = r;
          argmax = n;
        }
      }
      best = std::max(best, trial_best);
      out.rows.push_back({static_cast<double>(res), static_cast<double>(trial),
                          static_cast<double>(rank), trial_best, static_cast<double>(argmax)});
    }
    out.trace.push_back(best);
    out.constants["max_ratio_N" + std::to_string(res)] = best;
  }

  const double quotient = out.trace[1] / out.trace[0];
  out.constants["quotient"] = quotient;
  out.verdict = quotient <= thresholds.stability_factor ? Verdict::bounded : Verdict::growing;
  return out;
}

std::string_view to_string(DivergenceVariant v) {
  return v == DivergenceVariant::Mn_plus_1 ? "Mn_plus_1" : "general";
}

DivergenceVariant parse_divergence_variant(std::string_view text) {
  if (text == "Mn_plus_1") return DivergenceVariant::Mn_plus_1;
  if (text == "general") return DivergenceVariant::general;
  throw ParseError("unknown divergence variant '" + std::string(text) + "'");
}

bool unbounded_at_desk_scale(std::span<const double> sequence) {
  if (sequence.size() < 2) return false;
  const std::size_t half = sequence.size() / 2;
  const double early = *std::max_element(sequence.begin(), sequence.begin() + static_cast<std::ptrdiff_t>(half));
  const double late = *std::max_element(sequence.begin() + static_cast<std::ptrdiff_t>(half), sequence.end());
  return late > early;
}

ScenarioResult divergence_scan(const GeneratorSequence& m, double p, DivergenceVariant variant,
                               const PhiSequence& phi, std::span<const std::size_t> resolutions,
                               std::span<const Index> candidates,
                               const ScanThresholds& thresholds) {
  if (!(p > 0 && p < 1)) throw Error("divergence scan needs 0 < p < 1");
  if (resolutions.empty()) throw Error("divergence scan needs at least one resolution");
  const std::size_t Nmax = *std::max_element(resolutions.begin(), resolutions.end());
  for (auto N : resolutions) check_scan_resolution(m, N);

  std::vector<Index> pool;
  if (variant == DivergenceVariant::Mn_plus_1) {
    for (std::size_t k = 1; k < Nmax; ++k) pool.push_back(m.scaled_base(k) + 1);
  } else {
    for (Index n : candidates)
      if (n > 0 && decompose(n, m).top < Nmax) pool.push_back(n);
  }
  if (pool.empty()) throw Error("no candidate indices are resolved at N = " + std::to_string(Nmax));

  std::vector<double> rhos, growth;
  for (Index n : pool) {
    const VIndex v = decompose(n, m);
    rhos.push_back(static_cast<double>(v.rho()));
    growth.push_back(std::pow(top_bottom_ratio(v, m), 1.0 / p - 1) / phi(m, n));
  }
  if (!unbounded_at_desk_scale(rhos))
    throw Error("rho(n_k) stays bounded over the resolved candidates");
  if (!unbounded_at_desk_scale(growth))
    throw Error("(M_{|n_k|}/M_{<n_k>})^{1/p-1} / Phi_{n_k} stays bounded over the resolved candidates");

  std::vector<Index> alphas;
  if (variant == DivergenceVariant::Mn_plus_1) {
    alphas = pool;
  } else {
    double last = 0;
    for (Index n : pool) {
      const VIndex v = decompose(n, m);
      if (v.rho() == 0) continue;
      if (!alphas.empty() && v.top <= decompose(alphas.back(), m).top) continue;
      const double term =
          std::pow(std::pow(1.0 / top_bottom_ratio(v, m), (1.0 / p - 1) / 2) * std::sqrt(phi(m, n)), p);
      if (alphas.empty() || term <= last / 2) {
        alphas.push_back(n);
        last = term;
      }
    }
  }

  ScenarioResult out;
  out.scenario = "divergence";
  out.parameters = {{"m", m.text()},
                    {"p", format_double(p)},
                    {"variant", std::string(to_string(variant))},
                    {"phi", phi.to_string()},
                    {"resolutions", join(resolutions)}};
  out.columns = {"resolution", "k", "alpha", "top", "bottom", "weak_total", "weak_head",
                 "weak_tail", "crosscheck_error"};

  double worst_crosscheck = 0;
  std::vector<double> largest_trace;
  std::vector<std::vector<double>> traces;
  std::vector<std::size_t> sorted(resolutions.begin(), resolutions.end());
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t N : sorted) {
    const MartingaleSpec spec =
        build_counterexample(m, p, alphas, LambdaRule::divergent, phi, N);
    const SpectralVector coeffs = forward(spec.realized);
    std::vector<double> trace;
    for (std::size_t k = 0; k < spec.realized_terms(); ++k) {
      const Index a = spec.alphas[k];
      PartialSumParts parts = split_partial_sum(spec, a);
      GridFunction closed = parts.head + parts.tail;

      SpectralVector truncated = coeffs;
      auto c = truncated.values();
      std::fill(c.begin() + static_cast<std::ptrdiff_t>(a), c.end(), Complex{});
      const GridFunction spectral = inverse(truncated);
      const double scale = std::max(1.0, sup_norm(spectral));
      const double crosscheck = max_abs_difference(closed, spectral) / scale;
      worst_crosscheck = std::max(worst_crosscheck, crosscheck);

      const double inv_phi = 1.0 / phi(m, a);
      closed *= inv_phi;
      parts.head *= inv_phi;
      parts.tail *= inv_phi;
      const double total = weak_lp_norm(closed, p);
      trace.push_back(total);
      out.rows.push_back({static_cast<double>(N), static_cast<double>(k), static_cast<double>(a),
                          static_cast<double>(spec.top(k)), static_cast<double>(spec.bottom(k)),
                          total, weak_lp_norm(parts.head, p), weak_lp_norm(parts.tail, p),
                          crosscheck});
    }
    traces.push_back(trace);
  }
  out.trace = traces.back();

  double prefix_mismatch = 0;
  for (const auto& t : traces)
    for (std::size_t i = 0; i < t.size() && i < out.trace.size(); ++i)
      prefix_mismatch = std::max(prefix_mismatch, std::abs(t[i] - out.trace[i]) / std::max(1.0, out.trace[i]));

  out.constants["crosscheck_error"] = worst_crosscheck;
  out.constants["prefix_mismatch"] = prefix_mismatch;
  out.constants["increasing_run"] = static_cast<double>(trailing_increasing_run(out.trace));
  if (!out.trace.empty() && out.trace.front() > 0)
    out.constants["growth_factor"] = out.trace.back() / out.trace.front();
  out.constants["budget"] =
      build_counterexample(m, p, alphas, LambdaRule::divergent, phi, Nmax).budget();

  if (worst_crosscheck > thresholds.equality_tolerance)
    out.verdict = Verdict::violated;
  else
    out.verdict = is_growing(out.trace, thresholds) ? Verdict::growing : Verdict::bounded;
  return out;
}

std::string_view to_string(BoundednessVariant v) {
  switch (v) {
    case BoundednessVariant::Mn: return "Mn";
    case BoundednessVariant::Mn_plus_Mn_minus_1: return "Mn_plus_Mn-1";
    case BoundednessVariant::rho_bounded: return "rho_bounded";
  }
  return "?";
}

BoundednessVariant parse_boundedness_variant(std::string_view text) {
  if (text == "Mn") return BoundednessVariant::Mn;
  if (text == "Mn_plus_Mn-1") return BoundednessVariant::Mn_plus_Mn_minus_1;
  if (text == "rho_bounded") return BoundednessVariant::rho_bounded;
  throw ParseError("unknown boundedness variant '" + std::string(text) + "'");
}

std::vector<Index> boundedness_indices(const GeneratorSequence& m, BoundednessVariant variant,
                                       std::size_t N, std::size_t rho) {
  std::vector<Index> out;
  switch (variant) {
    case BoundednessVariant::Mn:
      for (std::size_t k = 0; k <= N; ++k) out.push_back(m.scaled_base(k));
      break;
    case BoundednessVariant::Mn_plus_Mn_minus_1:
      for (std::size_t k = 1; k < N; ++k) out.push_back(m.scaled_base(k) + m.scaled_base(k - 1));
      break;
    case BoundednessVariant::rho_bounded:
      if (rho == 0) throw Error("rho_bounded needs rho >= 1");
      for (std::size_t k = rho; k < N; ++k) out.push_back(m.scaled_base(k) + m.scaled_base(k - rho));
      break;
  }
  return out;
}

ScenarioResult boundedness_scan(const GeneratorSequence& m, double p, BoundednessVariant variant,
                                std::span<const std::size_t> resolutions, std::size_t functions,
                                std::uint64_t seed, const ScanThresholds& thresholds,
                                std::size_t rho) {
  if (!(p > 0 && p <= 1)) throw Error("boundedness scan needs 0 < p <= 1");
  if (resolutions.empty()) throw Error("boundedness scan needs at least one resolution");

  ScenarioResult out;
  out.scenario = "boundedness";
  out.seed = seed;
  out.parameters = {{"m", m.text()},
                    {"p", format_double(p)},
                    {"variant", std::string(to_string(variant))},
                    {"resolutions", join(resolutions)},
                    {"functions", std::to_string(functions)}};
  if (variant == BoundednessVariant::rho_bounded) out.parameters["rho"] = std::to_string(rho);
  out.columns = {"resolution", "function", "k", "n_k", "ratio"};

  for (std::size_t N : resolutions) {
    check_scan_resolution(m, N);
    auto rng = make_rng(seed, N, 2);
    const auto indices = boundedness_indices(m, variant, N, rho);
    if (indices.empty()) throw Error("no indices n_k <= M_N for this variant");

    std::vector<GridFunction> fs;
    for (std::size_t i = 0; i < functions; ++i) fs.push_back(random_function(m, N, rng));
    fs.push_back(default_counterexample(m, p, N).realized);

    double best = 0;
    for (std::size_t i = 0; i < fs.size(); ++i) {
      const double h = hardy_norm(fs[i], p);
      const SpectralVector coeffs = forward(fs[i]);
      for (std::size_t k = 0; k < indices.size(); ++k) {
        SpectralVector truncated = coeffs;
        auto c = truncated.values();
        std::fill(c.begin() + static_cast<std::ptrdiff_t>(indices[k]), c.end(), Complex{});
        const double ratio = hardy_norm(inverse(truncated), p) / h;
        best = std::max(best, ratio);
        out.rows.push_back({static_cast<double>(N), static_cast<double>(i), static_cast<double>(k),
                            static_cast<double>(indices[k]), ratio});
      }
    }
    out.trace.push_back(best);
    out.constants["max_ratio_N" + std::to_string(N)] = best;
  }
  out.constants["spread"] = spread(out.trace);
  out.verdict = spread(out.trace) <= thresholds.stability_factor ? Verdict::bounded : Verdict::growing;
  return out;
}

SimonSum simon_sum(const GridFunction& f, double p) {
  if (!(p > 0 && p < 1)) throw Error("simon_sum needs 0 < p < 1");
  SimonSum out;
  PartialSumSweep sweep(f);
  for (Index k = 1; k <= f.size(); ++k) {
    sweep.advance();
    out.sum += lp_power(sweep.current().values(), p) / std::pow(static_cast<double>(k), 2 - p);
  }
  out.hardy_power = std::pow(hardy_norm(f, p), p);
  out.ratio = out.sum / out.hardy_power;
  return out;
}

ScenarioResult simon_scan(const GeneratorSequence& m, double p,
                          std::span<const std::size_t> resolutions, std::size_t functions,
                          std::uint64_t seed, const ScanThresholds& thresholds) {
  if (resolutions.empty()) throw Error("simon scan needs at least one resolution");
  ScenarioResult out;
  out.scenario = "simon";
  out.seed = seed;
  out.parameters = {{"m", m.text()},
                    {"p", format_double(p)},
                    {"resolutions", join(resolutions)},
                    {"functions", std::to_string(functions)}};
  out.columns = {"resolution", "function", "sum", "hardy_power", "ratio"};

  std::vector<double> random_max, counter;
  for (std::size_t N : resolutions) {
    check_scan_resolution(m, N);
    auto rng = make_rng(seed, N, 3);
    double best = 0;
    for (std::size_t i = 0; i < functions; ++i) {
      const SimonSum s = simon_sum(random_function(m, N, rng), p);
      best = std::max(best, s.ratio);
      out.rows.push_back({static_cast<double>(N), static_cast<double>(i), s.sum, s.hardy_power, s.ratio});
    }
    const SimonSum c = simon_sum(default_counterexample(m, p, N).realized, p);
    out.rows.push_back({static_cast<double>(N), static_cast<double>(functions), c.sum, c.hardy_power, c.ratio});
    random_max.push_back(best);
    counter.push_back(c.ratio);
    out.constants["max_random_ratio_N" + std::to_string(N)] = best;
    out.constants["counterexample_ratio_N" + std::to_string(N)] = c.ratio;
  }
  out.trace = random_max;
  out.constants["random_spread"] = spread(random_max);
  out.constants["counterexample_spread"] = spread(counter);
  out.notes.push_back("function index " + std::to_string(functions) + " is the counterexample martingale");
  const bool stable = spread(random_max) <= thresholds.stability_factor &&
                      spread(counter) <= thresholds.stability_factor;
  out.verdict = stable ? Verdict::bounded : Verdict::growing;
  return out;
}

std::string_view to_string(ModulusFunctionRule r) {
  return r == ModulusFunctionRule::gap ? "gap" : "fast_decay";
}

std::string_view to_string(ModulusIndexRule r) {
  switch (r) {
    case ModulusIndexRule::alphas: return "alphas";
    case ModulusIndexRule::Mn: return "Mn";
    case ModulusIndexRule::Mn_plus_1: return "Mn_plus_1";
  }
  return "?";
}

ModulusFunctionRule parse_modulus_function_rule(std::string_view text) {
  if (text == "gap") return ModulusFunctionRule::gap;
  if (text == "fast_decay") return ModulusFunctionRule::fast_decay;
  throw ParseError("unknown modulus function rule '" + std::string(text) + "'");
}

ModulusIndexRule parse_modulus_index_rule(std::string_view text) {
  if (text == "alphas") return ModulusIndexRule::alphas;
  if (text == "Mn") return ModulusIndexRule::Mn;
  if (text == "Mn_plus_1") return ModulusIndexRule::Mn_plus_1;
  throw ParseError("unknown modulus index rule '" + std::string(text) + "'");
}

MartingaleSpec modulus_scan_martingale(const GeneratorSequence& m, double p,
                                       ModulusFunctionRule rule, std::size_t N) {
  std::vector<Index> candidates;
  for (std::size_t k = 1; k < N; ++k) candidates.push_back(m.scaled_base(k) + 1);
  if (rule == ModulusFunctionRule::gap)
    return build_counterexample(m, p, extract_gap_subsequence(m, candidates), LambdaRule::gap,
                                PhiSequence{}, N);
  std::vector<double> lambdas;
  for (Index n : candidates) lambdas.push_back(std::pow(rate(m, n, p), 2.0));
  return build_counterexample(m, p, candidates, LambdaRule::explicit_list, PhiSequence{}, N, lambdas);
}

ScenarioResult modulus_convergence_scan(const GeneratorSequence& m, double p,
                                        ModulusFunctionRule f_rule, ModulusIndexRule n_rule,
                                        std::size_t N, const ScanThresholds& thresholds) {
  if (!(p > 0 && p < 1)) throw Error("modulus scan needs 0 < p < 1");
  check_scan_resolution(m, N);
  const MartingaleSpec spec = modulus_scan_martingale(m, p, f_rule, N);
  const GridFunction& f = spec.realized;

  std::vector<Index> indices;
  switch (n_rule) {
    case ModulusIndexRule::alphas:
      indices.assign(spec.alphas.begin(),
                     spec.alphas.begin() + static_cast<std::ptrdiff_t>(spec.realized_terms()));
      break;
    case ModulusIndexRule::Mn:
      for (std::size_t k = 1; k <= N; ++k) indices.push_back(m.scaled_base(k));
      break;
    case ModulusIndexRule::Mn_plus_1:
      for (std::size_t k = 1; k < N; ++k) indices.push_back(m.scaled_base(k) + 1);
      break;
  }

  ScenarioResult out;
  out.scenario = "modulus_convergence";
  out.parameters = {{"m", m.text()},
                    {"p", format_double(p)},
                    {"f_rule", std::string(to_string(f_rule))},
                    {"n_rule", std::string(to_string(n_rule))},
                    {"N", std::to_string(N)}};
  out.columns = {"k", "n_k", "top", "bottom", "omega", "error_hp", "error_weak", "rate",
                 "omega_over_rate", "constant"};
  out.notes.push_back(
      "convergence hypothesis read as omega(1/M_{|n_k|}) = o(rate); the displayed inequality is "
      "checked as a conclusion with an empirical constant");

  std::vector<double> modulus(N + 1);
  for (std::size_t n = 0; n <= N; ++n) modulus[n] = modulus_hp(f, n, p);

  double constant = 0, ratio_lo = std::numeric_limits<double>::infinity(), ratio_hi = 0;
  double weak_lo = std::numeric_limits<double>::infinity();
  bool violated = false;
  for (std::size_t k = 0; k < indices.size(); ++k) {
    const Index n = indices[k];
    const VIndex v = decompose(n, m);
    const GridFunction diff = partial_sum(f, n) - f;
    const double error = hardy_norm(diff, p);
    const double weak = weak_lp_norm(diff, p);
    const double r = rate(m, n, p);
    const double omega = modulus[v.top];
    // M_j < n <= M_{j+1}
    const std::size_t j = n == m.scaled_base(v.top) ? v.top - 1 : v.top;
    const double bound_base = modulus[j] / r;
    double c = 0;
    if (bound_base > 0)
      c = error / bound_base;
    else if (error > thresholds.equality_tolerance)
      violated = true;
    constant = std::max(constant, c);
    const double omega_rate = omega / r;
    ratio_lo = std::min(ratio_lo, omega_rate);
    ratio_hi = std::max(ratio_hi, omega_rate);
    weak_lo = std::min(weak_lo, weak);
    out.trace.push_back(error);
    out.rows.push_back({static_cast<double>(k), static_cast<double>(n), static_cast<double>(v.top),
                        static_cast<double>(v.bottom), omega, error, weak, r, omega_rate, c});
  }

  // omega(1/M_n)^p against the atomic tail sum_{|alpha_k| >= n} |lambda_k|^p.
  double tail_constant = 0;
  for (std::size_t n = 0; n <= N; ++n) {
    const double tail = spec.tail_budget(n);
    const double lhs = std::pow(modulus[n], p);
    if (tail > 0)
      tail_constant = std::max(tail_constant, lhs / tail);
    else if (modulus[n] > thresholds.equality_tolerance)
      violated = true;
  }
  // Each atom has ||a||_{H_p}^p <= 1 and the H_p quasi-norm is p-subadditive.
  if (tail_constant > 1 + thresholds.equality_tolerance) violated = true;

  out.constants["constant"] = constant;
  out.constants["tail_constant"] = tail_constant;
  out.constants["omega_over_rate_min"] = ratio_lo;
  out.constants["omega_over_rate_max"] = ratio_hi;
  out.constants["weak_error_min"] = weak_lo;
  out.constants["budget"] = spec.budget();
  out.verdict = violated ? Verdict::violated : Verdict::bounded;
  return out;
}

ScenarioResult supp_measure_scan(const GeneratorSequence& m, std::size_t N) {
  check_scan_resolution(m, N);
  ScenarioResult out;
  out.scenario = "supp_measure";
  out.parameters = {{"m", m.text()}, {"N", std::to_string(N)}};
  out.columns = {"n", "top", "bottom", "measure", "n_measure", "lower", "upper"};

  const double lambda = m.lambda();
  std::size_t violations = 0;
  DirichletSweep sweep(m, N);
  sweep.advance();
  for (Index n = 1; n < m.scaled_base(N); ++n, sweep.advance()) {
    const VIndex v = decompose(n, m);
    const double Mb = static_cast<double>(m.scaled_base(v.bottom));
    const double Mt = static_cast<double>(m.scaled_base(v.top));
    const double measure = support_measure(sweep.kernel());
    const double nm = static_cast<double>(n) * measure;
    const double lo = Mt / (2 * Mb), hi = lambda * Mt / Mb;
    const double eps = 1e-12;
    const bool ok = measure >= 1 / (2 * Mb) - eps && measure <= 1 / Mb + eps && nm >= lo - eps &&
                    nm <= hi + eps;
    if (!ok) ++violations;
    out.rows.push_back({static_cast<double>(n), static_cast<double>(v.top),
                        static_cast<double>(v.bottom), measure, nm, lo, hi});
    out.trace.push_back(nm);
  }
  out.constants["violations"] = static_cast<double>(violations);
  out.verdict = violations ? Verdict::violated : Verdict::bounded;
  return out;
}

ScenarioResult lower_estimate_scan(const GeneratorSequence& m, std::size_t N, Index limit) {
  check_scan_resolution(m, N);
  const Index MN = m.scaled_base(N);
  if (limit == 0 || limit > MN) limit = MN;

  ScenarioResult out;
  out.scenario = "lower_estimate";
  out.parameters = {{"m", m.text()}, {"N", std::to_string(N)}, {"limit", std::to_string(limit)}};
  out.columns = {"n", "top", "bottom", "min_on_bottom_shell", "bound", "reduction_error"};

  std::vector<GridFunction> kernels;
  kernels.reserve(limit);
  DirichletSweep sweep(m, N);
  for (Index n = 0; n < limit; ++n) {
    kernels.push_back(sweep.kernel());
    sweep.advance();
  }

  // holds[s]: the bound held on I_s \ I_{s+1} for every tested n.
  std::vector<bool> holds(N, true);
  std::size_t violations = 0, tested = 0;
  double reduction = 0;
  for (Index n = 1; n < limit; ++n) {
    const VIndex v = decompose(n, m);
    if (v.top == v.bottom) continue;
    ++tested;
    const double bound = static_cast<double>(m.scaled_base(v.bottom));
    const GridFunction& D = kernels[n];
    const GridFunction& reduced = kernels[n - m.scaled_base(v.top)];
    std::vector<double> shell_min(N, std::numeric_limits<double>::infinity());
    for (Index x = 1; x < MN; ++x) {
      const std::size_t s = coset_depth(x, m, N);
      shell_min[s] = std::min(shell_min[s], std::abs(D[x]));
      if (s == v.bottom) reduction = std::max(reduction, std::abs(std::abs(D[x]) - std::abs(reduced[x])));
    }
    for (std::size_t s = 0; s < N; ++s)
      if (shell_min[s] < bound - 1e-6) holds[s] = false;
    if (shell_min[v.bottom] < bound - 1e-6) ++violations;
    out.rows.push_back({static_cast<double>(n), static_cast<double>(v.top),
                        static_cast<double>(v.bottom), shell_min[v.bottom], bound,
                        0.0});
    out.rows.back().back() = reduction;
  }
  for (std::size_t s = 0; s < N; ++s) {
    out.constants["holds_on_shell_" + std::to_string(s)] = holds[s] ? 1.0 : 0.0;
    out.trace.push_back(holds[s] ? 1.0 : 0.0);
  }
  out.constants["tested"] = static_cast<double>(tested);
  out.constants["violations"] = static_cast<double>(violations);
  out.constants["reduction_error"] = reduction;
  out.verdict = violations || reduction > 1e-6 ? Verdict::violated : Verdict::bounded;
  return out;
}

ScenarioResult upper_estimate_scan(const GeneratorSequence& m, std::size_t N, std::size_t R) {
  check_scan_resolution(m, R);
  if (N > R || N == 0) throw Error("upper estimate scan needs 0 < N <= R");
  ScenarioResult out;
  out.scenario = "upper_estimate";
  out.parameters = {{"m", m.text()}, {"N", std::to_string(N)}, {"R", std::to_string(R)}};
  out.columns = {"s", "max_scaled_average"};

  const Index MN = m.scaled_base(N), MR = m.scaled_base(R);
  std::vector<double> per_shell(N, 0.0);
  DirichletSweep sweep(m, R);
  sweep.advance();
  for (Index n = 1; n < MR; ++n, sweep.advance()) {
    const GridFunction& D = sweep.kernel();
    // For x with first N coordinates fixed, x - t sweeps that rank-N coset as t ranges over I_N.
    std::vector<double> coset_sum(MN, 0.0);
    for (Index y = 0; y < MR; ++y) coset_sum[y % MN] += std::abs(D[y]);
    for (Index x = 1; x < MN; ++x) {
      const std::size_t s = coset_depth(x, m, N);
      const double avg = coset_sum[x] / static_cast<double>(MR);
      per_shell[s] = std::max(per_shell[s], avg * static_cast<double>(MN) /
                                                static_cast<double>(m.scaled_base(s)));
    }
  }
  double c = 0;
  for (std::size_t s = 0; s < N; ++s) {
    out.rows.push_back({static_cast<double>(s), per_shell[s]});
    c = std::max(c, per_shell[s]);
  }
  out.trace = per_shell;
  out.constants["constant"] = c;
  out.verdict = Verdict::bounded;
  return out;
}

}  // namespace vilenkin
