#pragma once

// Scenario runners producing finite-resolution evidence tables.

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vilenkin/group.hpp"
#include "vilenkin/martingale.hpp"
#include "vilenkin/transform.hpp"

namespace vilenkin {

enum class Verdict { bounded, growing, violated };

std::string_view to_string(Verdict v);

/// Desk-scale decision thresholds. These are configuration, not constants of
/// the underlying inequalities.
struct ScanThresholds {
  /// A quantity is "stable" across resolutions if max/min stays within this factor.
  double stability_factor = 2.0;
  /// A trace "grows" if it strictly increases over at least this many
  /// consecutive points ...
  std::size_t growth_run = 4;
  /// ... with last/first at least this factor.
  double growth_factor = 4.0;
  /// Closed-form versus transform agreement.
  double equality_tolerance = 1e-9;
};

/// Default cap on M_N for scans.
inline constexpr Index kScanGridCap = Index{1} << 14;

struct ScenarioResult {
  std::string scenario;
  std::map<std::string, std::string> parameters;
  std::uint64_t seed = 0;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::map<std::string, double> constants;
  std::vector<double> trace;
  Verdict verdict = Verdict::bounded;
  std::vector<std::string> notes;
};

/// Longest strictly increasing run ending at the last point.
std::size_t trailing_increasing_run(std::span<const double> trace);

/// The growth rule from ScanThresholds applied to a trace.
bool is_growing(std::span<const double> trace, const ScanThresholds& thresholds);

/// max/min of positive values, infinity if any is zero.
double spread(std::span<const double> values);

/// hardy_norm(S_n a, p) (M_{<n>}/M_{|n|})^{1/p-1}.
double atom_ratio(const PAtom& atom, Index n);

/// Random p-atoms at resolution N and at reference_N (default N - 2); records
/// the largest normalized ratio over all n in (M_r, M_N] at both.
ScenarioResult atom_ratio_scan(const GeneratorSequence& m, double p, std::size_t N,
                               std::size_t trials, std::uint64_t seed,
                               const ScanThresholds& thresholds = {}, std::size_t reference_N = 0);

enum class DivergenceVariant { Mn_plus_1, general };

std::string_view to_string(DivergenceVariant v);
DivergenceVariant parse_divergence_variant(std::string_view text);

/// Desk-scale reading of "sup = infinity": the maximum over the later half of
/// the sequence exceeds the maximum over the earlier half.
bool unbounded_at_desk_scale(std::span<const double> sequence);

/// Builds the divergent-rule martingale and traces ||S_{alpha_k} f / Phi||_{L_{p,inf}}.
/// Mn_plus_1 takes alpha_k = M_k + 1 for 1 <= k < N. For `general`, candidates are the n_k; alphas are picked greedily so that
/// each lambda_k^p is at most half the previous one.
ScenarioResult divergence_scan(const GeneratorSequence& m, double p, DivergenceVariant variant,
                               const PhiSequence& phi, std::span<const std::size_t> resolutions,
                               std::span<const Index> candidates = {},
                               const ScanThresholds& thresholds = {});

enum class BoundednessVariant { Mn, Mn_plus_Mn_minus_1, rho_bounded };

std::string_view to_string(BoundednessVariant v);
BoundednessVariant parse_boundedness_variant(std::string_view text);

/// n_k for the variant with n_k <= M_N. rho_bounded uses n_k = M_k + M_{k-rho}.
std::vector<Index> boundedness_indices(const GeneratorSequence& m, BoundednessVariant variant,
                                       std::size_t N, std::size_t rho = 2);

/// Ratios ||S_{n_k} f||_{H_p} / ||f||_{H_p} over random f and the default
/// counterexample martingale, one maximum per resolution.
ScenarioResult boundedness_scan(const GeneratorSequence& m, double p, BoundednessVariant variant,
                                std::span<const std::size_t> resolutions, std::size_t functions,
                                std::uint64_t seed, const ScanThresholds& thresholds = {},
                                std::size_t rho = 2);

struct SimonSum {
  double sum = 0;          // sum_{k=1}^{M_N} ||S_k f||_p^p / k^{2-p}
  double hardy_power = 0;  // ||f||_{H_p}^p
  double ratio = 0;
};

SimonSum simon_sum(const GridFunction& f, double p);

/// simon_sum ratios for random f and the counterexample at each resolution.
ScenarioResult simon_scan(const GeneratorSequence& m, double p,
                          std::span<const std::size_t> resolutions, std::size_t functions,
                          std::uint64_t seed, const ScanThresholds& thresholds = {});

enum class ModulusFunctionRule { gap, fast_decay };
enum class ModulusIndexRule { alphas, Mn, Mn_plus_1 };

std::string_view to_string(ModulusFunctionRule r);
std::string_view to_string(ModulusIndexRule r);
ModulusFunctionRule parse_modulus_function_rule(std::string_view text);
ModulusIndexRule parse_modulus_index_rule(std::string_view text);

/// The martingale used by the modulus scan for a function rule.
MartingaleSpec modulus_scan_martingale(const GeneratorSequence& m, double p,
                                       ModulusFunctionRule rule, std::size_t N);

/// Tabulates (k, omega(1/M_{|n_k|}, f), ||S_{n_k} f - f||_{H_p}) and the
/// empirical constant in ||S_n f - f|| <= C (M_{|n|}/M_{<n>})^{1/p-1} omega(1/M_k, f).
ScenarioResult modulus_convergence_scan(const GeneratorSequence& m, double p,
                                        ModulusFunctionRule f_rule, ModulusIndexRule n_rule,
                                        std::size_t N, const ScanThresholds& thresholds = {});

/// n mu(supp D_n) against both brackets for every 1 <= n < M_N.
ScenarioResult supp_measure_scan(const GeneratorSequence& m, std::size_t N);

/// For every n < limit with |n| != <n>: the minimum of |D_n| on each
/// I_s \ I_{s+1} against M_{<n>}, and |D_n| = |D_{n - M_{|n|}}| on I_{<n>} \ I_{<n>+1}.
ScenarioResult lower_estimate_scan(const GeneratorSequence& m, std::size_t N, Index limit = 0);

/// max over n < M_R and x in I_s \ I_{s+1} (s < N) of
/// (integral over t in I_N of |D_n(x - t)|) * M_N / M_s, computed at resolution R.
ScenarioResult upper_estimate_scan(const GeneratorSequence& m, std::size_t N, std::size_t R);

}  // namespace vilenkin
