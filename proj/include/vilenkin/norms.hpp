#pragma once

// Quasi-norms, Lebesgue constants and maximal operators at finite resolution.

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "vilenkin/group.hpp"
#include "vilenkin/transform.hpp"

namespace vilenkin {

enum class NormKind { Lp, WeakLp, Hardy };

std::string_view to_string(NormKind kind);

/// One measured (quasi-)norm, optionally bracketed by analytic bounds.
struct NormReport {
  Index n = 0;
  std::size_t resolution = 0;
  double p = 1;
  NormKind kind = NormKind::Lp;
  double value = 0;
  std::optional<double> lower_bound;
  std::optional<double> upper_bound;
};

/// ((1/M_N) sum |f|^p)^{1/p}. Throws for p <= 0.
double lp_norm(const GridFunction& f, double p);
double lp_norm(std::span<const Complex> values, double p);

/// sum |f|^p / M_N, the p-th power of lp_norm.
double lp_power(std::span<const Complex> values, double p);

double sup_norm(const GridFunction& f);

/// sup_y y mu(|f| > y)^{1/p}, taken over y just below each value |f| attains.
double weak_lp_norm(const GridFunction& f, double p);
double weak_lp_norm(std::span<const Complex> values, double p);

/// Relative offset below an attained value used by weak_lp_norm.
inline constexpr double kWeakLevelOffset = 1e-12;

/// max_{0<=k<=N} |S_{M_k} f|, the maximal function of the martingale generated by f.
GridFunction maximal_function(const GridFunction& f);

/// ||f*||_p.
double hardy_norm(const GridFunction& f, double p);

/// Pointwise max over the index set of |S_n f|. Throws on an empty set.
GridFunction restricted_maximal(const GridFunction& f, std::span<const Index> indices);

/// omega(1/M_n, f)_{H_p} = ||f - S_{M_n} f||_{H_p}.
double modulus_hp(const GridFunction& f, std::size_t n, double p);

/// Two-sided estimate of L_n in terms of v(n), v*(n) and lambda.
struct LebesgueBounds {
  double lower = 0;
  double upper = 0;
};

LebesgueBounds lebesgue_bounds(const GeneratorSequence& m, Index n, DigitConvention convention);

struct LebesgueReport {
  Index n = 0;
  std::size_t resolution = 0;
  double value = 0;
  LebesgueBounds bounds;
  DigitConvention convention = DigitConvention::from1;

  bool within_bounds(double tol = 1e-9) const {
    return bounds.lower <= value + tol && value <= bounds.upper + tol;
  }
};

/// L_n = ||D_n||_1, exact at resolution N, with the bounds under `convention`.
LebesgueReport lebesgue_constant(const GeneratorSequence& m, Index n, std::size_t N,
                                 DigitConvention convention);

/// Rows for n = 1 .. min(M_N, limit) - 1, computed with one Dirichlet sweep.
std::vector<LebesgueReport> lebesgue_table(const GeneratorSequence& m, std::size_t N,
                                           DigitConvention convention, Index limit = 0);

/// Bracket violations per convention over an exhaustive table. The winner is
/// the convention with fewer violations; ties go to from0.
struct ConventionVerdict {
  std::size_t rows = 0;
  std::vector<Index> violations_from0;
  std::vector<Index> violations_from1;
  DigitConvention winner = DigitConvention::from0;
};

ConventionVerdict select_convention(const GeneratorSequence& m, std::size_t N, Index limit = 0);

/// Support detection threshold for kernels.
inline constexpr double kSupportThreshold = 1e-9;

/// mu{x : |f(x)| > threshold}.
double support_measure(const GridFunction& f, double threshold = kSupportThreshold);

}  // namespace vilenkin
