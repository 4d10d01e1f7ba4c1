#pragma once

// p-atoms and the counterexample martingales built from them.

#include <cstddef>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vilenkin/error.hpp"
#include "vilenkin/group.hpp"
#include "vilenkin/transform.hpp"

namespace vilenkin {

inline constexpr double kAtomTolerance = 1e-9;

/// A function a with support in I_r(x0), zero mean there and
/// ||a||_inf <= mu(I)^{-1/p} = M_r^{1/p}.
struct PAtom {
  double p = 1;
  std::size_t support_rank = 0;
  GroupPoint base_point;
  GridFunction values;

  double sup_bound() const;
};

enum class AtomViolation { NonzeroMean, SupBound, Support };

std::string_view to_string(AtomViolation v);

class AtomError : public Error {
 public:
  explicit AtomError(std::vector<AtomViolation> violations);
  const std::vector<AtomViolation>& violations() const { return violations_; }

 private:
  std::vector<AtomViolation> violations_;
};

/// Checks all three atom conditions at once and reports every failure.
PAtom validate_atom(const GridFunction& a, double p, std::size_t support_rank,
                    const GroupPoint& base_point);

/// (M_{|alpha|}^{1/p-1} / lambda) (D_{M_{|alpha|+1}} - D_{M_{|alpha|}}) at resolution N.
PAtom counterexample_atom(const GeneratorSequence& m, const VIndex& alpha, double p, std::size_t N);

/// Random atom on I_r(base): uniform values on the children cosets,
/// mean-subtracted, scaled so the largest magnitude is fill * M_r^{1/p}.
PAtom random_atom(const GeneratorSequence& m, std::size_t N, double p, std::size_t support_rank,
                  const GroupPoint& base_point, std::mt19937_64& rng, double fill = 0.9);

/// Non-decreasing weight sequence Phi_n given in closed form.
struct PhiSequence {
  enum class Kind { constant, log_top, power_top };

  Kind kind = Kind::constant;
  double parameter = 1;

  /// constant: parameter; log_top: 1 + ln M_{|n|}; power_top: M_{|n|}^parameter.
  double operator()(const GeneratorSequence& m, Index n) const;

  /// "constant:1", "log", "power:0.25".
  std::string to_string() const;
  static PhiSequence parse(std::string_view text);
};

enum class LambdaRule { divergent, gap, explicit_list };

std::string_view to_string(LambdaRule rule);
LambdaRule parse_lambda_rule(std::string_view text);

/// A growth or ordering condition failed; lists the offending positions k.
class GrowthConditionError : public Error {
 public:
  GrowthConditionError(const std::string& condition, std::vector<std::size_t> failing);
  const std::vector<std::size_t>& failing() const { return failing_; }

 private:
  std::vector<std::size_t> failing_;
};

/// f_N = sum_{|alpha_k| < N} lambda_k a_k with a_k the counterexample atoms.
struct MartingaleSpec {
  GeneratorSequence generators;
  double p = 0.5;
  std::vector<Index> alphas;
  std::vector<double> lambdas;
  LambdaRule rule = LambdaRule::explicit_list;
  PhiSequence phi;
  std::size_t resolution = 0;
  Radix lambda_max = 2;  // sup m_k, the lambda in the atom formula
  GridFunction realized;

  std::size_t top(std::size_t k) const;
  std::size_t bottom(std::size_t k) const;

  /// Number of leading terms with |alpha_k| < N.
  std::size_t realized_terms() const;

  /// M_{|alpha_k|}^{1/p-1} / lambda.
  double atom_scale(std::size_t k) const;

  /// lambda_k M_{|alpha_k|}^{1/p-1} / lambda: the Fourier coefficient on block k.
  double block_coefficient(std::size_t k) const;

  /// sum |lambda_k|^p over all listed terms.
  double budget() const;

  /// sum |lambda_k|^p over realized terms with |alpha_k| >= n.
  double tail_budget(std::size_t n) const;
};

MartingaleSpec build_counterexample(const GeneratorSequence& m, double p, std::vector<Index> alphas,
                                    LambdaRule rule, PhiSequence phi, std::size_t N,
                                    std::vector<double> explicit_lambdas = {});

/// Realizes a spec from explicit coefficients without re-deriving them; used
/// when reading a serialized spec. Checks ordering but not growth conditions.
MartingaleSpec assemble_counterexample(const GeneratorSequence& m, double p,
                                       std::vector<Index> alphas, std::vector<double> lambdas,
                                       LambdaRule rule, PhiSequence phi, std::size_t N);

/// M_{2^k} + 1 for every k with 2^k < N.
std::vector<Index> default_alphas(const GeneratorSequence& m, std::size_t N);

/// Greedy filter keeping a candidate only if R = M_{|n|}/M_{<n>} strictly
/// increases and R_next >= R_last^2 against the last kept index.
std::vector<Index> extract_gap_subsequence(const GeneratorSequence& m,
                                           std::span<const Index> candidates);

/// Coefficient table: block_coefficient(k) on [M_{|alpha_k|}, M_{|alpha_k|+1}), zero elsewhere.
SpectralVector closed_coefficients(const MartingaleSpec& spec);

/// S_j f = head + tail, where head = S_{M_{|alpha_l|}} f collects the complete
/// blocks below j and tail is the partial block
/// block_coefficient(l) psi_{M_{|alpha_l|}} D_{j - M_{|alpha_l|}}.
struct PartialSumParts {
  GridFunction head;
  GridFunction tail;
  std::optional<std::size_t> block;  // l, when j falls inside a realized block
};

PartialSumParts split_partial_sum(const MartingaleSpec& spec, Index j);

GridFunction closed_partial_sum(const MartingaleSpec& spec, Index j);

}  // namespace vilenkin
