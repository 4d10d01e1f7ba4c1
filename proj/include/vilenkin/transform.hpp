#pragma once

// Vilenkin characters, the spectral transform, Dirichlet kernels and partial sums.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "vilenkin/group.hpp"

namespace vilenkin {

using Complex = std::complex<double>;

/// Upper bound on M_N for anything stored as a grid.
inline constexpr Index kMaxGridPoints = Index{1} << 20;

/// Throws unless N <= N_max and M_N <= kMaxGridPoints.
void check_resolution(const GeneratorSequence& m, std::size_t N);

namespace detail {

/// M_N complex values attached to a generator sequence and resolution.
class ResolvedArray {
 public:
  ResolvedArray(GeneratorSequence m, std::size_t N);
  ResolvedArray(GeneratorSequence m, std::size_t N, std::vector<Complex> values);

  const GeneratorSequence& generators() const { return gens_; }
  std::size_t resolution() const { return N_; }
  std::size_t size() const { return values_.size(); }

  std::span<const Complex> values() const { return values_; }
  std::span<Complex> values() { return values_; }
  const std::vector<Complex>& data() const { return values_; }

  Complex operator[](Index i) const { return values_[i]; }
  Complex& operator[](Index i) { return values_[i]; }

  bool same_shape(const ResolvedArray& other) const;

 protected:
  void require_same_shape(const ResolvedArray& other) const;

  GeneratorSequence gens_;
  std::size_t N_;
  std::vector<Complex> values_;
};

}  // namespace detail

/// A function on G_m that is constant on rank-N cosets; values are stored in
/// little-endian coset order.
class GridFunction : public detail::ResolvedArray {
 public:
  using ResolvedArray::ResolvedArray;

  /// Integral against the normalized Haar measure.
  Complex integral() const;

  GridFunction& operator+=(const GridFunction& g);
  GridFunction& operator-=(const GridFunction& g);
  GridFunction& operator*=(Complex c);

  friend GridFunction operator+(GridFunction f, const GridFunction& g) { return f += g; }
  friend GridFunction operator-(GridFunction f, const GridFunction& g) { return f -= g; }
  friend GridFunction operator*(Complex c, GridFunction f) { return f *= c; }

  /// Pointwise product.
  GridFunction& multiply(const GridFunction& g);

  /// The same function sampled on the finer resolution N' >= N.
  GridFunction refine(std::size_t finer) const;
};

/// Vilenkin-Fourier coefficients f^(0..M_N - 1).
class SpectralVector : public detail::ResolvedArray {
 public:
  using ResolvedArray::ResolvedArray;
};

/// psi_n(x) = prod_k exp(2 pi i n_k x_k / m_k).
Complex character(const VIndex& n, const GroupPoint& x, const GeneratorSequence& m);
Complex character(Index n, const GroupPoint& x, const GeneratorSequence& m);

/// psi_n sampled at resolution N; requires n < M_N.
GridFunction character_function(const GeneratorSequence& m, Index n, std::size_t N);

/// Staged mixed-radix transform: one pass per digit, O(M_N sum m_k).
SpectralVector forward(const GridFunction& f);
GridFunction inverse(const SpectralVector& c);

/// D_n = sum_{k<n} psi_k, summed literally. D_0 is the zero function.
GridFunction dirichlet_direct(const GeneratorSequence& m, Index n, std::size_t N);

/// D_n from the digit formula psi_n sum_j D_{M_j} sum_{u=m_j-n_j}^{m_j-1} r_j^u.
GridFunction dirichlet_closed(const GeneratorSequence& m, Index n, std::size_t N);

/// D_{M_k}: M_k on I_k and zero elsewhere.
GridFunction dirichlet_at_scale(const GeneratorSequence& m, std::size_t k, std::size_t N);

/// Walks D_0, D_1, ..., D_{M_N} by adding one character at a time.
class DirichletSweep {
 public:
  DirichletSweep(GeneratorSequence m, std::size_t N);

  Index n() const { return n_; }
  const GridFunction& kernel() const { return kernel_; }

  /// D_n -> D_{n+1}. Throws past M_N.
  void advance();

 private:
  GridFunction kernel_;
  std::vector<Complex> row_;
  Index n_ = 0;
};

/// S_n f by spectral truncation of forward(f).
GridFunction partial_sum(const GridFunction& f, Index n);

/// S_n f as the convolution integral of f(t) D_n(x - t) over t. O(M_N^2).
GridFunction partial_sum_convolution(const GridFunction& f, Index n);

/// S_{M_k} f computed as the average of f over each rank-k coset.
GridFunction conditional_expectation(const GridFunction& f, std::size_t k);

/// Walks S_0 f, S_1 f, ..., S_{M_N} f one coefficient at a time.
class PartialSumSweep {
 public:
  explicit PartialSumSweep(const GridFunction& f);

  Index n() const { return n_; }
  const GridFunction& current() const { return sum_; }
  const SpectralVector& coefficients() const { return coeffs_; }

  void advance();
  void advance_to(Index n);

 private:
  SpectralVector coeffs_;
  GridFunction sum_;
  std::vector<Complex> row_;
  Index n_ = 0;
};

/// Writes psi_n on all M_N cosets into `out`, using the tensor structure.
void character_row(const GeneratorSequence& m, std::size_t N, Index n, std::span<Complex> out);

}  // namespace vilenkin
