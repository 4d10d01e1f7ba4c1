#include "vilenkin/transform.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "vilenkin/error.hpp"

namespace vilenkin {
namespace {

// exp(2 pi i j / r) for every radix in use, built once per operation.
// exp(2 pi i j / r), exact at quarter turns.
Complex unit_root(Radix j, Radix r) {
  if ((4 * static_cast<Index>(j)) % r == 0) {
    static const Complex quarter[] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return quarter[(4 * static_cast<Index>(j)) / r];
  }
  return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(j) / r);
}

class RootTable {
 public:
  RootTable(const GeneratorSequence& m, std::size_t N) {
    for (std::size_t k = 0; k < N; ++k) {
      const Radix r = m.radix(k);
      if (roots_.count(r)) continue;
      auto& row = roots_[r];
      row.resize(r);
      for (Radix j = 0; j < r; ++j)
        row[j] = unit_root(j, r);
    }
  }

  // exp(2 pi i e / r), e reduced mod r.
  Complex root(Radix r, Index e) const { return roots_.at(r)[e % r]; }
  const std::vector<Complex>& row(Radix r) const { return roots_.at(r); }

 private:
  std::map<Radix, std::vector<Complex>> roots_;
};

// One length-r DFT along digit k for every line; sign = -1 forward, +1 inverse.
void transform_stage(std::vector<Complex>& a, const GeneratorSequence& m, std::size_t k,
                     const RootTable& table, int sign) {
  const Radix r = m.radix(k);
  const Index stride = m.scaled_base(k);
  const Index block = m.scaled_base(k + 1);
  const auto& w = table.row(r);
  std::vector<Complex> in(r), out(r);

  for (Index start = 0; start < a.size(); start += block) {
    for (Index i = 0; i < stride; ++i) {
      const Index base = start + i;
      if (r == 2) {
        const Complex u = a[base], v = a[base + stride];
        a[base] = u + v;
        a[base + stride] = u - v;
        continue;
      }
      for (Radix x = 0; x < r; ++x) in[x] = a[base + x * stride];
      for (Radix n = 0; n < r; ++n) {
        Complex acc = 0;
        for (Radix x = 0; x < r; ++x) {
          const Radix e = static_cast<Radix>((static_cast<Index>(n) * x) % r);
          acc += in[x] * (sign < 0 ? std::conj(w[e]) : w[e]);
        }
        out[n] = acc;
      }
      for (Radix n = 0; n < r; ++n) a[base + n * stride] = out[n];
    }
  }
}

}  // namespace

void check_resolution(const GeneratorSequence& m, std::size_t N) {
  if (N > m.max_resolution())
    throw Error("resolution " + std::to_string(N) + " exceeds generator sequence length");
  if (m.scaled_base(N) > kMaxGridPoints)
    throw Error("resolution " + std::to_string(N) + " gives M_N = " +
                std::to_string(m.scaled_base(N)) + " above the grid cap " +
                std::to_string(kMaxGridPoints));
}

namespace detail {

ResolvedArray::ResolvedArray(GeneratorSequence m, std::size_t N)
    : gens_(std::move(m)), N_(N) {
  check_resolution(gens_, N_);
  values_.assign(gens_.scaled_base(N_), Complex{});
}

ResolvedArray::ResolvedArray(GeneratorSequence m, std::size_t N, std::vector<Complex> values)
    : gens_(std::move(m)), N_(N), values_(std::move(values)) {
  check_resolution(gens_, N_);
  if (values_.size() != gens_.scaled_base(N_))
    throw Error("expected " + std::to_string(gens_.scaled_base(N_)) + " values at resolution " +
                std::to_string(N_) + ", got " + std::to_string(values_.size()));
}

bool ResolvedArray::same_shape(const ResolvedArray& other) const {
  return N_ == other.N_ && gens_.agrees_with(other.gens_, N_);
}

void ResolvedArray::require_same_shape(const ResolvedArray& other) const {
  if (!same_shape(other)) throw Error("functions live on different resolutions or groups");
}

}  // namespace detail

Complex GridFunction::integral() const {
  Complex sum = 0;
  for (const auto& v : values_) sum += v;
  return sum / static_cast<double>(values_.size());
}

GridFunction& GridFunction::operator+=(const GridFunction& g) {
  require_same_shape(g);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += g.values_[i];
  return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& g) {
  require_same_shape(g);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= g.values_[i];
  return *this;
}

GridFunction& GridFunction::operator*=(Complex c) {
  for (auto& v : values_) v *= c;
  return *this;
}

GridFunction& GridFunction::multiply(const GridFunction& g) {
  require_same_shape(g);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] *= g.values_[i];
  return *this;
}

GridFunction GridFunction::refine(std::size_t finer) const {
  if (finer < N_) throw Error("refine target is coarser than the function");
  GridFunction out(gens_, finer);
  const Index coarse = values_.size();
  for (Index i = 0; i < out.size(); ++i) out[i] = values_[i % coarse];
  return out;
}

Complex character(const VIndex& n, const GroupPoint& x, const GeneratorSequence& m) {
  double turns = 0;
  const std::size_t len = std::min(n.digits.size(), x.resolution());
  if (n.top >= x.resolution())
    throw Error("character index is not resolved at this point's resolution");
  for (std::size_t k = 0; k < len; ++k) {
    const Radix r = m.radix(k);
    turns += static_cast<double>((static_cast<Index>(n.digits[k]) * x.coords[k]) % r) / r;
  }
  return std::polar(1.0, 2.0 * std::numbers::pi * turns);
}

Complex character(Index n, const GroupPoint& x, const GeneratorSequence& m) {
  if (n == 0) return 1.0;
  return character(decompose(n, m), x, m);
}

void character_row(const GeneratorSequence& m, std::size_t N, Index n, std::span<Complex> out) {
  check_resolution(m, N);
  if (n >= m.scaled_base(N))
    throw Error("character psi_" + std::to_string(n) + " is not resolved at resolution " +
                std::to_string(N));
  if (out.size() != m.scaled_base(N)) throw Error("character row has the wrong length");
  const RootTable table(m, N);
  out[0] = 1.0;
  Index filled = 1;
  for (std::size_t k = 0; k < N; ++k) {
    const Radix r = m.radix(k);
    const Index digit = n % r;
    n /= r;
    for (Radix x = 1; x < r; ++x) {
      const Complex w = table.root(r, digit * x);
      for (Index j = 0; j < filled; ++j) out[x * filled + j] = out[j] * w;
    }
    filled *= r;
  }
}

GridFunction character_function(const GeneratorSequence& m, Index n, std::size_t N) {
  GridFunction f(m, N);
  character_row(m, N, n, f.values());
  return f;
}

SpectralVector forward(const GridFunction& f) {
  const auto& m = f.generators();
  const std::size_t N = f.resolution();
  const RootTable table(m, N);
  std::vector<Complex> a = f.data();
  for (std::size_t k = 0; k < N; ++k) transform_stage(a, m, k, table, -1);
  const double scale = 1.0 / static_cast<double>(a.size());
  for (auto& v : a) v *= scale;
  return SpectralVector(m, N, std::move(a));
}

GridFunction inverse(const SpectralVector& c) {
  const auto& m = c.generators();
  const std::size_t N = c.resolution();
  const RootTable table(m, N);
  std::vector<Complex> a = c.data();
  for (std::size_t k = 0; k < N; ++k) transform_stage(a, m, k, table, +1);
  return GridFunction(m, N, std::move(a));
}

namespace {

void require_kernel_index(const GeneratorSequence& m, Index n, std::size_t N) {
  check_resolution(m, N);
  if (n > m.scaled_base(N))
    throw Error("D_" + std::to_string(n) + " is not resolvable at resolution " + std::to_string(N));
}

}  // namespace

GridFunction dirichlet_direct(const GeneratorSequence& m, Index n, std::size_t N) {
  require_kernel_index(m, n, N);
  GridFunction out(m, N);
  std::vector<Complex> row(out.size());
  for (Index k = 0; k < n; ++k) {
    character_row(m, N, k, row);
    for (std::size_t i = 0; i < row.size(); ++i) out[i] += row[i];
  }
  return out;
}

GridFunction dirichlet_at_scale(const GeneratorSequence& m, std::size_t k, std::size_t N) {
  check_resolution(m, N);
  if (k > N) throw Error("D_{M_k} needs k <= N");
  GridFunction out(m, N);
  const Index Mk = m.scaled_base(k);
  for (Index i = 0; i < out.size(); i += Mk) out[i] = static_cast<double>(Mk);
  return out;
}

GridFunction dirichlet_closed(const GeneratorSequence& m, Index n, std::size_t N) {
  require_kernel_index(m, n, N);
  if (n == m.scaled_base(N)) return dirichlet_at_scale(m, N, N);
  GridFunction out(m, N);
  if (n == 0) return out;

  const RootTable table(m, N);
  std::vector<Radix> digits(N);
  Index rest = n;
  for (std::size_t j = 0; j < N; ++j) {
    digits[j] = static_cast<Radix>(rest % m.radix(j));
    rest /= m.radix(j);
  }
  std::vector<Complex> psi(out.size());
  character_row(m, N, n, psi);

  for (Index x = 0; x < out.size(); ++x) {
    // D_{M_j}(x) = M_j exactly when x lies in I_j, i.e. j <= depth.
    const std::size_t depth = coset_depth(x, m, N);
    const Radix xt = depth < N ? static_cast<Radix>((x / m.scaled_base(depth)) % m.radix(depth)) : 0;
    Complex acc = 0;
    for (std::size_t j = 0; j <= std::min(depth, N - 1); ++j) {
      const Radix r = m.radix(j);
      if (digits[j] == 0) continue;
      const Radix xj = j == depth ? xt : 0;
      Complex inner = 0;
      for (Radix u = r - digits[j]; u < r; ++u) inner += table.root(r, static_cast<Index>(u) * xj);
      acc += static_cast<double>(m.scaled_base(j)) * inner;
    }
    out[x] = psi[x] * acc;
  }
  return out;
}

DirichletSweep::DirichletSweep(GeneratorSequence m, std::size_t N)
    : kernel_(std::move(m), N), row_(kernel_.size()) {}

void DirichletSweep::advance() {
  const auto& m = kernel_.generators();
  const std::size_t N = kernel_.resolution();
  if (n_ >= m.scaled_base(N)) throw Error("Dirichlet sweep ran past M_N");
  character_row(m, N, n_, row_);
  auto values = kernel_.values();
  for (std::size_t i = 0; i < row_.size(); ++i) values[i] += row_[i];
  ++n_;
}

GridFunction partial_sum(const GridFunction& f, Index n) {
  if (n > f.size())
    throw Error("S_" + std::to_string(n) + " is not resolvable at resolution " +
                std::to_string(f.resolution()));
  SpectralVector c = forward(f);
  auto coeffs = c.values();
  std::fill(coeffs.begin() + static_cast<std::ptrdiff_t>(n), coeffs.end(), Complex{});
  return inverse(c);
}

GridFunction partial_sum_convolution(const GridFunction& f, Index n) {
  const auto& m = f.generators();
  const std::size_t N = f.resolution();
  if (n > f.size())
    throw Error("S_" + std::to_string(n) + " is not resolvable at resolution " + std::to_string(N));
  const GridFunction kernel = dirichlet_direct(m, n, N);
  GridFunction out(m, N);
  const double mu = 1.0 / static_cast<double>(f.size());
  for (Index x = 0; x < f.size(); ++x) {
    Complex acc = 0;
    for (Index t = 0; t < f.size(); ++t) acc += f[t] * kernel[index_sub(m, N, x, t)];
    out[x] = acc * mu;
  }
  return out;
}

GridFunction conditional_expectation(const GridFunction& f, std::size_t k) {
  const std::size_t N = f.resolution();
  if (k > N) throw Error("conditional expectation rank exceeds resolution");
  const Index Mk = f.generators().scaled_base(k);
  std::vector<Complex> sums(Mk);
  for (Index i = 0; i < f.size(); ++i) sums[i % Mk] += f[i];
  const double scale = static_cast<double>(Mk) / static_cast<double>(f.size());
  GridFunction out(f.generators(), N);
  for (Index i = 0; i < f.size(); ++i) out[i] = sums[i % Mk] * scale;
  return out;
}

PartialSumSweep::PartialSumSweep(const GridFunction& f)
    : coeffs_(forward(f)), sum_(f.generators(), f.resolution()), row_(f.size()) {}

void PartialSumSweep::advance() {
  if (n_ >= sum_.size()) throw Error("partial sum sweep ran past M_N");
  const Complex c = coeffs_[n_];
  if (c != Complex{}) {
    character_row(sum_.generators(), sum_.resolution(), n_, row_);
    auto values = sum_.values();
    for (std::size_t i = 0; i < row_.size(); ++i) values[i] += c * row_[i];
  }
  ++n_;
}

void PartialSumSweep::advance_to(Index n) {
  if (n < n_) throw Error("partial sum sweep cannot move backwards");
  while (n_ < n) advance();
}

}  // namespace vilenkin
