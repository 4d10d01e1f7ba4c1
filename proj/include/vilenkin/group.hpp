#pragma once

// Mixed-radix arithmetic on a bounded Vilenkin group G_m and its index set.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vilenkin {

using Index = std::uint64_t;
using Radix = std::uint32_t;

/// The radices m_0, m_1, ... of a bounded Vilenkin group together with the
/// scaled bases M_0 = 1, M_{k+1} = m_k M_k.
///
/// Infinite text forms ("2^", "2,3,4", "(2,3)^") are expanded for as long as
/// M_k fits in a signed 64-bit integer; that length is max_resolution().
class GeneratorSequence {
 public:
  /// A finite sequence. Throws if a radix is < 2 or a scaled base overflows.
  explicit GeneratorSequence(std::vector<Radix> radices);

  /// Parses "2^" (constant), "2,3,4" (last entry repeated) or "(2,3,4)^"
  /// (the bracketed block repeated periodically).
  static GeneratorSequence parse(std::string_view text);
  static GeneratorSequence constant(Radix radix);

  std::size_t max_resolution() const { return radices_.size(); }
  Radix radix(std::size_t k) const;
  Index scaled_base(std::size_t k) const;
  std::span<const Radix> radices() const { return radices_; }
  std::span<const Index> scaled_bases() const { return bases_; }

  /// lambda = sup m_k.
  Radix lambda() const { return lambda_; }

  /// Text form that parses back to the same sequence.
  const std::string& text() const { return text_; }

  /// Radices agree on the first N positions.
  bool agrees_with(const GeneratorSequence& other, std::size_t N) const;

  friend bool operator==(const GeneratorSequence& a, const GeneratorSequence& b) {
    return a.radices_ == b.radices_;
  }

 private:
  GeneratorSequence(std::vector<Radix> radices, std::string text);

  std::vector<Radix> radices_;
  std::vector<Index> bases_;
  Radix lambda_ = 0;
  std::string text_;
};

/// M_0..M_N. Throws if N exceeds the sequence's representable length.
std::vector<Index> scaled_bases(const GeneratorSequence& m, std::size_t N);

/// A positive index with its mixed-radix digits and digit statistics.
struct VIndex {
  Index value = 0;
  std::vector<Radix> digits;  // n_0 .. n_top
  std::size_t top = 0;        // |n|
  std::size_t bottom = 0;     // <n>

  std::size_t rho() const { return top - bottom; }
  Radix digit(std::size_t j) const { return j < digits.size() ? digits[j] : 0; }
};

/// Throws for n = 0 (no digit statistics) and for n >= M_{N_max}.
VIndex decompose(Index n, const GeneratorSequence& m);

Index reconstruct(std::span<const Radix> digits, const GeneratorSequence& m);

/// Which digit the sums in v and v* start from.
enum class DigitConvention { from0, from1 };

std::string_view to_string(DigitConvention c);
DigitConvention parse_convention(std::string_view text);

struct Variation {
  std::uint64_t v = 0;
  std::uint64_t v_star = 0;
};

/// v(n) = sum_j |delta_{j+1} - delta_j| + delta_0 and v*(n) = sum_j delta*_j
/// with delta_j = sign n_j and delta*_j = |(-n_j mod m_j) - 1| delta_j.
Variation variation(const VIndex& n, const GeneratorSequence& m,
                    DigitConvention convention = DigitConvention::from1);

/// A point of G_m resolved to its first N coordinates (a rank-N coset).
struct GroupPoint {
  std::vector<Radix> coords;

  std::size_t resolution() const { return coords.size(); }
  friend bool operator==(const GroupPoint&, const GroupPoint&) = default;
};

/// Coset enumeration is little-endian: index = sum_k x_k M_k.
GroupPoint point_from_index(Index i, const GeneratorSequence& m, std::size_t N);
Index index_of(const GroupPoint& x, const GeneratorSequence& m);

GroupPoint group_add(const GeneratorSequence& m, const GroupPoint& x, const GroupPoint& y);
GroupPoint group_sub(const GeneratorSequence& m, const GroupPoint& x, const GroupPoint& y);

/// Same operations on coset indices at resolution N.
Index index_add(const GeneratorSequence& m, std::size_t N, Index x, Index y);
Index index_sub(const GeneratorSequence& m, std::size_t N, Index x, Index y);

/// Largest s <= N with x in I_s, i.e. the number of leading zero coordinates.
std::size_t coset_depth(Index x, const GeneratorSequence& m, std::size_t N);

/// True iff the rank-N coset x lies in I_r(base).
bool in_coset(Index x, Index base, std::size_t r, const GeneratorSequence& m);

}  // namespace vilenkin
