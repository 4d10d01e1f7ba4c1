#include "vilenkin/group.hpp"

#include <algorithm>
#include <charconv>
#include <limits>

#include "vilenkin/error.hpp"

namespace vilenkin {
namespace {

constexpr Index kIndexLimit = static_cast<Index>(std::numeric_limits<std::int64_t>::max());

bool checked_mul(Index a, Index b, Index& out) {
  if (__builtin_mul_overflow(a, b, &out)) return false;
  return out <= kIndexLimit;
}

Radix parse_radix(std::string_view token, std::string_view whole) {
  while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
  while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
  Radix value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size())
    throw ParseError("malformed generator sequence '" + std::string(whole) + "'");
  if (value < 2)
    throw ParseError("generator radices must be >= 2 in '" + std::string(whole) + "'");
  return value;
}

std::vector<Radix> parse_list(std::string_view body, std::string_view whole) {
  std::vector<Radix> out;
  while (true) {
    auto comma = body.find(',');
    out.push_back(parse_radix(body.substr(0, comma), whole));
    if (comma == std::string_view::npos) break;
    body.remove_prefix(comma + 1);
  }
  return out;
}

// Extends `head` by repeating `cycle` until the next scaled base would overflow.
std::vector<Radix> expand(std::vector<Radix> head, const std::vector<Radix>& cycle) {
  Index base = 1;
  std::vector<Radix> out;
  for (std::size_t k = 0;; ++k) {
    Radix r = k < head.size() ? head[k] : cycle[(k - head.size()) % cycle.size()];
    Index next = 0;
    if (!checked_mul(base, r, next)) break;
    out.push_back(r);
    base = next;
  }
  return out;
}

}  // namespace

GeneratorSequence::GeneratorSequence(std::vector<Radix> radices)
    : GeneratorSequence(radices, [&] {
        std::string text;
        for (std::size_t k = 0; k < radices.size(); ++k) {
          if (k) text += ',';
          text += std::to_string(radices[k]);
        }
        return text;
      }()) {}

GeneratorSequence::GeneratorSequence(std::vector<Radix> radices, std::string text)
    : radices_(std::move(radices)), text_(std::move(text)) {
  if (radices_.empty()) throw Error("generator sequence must not be empty");
  bases_.reserve(radices_.size() + 1);
  bases_.push_back(1);
  for (std::size_t k = 0; k < radices_.size(); ++k) {
    if (radices_[k] < 2) throw Error("radix m_" + std::to_string(k) + " is < 2");
    Index next = 0;
    if (!checked_mul(bases_.back(), radices_[k], next))
      throw Error("scaled base M_" + std::to_string(k + 1) + " overflows 64 bits");
    bases_.push_back(next);
  }
  lambda_ = *std::max_element(radices_.begin(), radices_.end());
}

GeneratorSequence GeneratorSequence::parse(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  if (s.empty()) throw ParseError("empty generator sequence");

  if (s.back() == '^') {
    s.remove_suffix(1);
    if (!s.empty() && s.front() == '(' && s.back() == ')') {
      auto cycle = parse_list(s.substr(1, s.size() - 2), text);
      std::string canon = "(" + std::string(s.substr(1, s.size() - 2)) + ")^";
      canon.erase(std::remove(canon.begin(), canon.end(), ' '), canon.end());
      return GeneratorSequence(expand({}, cycle), canon);
    }
    Radix r = parse_radix(s, text);
    return GeneratorSequence(expand({}, {r}), std::to_string(r) + "^");
  }

  auto list = parse_list(s, text);
  std::string canon(s);
  canon.erase(std::remove(canon.begin(), canon.end(), ' '), canon.end());
  return GeneratorSequence(expand(list, {list.back()}), canon);
}

GeneratorSequence GeneratorSequence::constant(Radix radix) {
  if (radix < 2) throw Error("radix must be >= 2");
  return GeneratorSequence(expand({}, {radix}), std::to_string(radix) + "^");
}

Radix GeneratorSequence::radix(std::size_t k) const {
  if (k >= radices_.size())
    throw Error("radix index " + std::to_string(k) + " beyond sequence length");
  return radices_[k];
}

Index GeneratorSequence::scaled_base(std::size_t k) const {
  if (k >= bases_.size())
    throw Error("scaled base M_" + std::to_string(k) + " is not representable");
  return bases_[k];
}

bool GeneratorSequence::agrees_with(const GeneratorSequence& other, std::size_t N) const {
  if (N > max_resolution() || N > other.max_resolution()) return false;
  return std::equal(radices_.begin(), radices_.begin() + static_cast<std::ptrdiff_t>(N),
                    other.radices_.begin());
}

std::vector<Index> scaled_bases(const GeneratorSequence& m, std::size_t N) {
  if (N > m.max_resolution())
    throw Error("resolution " + std::to_string(N) + " exceeds representable length " +
                std::to_string(m.max_resolution()));
  auto all = m.scaled_bases();
  return {all.begin(), all.begin() + static_cast<std::ptrdiff_t>(N + 1)};
}

VIndex decompose(Index n, const GeneratorSequence& m) {
  if (n == 0) throw Error("digit statistics are undefined for n = 0");
  if (n >= m.scaled_base(m.max_resolution()))
    throw Error("index " + std::to_string(n) + " out of range for generator sequence");
  VIndex out;
  out.value = n;
  bool seen = false;
  for (std::size_t j = 0; n != 0; ++j) {
    Radix d = static_cast<Radix>(n % m.radix(j));
    n /= m.radix(j);
    out.digits.push_back(d);
    if (d != 0) {
      if (!seen) out.bottom = j;
      seen = true;
      out.top = j;
    }
  }
  return out;
}

Index reconstruct(std::span<const Radix> digits, const GeneratorSequence& m) {
  Index value = 0;
  for (std::size_t j = 0; j < digits.size(); ++j) {
    if (digits[j] >= m.radix(j)) throw Error("digit out of range at position " + std::to_string(j));
    value += digits[j] * m.scaled_base(j);
  }
  return value;
}

std::string_view to_string(DigitConvention c) {
  return c == DigitConvention::from0 ? "from0" : "from1";
}

DigitConvention parse_convention(std::string_view text) {
  if (text == "from0") return DigitConvention::from0;
  if (text == "from1") return DigitConvention::from1;
  throw ParseError("unknown digit convention '" + std::string(text) + "'");
}

Variation variation(const VIndex& n, const GeneratorSequence& m, DigitConvention convention) {
  if (n.value == 0) throw Error("variation is undefined for n = 0");
  const std::size_t first = convention == DigitConvention::from0 ? 0 : 1;
  auto delta = [&](std::size_t j) -> std::uint64_t { return n.digit(j) != 0 ? 1 : 0; };

  Variation out;
  // delta_j vanishes beyond top, so the last nonzero difference is at j = top.
  for (std::size_t j = first; j <= n.top; ++j)
    out.v += delta(j + 1) > delta(j) ? delta(j + 1) - delta(j) : delta(j) - delta(j + 1);
  out.v += delta(0);

  for (std::size_t j = first; j <= n.top; ++j) {
    if (!delta(j)) continue;
    const std::int64_t neg = static_cast<std::int64_t>((m.radix(j) - n.digit(j)) % m.radix(j));
    out.v_star += static_cast<std::uint64_t>(neg > 1 ? neg - 1 : 1 - neg);
  }
  return out;
}

GroupPoint point_from_index(Index i, const GeneratorSequence& m, std::size_t N) {
  if (N > m.max_resolution() || i >= m.scaled_base(N))
    throw Error("coset index " + std::to_string(i) + " out of range at resolution " +
                std::to_string(N));
  GroupPoint x;
  x.coords.resize(N);
  for (std::size_t k = 0; k < N; ++k) {
    x.coords[k] = static_cast<Radix>(i % m.radix(k));
    i /= m.radix(k);
  }
  return x;
}

Index index_of(const GroupPoint& x, const GeneratorSequence& m) {
  return reconstruct(x.coords, m);
}

namespace {

GroupPoint combine(const GeneratorSequence& m, const GroupPoint& x, const GroupPoint& y,
                   bool subtract) {
  if (x.resolution() != y.resolution())
    throw Error("group operation on points of different resolution");
  if (x.resolution() > m.max_resolution()) throw Error("point resolution exceeds sequence");
  GroupPoint out;
  out.coords.resize(x.resolution());
  for (std::size_t k = 0; k < x.resolution(); ++k) {
    const Radix r = m.radix(k);
    if (x.coords[k] >= r || y.coords[k] >= r)
      throw Error("coordinate out of range at position " + std::to_string(k));
    out.coords[k] = subtract ? (x.coords[k] + r - y.coords[k]) % r : (x.coords[k] + y.coords[k]) % r;
  }
  return out;
}

Index combine_index(const GeneratorSequence& m, std::size_t N, Index x, Index y, bool subtract) {
  Index out = 0;
  for (std::size_t k = 0; k < N; ++k) {
    const Radix r = m.radix(k);
    const Index a = x % r, b = y % r;
    x /= r;
    y /= r;
    out += (subtract ? (a + r - b) % r : (a + b) % r) * m.scaled_base(k);
  }
  return out;
}

}  // namespace

GroupPoint group_add(const GeneratorSequence& m, const GroupPoint& x, const GroupPoint& y) {
  return combine(m, x, y, false);
}

GroupPoint group_sub(const GeneratorSequence& m, const GroupPoint& x, const GroupPoint& y) {
  return combine(m, x, y, true);
}

Index index_add(const GeneratorSequence& m, std::size_t N, Index x, Index y) {
  return combine_index(m, N, x, y, false);
}

Index index_sub(const GeneratorSequence& m, std::size_t N, Index x, Index y) {
  return combine_index(m, N, x, y, true);
}

std::size_t coset_depth(Index x, const GeneratorSequence& m, std::size_t N) {
  std::size_t s = 0;
  while (s < N && x % m.radix(s) == 0) {
    x /= m.radix(s);
    ++s;
  }
  return s;
}

bool in_coset(Index x, Index base, std::size_t r, const GeneratorSequence& m) {
  const Index M = m.scaled_base(r);
  return x % M == base % M;
}

}  // namespace vilenkin
