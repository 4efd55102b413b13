#include "spyswap/permutation.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <numeric>
#include <sstream>

#include "spyswap/error.hpp"

namespace spyswap {

Permutation::Permutation(std::vector<Elem> mapping) : map_(std::move(mapping)) {
  const std::size_t n = map_.size();
  if (n == 0) throw InvalidInput("permutation must have at least one element");
  std::vector<bool> seen(n + 1, false);
  for (Elem v : map_) {
    if (v < 1 || v > n) {
      throw InvalidInput("value " + std::to_string(v) + " outside 1.." + std::to_string(n));
    }
    if (seen[v]) throw InvalidInput("value " + std::to_string(v) + " repeated");
    seen[v] = true;
  }
}

Permutation Permutation::identity(std::size_t n) {
  if (n == 0) throw InvalidInput("permutation must have at least one element");
  std::vector<Elem> v(n);
  std::iota(v.begin(), v.end(), Elem{1});
  return Permutation(std::move(v), Unchecked{});
}

bool Permutation::is_identity() const noexcept {
  for (std::size_t i = 0; i < map_.size(); ++i) {
    if (map_[i] != i + 1) return false;
  }
  return true;
}

Transposition::Transposition(Elem a, Elem b) : a_(std::min(a, b)), b_(std::max(a, b)) {
  if (a == b) throw InvalidInput("transposition endpoints must differ");
  if (a_ == 0) throw InvalidInput("transposition endpoints are 1-based");
}

Permutation Transposition::as_permutation(std::size_t n) const {
  if (b_ > n) throw InvalidInput("transposition index exceeds permutation size");
  std::vector<Elem> v(n);
  std::iota(v.begin(), v.end(), Elem{1});
  std::swap(v[a_ - 1], v[b_ - 1]);
  return Permutation(std::move(v));
}

std::vector<std::size_t> CycleDecomposition::cycle_type() const {
  std::vector<std::size_t> lengths;
  lengths.reserve(cycles.size());
  for (const auto& c : cycles) lengths.push_back(c.size());
  std::sort(lengths.rbegin(), lengths.rend());
  return lengths;
}

Permutation compose(const Permutation& outer, const Permutation& inner) {
  if (outer.size() != inner.size()) {
    throw DimensionError("compose: sizes " + std::to_string(outer.size()) + " and " +
                         std::to_string(inner.size()) + " differ");
  }
  std::vector<Elem> v(inner.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = outer(inner.map_[i]);
  return Permutation(std::move(v), Permutation::Unchecked{});
}

Permutation invert(const Permutation& p) {
  std::vector<Elem> v(p.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[p.map_[i] - 1] = static_cast<Elem>(i + 1);
  return Permutation(std::move(v), Permutation::Unchecked{});
}

Permutation apply_transposition(const Permutation& p, const Transposition& t, SwapSide side) {
  const std::size_t n = p.size();
  if (t.b() > n) {
    throw InvalidInput("transposition (" + std::to_string(t.a()) + "," + std::to_string(t.b()) +
                       ") out of range for n=" + std::to_string(n));
  }
  std::vector<Elem> v(p.mapping().begin(), p.mapping().end());
  if (side == SwapSide::position) {
    std::swap(v[t.a() - 1], v[t.b() - 1]);
  } else {
    for (auto& x : v) x = t(x);
  }
  return Permutation(std::move(v));
}

CycleDecomposition cycle_decompose(const Permutation& p) {
  CycleDecomposition out;
  std::vector<bool> seen(p.size() + 1, false);
  for (Elem start = 1; start <= p.size(); ++start) {
    if (seen[start]) continue;
    std::vector<Elem> cycle;
    for (Elem x = start; !seen[x]; x = p(x)) {
      seen[x] = true;
      cycle.push_back(x);
    }
    out.max_len = std::max(out.max_len, cycle.size());
    out.cycles.push_back(std::move(cycle));
  }
  return out;
}

std::size_t longest_cycle(const Permutation& p) {
  std::vector<bool> seen(p.size() + 1, false);
  std::size_t best = 0;
  for (Elem start = 1; start <= p.size(); ++start) {
    if (seen[start]) continue;
    std::size_t len = 0;
    for (Elem x = start; !seen[x]; x = p(x)) {
      seen[x] = true;
      ++len;
    }
    best = std::max(best, len);
  }
  return best;
}

std::size_t cycle_length_of(const Permutation& p, Elem x) {
  std::size_t len = 1;
  for (Elem y = p(x); y != x; y = p(y)) ++len;
  return len;
}

Permutation pattern(std::span<const std::int64_t> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return values[i] < values[j]; });
  std::vector<Elem> ranks(values.size());
  for (std::size_t r = 0; r < order.size(); ++r) {
    if (r > 0 && values[order[r]] == values[order[r - 1]]) {
      throw InvalidInput("pattern: duplicate value " + std::to_string(values[order[r]]));
    }
    ranks[order[r]] = static_cast<Elem>(r + 1);
  }
  return Permutation(std::move(ranks));
}

int parity(const Permutation& p) {
  std::vector<bool> seen(p.size() + 1, false);
  std::size_t cycles = 0;
  for (Elem start = 1; start <= p.size(); ++start) {
    if (seen[start]) continue;
    ++cycles;
    for (Elem x = start; !seen[x]; x = p(x)) seen[x] = true;
  }
  return static_cast<int>((p.size() - cycles) % 2);
}

Permutation parse_permutation(const std::string& line) {
  std::vector<Elem> v;
  const char* cur = line.data();
  const char* end = cur + line.size();
  while (cur < end) {
    while (cur < end && (*cur == ' ' || *cur == '\t' || *cur == '\r')) ++cur;
    if (cur == end) break;
    unsigned long value = 0;
    auto [next, ec] = std::from_chars(cur, end, value);
    if (ec != std::errc() || (next < end && *next != ' ' && *next != '\t' && *next != '\r')) {
      throw ParseError("not a 1-based integer list: '" + line + "'");
    }
    if (value > 0xffffffffUL) throw ParseError("value too large in '" + line + "'");
    v.push_back(static_cast<Elem>(value));
    cur = next;
  }
  try {
    return Permutation(std::move(v));
  } catch (const InvalidInput& e) {
    throw ParseError(std::string("invalid permutation: ") + e.what());
  }
}

std::vector<Permutation> read_permutations(std::istream& in) {
  std::vector<Permutation> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(parse_permutation(line));
  }
  return out;
}

std::string format_permutation(const Permutation& p) {
  std::ostringstream os;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) os << ' ';
    os << p.mapping()[i];
  }
  return os.str();
}

}  // namespace spyswap
