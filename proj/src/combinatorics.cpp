#include "cmod/combinatorics.hpp"

#include <limits>
#include <stdexcept>
#include <string>

namespace cmod {

namespace {

// Hard cap on in-memory enumeration (counts, not bytes).
constexpr std::uint64_t kEnumerationLimit = std::uint64_t{1} << 26;

void check_part_count(int num_parts) {
  if (num_parts < 1) {
    throw std::invalid_argument("composition must have at least one part");
  }
}

int checked_total(const std::vector<int>& parts, int min_part) {
  if (parts.empty()) {
    throw std::invalid_argument("composition must have at least one part");
  }
  long long total = 0;
  for (int p : parts) {
    if (p < min_part) {
      throw std::invalid_argument("composition part out of range: " +
                                  std::to_string(p));
    }
    total += p;
  }
  if (total > std::numeric_limits<int>::max()) {
    throw std::overflow_error("composition total exceeds int range");
  }
  return static_cast<int>(total);
}

}  // namespace

Composition make_weak_composition(std::vector<int> parts) {
  const int total = checked_total(parts, 0);
  return Composition{std::move(parts), total, CompositionKind::weak};
}

Composition make_strict_composition(std::vector<int> parts) {
  const int total = checked_total(parts, 1);
  return Composition{std::move(parts), total, CompositionKind::strict};
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  unsigned __int128 result = 1;
  for (int i = 1; i <= k; ++i) {
    result *= static_cast<unsigned>(n - k + i);
    result /= static_cast<unsigned>(i);  // exact: C(n-k+i, i) is an integer
    if (result > std::numeric_limits<std::uint64_t>::max()) {
      throw std::overflow_error("binomial(" + std::to_string(n) + ", " +
                                std::to_string(k) + ") exceeds 64 bits");
    }
  }
  return static_cast<std::uint64_t>(result);
}

std::uint64_t count_weak(int total, int num_parts) {
  check_part_count(num_parts);
  if (total < 0) throw std::invalid_argument("total must be non-negative");
  return binomial(total + num_parts - 1, num_parts - 1);
}

std::uint64_t count_strict(int total, int num_parts) {
  check_part_count(num_parts);
  if (total < 1) throw std::invalid_argument("total must be positive");
  return binomial(total - 1, num_parts - 1);
}

namespace {

template <typename Sink>
void visit_compositions(int remaining, int position, int num_parts,
                        int min_part, std::vector<int>& parts, Sink&& sink) {
  if (position == num_parts - 1) {
    parts[position] = remaining;
    sink(parts);
    return;
  }
  // Keep enough for the remaining parts; ascending values give ascending
  // lexicographic output.
  const int reserve = min_part * (num_parts - position - 1);
  for (int v = min_part; v <= remaining - reserve; ++v) {
    parts[position] = v;
    visit_compositions(remaining - v, position + 1, num_parts, min_part,
                       parts, sink);
  }
}

std::vector<Composition> enumerate_impl(int total, int num_parts,
                                        int min_part, CompositionKind kind,
                                        std::uint64_t count) {
  if (count > kEnumerationLimit) {
    throw std::length_error("composition enumeration exceeds limit (" +
                            std::to_string(count) + " items)");
  }
  std::vector<Composition> out;
  out.reserve(count);
  std::vector<int> parts(num_parts, 0);
  visit_compositions(total, 0, num_parts, min_part, parts,
                     [&](const std::vector<int>& p) {
                       out.push_back(Composition{p, total, kind});
                     });
  return out;
}

}  // namespace

std::vector<Composition> enumerate_weak(int total, int num_parts) {
  const std::uint64_t count = count_weak(total, num_parts);
  return enumerate_impl(total, num_parts, 0, CompositionKind::weak, count);
}

std::vector<Composition> enumerate_strict(int total, int num_parts) {
  const std::uint64_t count = count_strict(total, num_parts);
  if (count == 0) return {};
  return enumerate_impl(total, num_parts, 1, CompositionKind::strict, count);
}

std::uint64_t rank_subset(int n, const std::vector<int>& subset) {
  const int k = static_cast<int>(subset.size());
  if (k == 0) return 0;
  int prev = -1;
  for (int s : subset) {
    if (s <= prev || s >= n) {
      throw std::invalid_argument("subset must be strictly increasing in [0, n)");
    }
    prev = s;
  }
  // Lexicographic rank via the dual combinadic:
  //   rank = C(n, k) - 1 - sum_i C(n - 1 - s_i, k - i)
  std::uint64_t rank = binomial(n, k) - 1;
  for (int i = 0; i < k; ++i) {
    rank -= binomial(n - 1 - subset[i], k - i);
  }
  return rank;
}

std::vector<int> unrank_subset(int n, int k, std::uint64_t rank) {
  if (k < 0 || k > n) throw std::invalid_argument("k must be in [0, n]");
  const std::uint64_t count = binomial(n, k);
  if (rank >= count) {
    throw std::out_of_range("subset rank out of range");
  }
  std::vector<int> subset(k);
  std::uint64_t dual = count - 1 - rank;
  int a = n - 1;
  for (int i = 0; i < k; ++i) {
    const int m = k - i;
    while (binomial(a, m) > dual) --a;
    subset[i] = n - 1 - a;
    dual -= binomial(a, m);
    --a;
  }
  return subset;
}

std::uint64_t rank_weak(const Composition& c) {
  if (c.kind != CompositionKind::weak) {
    throw std::invalid_argument("rank_weak requires a weak composition");
  }
  const int total = checked_total(c.parts, 0);
  if (total != c.total) {
    throw std::invalid_argument("composition total does not match parts");
  }
  const int num_parts = c.size();
  const int bars = num_parts - 1;
  if (bars == 0) return 0;
  // Bar j sits after the dashes of parts 0..j: slot prefix_sum(j) + j.
  std::vector<int> bar_positions(bars);
  int prefix = 0;
  for (int j = 0; j < bars; ++j) {
    prefix += c.parts[j];
    bar_positions[j] = prefix + j;
  }
  return rank_subset(total + num_parts - 1, bar_positions);
}

Composition unrank_weak(int total, int num_parts, std::uint64_t rank) {
  const std::uint64_t count = count_weak(total, num_parts);
  if (rank >= count) {
    throw std::out_of_range("weak composition rank " + std::to_string(rank) +
                            " out of range [0, " + std::to_string(count) + ")");
  }
  std::vector<int> parts(num_parts, 0);
  if (num_parts == 1) {
    parts[0] = total;
    return Composition{std::move(parts), total, CompositionKind::weak};
  }
  const int slots = total + num_parts - 1;
  const std::vector<int> bars = unrank_subset(slots, num_parts - 1, rank);
  parts[0] = bars[0];
  for (int j = 1; j < num_parts - 1; ++j) {
    parts[j] = bars[j] - bars[j - 1] - 1;
  }
  parts[num_parts - 1] = slots - 1 - bars[num_parts - 2];
  return Composition{std::move(parts), total, CompositionKind::weak};
}

Composition strict_to_weak(const Composition& c) {
  const int total = checked_total(c.parts, 1);
  std::vector<int> parts(c.parts);
  for (int& p : parts) --p;
  return Composition{std::move(parts), total - c.size(), CompositionKind::weak};
}

Composition weak_to_strict(const Composition& c) {
  const int total = checked_total(c.parts, 0);
  std::vector<int> parts(c.parts);
  for (int& p : parts) ++p;
  return Composition{std::move(parts), total + c.size(),
                     CompositionKind::strict};
}

}  // namespace cmod
