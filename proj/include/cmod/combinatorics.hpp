#pragma once

#include <cstdint>
#include <vector>

namespace cmod {

enum class CompositionKind { weak, strict };

/// An ordered list of integer parts with a fixed sum. Weak compositions
/// allow zero parts; strict compositions require every part >= 1.
struct Composition {
  std::vector<int> parts;
  int total = 0;
  CompositionKind kind = CompositionKind::weak;

  int size() const { return static_cast<int>(parts.size()); }
};

/// Validating factories. Both compute `total` from the parts and throw
/// std::invalid_argument on empty part lists or out-of-range parts.
Composition make_weak_composition(std::vector<int> parts);
Composition make_strict_composition(std::vector<int> parts);

/// Exact binomial coefficient C(n, k). Returns 0 when k < 0, n < 0 or
/// k > n. Throws std::overflow_error if the value does not fit in 64 bits.
std::uint64_t binomial(int n, int k);

/// Number of weak compositions of `total` into `num_parts` parts,
/// C(total + num_parts - 1, num_parts - 1).
std::uint64_t count_weak(int total, int num_parts);

/// Number of strict compositions of `total` into `num_parts` parts,
/// C(total - 1, num_parts - 1); zero when total < num_parts.
std::uint64_t count_strict(int total, int num_parts);

/// All weak/strict compositions in ascending lexicographic order of the
/// parts tuple. Throws std::length_error when the result would exceed the
/// in-memory enumeration limit.
std::vector<Composition> enumerate_weak(int total, int num_parts);
std::vector<Composition> enumerate_strict(int total, int num_parts);

/// Lexicographic rank of a weak composition among all weak compositions
/// with the same total and part count, computed without enumeration.
///
/// A weak composition maps to the positions of the num_parts - 1 separator
/// bars among total + num_parts - 1 slots; ascending lexicographic order of
/// the parts tuple coincides with ascending lexicographic order of the bar
/// position sets, so the rank is the combinadic rank of that set.
std::uint64_t rank_weak(const Composition& c);

/// Inverse of rank_weak. `rank` must be < count_weak(total, num_parts).
Composition unrank_weak(int total, int num_parts, std::uint64_t rank);

/// Per-part bijection between strict compositions of I and weak
/// compositions of I - N: subtract or add one to every part.
Composition strict_to_weak(const Composition& c);
Composition weak_to_strict(const Composition& c);

/// Lexicographic rank/unrank of k-element subsets of {0, ..., n-1},
/// represented as strictly increasing index lists (the combinadic).
std::uint64_t rank_subset(int n, const std::vector<int>& subset);
std::vector<int> unrank_subset(int n, int k, std::uint64_t rank);

}  // namespace cmod
