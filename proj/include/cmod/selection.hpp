#pragma once

#include <cstdint>
#include <vector>

#include "cmod/codebook.hpp"

namespace cmod {

// Dense pairwise rank matrix: entry (i, j) is the number of subcarriers on
// which codewords i and j carry different symbols. Symbols closer than 1e-9
// in Euclidean distance count as equal.
struct RankMatrix {
  std::size_t size = 0;
  std::vector<std::uint8_t> rank;  // size * size entries, row-major

  std::uint8_t at(std::size_t i, std::size_t j) const {
    return rank[i * size + j];
  }
};

RankMatrix rank_matrix(const Codebook& cb);

// One removal step of the greedy cull.
struct CullEvent {
  std::uint32_t removed_label = 0;  // label in the input codebook
  int z_min = 0;                    // smallest nonzero rank at this step
  std::uint32_t count = 0;          // codewords at rank z_min from the removed one
};

struct CullResult {
  Codebook codebook;                       // survivors, relabeled 0..2^R-1
  std::vector<CullEvent> trace;            // one event per removal
  std::vector<std::uint32_t> kept_labels;  // original labels, ascending
};

// Greedy codebook reduction to 2^target_bits codewords. Each step finds the
// smallest nonzero pairwise rank z_min, counts for every codeword how many
// partners sit at exactly z_min, and removes the codeword with the largest
// count (ties broken toward the smallest label). The survivors keep their
// relative order and are relabeled consecutively; the result carries all
// target_bits in the codeword index and none in per-subcarrier symbols.
CullResult cull(const Codebook& cb, int target_bits);

// Distance diagnostics used by the CLI and tests.
struct PairwiseRankSummary {
  int min_rank = 0;                    // smallest rank over codeword pairs
  std::uint64_t pairs_at_min_rank = 0;
  int min_energy_hamming = -1;  // over distinct energy patterns, -1 if single
};

PairwiseRankSummary pairwise_rank_summary(const Codebook& cb);

}  // namespace cmod
