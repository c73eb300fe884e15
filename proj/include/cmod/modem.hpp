#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "cmod/codebook.hpp"

namespace cmod {

// A block's payload: `length` bits packed MSB-first into `value`.
struct BlockBits {
  std::uint32_t value = 0;
  int length = 0;

  static BlockBits from_bits(std::span<const int> bits);
  std::vector<int> to_bits() const;
  int bit(int i) const;  // i = 0 is the most significant bit

  bool operator==(const BlockBits&) const = default;
};

// Maps a block of bits to its codeword. The codeword label IS the packed
// bit value: the pattern index occupies the high f1 bits, the symbol bits
// the low f2 bits.
const Codeword& encode(const Codebook& cb, BlockBits bits);

struct Detection {
  std::uint32_t index = 0;
  BlockBits bits;
  double metric = 0.0;
};

// Reusable buffers for the per-subcarrier metric table.
struct DetectorScratch {
  std::vector<double> value_metric;
};

// Exhaustive maximum-likelihood detection with known per-subcarrier gains:
// returns the codeword minimizing sum_n |y_n - h_n x_n|^2. Ties resolve to
// the smallest codeword index.
Detection decode_ml(const Codebook& cb,
                    std::span<const std::complex<double>> received,
                    std::span<const std::complex<double>> gains,
                    DetectorScratch& scratch);

}  // namespace cmod
