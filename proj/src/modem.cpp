#include "cmod/modem.hpp"

#include <stdexcept>

namespace cmod {

BlockBits BlockBits::from_bits(std::span<const int> bits) {
  if (bits.size() > 32) {
    throw std::invalid_argument("block length exceeds 32 bits");
  }
  BlockBits b;
  b.length = static_cast<int>(bits.size());
  for (int v : bits) {
    if (v != 0 && v != 1) throw std::invalid_argument("bits must be 0 or 1");
    b.value = b.value << 1 | static_cast<std::uint32_t>(v);
  }
  return b;
}

std::vector<int> BlockBits::to_bits() const {
  std::vector<int> out(length);
  for (int i = 0; i < length; ++i) out[i] = bit(i);
  return out;
}

int BlockBits::bit(int i) const {
  if (i < 0 || i >= length) throw std::out_of_range("bit index");
  return static_cast<int>(value >> (length - 1 - i) & 1);
}

const Codeword& encode(const Codebook& cb, BlockBits bits) {
  if (bits.length != cb.bits_per_block()) {
    throw std::invalid_argument("block carries " + std::to_string(bits.length) +
                                " bits, codebook expects " +
                                std::to_string(cb.bits_per_block()));
  }
  if (bits.value >= cb.size()) {
    throw std::invalid_argument("bit value out of codebook range");
  }
  return cb.codewords[bits.value];
}

Detection decode_ml(const Codebook& cb,
                    std::span<const std::complex<double>> received,
                    std::span<const std::complex<double>> gains,
                    DetectorScratch& scratch) {
  const int n = cb.block_size();
  if (static_cast<int>(received.size()) != n ||
      static_cast<int>(gains.size()) != n) {
    throw std::invalid_argument("received/gain vectors must have length N");
  }
  const DetectorTable& table = cb.detector;
  if (table.values.empty()) {
    throw std::logic_error("codebook detector table not built");
  }

  // Metric of every distinct per-subcarrier symbol, then codeword sums by
  // table lookup.
  scratch.value_metric.resize(table.values.size());
  for (int col = 0; col < n; ++col) {
    for (std::size_t v = table.col_offset[col]; v < table.col_offset[col + 1];
         ++v) {
      scratch.value_metric[v] = std::norm(received[col] - gains[col] * table.values[v]);
    }
  }

  const std::size_t count = cb.codewords.size();
  std::uint32_t best = 0;
  double best_metric = 0.0;
  const std::uint16_t* ids = table.value_id.data();
  for (std::size_t i = 0; i < count; ++i, ids += n) {
    double metric = 0.0;
    for (int col = 0; col < n; ++col) {
      metric += scratch.value_metric[table.col_offset[col] + ids[col]];
    }
    if (i == 0 || metric < best_metric) {
      best = static_cast<std::uint32_t>(i);
      best_metric = metric;
    }
  }

  Detection det;
  det.index = best;
  det.bits = BlockBits{best, cb.bits_per_block()};
  det.metric = best_metric;
  return det;
}

}  // namespace cmod
