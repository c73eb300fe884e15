#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "cmod/codebook.hpp"

namespace cmod {

// Deterministic substream generator. Each (seed, stream, chunk) triple keys
// an independent mt19937_64 via a splitmix64 hash, so trial chunks can be
// handed to any worker without changing the drawn values.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t chunk);

  std::uint64_t next_u64();
  double next_unit();  // uniform on [0, 1), 53-bit resolution
  std::complex<double> next_cgauss(double variance);  // CN(0, variance)
  std::uint32_t next_bits(int count);                 // count <= 32

 private:
  std::mt19937_64 engine_;
};

// Rayleigh block-fading channel: per-subcarrier gains CN(0,1), additive
// noise CN(0, N0), both independent across subcarriers.
struct ChannelBlock {
  std::vector<std::complex<double>> gains;
  std::vector<std::complex<double>> noise;
};

void sample_block(int block_size, double noise_var, Rng& rng,
                  ChannelBlock& block);

struct SimConfig {
  std::uint64_t seed = 1;
  std::uint64_t max_trials = 1'000'000;    // blocks per SNR point
  std::uint64_t target_bit_errors = 200;   // 0 disables early stopping
  int workers = 1;
};

struct BerPoint {
  double snr_db = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t bits_sent = 0;
  std::uint64_t bit_errors = 0;
  std::uint64_t bit_error_sq_sum = 0;  // sum of squared per-trial error counts

  double ber() const {
    return bits_sent ? static_cast<double>(bit_errors) / bits_sent : 0.0;
  }
  // Standard error of ber() from the per-trial error-count variance.
  double ber_std_error() const;
};

using BerCurve = std::vector<BerPoint>;

// Monte Carlo BER at one SNR point. Trials are processed in fixed chunks of
// 256, grouped into superblocks of 32 chunks; the stopping rule is evaluated
// only at superblock boundaries, so the set of simulated chunks (and hence
// every counter) is independent of the worker count. `stream` keys the RNG
// substreams and is conventionally the index of the SNR point in its sweep.
BerPoint run_ber_point(const Codebook& cb, double snr_db, std::uint64_t stream,
                       const SimConfig& cfg);

BerCurve run_ber(const Codebook& cb, std::span<const double> snr_db,
                 const SimConfig& cfg);

}  // namespace cmod
