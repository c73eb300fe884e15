#include "cmod/channel.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "cmod/modem.hpp"

namespace cmod {

namespace {

// Trials per RNG substream and substreams per stopping-rule check. The
// stopping rule fires only on superblock boundaries, so which chunks run is
// a function of the accumulated counts alone, never of worker scheduling.
constexpr std::uint64_t kChunkTrials = 256;
constexpr std::uint64_t kStopCheckChunks = 32;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t absorb(std::uint64_t h, std::uint64_t v) {
  return mix64(h + 0x9E3779B97F4A7C15ULL + v);
}

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t chunk) {
  std::uint64_t h = absorb(0, seed);
  h = absorb(h, stream);
  h = absorb(h, chunk);
  engine_.seed(h);
}

std::uint64_t Rng::next_u64() { return engine_(); }

double Rng::next_unit() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::complex<double> Rng::next_cgauss(double variance) {
  // Box-Muller in polar form: exponential magnitude-squared, uniform phase.
  const double u1 = 1.0 - next_unit();  // (0, 1], keeps log finite
  const double u2 = next_unit();
  const double r = std::sqrt(-variance * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(angle), r * std::sin(angle)};
}

std::uint32_t Rng::next_bits(int count) {
  if (count < 0 || count > 32) throw std::invalid_argument("bit count");
  if (count == 0) return 0;
  return static_cast<std::uint32_t>(next_u64() >> (64 - count));
}

void sample_block(int block_size, double noise_var, Rng& rng,
                  ChannelBlock& block) {
  if (noise_var <= 0.0) throw std::invalid_argument("noise variance must be positive");
  block.gains.resize(block_size);
  block.noise.resize(block_size);
  for (int i = 0; i < block_size; ++i) block.gains[i] = rng.next_cgauss(1.0);
  for (int i = 0; i < block_size; ++i) {
    block.noise[i] = rng.next_cgauss(noise_var);
  }
}

double BerPoint::ber_std_error() const {
  if (trials < 2 || bits_sent == 0) return 0.0;
  const double mean = static_cast<double>(bit_errors) / trials;
  const double var =
      (static_cast<double>(bit_error_sq_sum) - trials * mean * mean) /
      (trials - 1);
  const double bits_per_trial = static_cast<double>(bits_sent) / trials;
  return std::sqrt(std::max(var, 0.0) / trials) / bits_per_trial;
}

namespace {

struct ChunkAccum {
  std::uint64_t trials = 0;
  std::uint64_t bit_errors = 0;
  std::uint64_t bit_error_sq_sum = 0;

  void merge(const ChunkAccum& o) {
    trials += o.trials;
    bit_errors += o.bit_errors;
    bit_error_sq_sum += o.bit_error_sq_sum;
  }
};

ChunkAccum run_chunk(const Codebook& cb, double noise_var, std::uint64_t seed,
                     std::uint64_t stream, std::uint64_t chunk,
                     std::uint64_t trials, ChannelBlock& block,
                     std::vector<std::complex<double>>& received,
                     DetectorScratch& scratch) {
  Rng rng(seed, stream, chunk);
  const int f = cb.bits_per_block();
  const int n = cb.block_size();
  ChunkAccum acc;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const std::uint32_t sent = rng.next_bits(f);
    const Codeword& cw = cb.codewords[sent];
    sample_block(n, noise_var, rng, block);
    for (int i = 0; i < n; ++i) {
      received[i] = block.gains[i] * cw.symbols[i] + block.noise[i];
    }
    const Detection det = decode_ml(cb, received, block.gains, scratch);
    const std::uint64_t errs = std::popcount(sent ^ det.index);
    acc.bit_errors += errs;
    acc.bit_error_sq_sum += errs * errs;
  }
  acc.trials = trials;
  return acc;
}

}  // namespace

BerPoint run_ber_point(const Codebook& cb, double snr_db, std::uint64_t stream,
                       const SimConfig& cfg) {
  if (cfg.max_trials < 1) throw std::invalid_argument("max_trials must be >= 1");
  if (cfg.workers < 1) throw std::invalid_argument("workers must be >= 1");
  const double noise_var = noise_var_for_snr_db(cb, snr_db);
  const std::uint64_t chunk_count =
      (cfg.max_trials + kChunkTrials - 1) / kChunkTrials;
  const auto chunk_trials = [&](std::uint64_t c) {
    return c + 1 == chunk_count ? cfg.max_trials - c * kChunkTrials
                                : kChunkTrials;
  };

  BerPoint pt;
  pt.snr_db = snr_db;
  for (std::uint64_t first = 0; first < chunk_count;
       first += kStopCheckChunks) {
    const std::uint64_t last =
        std::min(first + kStopCheckChunks, chunk_count);
    if (cfg.workers == 1 || last - first == 1) {
      ChannelBlock block;
      std::vector<std::complex<double>> received(cb.block_size());
      DetectorScratch scratch;
      for (std::uint64_t c = first; c < last; ++c) {
        const ChunkAccum acc =
            run_chunk(cb, noise_var, cfg.seed, stream, c, chunk_trials(c),
                      block, received, scratch);
        pt.trials += acc.trials;
        pt.bit_errors += acc.bit_errors;
        pt.bit_error_sq_sum += acc.bit_error_sq_sum;
      }
    } else {
      const int workers =
          static_cast<int>(std::min<std::uint64_t>(cfg.workers, last - first));
      std::vector<ChunkAccum> partial(workers);
      std::vector<std::thread> pool;
      pool.reserve(workers);
      for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          ChannelBlock block;
          std::vector<std::complex<double>> received(cb.block_size());
          DetectorScratch scratch;
          for (std::uint64_t c = first + w; c < last; c += workers) {
            partial[w].merge(run_chunk(cb, noise_var, cfg.seed, stream, c,
                                       chunk_trials(c), block, received,
                                       scratch));
          }
        });
      }
      for (auto& t : pool) t.join();
      for (const ChunkAccum& acc : partial) {
        pt.trials += acc.trials;
        pt.bit_errors += acc.bit_errors;
        pt.bit_error_sq_sum += acc.bit_error_sq_sum;
      }
    }
    if (cfg.target_bit_errors > 0 && pt.bit_errors >= cfg.target_bit_errors) {
      break;
    }
  }
  pt.bits_sent = pt.trials * cb.bits_per_block();
  return pt;
}

BerCurve run_ber(const Codebook& cb, std::span<const double> snr_db,
                 const SimConfig& cfg) {
  if (snr_db.empty()) throw std::invalid_argument("SNR sweep is empty");
  BerCurve curve;
  curve.reserve(snr_db.size());
  for (std::size_t i = 0; i < snr_db.size(); ++i) {
    curve.push_back(run_ber_point(cb, snr_db[i], i, cfg));
  }
  return curve;
}

}  // namespace cmod
