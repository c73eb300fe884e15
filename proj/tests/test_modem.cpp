#include "cmod/modem.hpp"

#include <cmath>

#include "cmod/selection.hpp"
#include <complex>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"

using namespace cmod;
using cd = std::complex<double>;

TEST_CASE("block bits pack MSB-first") {
  const std::vector<int> bits{1, 0, 1, 1, 0};
  const BlockBits b = BlockBits::from_bits(bits);
  CHECK(b.value == 0b10110);
  CHECK(b.length == 5);
  CHECK(b.to_bits() == bits);
  CHECK(b.bit(0) == 1);
  CHECK(b.bit(1) == 0);
  CHECK(b.bit(4) == 0);

  const BlockBits zero = BlockBits::from_bits(std::vector<int>{});
  CHECK(zero.value == 0);
  CHECK(zero.length == 0);
  CHECK(zero.to_bits().empty());
}

TEST_CASE("block bits round-trip every value") {
  for (int len = 1; len <= 10; ++len) {
    for (std::uint32_t v = 0; v < (std::uint32_t{1} << len); ++v) {
      const BlockBits b{v, len};
      CHECK(BlockBits::from_bits(b.to_bits()) == b);
    }
  }
}

TEST_CASE("block bits reject non-binary input") {
  CHECK_THROWS_AS(BlockBits::from_bits(std::vector<int>{0, 2}),
                  std::invalid_argument);
  CHECK_THROWS_AS(BlockBits::from_bits(std::vector<int>{-1}),
                  std::invalid_argument);
  CHECK_THROWS_AS(BlockBits::from_bits(std::vector<int>(33, 0)),
                  std::invalid_argument);
}

TEST_CASE("encode returns the codeword whose label is the bit value") {
  const Codebook cb = build_wcm(3, 3, 1);
  const int f = cb.bits_per_block();
  REQUIRE(f == 6);
  for (std::uint32_t v = 0; v < cb.size(); ++v) {
    const Codeword& cw = encode(cb, BlockBits{v, f});
    CHECK(cw.label == v);
  }
  CHECK_THROWS_AS(encode(cb, BlockBits{0, 5}), std::invalid_argument);
  CHECK_THROWS_AS(encode(cb, BlockBits{64, 6}), std::invalid_argument);
}

TEST_CASE("ml detection inverts the noiseless channel") {
  const Codebook cb = build_wcm(3, 3, 1);
  const int f = cb.bits_per_block();
  DetectorScratch scratch;

  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<cd> gains(cb.block_size());
  std::vector<cd> y(cb.block_size());

  for (int trial = 0; trial < 2; ++trial) {
    for (auto& h : gains) {
      h = trial == 0 ? cd{1.0, 0.0} : cd{unit(gen), unit(gen)};
    }
    for (std::uint32_t v = 0; v < cb.size(); ++v) {
      const Codeword& cw = encode(cb, BlockBits{v, f});
      for (std::size_t n = 0; n < y.size(); ++n) {
        y[n] = cw.symbols[n] * gains[n];
      }
      const Detection d = decode_ml(cb, y, gains, scratch);
      CHECK(d.index == v);
      CHECK(d.bits == BlockBits{v, f});
      CHECK(d.metric == doctest::Approx(0.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("ml metric equals the residual noise energy") {
  const Codebook cb = build_cm(6, 4, 4);
  const int f = cb.bits_per_block();
  DetectorScratch scratch;

  std::mt19937_64 gen(11);
  std::normal_distribution<double> g(0.0, 0.05);  // small: decision unchanged
  std::uniform_real_distribution<double> unit(0.5, 1.5);
  std::vector<cd> gains(cb.block_size());
  std::vector<cd> y(cb.block_size());

  for (int trial = 0; trial < 50; ++trial) {
    double noise_energy = 0.0;
    const std::uint32_t v =
        static_cast<std::uint32_t>(gen() % cb.size());
    const Codeword& cw = encode(cb, BlockBits{v, f});
    for (std::size_t n = 0; n < y.size(); ++n) {
      gains[n] = cd{unit(gen), unit(gen)};
      const cd noise{g(gen), g(gen)};
      noise_energy += std::norm(noise);
      y[n] = cw.symbols[n] * gains[n] + noise;
    }
    const Detection d = decode_ml(cb, y, gains, scratch);
    REQUIRE(d.index == v);
    CHECK(d.metric == doctest::Approx(noise_energy).epsilon(1e-9));
  }
}

TEST_CASE("ml detection ties resolve to the smallest index") {
  // BPSK on every subcarrier and y = 0 is equidistant from all codewords.
  const Codebook cb = build_ofdm(4, 2);
  DetectorScratch scratch;
  const std::vector<cd> y(4, cd{0.0, 0.0});
  const std::vector<cd> gains(4, cd{1.0, 0.0});
  const Detection d = decode_ml(cb, y, gains, scratch);
  CHECK(d.index == 0);
  CHECK(d.metric == doctest::Approx(4.0));  // |0 - s|^2 = E_T/N = 1 each
}

TEST_CASE("ml detection works on culled codebooks") {
  const CullResult r = cull(build_wcm(4, 4, 1), 8);
  const Codebook& cb = r.codebook;
  DetectorScratch scratch;
  std::vector<cd> y(cb.block_size());
  const std::vector<cd> gains(cb.block_size(), cd{1.0, 0.0});
  for (std::uint32_t v = 0; v < cb.size(); v += 17) {
    for (std::size_t n = 0; n < y.size(); ++n) {
      y[n] = cb.codewords[v].symbols[n];
    }
    const Detection d = decode_ml(cb, y, gains, scratch);
    CHECK(d.index == v);
  }
}

TEST_CASE("ml detection validates inputs") {
  const Codebook cb = build_ofdm(4, 2);
  DetectorScratch scratch;
  const std::vector<cd> v4(4, cd{1.0, 0.0});
  const std::vector<cd> v3(3, cd{1.0, 0.0});
  CHECK_THROWS_AS(decode_ml(cb, v3, v4, scratch), std::invalid_argument);
  CHECK_THROWS_AS(decode_ml(cb, v4, v3, scratch), std::invalid_argument);

  Codebook raw;  // detector table never built
  raw.codewords.resize(1);
  raw.codewords[0].symbols = {cd{1.0, 0.0}};
  raw.codewords[0].energies = {1.0};
  CHECK_THROWS_AS(decode_ml(raw, v3, v3, scratch), std::logic_error);
}
