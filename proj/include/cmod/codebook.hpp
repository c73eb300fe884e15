#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "cmod/combinatorics.hpp"

namespace cmod {

/// Unit-energy M-PSK constellation with binary-reflected Gray labels.
/// points[k] = exp(i 2 pi k / order), labels[k] = k ^ (k >> 1).
struct PskConstellation {
  int order = 0;
  std::vector<std::complex<double>> points;
  std::vector<std::uint32_t> labels;          // Gray label of points[k]
  std::vector<std::uint32_t> point_of_label;  // inverse of labels

  int bits() const;
};

/// Builds the M-PSK constellation. M must be a power of two, 2 <= M <= 2^15.
PskConstellation psk(int order);

enum class Scheme { wcm, cm, ofdm_im, ofdm };

/// Construction parameters; fields not applicable to a scheme stay zero.
struct SchemeParams {
  int energy_units = 0;     // I: total integer energy units per block
  int block_size = 0;       // N: subcarriers per block
  int bits_per_unit = 0;    // lambda (WCM): symbol bits per energy unit
  int psk_order = 0;        // M (CM, OFDM-IM, OFDM)
  int active_count = 0;     // K (OFDM-IM): active subcarriers
};

struct Codeword {
  std::vector<std::complex<double>> symbols;
  std::vector<double> energies;       // |symbol|^2, absolute units
  std::uint32_t label = 0;            // value of the f-bit label
  std::uint64_t composition_rank = 0; // rank of the energy pattern
};

/// Precomputed per-subcarrier tables for fast exhaustive ML detection:
/// column n holds the distinct symbol values appearing on subcarrier n,
/// and value_id maps (codeword, subcarrier) to an index into that column.
struct DetectorTable {
  std::vector<std::complex<double>> values;  // columns concatenated
  std::vector<std::size_t> col_offset;       // size N+1
  std::vector<std::uint16_t> value_id;       // L*N, codeword-major
};

/// A fully enumerated block codebook: 2^f labeled codewords sharing the
/// same total energy. Codewords are stored in label order.
struct Codebook {
  Scheme scheme = Scheme::ofdm;
  SchemeParams params;
  int index_bits = 0;    // f1: bits carried by the energy/index pattern
  int symbol_bits = 0;   // f2: bits carried by constellation symbols
  double total_energy = 0.0;
  bool culled = false;
  int cull_target_bits = 0;  // set when culled
  std::vector<Codeword> codewords;
  DetectorTable detector;

  int bits_per_block() const { return index_bits + symbol_bits; }
  int block_size() const;
  std::size_t size() const { return codewords.size(); }
};

/// Builders. total_energy <= 0 selects the default E_T = N, which makes the
/// average per-subcarrier symbol energy 1.
Codebook build_wcm(int energy_units, int block_size, int bits_per_unit,
                   double total_energy = 0.0);
Codebook build_cm(int energy_units, int block_size, int psk_order,
                  double total_energy = 0.0);
Codebook build_ofdm_im(int block_size, int active_count, int psk_order,
                       double total_energy = 0.0);
Codebook build_ofdm(int block_size, int psk_order, double total_energy = 0.0);

/// Information bits per subcarrier, (f1 + f2) / N.
double spectral_efficiency(const Codebook& cb);

/// Noise variance realizing the given SNR, defined as average symbol energy
/// per subcarrier over noise variance: N0 = (E_T / N) / 10^(snr_db / 10).
double noise_var_for_snr_db(const Codebook& cb, double snr_db);

/// Display name, e.g. "OFDM-WCM (4, 4, 1) + cull(8)".
std::string display_name(const Codebook& cb);

/// Identifier-safe name, e.g. "wcm_4_4_1_cull8".
std::string slug_name(const Codebook& cb);

/// "0", "BPSK", "QPSK", "8-PSK", ...
std::string modulation_name(int order);

/// Human-readable codebook table. For un-culled codebooks this lists one
/// row per energy pattern (composition or active-index set) with its f1
/// bit assignment, flagging patterns beyond 2^f1 as unused; for culled
/// codebooks it lists one row per surviving codeword.
std::string dump_table(const Codebook& cb);

/// Rebuilds invariant-checked derived state (detector tables); builders and
/// cull call this. Exposed for tests that assemble synthetic codebooks.
void finalize_codebook(Codebook& cb);

}  // namespace cmod
