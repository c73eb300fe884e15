#pragma once

#include <span>
#include <vector>

#include "cmod/codebook.hpp"

namespace cmod {

enum class PepMethod { approx, exact };

// Squared per-subcarrier symbol differences |x_n^i - x_n^j|^2.
std::vector<double> pairwise_delta_sq(const Codeword& a, const Codeword& b);

// Rayleigh-averaged pairwise error probability via the two-term exponential
// approximation of the Gaussian tail:
//   (1/12) prod_n (1 + d_n/(4 N0))^-1 + (1/4) prod_n (1 + d_n/(3 N0))^-1.
double pep_approx(std::span<const double> delta_sq, double noise_var);

// Exact Rayleigh-averaged pairwise error probability,
//   (1/pi) int_0^{pi/2} prod_n (1 + d_n/(4 N0 sin^2 t))^-1 dt,
// by Gauss-Legendre quadrature with an order-doubling convergence check
// (relative 1e-9). Throws std::runtime_error if the check fails.
double pep_exact(std::span<const double> delta_sq, double noise_var);

// Union bound on average BER: (1/(f 2^f)) sum_{i != j} PEP(i,j) D(i,j),
// where D is the Hamming distance between the codeword labels.
double union_bound_ber(const Codebook& cb, double noise_var,
                       PepMethod method = PepMethod::approx);

// Smallest SNR (dB) where the union bound reaches target_ber, by bisection
// to 0.01 dB. Throws std::domain_error if [lo_db, hi_db] does not bracket
// the target.
double bound_crossing_snr(const Codebook& cb, double target_ber,
                          PepMethod method = PepMethod::approx,
                          double lo_db = -10.0, double hi_db = 60.0);

}  // namespace cmod
