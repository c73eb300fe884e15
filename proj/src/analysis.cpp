#include "cmod/analysis.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cmod {

std::vector<double> pairwise_delta_sq(const Codeword& a, const Codeword& b) {
  if (a.symbols.size() != b.symbols.size()) {
    throw std::invalid_argument("codeword length mismatch");
  }
  std::vector<double> d(a.symbols.size());
  for (std::size_t n = 0; n < d.size(); ++n) {
    d[n] = std::norm(a.symbols[n] - b.symbols[n]);
  }
  return d;
}

double pep_approx(std::span<const double> delta_sq, double noise_var) {
  if (noise_var <= 0.0) throw std::invalid_argument("noise variance must be positive");
  // Products evaluated in log space; they underflow double range at high SNR.
  double log_a = 0.0;
  double log_b = 0.0;
  for (double d : delta_sq) {
    log_a += std::log1p(d / (4.0 * noise_var));
    log_b += std::log1p(d / (3.0 * noise_var));
  }
  return std::exp(-log_a) / 12.0 + std::exp(-log_b) / 4.0;
}

namespace {

struct Quadrature {
  std::vector<double> node;    // on [-1, 1]
  std::vector<double> weight;
};

Quadrature gauss_legendre(int order) {
  Quadrature q;
  q.node.resize(order);
  q.weight.resize(order);
  for (int i = 0; i < (order + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double deriv = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      deriv = order * (x * p1 - p0) / (x * x - 1.0);
      const double step = p1 / deriv;
      x -= step;
      if (std::abs(step) < 1e-15) break;
    }
    q.node[i] = -x;
    q.node[order - 1 - i] = x;
    q.weight[i] = q.weight[order - 1 - i] = 2.0 / ((1.0 - x * x) * deriv * deriv);
  }
  return q;
}

double pep_integral(const Quadrature& q, std::span<const double> delta_sq,
                    double noise_var) {
  double sum = 0.0;
  for (std::size_t i = 0; i < q.node.size(); ++i) {
    const double theta = std::numbers::pi / 4.0 * (q.node[i] + 1.0);
    const double s = std::sin(theta);
    const double denom = 4.0 * noise_var * s * s;
    double lg = 0.0;
    for (double d : delta_sq) lg += std::log1p(d / denom);
    sum += q.weight[i] * std::exp(-lg);
  }
  // (1/pi) * (pi/4) * sum
  return sum / 4.0;
}

}  // namespace

double pep_exact(std::span<const double> delta_sq, double noise_var) {
  if (noise_var <= 0.0) throw std::invalid_argument("noise variance must be positive");
  static const Quadrature q96 = gauss_legendre(96);
  static const Quadrature q192 = gauss_legendre(192);
  const double coarse = pep_integral(q96, delta_sq, noise_var);
  const double fine = pep_integral(q192, delta_sq, noise_var);
  const double scale = std::max(std::abs(fine), 1e-300);
  if (std::abs(fine - coarse) > 1e-9 * scale) {
    throw std::runtime_error("pairwise error probability quadrature did not converge");
  }
  return fine;
}

double union_bound_ber(const Codebook& cb, double noise_var, PepMethod method) {
  if (noise_var <= 0.0) throw std::invalid_argument("noise variance must be positive");
  const int f = cb.bits_per_block();
  const std::size_t count = cb.size();
  if (count != (std::size_t{1} << f)) {
    throw std::logic_error("codebook size must equal 2^f");
  }
  const int n = cb.block_size();
  std::vector<double> d(n);
  double sum = 0.0;
  double comp = 0.0;  // Kahan compensation
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = i + 1; j < count; ++j) {
      const Codeword& a = cb.codewords[i];
      const Codeword& b = cb.codewords[j];
      for (int k = 0; k < n; ++k) d[k] = std::norm(a.symbols[k] - b.symbols[k]);
      const double pep = method == PepMethod::approx ? pep_approx(d, noise_var)
                                                     : pep_exact(d, noise_var);
      const int dist = std::popcount(a.label ^ b.label);
      const double term = 2.0 * pep * dist;  // both orderings of the pair
      const double y = term - comp;
      const double t = sum + y;
      comp = (t - sum) - y;
      sum = t;
    }
  }
  return sum / (static_cast<double>(f) * static_cast<double>(count));
}

double bound_crossing_snr(const Codebook& cb, double target_ber,
                          PepMethod method, double lo_db, double hi_db) {
  if (!(target_ber > 0.0 && target_ber < 0.5)) {
    throw std::invalid_argument("target BER must lie in (0, 0.5)");
  }
  const auto bound_at = [&](double db) {
    return union_bound_ber(cb, noise_var_for_snr_db(cb, db), method);
  };
  double lo = lo_db;
  double hi = hi_db;
  if (!(bound_at(lo) >= target_ber && bound_at(hi) <= target_ber)) {
    throw std::domain_error("target BER not bracketed by the SNR search range");
  }
  while (hi - lo > 0.01) {
    const double mid = 0.5 * (lo + hi);
    if (bound_at(mid) > target_ber) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace cmod
