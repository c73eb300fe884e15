#include "cmod/selection.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace cmod {

namespace {

constexpr double kSymbolTolSq = 1e-18;  // squared 1e-9 match tolerance

int differing_positions(const Codeword& a, const Codeword& b) {
  int count = 0;
  for (std::size_t n = 0; n < a.symbols.size(); ++n) {
    if (std::norm(a.symbols[n] - b.symbols[n]) > kSymbolTolSq) ++count;
  }
  return count;
}

}  // namespace

RankMatrix rank_matrix(const Codebook& cb) {
  const std::size_t count = cb.codewords.size();
  RankMatrix m;
  m.size = count;
  m.rank.assign(count * count, 0);
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = i + 1; j < count; ++j) {
      const int r = differing_positions(cb.codewords[i], cb.codewords[j]);
      m.rank[i * count + j] = static_cast<std::uint8_t>(r);
      m.rank[j * count + i] = static_cast<std::uint8_t>(r);
    }
  }
  return m;
}

CullResult cull(const Codebook& cb, int target_bits) {
  const std::size_t count = cb.codewords.size();
  if (target_bits < 1 || target_bits > 24) {
    throw std::invalid_argument("cull target must be between 1 and 24 bits");
  }
  const std::size_t target = std::size_t{1} << target_bits;
  if (target > count) {
    throw std::invalid_argument("cull target 2^" + std::to_string(target_bits) +
                                " exceeds codebook size " +
                                std::to_string(count));
  }

  const RankMatrix m = rank_matrix(cb);
  const int n = cb.block_size();

  // cnt[i][v]: alive partners of i at rank v. g[v]: sum of cnt[.][v] over
  // alive rows, i.e. ordered alive pairs at rank v.
  std::vector<std::uint32_t> cnt(count * (n + 1), 0);
  std::vector<std::uint64_t> g(n + 1, 0);
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = 0; j < count; ++j) {
      if (i == j) continue;
      const int v = m.at(i, j);
      ++cnt[i * (n + 1) + v];
      ++g[v];
    }
  }

  std::vector<bool> alive(count, true);
  std::size_t alive_count = count;
  CullResult result;
  result.trace.reserve(count - target);

  while (alive_count > target) {
    int z_min = -1;
    for (int v = 1; v <= n; ++v) {
      if (g[v] > 0) {
        z_min = v;
        break;
      }
    }
    if (z_min < 0) {
      throw std::logic_error("remaining codewords are pairwise identical");
    }

    std::size_t worst = count;
    std::uint32_t worst_count = 0;
    for (std::size_t i = 0; i < count; ++i) {
      if (!alive[i]) continue;
      const std::uint32_t c = cnt[i * (n + 1) + z_min];
      if (worst == count || c > worst_count) {
        worst = i;
        worst_count = c;
      }
    }

    alive[worst] = false;
    --alive_count;
    for (std::size_t j = 0; j < count; ++j) {
      if (!alive[j]) continue;
      const int v = m.at(worst, j);
      --cnt[j * (n + 1) + v];
      --g[v];
    }
    for (int v = 0; v <= n; ++v) {
      g[v] -= cnt[worst * (n + 1) + v];
    }
    result.trace.push_back(
        CullEvent{cb.codewords[worst].label, z_min, worst_count});
  }

  Codebook out;
  out.scheme = cb.scheme;
  out.params = cb.params;
  out.index_bits = target_bits;
  out.symbol_bits = 0;
  out.total_energy = cb.total_energy;
  out.culled = true;
  out.cull_target_bits = target_bits;
  out.codewords.reserve(target);
  for (std::size_t i = 0; i < count; ++i) {
    if (!alive[i]) continue;
    result.kept_labels.push_back(cb.codewords[i].label);
    Codeword cw = cb.codewords[i];
    cw.label = static_cast<std::uint32_t>(out.codewords.size());
    out.codewords.push_back(std::move(cw));
  }
  finalize_codebook(out);
  result.codebook = std::move(out);
  return result;
}

PairwiseRankSummary pairwise_rank_summary(const Codebook& cb) {
  const std::size_t count = cb.codewords.size();
  PairwiseRankSummary s;
  s.min_rank = cb.block_size() + 1;
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = i + 1; j < count; ++j) {
      const int r = differing_positions(cb.codewords[i], cb.codewords[j]);
      if (r < s.min_rank) {
        s.min_rank = r;
        s.pairs_at_min_rank = 1;
      } else if (r == s.min_rank) {
        ++s.pairs_at_min_rank;
      }
    }
  }

  // One representative energy vector per pattern.
  std::map<std::uint64_t, const std::vector<double>*> patterns;
  for (const Codeword& cw : cb.codewords) {
    patterns.emplace(cw.composition_rank, &cw.energies);
  }
  if (patterns.size() >= 2) {
    s.min_energy_hamming = cb.block_size() + 1;
    for (auto a = patterns.begin(); a != patterns.end(); ++a) {
      for (auto b = std::next(a); b != patterns.end(); ++b) {
        int h = 0;
        for (std::size_t k = 0; k < a->second->size(); ++k) {
          if (std::abs((*a->second)[k] - (*b->second)[k]) > 1e-9) ++h;
        }
        if (h < s.min_energy_hamming) s.min_energy_hamming = h;
      }
    }
  }
  return s;
}

}  // namespace cmod
