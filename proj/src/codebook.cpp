#include "cmod/codebook.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace cmod {

namespace {

// Explicit enumeration is limited to f <= 24 bits per block.
constexpr int kMaxBlockBits = 24;
constexpr int kMaxPskOrder = 1 << 15;

int floor_log2(std::uint64_t x) {
  return std::bit_width(x) - 1;
}

bool is_pow2(int x) { return x >= 1 && (x & (x - 1)) == 0; }

double resolve_total_energy(double requested, int block_size) {
  if (requested <= 0.0) return static_cast<double>(block_size);
  return requested;
}

void check_block_bits(int f) {
  if (f > kMaxBlockBits) {
    throw std::length_error("codebook needs " + std::to_string(f) +
                            " bits per block; explicit enumeration is capped at " +
                            std::to_string(kMaxBlockBits));
  }
  if (f < 1) {
    throw std::invalid_argument("codebook carries no bits");
  }
}

// Pulls the per-subcarrier bit chunks out of the f2-bit value, most
// significant chunk on the lowest subcarrier index.
std::uint32_t take_chunk(std::uint32_t value, int& bits_left, int width) {
  bits_left -= width;
  return (value >> bits_left) & ((std::uint32_t{1} << width) - 1);
}

struct ConstellationCache {
  std::map<int, PskConstellation> by_order;

  const PskConstellation& get(int order) {
    auto it = by_order.find(order);
    if (it == by_order.end()) {
      it = by_order.emplace(order, psk(order)).first;
    }
    return it->second;
  }
};

}  // namespace

int PskConstellation::bits() const { return floor_log2(order); }

PskConstellation psk(int order) {
  if (!is_pow2(order) || order < 2) {
    throw std::invalid_argument("PSK order must be a power of two >= 2, got " +
                                std::to_string(order));
  }
  if (order > kMaxPskOrder) {
    throw std::invalid_argument("PSK order " + std::to_string(order) +
                                " exceeds implementation limit " +
                                std::to_string(kMaxPskOrder));
  }
  PskConstellation c;
  c.order = order;
  c.points.resize(order);
  c.labels.resize(order);
  c.point_of_label.resize(order);
  for (int k = 0; k < order; ++k) {
    const double angle = 2.0 * std::numbers::pi * k / order;
    c.points[k] = {std::cos(angle), std::sin(angle)};
    const std::uint32_t gray = static_cast<std::uint32_t>(k ^ (k >> 1));
    c.labels[k] = gray;
    c.point_of_label[gray] = static_cast<std::uint32_t>(k);
  }
  return c;
}

int Codebook::block_size() const {
  return codewords.empty() ? params.block_size
                           : static_cast<int>(codewords.front().symbols.size());
}

void finalize_codebook(Codebook& cb) {
  const std::size_t count = cb.codewords.size();
  if (count == 0) throw std::invalid_argument("codebook is empty");
  const int n = static_cast<int>(cb.codewords.front().symbols.size());
  for (std::size_t i = 0; i < count; ++i) {
    const Codeword& cw = cb.codewords[i];
    if (cw.label != i) {
      throw std::invalid_argument("codeword labels must equal their index");
    }
    if (static_cast<int>(cw.symbols.size()) != n ||
        static_cast<int>(cw.energies.size()) != n) {
      throw std::invalid_argument("codeword length mismatch");
    }
  }

  DetectorTable table;
  table.col_offset.assign(n + 1, 0);
  table.value_id.resize(count * n);
  struct Key {
    double re, im;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      std::hash<double> h;
      return h(k.re) * 1000003u ^ h(k.im);
    }
  };
  for (int col = 0; col < n; ++col) {
    std::unordered_map<Key, std::uint16_t, KeyHash> seen;
    const std::size_t base = table.values.size();
    for (std::size_t i = 0; i < count; ++i) {
      const std::complex<double> s = cb.codewords[i].symbols[col];
      const Key key{s.real(), s.imag()};
      auto it = seen.find(key);
      if (it == seen.end()) {
        const std::size_t id = table.values.size() - base;
        if (id > 0xFFFF) {
          throw std::length_error("too many distinct symbols per subcarrier");
        }
        it = seen.emplace(key, static_cast<std::uint16_t>(id)).first;
        table.values.push_back(s);
      }
      table.value_id[i * n + col] = it->second;
    }
    table.col_offset[col + 1] = table.values.size();
  }
  cb.detector = std::move(table);
}

namespace {

void append_codeword(Codebook& cb, std::vector<std::complex<double>> symbols,
                     std::vector<double> energies, std::uint64_t pattern_rank) {
  Codeword cw;
  cw.symbols = std::move(symbols);
  cw.energies = std::move(energies);
  cw.label = static_cast<std::uint32_t>(cb.codewords.size());
  cw.composition_rank = pattern_rank;
  cb.codewords.push_back(std::move(cw));
}

void check_energy_budget(const Codebook& cb) {
  for (const Codeword& cw : cb.codewords) {
    double sum = 0.0;
    for (double e : cw.energies) sum += e;
    if (std::abs(sum - cb.total_energy) > 1e-9 * cb.total_energy) {
      throw std::logic_error("codeword energy does not sum to E_T");
    }
  }
}

}  // namespace

Codebook build_wcm(int energy_units, int block_size, int bits_per_unit,
                   double total_energy) {
  if (energy_units < 1) throw std::invalid_argument("I must be >= 1");
  if (block_size < 1) throw std::invalid_argument("N must be >= 1");
  if (bits_per_unit < 1) throw std::invalid_argument("lambda must be >= 1");
  const std::uint64_t pattern_count = count_weak(energy_units, block_size);
  if (pattern_count < 2) {
    throw std::invalid_argument("WCM needs at least two weak compositions");
  }
  const int f1 = floor_log2(pattern_count);
  const int f2 = bits_per_unit * energy_units;
  check_block_bits(f1 + f2);
  // A subcarrier holding all I units would need a 2^(lambda*I)-PSK.
  if ((std::uint64_t{1} << f2) > kMaxPskOrder) {
    throw std::invalid_argument("required constellation order 2^" +
                                std::to_string(f2) +
                                " exceeds implementation limit");
  }

  Codebook cb;
  cb.scheme = Scheme::wcm;
  cb.params = SchemeParams{energy_units, block_size, bits_per_unit, 0, 0};
  cb.index_bits = f1;
  cb.symbol_bits = f2;
  cb.total_energy = resolve_total_energy(total_energy, block_size);
  cb.codewords.reserve(std::size_t{1} << (f1 + f2));

  ConstellationCache cache;
  const double unit = cb.total_energy / energy_units;
  for (std::uint64_t r = 0; r < (std::uint64_t{1} << f1); ++r) {
    const Composition comp = unrank_weak(energy_units, block_size, r);
    for (std::uint32_t v = 0; v < (std::uint32_t{1} << f2); ++v) {
      std::vector<std::complex<double>> symbols(block_size);
      std::vector<double> energies(block_size);
      int bits_left = f2;
      for (int i = 0; i < block_size; ++i) {
        const int units = comp.parts[i];
        if (units == 0) {
          symbols[i] = 0.0;
          energies[i] = 0.0;
          continue;
        }
        const int sym_bits = bits_per_unit * units;
        const std::uint32_t chunk = take_chunk(v, bits_left, sym_bits);
        const PskConstellation& con = cache.get(1 << sym_bits);
        const double energy = units * unit;
        symbols[i] = std::sqrt(energy) * con.points[con.point_of_label[chunk]];
        energies[i] = energy;
      }
      append_codeword(cb, std::move(symbols), std::move(energies), r);
    }
  }
  check_energy_budget(cb);
  finalize_codebook(cb);
  return cb;
}

Codebook build_cm(int energy_units, int block_size, int psk_order,
                  double total_energy) {
  if (block_size < 1) throw std::invalid_argument("N must be >= 1");
  if (energy_units < block_size) {
    throw std::invalid_argument("I must be >= N for CM");
  }
  const PskConstellation con = psk(psk_order);
  const std::uint64_t pattern_count = count_strict(energy_units, block_size);
  const int f1 = floor_log2(pattern_count);
  const int f2 = block_size * con.bits();
  check_block_bits(f1 + f2);

  Codebook cb;
  cb.scheme = Scheme::cm;
  cb.params = SchemeParams{energy_units, block_size, 0, psk_order, 0};
  cb.index_bits = f1;
  cb.symbol_bits = f2;
  cb.total_energy = resolve_total_energy(total_energy, block_size);
  cb.codewords.reserve(std::size_t{1} << (f1 + f2));

  const double unit = cb.total_energy / energy_units;
  const int sym_bits = con.bits();
  for (std::uint64_t r = 0; r < (std::uint64_t{1} << f1); ++r) {
    // The r-th strict composition in lexicographic order: shift the weak
    // composition of I - N up by one unit per part.
    const Composition comp = weak_to_strict(
        unrank_weak(energy_units - block_size, block_size, r));
    for (std::uint32_t v = 0; v < (std::uint32_t{1} << f2); ++v) {
      std::vector<std::complex<double>> symbols(block_size);
      std::vector<double> energies(block_size);
      int bits_left = f2;
      for (int i = 0; i < block_size; ++i) {
        const std::uint32_t chunk = take_chunk(v, bits_left, sym_bits);
        const double energy = comp.parts[i] * unit;
        symbols[i] = std::sqrt(energy) * con.points[con.point_of_label[chunk]];
        energies[i] = energy;
      }
      append_codeword(cb, std::move(symbols), std::move(energies), r);
    }
  }
  check_energy_budget(cb);
  finalize_codebook(cb);
  return cb;
}

Codebook build_ofdm_im(int block_size, int active_count, int psk_order,
                       double total_energy) {
  if (block_size < 1) throw std::invalid_argument("N must be >= 1");
  if (active_count < 1 || active_count > block_size) {
    throw std::invalid_argument("K must satisfy 1 <= K <= N");
  }
  const PskConstellation con = psk(psk_order);
  const std::uint64_t pattern_count = binomial(block_size, active_count);
  const int f1 = floor_log2(pattern_count);
  const int f2 = active_count * con.bits();
  check_block_bits(f1 + f2);

  Codebook cb;
  cb.scheme = Scheme::ofdm_im;
  cb.params = SchemeParams{0, block_size, 0, psk_order, active_count};
  cb.index_bits = f1;
  cb.symbol_bits = f2;
  cb.total_energy = resolve_total_energy(total_energy, block_size);
  cb.codewords.reserve(std::size_t{1} << (f1 + f2));

  const double energy = cb.total_energy / active_count;
  const double amp = std::sqrt(energy);
  const int sym_bits = con.bits();
  for (std::uint64_t r = 0; r < (std::uint64_t{1} << f1); ++r) {
    const std::vector<int> active = unrank_subset(block_size, active_count, r);
    std::vector<bool> is_active(block_size, false);
    for (int i : active) is_active[i] = true;
    for (std::uint32_t v = 0; v < (std::uint32_t{1} << f2); ++v) {
      std::vector<std::complex<double>> symbols(block_size);
      std::vector<double> energies(block_size);
      int bits_left = f2;
      for (int i = 0; i < block_size; ++i) {
        if (!is_active[i]) {
          symbols[i] = 0.0;
          energies[i] = 0.0;
          continue;
        }
        const std::uint32_t chunk = take_chunk(v, bits_left, sym_bits);
        symbols[i] = amp * con.points[con.point_of_label[chunk]];
        energies[i] = energy;
      }
      append_codeword(cb, std::move(symbols), std::move(energies), r);
    }
  }
  check_energy_budget(cb);
  finalize_codebook(cb);
  return cb;
}

Codebook build_ofdm(int block_size, int psk_order, double total_energy) {
  if (block_size < 1) throw std::invalid_argument("N must be >= 1");
  const PskConstellation con = psk(psk_order);
  const int f2 = block_size * con.bits();
  check_block_bits(f2);

  Codebook cb;
  cb.scheme = Scheme::ofdm;
  cb.params = SchemeParams{0, block_size, 0, psk_order, 0};
  cb.index_bits = 0;
  cb.symbol_bits = f2;
  cb.total_energy = resolve_total_energy(total_energy, block_size);
  cb.codewords.reserve(std::size_t{1} << f2);

  const double energy = cb.total_energy / block_size;
  const double amp = std::sqrt(energy);
  const int sym_bits = con.bits();
  for (std::uint32_t v = 0; v < (std::uint32_t{1} << f2); ++v) {
    std::vector<std::complex<double>> symbols(block_size);
    std::vector<double> energies(block_size, energy);
    int bits_left = f2;
    for (int i = 0; i < block_size; ++i) {
      const std::uint32_t chunk = take_chunk(v, bits_left, sym_bits);
      symbols[i] = amp * con.points[con.point_of_label[chunk]];
    }
    append_codeword(cb, std::move(symbols), std::move(energies), 0);
  }
  check_energy_budget(cb);
  finalize_codebook(cb);
  return cb;
}

double spectral_efficiency(const Codebook& cb) {
  return static_cast<double>(cb.bits_per_block()) / cb.params.block_size;
}

double noise_var_for_snr_db(const Codebook& cb, double snr_db) {
  const double symbol_energy = cb.total_energy / cb.params.block_size;
  return symbol_energy / std::pow(10.0, snr_db / 10.0);
}

std::string modulation_name(int order) {
  switch (order) {
    case 1: return "0";
    case 2: return "BPSK";
    case 4: return "QPSK";
    default: return std::to_string(order) + "-PSK";
  }
}

namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string fraction(int numer, int denom) {
  if (numer == 0) return "0";
  if (numer == denom) return "1";
  return std::to_string(numer) + "/" + std::to_string(denom);
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += items[i];
  }
  return out;
}

std::string bit_string(std::uint64_t value, int width) {
  std::string s(width, '0');
  for (int i = 0; i < width; ++i) {
    if (value >> (width - 1 - i) & 1) s[i] = '1';
  }
  return s;
}

void append_aligned(std::string& out,
                    const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& row : rows) {
    if (width.size() < row.size()) width.resize(row.size(), 0);
    for (std::size_t c = 0; c < row.size(); ++c) {
      width[c] = std::max(width[c], row[c].size());
    }
  }
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      line += row[c];
      if (c + 1 < row.size()) {
        line.append(width[c] - row[c].size() + 2, ' ');
      }
    }
    out += line;
    out += '\n';
  }
}

std::string composition_cell(int total, const std::vector<int>& parts) {
  std::string s = std::to_string(total) + "=";
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) s += "+";
    s += std::to_string(parts[i]);
  }
  return s;
}

struct PatternRow {
  std::string pattern;
  std::vector<int> energy_numer;  // per subcarrier, over `denom`
  std::vector<int> mod_order;     // constellation order, 1 = inactive
};

std::string dump_patterns(const Codebook& cb, const std::string& pattern_header,
                          const std::vector<PatternRow>& rows, int denom) {
  std::string out;
  const std::uint64_t used = std::uint64_t{1} << cb.index_bits;
  std::vector<std::vector<std::string>> table;
  table.push_back({pattern_header, "energies/E_T", "modulation", "f1 bits"});
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::vector<std::string> energy_cells, mod_cells;
    for (std::size_t i = 0; i < rows[r].energy_numer.size(); ++i) {
      energy_cells.push_back(fraction(rows[r].energy_numer[i], denom));
      mod_cells.push_back(modulation_name(rows[r].mod_order[i]));
    }
    table.push_back({rows[r].pattern, join(energy_cells),
                     "(" + join(mod_cells) + ")",
                     r < used ? bit_string(r, cb.index_bits) : "unused"});
  }
  append_aligned(out, table);
  return out;
}

std::string dump_culled(const Codebook& cb) {
  std::string out;
  std::vector<std::vector<std::string>> table;
  table.push_back({"label bits", "pattern rank", "energies/E_T", "symbols"});
  for (const Codeword& cw : cb.codewords) {
    std::vector<std::string> energy_cells, sym_cells;
    for (std::size_t i = 0; i < cw.energies.size(); ++i) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.4g", cw.energies[i] / cb.total_energy);
      energy_cells.push_back(buf);
      std::snprintf(buf, sizeof buf, "%.4g%+.4gi", cw.symbols[i].real(),
                    cw.symbols[i].imag());
      sym_cells.push_back(buf);
    }
    table.push_back({bit_string(cw.label, cb.bits_per_block()),
                     std::to_string(cw.composition_rank), join(energy_cells),
                     join(sym_cells)});
  }
  append_aligned(out, table);
  return out;
}

}  // namespace

std::string display_name(const Codebook& cb) {
  const SchemeParams& p = cb.params;
  std::string name;
  switch (cb.scheme) {
    case Scheme::wcm:
      name = "OFDM-WCM (" + std::to_string(p.energy_units) + ", " +
             std::to_string(p.block_size) + ", " +
             std::to_string(p.bits_per_unit) + ")";
      break;
    case Scheme::cm:
      name = "OFDM-CM (" + std::to_string(p.energy_units) + ", " +
             std::to_string(p.block_size) + ", " + std::to_string(p.psk_order) +
             ")";
      break;
    case Scheme::ofdm_im:
      name = "OFDM-IM (" + std::to_string(p.block_size) + ", " +
             std::to_string(p.active_count) + ", " +
             std::to_string(p.psk_order) + ")";
      break;
    case Scheme::ofdm:
      name = "OFDM (" + std::to_string(p.block_size) + ", " +
             modulation_name(p.psk_order) + ")";
      break;
  }
  if (cb.culled) {
    name += " + cull(" + std::to_string(cb.cull_target_bits) + ")";
  }
  return name;
}

std::string slug_name(const Codebook& cb) {
  const SchemeParams& p = cb.params;
  std::string name;
  switch (cb.scheme) {
    case Scheme::wcm:
      name = "wcm_" + std::to_string(p.energy_units) + "_" +
             std::to_string(p.block_size) + "_" +
             std::to_string(p.bits_per_unit);
      break;
    case Scheme::cm:
      name = "cm_" + std::to_string(p.energy_units) + "_" +
             std::to_string(p.block_size) + "_" + std::to_string(p.psk_order);
      break;
    case Scheme::ofdm_im:
      name = "im_" + std::to_string(p.block_size) + "_" +
             std::to_string(p.active_count) + "_" + std::to_string(p.psk_order);
      break;
    case Scheme::ofdm:
      name = "ofdm_" + std::to_string(p.block_size) + "_" +
             std::to_string(p.psk_order);
      break;
  }
  if (cb.culled) name += "_cull" + std::to_string(cb.cull_target_bits);
  return name;
}

std::string dump_table(const Codebook& cb) {
  const SchemeParams& p = cb.params;
  std::string out = "scheme: " + display_name(cb) + "\n";
  out += "block: N=" + std::to_string(p.block_size) + " subcarriers, E_T=" +
         format_double(cb.total_energy) + "\n";
  out += "bits: f1=" + std::to_string(cb.index_bits) + " pattern + f2=" +
         std::to_string(cb.symbol_bits) + " symbol = " +
         std::to_string(cb.bits_per_block()) + " per block, L=" +
         std::to_string(cb.size()) + " codewords, SE=" +
         format_double(spectral_efficiency(cb)) + " bits/subcarrier\n";

  if (cb.culled) {
    out += "\n";
    out += dump_culled(cb);
    return out;
  }

  std::vector<PatternRow> rows;
  std::string header;
  int denom = 1;
  switch (cb.scheme) {
    case Scheme::wcm: {
      header = "composition";
      denom = p.energy_units;
      const auto comps = enumerate_weak(p.energy_units, p.block_size);
      for (const Composition& c : comps) {
        PatternRow row;
        row.pattern = composition_cell(p.energy_units, c.parts);
        row.energy_numer = c.parts;
        for (int u : c.parts) {
          row.mod_order.push_back(u == 0 ? 1 : 1 << (p.bits_per_unit * u));
        }
        rows.push_back(std::move(row));
      }
      out += "patterns: " + std::to_string(comps.size()) +
             " weak compositions of " + std::to_string(p.energy_units) +
             " into " + std::to_string(p.block_size) + " parts (" +
             std::to_string(std::uint64_t{1} << cb.index_bits) + " used, " +
             std::to_string(comps.size() -
                            (std::uint64_t{1} << cb.index_bits)) +
             " unused)\n";
      break;
    }
    case Scheme::cm: {
      header = "composition";
      denom = p.energy_units;
      const auto comps = enumerate_strict(p.energy_units, p.block_size);
      for (const Composition& c : comps) {
        PatternRow row;
        row.pattern = composition_cell(p.energy_units, c.parts);
        row.energy_numer = c.parts;
        row.mod_order.assign(c.parts.size(), p.psk_order);
        rows.push_back(std::move(row));
      }
      out += "patterns: " + std::to_string(comps.size()) +
             " compositions of " + std::to_string(p.energy_units) + " into " +
             std::to_string(p.block_size) + " parts (" +
             std::to_string(std::uint64_t{1} << cb.index_bits) + " used, " +
             std::to_string(comps.size() -
                            (std::uint64_t{1} << cb.index_bits)) +
             " unused)\n";
      break;
    }
    case Scheme::ofdm_im: {
      header = "active set";
      denom = p.active_count;
      const std::uint64_t total = binomial(p.block_size, p.active_count);
      for (std::uint64_t r = 0; r < total; ++r) {
        const auto active = unrank_subset(p.block_size, p.active_count, r);
        PatternRow row;
        std::vector<std::string> cells;
        for (int i : active) cells.push_back(std::to_string(i));
        row.pattern = "{" + join(cells) + "}";
        row.energy_numer.assign(p.block_size, 0);
        row.mod_order.assign(p.block_size, 1);
        for (int i : active) {
          row.energy_numer[i] = 1;
          row.mod_order[i] = p.psk_order;
        }
        rows.push_back(std::move(row));
      }
      out += "patterns: " + std::to_string(total) + " activation patterns (" +
             std::to_string(std::uint64_t{1} << cb.index_bits) + " used, " +
             std::to_string(total - (std::uint64_t{1} << cb.index_bits)) +
             " unused)\n";
      break;
    }
    case Scheme::ofdm: {
      header = "pattern";
      denom = p.block_size;
      PatternRow row;
      row.pattern = "all active";
      row.energy_numer.assign(p.block_size, 1);
      row.mod_order.assign(p.block_size, p.psk_order);
      rows.push_back(std::move(row));
      out += "patterns: 1 (all subcarriers active)\n";
      break;
    }
  }
  out += "\n";
  out += dump_patterns(cb, header, rows, denom);
  return out;
}

}  // namespace cmod
