#include "cmod/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cmod/analysis.hpp"
#include "cmod/channel.hpp"
#include "cmod/codebook.hpp"
#include "cmod/selection.hpp"

namespace cmod {

namespace {

constexpr const char* kVersion = "0.1.0";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string fmt_sig(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string fmt_db(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << text;
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) parts.push_back(item);
  if (!text.empty() && text.back() == sep) parts.push_back("");
  return parts;
}

double parse_number(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw UsageError("cannot parse " + what + ": '" + text + "'");
  }
}

std::vector<double> parse_snr_sweep(const std::string& text) {
  const std::vector<std::string> parts = split(text, ':');
  std::vector<double> points;
  if (parts.size() == 1) {
    points.push_back(parse_number(parts[0], "--snr"));
    return points;
  }
  if (parts.size() != 3) {
    throw UsageError("--snr expects start:step:stop (dB) or a single value");
  }
  const double start = parse_number(parts[0], "--snr start");
  const double step = parse_number(parts[1], "--snr step");
  const double stop = parse_number(parts[2], "--snr stop");
  if (step <= 0.0) throw UsageError("--snr step must be positive");
  if (stop < start) throw UsageError("--snr stop must be >= start");
  const auto count =
      static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  if (count > 10000) throw UsageError("--snr sweep has too many points");
  for (std::size_t i = 0; i < count; ++i) points.push_back(start + i * step);
  return points;
}

PepMethod parse_pep(const std::string& name) {
  if (name == "approx") return PepMethod::approx;
  if (name == "exact") return PepMethod::exact;
  throw UsageError("--pep must be 'approx' or 'exact'");
}

// Scheme selection shared by the codebook/cull/bound/simulate commands.
struct SchemeSpec {
  std::string scheme;
  int energy_units = -1;   // --i
  int block_size = -1;     // --n
  int bits_per_unit = -1;  // --lambda
  int psk_order = -1;      // --m
  int active_count = -1;   // --k
  double total_energy = 0.0;
  int cull_bits = 0;
};

void require_param(int value, const std::string& flag,
                   const std::string& scheme) {
  if (value < 0) throw UsageError(scheme + " requires " + flag);
}

Codebook build_base(const SchemeSpec& s) {
  if (s.scheme == "wcm") {
    require_param(s.energy_units, "--i", "wcm");
    require_param(s.block_size, "--n", "wcm");
    require_param(s.bits_per_unit, "--lambda", "wcm");
    return build_wcm(s.energy_units, s.block_size, s.bits_per_unit,
                     s.total_energy);
  }
  if (s.scheme == "cm") {
    require_param(s.energy_units, "--i", "cm");
    require_param(s.block_size, "--n", "cm");
    require_param(s.psk_order, "--m", "cm");
    if (s.energy_units < s.block_size) throw UsageError("cm: I must be >= N");
    return build_cm(s.energy_units, s.block_size, s.psk_order, s.total_energy);
  }
  if (s.scheme == "im" || s.scheme == "ofdm-im") {
    require_param(s.block_size, "--n", "ofdm-im");
    require_param(s.active_count, "--k", "ofdm-im");
    require_param(s.psk_order, "--m", "ofdm-im");
    return build_ofdm_im(s.block_size, s.active_count, s.psk_order,
                         s.total_energy);
  }
  if (s.scheme == "ofdm") {
    require_param(s.block_size, "--n", "ofdm");
    require_param(s.psk_order, "--m", "ofdm");
    return build_ofdm(s.block_size, s.psk_order, s.total_energy);
  }
  throw UsageError("unknown scheme '" + s.scheme +
                   "' (expected wcm, cm, ofdm-im, or ofdm)");
}

Codebook build_codebook(const SchemeSpec& s) {
  Codebook cb = build_base(s);
  if (s.cull_bits > 0) cb = cull(cb, s.cull_bits).codebook;
  return cb;
}

void add_scheme_options(CLI::App* cmd, SchemeSpec& s, bool with_cull) {
  cmd->add_option("--scheme", s.scheme, "Scheme: wcm, cm, ofdm-im, ofdm")
      ->required();
  cmd->add_option("--i", s.energy_units, "Total energy units per block (I)");
  cmd->add_option("--n", s.block_size, "Subcarriers per block (N)");
  cmd->add_option("--lambda", s.bits_per_unit,
                  "Symbol bits per energy unit (WCM)");
  cmd->add_option("--m", s.psk_order, "PSK constellation order (M)");
  cmd->add_option("--k", s.active_count, "Active subcarriers (OFDM-IM)");
  cmd->add_option("--et", s.total_energy,
                  "Total block energy E_T (default: N)");
  if (with_cull) {
    cmd->add_option("--cull-bits", s.cull_bits,
                    "Reduce the codebook to 2^R codewords first");
  }
}

// Flat JSON manifest describing the resolved run.
void write_manifest(const std::string& path, const std::string& command,
                    const SchemeSpec& s, const Codebook& cb,
                    const nlohmann::json& extra) {
  if (path.empty()) return;
  nlohmann::json j;
  j["version"] = kVersion;
  j["command"] = command;
  j["scheme"] = s.scheme;
  if (s.energy_units >= 0) j["i"] = s.energy_units;
  j["n"] = cb.params.block_size;
  if (s.bits_per_unit >= 0) j["lambda"] = s.bits_per_unit;
  if (s.psk_order >= 0) j["m"] = s.psk_order;
  if (s.active_count >= 0) j["k"] = s.active_count;
  j["et"] = cb.total_energy;
  if (s.cull_bits > 0) j["cull_bits"] = s.cull_bits;
  j["index_bits"] = cb.index_bits;
  j["symbol_bits"] = cb.symbol_bits;
  j["bits_per_block"] = cb.bits_per_block();
  j["codebook_size"] = cb.size();
  j["spectral_efficiency"] = spectral_efficiency(cb);
  for (const auto& [key, value] : extra.items()) j[key] = value;
  write_text(path, j.dump(2) + "\n");
}

constexpr const char* kCsvHeader =
    "snr_db,trials,bits_sent,bit_errors,ber,union_bound\n";

std::string csv_row(double snr_db, const BerPoint* pt, const double* bound) {
  std::string row = fmt_g(snr_db);
  row += ',';
  if (pt) row += std::to_string(pt->trials);
  row += ',';
  if (pt) row += std::to_string(pt->bits_sent);
  row += ',';
  if (pt) row += std::to_string(pt->bit_errors);
  row += ',';
  if (pt) row += fmt_sig(pt->ber());
  row += ',';
  if (bound) row += fmt_sig(*bound);
  row += '\n';
  return row;
}

int cmd_codebook(const SchemeSpec& s, const std::string& out) {
  const Codebook cb = build_codebook(s);
  write_text(out, dump_table(cb));
  return 0;
}

int cmd_cull(const SchemeSpec& s, int target_bits, bool trace,
             const std::string& out) {
  if (target_bits <= 0) throw UsageError("cull requires --target-bits");
  const Codebook before = build_base(s);
  const PairwiseRankSummary sb = pairwise_rank_summary(before);
  const CullResult result = cull(before, target_bits);
  const PairwiseRankSummary sa = pairwise_rank_summary(result.codebook);

  std::string text = "scheme: " + display_name(result.codebook) + "\n";
  text += "before: L=" + std::to_string(before.size()) + ", f=" +
          std::to_string(before.bits_per_block()) + ", min_rank=" +
          std::to_string(sb.min_rank) + ", pairs_at_min=" +
          std::to_string(sb.pairs_at_min_rank) + ", min_energy_hamming=" +
          std::to_string(sb.min_energy_hamming) + "\n";
  text += "removed: " + std::to_string(result.trace.size()) + "\n";
  text += "after: L=" + std::to_string(result.codebook.size()) + ", f=" +
          std::to_string(result.codebook.bits_per_block()) + ", min_rank=" +
          std::to_string(sa.min_rank) + ", pairs_at_min=" +
          std::to_string(sa.pairs_at_min_rank) + ", min_energy_hamming=" +
          std::to_string(sa.min_energy_hamming) + "\n";
  text += "se: " + fmt_g(spectral_efficiency(result.codebook)) + "\n";
  if (trace) {
    text += "\nstep,removed_label,z_min,count\n";
    for (std::size_t k = 0; k < result.trace.size(); ++k) {
      const CullEvent& e = result.trace[k];
      text += std::to_string(k + 1) + "," + std::to_string(e.removed_label) +
              "," + std::to_string(e.z_min) + "," + std::to_string(e.count) +
              "\n";
    }
  }
  write_text(out, text);
  return 0;
}

int cmd_bound(const SchemeSpec& s, const std::string& snr,
              const std::string& pep, double target_ber,
              const std::string& out, const std::string& manifest) {
  if (snr.empty() && target_ber <= 0.0) {
    throw UsageError("bound requires --snr and/or --target-ber");
  }
  const PepMethod method = parse_pep(pep);
  const Codebook cb = build_codebook(s);
  nlohmann::json extra;
  extra["pep"] = pep;
  if (target_ber > 0.0) {
    const double crossing = bound_crossing_snr(cb, target_ber, method);
    std::cout << "crossing_snr_db=" << fmt_db(crossing) << "\n";
    extra["target_ber"] = target_ber;
    extra["crossing_snr_db"] = crossing;
  }
  if (!snr.empty()) {
    const std::vector<double> sweep = parse_snr_sweep(snr);
    std::string csv = kCsvHeader;
    for (double db : sweep) {
      const double bound = union_bound_ber(cb, noise_var_for_snr_db(cb, db), method);
      csv += csv_row(db, nullptr, &bound);
    }
    write_text(out, csv);
    extra["snr"] = snr;
  }
  write_manifest(manifest, "bound", s, cb, extra);
  return 0;
}

int cmd_simulate(const SchemeSpec& s, const std::string& snr,
                 const SimConfig& cfg, bool with_bound, bool bound_only,
                 const std::string& pep, const std::string& out,
                 const std::string& manifest) {
  if (snr.empty()) throw UsageError("simulate requires --snr");
  const PepMethod method = parse_pep(pep);
  const Codebook cb = build_codebook(s);
  const std::vector<double> sweep = parse_snr_sweep(snr);

  std::vector<double> bounds;
  if (with_bound || bound_only) {
    bounds.reserve(sweep.size());
    for (double db : sweep) {
      bounds.push_back(union_bound_ber(cb, noise_var_for_snr_db(cb, db), method));
    }
  }

  std::string csv = kCsvHeader;
  if (bound_only) {
    for (std::size_t i = 0; i < sweep.size(); ++i) {
      csv += csv_row(sweep[i], nullptr, &bounds[i]);
    }
  } else {
    const BerCurve curve = run_ber(cb, sweep, cfg);
    for (std::size_t i = 0; i < sweep.size(); ++i) {
      csv += csv_row(sweep[i], &curve[i],
                     bounds.empty() ? nullptr : &bounds[i]);
    }
  }
  write_text(out, csv);

  nlohmann::json extra;
  extra["snr"] = snr;
  extra["seed"] = cfg.seed;
  extra["max_trials"] = cfg.max_trials;
  extra["target_errors"] = cfg.target_bit_errors;
  extra["workers"] = cfg.workers;
  extra["bound"] = with_bound;
  extra["bound_only"] = bound_only;
  if (with_bound || bound_only) extra["pep"] = pep;
  write_manifest(manifest, "simulate", s, cb, extra);
  return 0;
}

// Spec grammar for compare: kind:p1,p2,p3[:cull=R], e.g. wcm:6,4,1:cull=11.
SchemeSpec parse_compare_spec(const std::string& text) {
  const std::vector<std::string> parts = split(text, ':');
  if (parts.size() < 2 || parts.size() > 3) {
    throw UsageError("bad --spec '" + text +
                     "': expected kind:params[:cull=R]");
  }
  SchemeSpec s;
  s.scheme = parts[0];
  std::vector<int> params;
  for (const std::string& p : split(parts[1], ',')) {
    const double v = parse_number(p, "--spec parameter");
    params.push_back(static_cast<int>(v));
  }
  const auto need = [&](std::size_t count) {
    if (params.size() != count) {
      throw UsageError("bad --spec '" + text + "': " + s.scheme + " takes " +
                       std::to_string(count) + " parameters");
    }
  };
  if (s.scheme == "wcm") {
    need(3);
    s.energy_units = params[0];
    s.block_size = params[1];
    s.bits_per_unit = params[2];
  } else if (s.scheme == "cm") {
    need(3);
    s.energy_units = params[0];
    s.block_size = params[1];
    s.psk_order = params[2];
  } else if (s.scheme == "im" || s.scheme == "ofdm-im") {
    need(3);
    s.block_size = params[0];
    s.active_count = params[1];
    s.psk_order = params[2];
  } else if (s.scheme == "ofdm") {
    need(2);
    s.block_size = params[0];
    s.psk_order = params[1];
  } else {
    throw UsageError("bad --spec '" + text + "': unknown scheme");
  }
  if (parts.size() == 3) {
    if (parts[2].rfind("cull=", 0) != 0) {
      throw UsageError("bad --spec '" + text + "': expected cull=R suffix");
    }
    s.cull_bits = static_cast<int>(
        parse_number(parts[2].substr(5), "--spec cull bits"));
  }
  return s;
}

int cmd_compare(const std::vector<std::string>& specs, const std::string& snr,
                double target_ber, const std::string& pep,
                const std::string& out) {
  if (specs.empty()) throw UsageError("compare requires at least one --spec");
  if (!snr.empty() && out.empty()) {
    throw UsageError("compare --snr needs --out for the joined curve CSV");
  }
  const PepMethod method = parse_pep(pep);

  std::vector<Codebook> books;
  books.reserve(specs.size());
  for (const std::string& text : specs) {
    books.push_back(build_codebook(parse_compare_spec(text)));
  }

  std::string summary = "scheme,bits_per_block,se,crossing_snr_db,gain_db\n";
  double baseline = 0.0;
  for (std::size_t k = 0; k < books.size(); ++k) {
    const double crossing = bound_crossing_snr(books[k], target_ber, method);
    if (k == 0) baseline = crossing;
    summary += slug_name(books[k]) + "," +
               std::to_string(books[k].bits_per_block()) + "," +
               fmt_g(spectral_efficiency(books[k])) + "," + fmt_db(crossing) +
               "," + fmt_db(baseline - crossing) + "\n";
  }
  std::cout << summary;

  if (!snr.empty()) {
    const std::vector<double> sweep = parse_snr_sweep(snr);
    std::string csv = "snr_db";
    for (const Codebook& cb : books) csv += "," + slug_name(cb);
    csv += "\n";
    for (double db : sweep) {
      csv += fmt_g(db);
      for (const Codebook& cb : books) {
        csv += "," + fmt_sig(union_bound_ber(
                         cb, noise_var_for_snr_db(cb, db), method));
      }
      csv += "\n";
    }
    write_text(out, csv);
  }
  return 0;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Link-level simulator for composition-based OFDM modulation"};
  app.require_subcommand(1);

  SchemeSpec scheme;
  std::string snr, out, manifest, pep = "approx";
  std::vector<std::string> specs;
  SimConfig sim;
  int target_bits = 0;
  bool trace = false, with_bound = false, bound_only = false;
  double target_ber = 0.0;

  CLI::App* c_codebook =
      app.add_subcommand("codebook", "Print a codeword/pattern table");
  add_scheme_options(c_codebook, scheme, true);
  c_codebook->add_option("--out", out, "Write to file instead of stdout");

  CLI::App* c_cull = app.add_subcommand(
      "cull", "Greedy rank-based codebook reduction with statistics");
  add_scheme_options(c_cull, scheme, false);
  c_cull->add_option("--target-bits", target_bits, "Keep 2^R codewords")
      ->required();
  c_cull->add_flag("--trace", trace, "Emit one line per removal");
  c_cull->add_option("--out", out, "Write to file instead of stdout");

  CLI::App* c_bound = app.add_subcommand(
      "bound", "Union-bound BER curve and/or target-BER crossing");
  add_scheme_options(c_bound, scheme, true);
  c_bound->add_option("--snr", snr, "Sweep start:step:stop in dB");
  c_bound->add_option("--pep", pep, "PEP method: approx or exact")
      ->check(CLI::IsMember({"approx", "exact"}));
  c_bound->add_option("--target-ber", target_ber,
                      "Report the SNR where the bound crosses this BER");
  c_bound->add_option("--out", out, "CSV output path (default stdout)");
  c_bound->add_option("--manifest", manifest, "Write a JSON run manifest");

  CLI::App* c_sim = app.add_subcommand(
      "simulate", "Monte Carlo BER sweep over a Rayleigh channel");
  add_scheme_options(c_sim, scheme, true);
  c_sim->add_option("--snr", snr, "Sweep start:step:stop in dB")->required();
  c_sim->add_option("--seed", sim.seed, "RNG seed (default 1)");
  c_sim->add_option("--trials", sim.max_trials,
                    "Max blocks per SNR point (default 1e6)");
  c_sim->add_option("--target-errors", sim.target_bit_errors,
                    "Stop a point after this many bit errors; 0 disables");
  c_sim->add_option("--workers", sim.workers, "Worker threads (default 1)");
  c_sim->add_flag("--bound", with_bound, "Add the union-bound column");
  c_sim->add_flag("--bound-only", bound_only,
                  "Skip the Monte Carlo run, emit bounds only");
  c_sim->add_option("--pep", pep, "PEP method: approx or exact")
      ->check(CLI::IsMember({"approx", "exact"}));
  c_sim->add_option("--out", out, "CSV output path (default stdout)");
  c_sim->add_option("--manifest", manifest, "Write a JSON run manifest");

  CLI::App* c_compare = app.add_subcommand(
      "compare", "Crossing SNRs and bound curves for several schemes");
  c_compare
      ->add_option("--spec", specs,
                   "Scheme spec kind:params[:cull=R], repeatable")
      ->required();
  c_compare->add_option("--target-ber", target_ber,
                        "Crossing target BER (default 1e-5)");
  c_compare->add_option("--snr", snr, "Sweep for the joined curve CSV");
  c_compare->add_option("--pep", pep, "PEP method: approx or exact")
      ->check(CLI::IsMember({"approx", "exact"}));
  c_compare->add_option("--out", out, "Joined CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (c_codebook->parsed()) return cmd_codebook(scheme, out);
    if (c_cull->parsed()) return cmd_cull(scheme, target_bits, trace, out);
    if (c_bound->parsed()) {
      return cmd_bound(scheme, snr, pep, target_ber, out, manifest);
    }
    if (c_sim->parsed()) {
      return cmd_simulate(scheme, snr, sim, with_bound, bound_only, pep, out,
                          manifest);
    }
    if (c_compare->parsed()) {
      if (target_ber <= 0.0) target_ber = 1e-5;
      return cmd_compare(specs, snr, target_ber, pep, out);
    }
    throw UsageError("no command given");
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::length_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace cmod
