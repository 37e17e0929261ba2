#pragma once
// Command dispatch for fermat-st. Kept in a header so tests can drive it in-process.

#include "fermat/fermat.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace fermat::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kVerification = 3 };

inline std::string join(const std::vector<std::uint32_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
  return "{" + s + "}";
}

inline void print_report(const DegeneracyReport& r, std::ostream& out) {
  out << "ell=" << r.ell << " k=" << r.k << "\n";
  if (r.is_cubic_root) {
    out << "  k is a primitive cube root of unity\n";
  } else {
    out << "  N_k=" << *r.N_k << "\n";
  }
  out << "  degenerate=" << (r.degenerate ? "true" : "false") << "\n";
  out << "  rank D_k=" << r.rank_Dk << (r.rank_verified ? " (verified by exact elimination)" : "") << "\n";
  if (r.degenerate) {
    out << "  F0=" << join(r.F0) << " F1=" << join(r.F1) << "\n";
    out << "  non-degenerate odd residue degrees=" << join(r.nondegenerate_residue_degrees) << "\n";
  }
}

inline int cmd_classify(std::int64_t ell_in, std::optional<std::int64_t> k, bool all_k, bool verify_rank, bool as_json,
                        std::ostream& out) {
  const PrimeEll ell(ell_in);
  std::vector<std::int64_t> ks;
  if (all_k) {
    for (std::int64_t j = 1; j + 2 <= ell_in; ++j) ks.push_back(j);
  } else {
    if (!k) throw std::invalid_argument("classify needs --k or --all-k");
    ks.push_back(*k);
  }
  json docs = json::array();
  for (auto kk : ks) {
    const auto rep = classify(ell, kk, verify_rank);
    if (as_json)
      docs.push_back(to_json(rep));
    else
      print_report(rep, out);
  }
  if (as_json) out << (all_k ? docs : docs[0]).dump(2) << "\n";
  return kOk;
}

inline int cmd_scan_degenerate(std::uint32_t bound, bool as_json, std::ostream& out) {
  const auto primes = degenerate_primes_below(bound);
  if (as_json) {
    json j = envelope("degenerate_primes");
    j["bound"] = bound;
    j["primes"] = primes;
    out << j.dump(2) << "\n";
  } else {
    out << primes.size() << " degenerate prime(s) below " << bound << ":";
    for (auto p : primes) out << " " << p;
    out << "\n";
  }
  return kOk;
}

inline int cmd_matrix(std::int64_t ell_in, std::int64_t k, std::uint32_t f, bool as_json, std::ostream& out) {
  const CmData cm = build_Mk(PrimeEll(ell_in), k);
  const auto m = build_matrix(cm, f);
  const auto j = to_json(m);
  if (as_json) {
    out << j.dump(2) << "\n";
    return kOk;
  }
  out << "2 D_{k,f} for ell=" << ell_in << " k=" << cm.k << " f=" << f << " (n_kf=" << m.n_kf << ")\n";
  out << "  reps " << join(m.reps) << "\n";
  for (const auto& row : m.entries) {
    out << "  ";
    for (auto e : row) out << std::setw(4) << e;
    out << "\n";
  }
  out << "  rank " << j["rank"].get<std::size_t>() << ", det D_{k,f} = " << j["det"].get<std::string>() << "\n";
  return kOk;
}

/// Exit status for a Jacobi-sum factor checked against its point-count reconstruction.
inline int oracle_status(const LocalFactor& lf, const LocalFactor& ref, std::ostream& err) {
  if (ref == lf) return kOk;
  err << "error: Jacobi-sum local factor disagrees with the point-count reconstruction\n";
  return kVerification;
}

inline int verification_status(const VerifyReport& rep, std::ostream& err) {
  if (rep.ok()) return kOk;
  err << "error: Sato-Tate generator verification failed\n";
  return kVerification;
}

inline int cmd_local_factor(std::int64_t ell_in, std::int64_t k, std::uint64_t p, bool oracle, bool as_json,
                            std::ostream& out, std::ostream& err) {
  const PrimeEll ell(ell_in);
  const auto lf = local_factor(ell, k, p);
  if (oracle) {
    if (const int rc = oracle_status(lf, local_factor_from_point_counts(ell, k, p), err); rc != kOk) return rc;
  }
  if (as_json) {
    auto j = to_json(lf);
    if (oracle) j["oracle_checked"] = true;
    out << j.dump(2) << "\n";
  } else {
    out << "[";
    for (std::size_t i = 0; i < lf.coeffs.size(); ++i) out << (i ? "," : "") << lf.coeffs[i].get_str();
    out << "]\n";
    if (oracle) err << "oracle: point counts agree\n";
  }
  return kOk;
}

inline int cmd_moments(std::int64_t ell_in, std::int64_t k, std::uint32_t i_max, std::uint32_t n_max, bool as_json,
                       std::ostream& out, std::ostream& err) {
  const PrimeEll ell(ell_in);
  const auto table = moment_table(ell, k, i_max, n_max);
  const auto& blocked = table.rows.front().blocked_degrees;
  if (!blocked.empty())
    err << "warning: odd residue degree(s) " << join(blocked)
        << " are degenerate; totals are omitted and only per-degree moments are reported\n";
  if (as_json) {
    out << to_json(table).dump(2) << "\n";
    return kOk;
  }
  out << "ell=" << table.ell << " k=" << table.k << "\n";
  for (const auto& row : table.rows) {
    out << "  mu_" << row.i << ":";
    if (blocked.empty()) {
      for (const auto& v : row.totals) out << " " << v->get_str();
    } else {
      for (const auto& d : row.per_degree) {
        out << " [f=" << d.f << ":";
        for (const auto& m : d.moments) out << " " << m.get_str();
        out << "]";
      }
    }
    out << "\n";
  }
  return kOk;
}

inline std::vector<unsigned> parse_uint_list(const std::string& s) {
  std::vector<unsigned> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t pos = 0;
    const unsigned long v = std::stoul(item, &pos);
    if (pos != item.size()) throw std::invalid_argument("bad list entry: " + item);
    out.push_back(static_cast<unsigned>(v));
  }
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

inline int cmd_stats(const ScanConfig& cfg, const std::string& out_path, bool as_json, bool quiet, std::ostream& out,
                     std::ostream& err) {
  validate(cfg);
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) throw std::invalid_argument("cannot open " + out_path + " for writing");
  }
  const auto stats = run_scan(cfg, quiet ? nullptr : &err);
  if (!out_path.empty()) write_csv(stats, file);
  if (as_json) {
    auto j = to_json(stats);
    j["csv_path"] = out_path.empty() ? json(nullptr) : json(out_path);
    out << j.dump(2) << "\n";
  } else if (out_path.empty()) {
    write_csv(stats, out);
  } else {
    out << "wrote " << out_path << "\n";
  }
  return kOk;
}

inline int cmd_stgroup(std::int64_t ell_in, std::int64_t k, std::optional<std::uint32_t> g, bool verify,
                       std::uint32_t samples, std::uint64_t seed, bool as_json, std::ostream& out, std::ostream& err) {
  const CmData cm = build_Mk(PrimeEll(ell_in), k);
  const auto gen = g ? build_gamma(cm, *g) : build_gamma(cm);
  std::optional<VerifyReport> rep;
  if (verify) rep = verify_generator(gen, seed);
  STSampler sampler(gen, seed);
  std::vector<std::vector<double>> polys;
  for (std::uint32_t s = 0; s < samples; ++s) {
    const auto P = sampler.draw_char_poly();
    std::vector<double> a;
    for (const auto& c : P) a.push_back(c.real());
    polys.push_back(std::move(a));
  }
  if (as_json) {
    auto j = to_json(gen, rep);
    j["seed"] = seed;
    j["samples"] = polys;
    out << j.dump(2) << "\n";
  } else {
    out << "ell=" << gen.ell.value() << " k=" << gen.k << " g=" << gen.g << " n_k=" << gen.n_k << " r_k=" << gen.r_k
        << "\n";
    for (std::size_t i = 0; i < gen.blocks.size(); ++i)
      out << "  Gamma_" << i + 1 << " = " << (gen.blocks[i] == Block2::I2 ? "I2" : "J2") << "\n";
    if (rep) {
      for (const auto& c : rep->checks) out << "  [" << (c.passed ? "ok" : "FAILED") << "] " << c.identity << "\n";
      out << "  N_g=" << rep->N_g << "\n";
    }
    for (const auto& a : polys) {
      out << "  sample char poly (T^0..):";
      for (double c : a) out << " " << std::setprecision(6) << c;
      out << "\n";
    }
  }
  return rep ? verification_status(*rep, err) : kOk;
}

/// Parse and run; never throws. args[0] is the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sato-Tate data for Fermat curve quotients v^ell = u(u+1)^(ell-k-1)", "fermat-st"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "fermat-st 1.0 (json schema " + std::to_string(kSchemaVersion) + ")");

  std::int64_t ell = 0, k = 0;
  std::optional<std::int64_t> k_opt;
  bool all_k = false, as_json = false, no_rank = false, oracle = false, verify = false, quiet = false;
  std::uint32_t bound = 400, f = 1, i_max = 0, n_max = 4, samples = 0;
  std::uint64_t p = 0, seed = 1;
  std::optional<std::uint32_t> g;
  std::string n_list = "1,2,3,4", i_list = "1", out_path, checkpoints;
  std::uint64_t x = 1 << 20, chunk = 1 << 16;
  unsigned threads = default_thread_count();

  auto* classify_cmd = app.add_subcommand("classify", "degeneracy classification of (ell, k)");
  classify_cmd->add_option("--ell", ell, "odd prime ell")->required();
  auto* kopt = classify_cmd->add_option("--k", k_opt, "k in [1, ell-2]");
  classify_cmd->add_flag("--all-k", all_k, "classify every k")->excludes(kopt);
  classify_cmd->add_flag("--no-rank-check", no_rank, "skip the exact rank of D_k");
  classify_cmd->add_flag("--json", as_json);

  auto* scan_cmd = app.add_subcommand("scan-degenerate", "primes 3 < ell < bound admitting a degenerate k");
  scan_cmd->add_option("--bound", bound)->required();
  scan_cmd->add_flag("--json", as_json);

  auto* matrix_cmd = app.add_subcommand("matrix", "Demjanenko matrix D_{k,f} for odd f");
  matrix_cmd->add_option("--ell", ell)->required();
  matrix_cmd->add_option("--k", k)->required();
  matrix_cmd->add_option("--f", f, "odd divisor of ell-1");
  matrix_cmd->add_flag("--json", as_json);

  auto* lf_cmd = app.add_subcommand("local-factor", "L_p(C_k, T) from Jacobi sums");
  lf_cmd->add_option("--ell", ell)->required();
  lf_cmd->add_option("--k", k)->required();
  lf_cmd->add_option("--p", p)->required();
  lf_cmd->add_flag("--oracle", oracle, "cross-check against point counts over F_{p^n}");
  lf_cmd->add_flag("--json", as_json);

  auto* mom_cmd = app.add_subcommand("moments", "exact moments M_n[mu_i]");
  mom_cmd->add_option("--ell", ell)->required();
  mom_cmd->add_option("--k", k)->required();
  mom_cmd->add_option("--i-max", i_max, "default (ell-1)/2");
  mom_cmd->add_option("--n-max", n_max)->check(CLI::PositiveNumber);
  mom_cmd->add_flag("--json", as_json);

  auto* stats_cmd = app.add_subcommand("stats", "empirical moments of a_1(p) over p <= x");
  stats_cmd->add_option("--ell", ell)->required();
  stats_cmd->add_option("--k", k)->required();
  stats_cmd->add_option("--x", x, "upper bound for p");
  stats_cmd->add_option("--n-list", n_list, "comma-separated moment orders");
  stats_cmd->add_option("--i-list", i_list, "coefficient indices i of a_i (anything but 1 is slow)");
  stats_cmd->add_option("--checkpoints", checkpoints, "comma-separated intermediate x values");
  stats_cmd->add_option("--threads", threads, "worker threads (default FERMAT_THREADS or all cores)");
  stats_cmd->add_option("--chunk-size", chunk, "integers per work chunk");
  stats_cmd->add_option("--out", out_path, "CSV output path (stdout if omitted)");
  stats_cmd->add_flag("--quiet", quiet, "no progress on stderr");
  stats_cmd->add_flag("--json", as_json, "print a JSON summary");

  auto* st_cmd = app.add_subcommand("stgroup", "Sato-Tate generator gamma and samples");
  st_cmd->add_option("--ell", ell)->required();
  st_cmd->add_option("--k", k)->required();
  st_cmd->add_option("--g", g, "generator of G (default: smallest primitive root)");
  st_cmd->add_flag("--verify", verify, "check the group identities");
  st_cmd->add_option("--samples", samples, "Haar samples of the characteristic polynomial");
  st_cmd->add_option("--seed", seed);
  st_cmd->add_flag("--json", as_json);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << app.version() << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (*classify_cmd) return cmd_classify(ell, k_opt, all_k, !no_rank, as_json, out);
    if (*scan_cmd) return cmd_scan_degenerate(bound, as_json, out);
    if (*matrix_cmd) return cmd_matrix(ell, k, f, as_json, out);
    if (*lf_cmd) return cmd_local_factor(ell, k, p, oracle, as_json, out, err);
    if (*mom_cmd) {
      const PrimeEll e(ell);
      return cmd_moments(ell, k, i_max ? i_max : e.half(), n_max, as_json, out, err);
    }
    if (*stats_cmd) {
      ScanConfig cfg;
      check_k(PrimeEll(ell), k);
      cfg.ell = static_cast<std::uint32_t>(ell);
      cfg.k = static_cast<std::uint32_t>(k);
      cfg.x_max = x;
      cfg.moments = parse_uint_list(n_list);
      cfg.coefficients = parse_uint_list(i_list);
      if (!checkpoints.empty())
        for (auto c : parse_uint_list(checkpoints)) cfg.checkpoints.push_back(c);
      cfg.threads = threads;
      cfg.chunk_size = chunk;
      return cmd_stats(cfg, out_path, as_json, quiet, out, err);
    }
    if (*st_cmd) return cmd_stgroup(ell, k, g, verify, samples, seed, as_json, out, err);
  } catch (const VerificationError& e) {
    err << "verification failure: " << e.what() << "\n";
    return kVerification;
  } catch (const PrecisionInsufficient& e) {
    err << "verification failure: " << e.what() << "\n";
    return kVerification;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::length_error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace fermat::cli
