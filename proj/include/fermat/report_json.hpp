#pragma once
// JSON documents for the command-line reports. Big integers are decimal strings and
// rationals are "num/den" strings, so no consumer loses precision.

#include "fermat/demjanenko.hpp"
#include "fermat/local_factor.hpp"
#include "fermat/moments.hpp"
#include "fermat/sato_tate.hpp"
#include "fermat/stats.hpp"

#include <gmpxx.h>
#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace fermat {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

inline std::string to_string_exact(const mpz_class& z) { return z.get_str(); }

inline std::string to_string_exact(const mpq_class& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline mpz_class parse_mpz(const std::string& s) {
  mpz_class z;
  if (z.set_str(s, 10) != 0) throw std::invalid_argument("not a decimal integer: " + s);
  return z;
}

inline mpq_class parse_mpq(const std::string& s) {
  const auto slash = s.find('/');
  if (slash == std::string::npos) throw std::invalid_argument("rational must be written num/den: " + s);
  mpq_class q(parse_mpz(s.substr(0, slash)), parse_mpz(s.substr(slash + 1)));
  if (q.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
  q.canonicalize();
  return q;
}

inline json envelope(const std::string& kind) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = kind;
  return j;
}

inline void check_envelope(const json& j, const std::string& kind) {
  if (j.at("schema_version").get<int>() != kSchemaVersion)
    throw std::invalid_argument("unsupported schema_version");
  if (j.at("kind").get<std::string>() != kind)
    throw std::invalid_argument("expected a " + kind + " document");
}

// classification

inline json to_json(const DegeneracyReport& r) {
  json j = envelope("classification");
  j["ell"] = r.ell;
  j["k"] = r.k;
  j["is_cubic_root"] = r.is_cubic_root;
  j["N_k"] = r.N_k ? json(*r.N_k) : json(nullptr);
  j["degenerate"] = r.degenerate;
  j["rank_Dk"] = r.rank_Dk;
  j["rank_verified"] = r.rank_verified;
  j["F0"] = r.F0;
  j["F1"] = r.F1;
  j["nondegenerate_residue_degrees"] = r.nondegenerate_residue_degrees;
  return j;
}

inline DegeneracyReport degeneracy_report_from_json(const json& j) {
  check_envelope(j, "classification");
  DegeneracyReport r{};
  r.ell = j.at("ell").get<std::uint32_t>();
  r.k = j.at("k").get<std::uint32_t>();
  r.is_cubic_root = j.at("is_cubic_root").get<bool>();
  if (!j.at("N_k").is_null()) r.N_k = j.at("N_k").get<std::uint32_t>();
  r.degenerate = j.at("degenerate").get<bool>();
  r.rank_Dk = j.at("rank_Dk").get<std::uint32_t>();
  r.rank_verified = j.at("rank_verified").get<bool>();
  r.F0 = j.at("F0").get<std::vector<std::uint32_t>>();
  r.F1 = j.at("F1").get<std::vector<std::uint32_t>>();
  r.nondegenerate_residue_degrees = j.at("nondegenerate_residue_degrees").get<std::vector<std::uint32_t>>();
  return r;
}

inline bool operator==(const DegeneracyReport& a, const DegeneracyReport& b) {
  return a.ell == b.ell && a.k == b.k && a.is_cubic_root == b.is_cubic_root && a.N_k == b.N_k &&
         a.degenerate == b.degenerate && a.rank_Dk == b.rank_Dk && a.rank_verified == b.rank_verified &&
         a.F0 == b.F0 && a.F1 == b.F1 && a.nondegenerate_residue_degrees == b.nondegenerate_residue_degrees;
}

// Demjanenko matrix

inline json to_json(const DemjanenkoMatrix& m) {
  json j = envelope("demjanenko_matrix");
  j["ell"] = m.ell.value();
  j["k"] = m.k;
  j["f"] = m.f;
  j["n_kf"] = m.n_kf;
  j["reps"] = m.reps;
  j["twice_entries"] = m.entries;
  const auto rd = exact_rank_det(m);
  j["rank"] = rd.rank;
  j["det"] = to_string_exact(exact_det(m));
  return j;
}

// local factor

inline json to_json(const LocalFactor& lf) {
  json j = envelope("local_factor");
  j["ell"] = lf.ell;
  j["k"] = lf.k;
  j["p"] = lf.p;
  j["f"] = lf.f;
  json c = json::array();
  for (const auto& a : lf.coeffs) c.push_back(to_string_exact(a));
  j["coefficients"] = c;
  return j;
}

inline LocalFactor local_factor_from_json(const json& j) {
  check_envelope(j, "local_factor");
  LocalFactor lf{j.at("ell").get<std::uint32_t>(), j.at("k").get<std::uint32_t>(), j.at("p").get<std::uint64_t>(),
                 j.at("f").get<unsigned>(), {}};
  for (const auto& c : j.at("coefficients")) lf.coeffs.push_back(parse_mpz(c.get<std::string>()));
  return lf;
}

// moment table

inline json to_json(const MomentTable& t) {
  json j = envelope("moment_table");
  j["ell"] = t.ell;
  j["k"] = t.k;
  json rows = json::array();
  for (const auto& r : t.rows) {
    json row;
    row["i"] = r.i;
    json totals = json::array();
    for (const auto& v : r.totals) totals.push_back(v ? json(to_string_exact(*v)) : json(nullptr));
    row["moments"] = totals;
    json per = json::array();
    for (const auto& d : r.per_degree) {
      json pd;
      pd["f"] = d.f;
      json ms = json::array();
      for (const auto& m : d.moments) ms.push_back(to_string_exact(m));
      pd["moments"] = ms;
      per.push_back(pd);
    }
    row["per_degree"] = per;
    row["blocked_degrees"] = r.blocked_degrees;
    rows.push_back(row);
  }
  j["rows"] = rows;
  return j;
}

inline MomentTable moment_table_from_json(const json& j) {
  check_envelope(j, "moment_table");
  MomentTable t{j.at("ell").get<std::uint32_t>(), j.at("k").get<std::uint32_t>(), {}};
  for (const auto& row : j.at("rows")) {
    MomentResult r{row.at("i").get<std::uint32_t>(), {}, {}, row.at("blocked_degrees").get<std::vector<std::uint32_t>>()};
    for (const auto& v : row.at("moments"))
      r.totals.push_back(v.is_null() ? std::nullopt : std::optional<mpq_class>(parse_mpq(v.get<std::string>())));
    for (const auto& pd : row.at("per_degree")) {
      DegreeMoments d{pd.at("f").get<std::uint32_t>(), {}};
      for (const auto& m : pd.at("moments")) d.moments.push_back(parse_mpq(m.get<std::string>()));
      r.per_degree.push_back(std::move(d));
    }
    t.rows.push_back(std::move(r));
  }
  return t;
}

inline bool operator==(const MomentTable& a, const MomentTable& b) {
  if (a.ell != b.ell || a.k != b.k || a.rows.size() != b.rows.size()) return false;
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    const auto& x = a.rows[i];
    const auto& y = b.rows[i];
    if (x.i != y.i || x.totals != y.totals || x.blocked_degrees != y.blocked_degrees ||
        x.per_degree.size() != y.per_degree.size())
      return false;
    for (std::size_t d = 0; d < x.per_degree.size(); ++d)
      if (x.per_degree[d].f != y.per_degree[d].f || x.per_degree[d].moments != y.per_degree[d].moments) return false;
  }
  return true;
}

// Sato-Tate generator

inline json to_json(const STGenerator& gen, const std::optional<VerifyReport>& verify = std::nullopt) {
  json j = envelope("st_group");
  j["ell"] = gen.ell.value();
  j["k"] = gen.k;
  j["g"] = gen.g;
  j["n_k"] = gen.n_k;
  j["r_k"] = gen.r_k;
  json blocks = json::array();
  for (auto b : gen.blocks) blocks.push_back(b == Block2::I2 ? "I2" : "J2");
  j["blocks"] = blocks;
  j["slot_labels"] = gen.slot_label;
  j["gamma"] = {{"to", gen.gamma.to}, {"sign", gen.gamma.sign}};
  if (verify) {
    json v;
    v["ok"] = verify->ok();
    v["N_g"] = verify->N_g;
    json checks = json::array();
    for (const auto& c : verify->checks) checks.push_back({{"identity", c.identity}, {"passed", c.passed}});
    v["checks"] = checks;
    j["verification"] = v;
  }
  return j;
}

// stats scan summary; the per-checkpoint rows also go to CSV

inline json to_json(const MomentStats& s) {
  json j = envelope("stats");
  j["ell"] = s.ell;
  j["k"] = s.k;
  j["moments"] = s.moments;
  j["coefficients"] = s.coefficients;
  json cps = json::array();
  for (const auto& cp : s.checkpoints) {
    json c;
    c["x"] = cp.x;
    c["M"] = cp.M;  // index c * moments.size() + j
    c["pi_x"] = cp.pi_x;
    c["split_primes"] = cp.split_primes;
    cps.push_back(c);
  }
  j["checkpoints"] = cps;
  return j;
}

}  // namespace fermat
