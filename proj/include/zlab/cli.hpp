// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "zlab/modular_search.hpp"
#include "zlab/report.hpp"
#include "zlab/sl2_group.hpp"
#include "zlab/sl2_repr.hpp"
#include "zlab/zaremba.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace zlab::cli {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;
inline constexpr std::uint64_t kDefaultSeed = 1;

// exit codes: 0 all checks pass, 1 an asserted check failed (or the cache
// diverged), 2 a search exhausted its cap, 3 invalid parameters, 4 cache I/O
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitCapExhausted = 2;
inline constexpr int kExitBadParams = 3;
inline constexpr int kExitCacheError = 4;

struct RunConfig {
  std::string format = "text";  // text | json | csv
  std::string cache_path;       // resolved: flag > ZLAB_CACHE > default
  bool from_cache = false;
  std::uint64_t seed = kDefaultSeed;
};

struct Outcome {
  int exit_code = kExitOk;
  json result;
};

// ---------------------------------------------------------------------------
// small parsers

inline Fraction parse_fraction(const std::string& s) {
  const auto slash = s.find('/');
  if (slash == std::string::npos)
    throw std::invalid_argument("expected a fraction of the form a/q: " + s);
  return Fraction(Integer(s.substr(0, slash)), Integer(s.substr(slash + 1)));
}

// accepts "[0;1,2,2]", "1,2,2" and "[]"
inline CfExpansion parse_cf(std::string s) {
  if (!s.empty() && s.front() == '[') {
    if (s.back() != ']') throw std::invalid_argument("unbalanced brackets in expansion: " + s);
    s = s.substr(1, s.size() - 2);
    const auto semi = s.find(';');
    if (semi != std::string::npos) {
      if (s.substr(0, semi) != "0")
        throw std::invalid_argument("expansion must start with integer part 0");
      s = s.substr(semi + 1);
    }
  }
  CfExpansion cf;
  std::istringstream in(s);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    if (tok.empty()) continue;
    cf.emplace_back(Integer(tok));
  }
  require_positive_quotients(cf);
  return cf;
}

inline std::vector<std::uint64_t> parse_uint_list(const std::string& s) {
  std::vector<std::uint64_t> out;
  std::istringstream in(s);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(std::stoull(tok));
  }
  return out;
}

inline MembershipRule parse_rule(const std::string& s) {
  if (s == "canonical") return MembershipRule::canonical;
  if (s == "twin") return MembershipRule::either_twin;
  throw std::invalid_argument("convention must be 'canonical' or 'twin'");
}

inline Residue checked_prime(std::uint64_t p) {
  if (!is_prime(p)) throw std::invalid_argument("p must be prime, got " + std::to_string(p));
  if (p > kMaxModulus) throw std::invalid_argument("p exceeds the supported modulus range");
  return static_cast<Residue>(p);
}

// ---------------------------------------------------------------------------
// cache: append-only JSONL keyed by (cmd, params, seed)

inline std::string resolve_cache_path(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("ZLAB_CACHE"); env && *env) return env;
  return "zlab_cache.jsonl";
}

inline bool append_cache(const std::string& path, const json& record, std::ostream& err) {
  std::ofstream out(path, std::ios::app);
  if (!out) {
    err << "zlab: cannot open cache file for append: " << path << "\n";
    return false;
  }
  out << record.dump() << '\n';
  return out.good();
}

struct CacheLookup {
  std::vector<json> matches;
  std::string error;  // nonempty on malformed cache / I/O problems
};

inline CacheLookup find_cached(const std::string& path, const std::string& cmd,
                               const json& params, std::uint64_t seed) {
  CacheLookup out;
  std::ifstream in(path);
  if (!in) {
    out.error = "cannot open cache file: " + path;
    return out;
  }
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json rec = json::parse(line, nullptr, false);
    if (rec.is_discarded() || !rec.is_object() || !rec.contains("cmd") ||
        !rec.contains("params") || !rec.contains("result")) {
      out.error = "malformed cache record at " + path + ":" + std::to_string(lineno);
      return out;
    }
    if (rec["cmd"] == cmd && rec["params"] == params &&
        rec.value("seed", kDefaultSeed) == seed)
      out.matches.push_back(std::move(rec));
  }
  return out;
}

// ---------------------------------------------------------------------------
// rendering: a pure function of (cmd, params, seed, result), so cache replay
// reproduces runs byte for byte

inline std::string frac_str(const json& rec, const char* num_key, const char* den_key) {
  return rec[num_key].get<std::string>() + "/" + rec[den_key].get<std::string>();
}

inline Table result_table(const std::string& cmd, const json& result) {
  if (cmd == "zset enum") {
    Table t({"u", "v"});
    for (const auto& m : result["members"])
      t.add_row({m[0].get<std::string>(), m[1].get<std::string>()});
    return t;
  }
  if (cmd == "zset dim") {
    Table t({"Q", "count"});
    for (const auto& row : result["samples"])
      t.add_row({row["Q"].get<std::string>(),
                 static_cast<std::int64_t>(row["count"].get<std::uint64_t>())});
    return t;
  }
  if (cmd == "search table") {
    Table t({"p", "found", "q", "a", "cf", "exponent", "nodes_explored"});
    for (const auto& row : result["rows"]) {
      const bool found = row["found"].get<bool>();
      t.add_row({static_cast<std::int64_t>(row["p"].get<std::uint64_t>()),
                 std::string(found ? "yes" : "no"),
                 found ? row["q"].get<std::string>() : std::string("-"),
                 found ? row["a"].get<std::string>() : std::string("-"),
                 found ? row["cf"].get<std::string>() : std::string("-"),
                 found ? row["exponent"].get<double>() : 0.0,
                 static_cast<std::int64_t>(row["nodes_explored"].get<std::uint64_t>())});
    }
    return t;
  }
  if (cmd == "sl2 energy") {
    Table t({"trial", "energy", "quotient_size", "cauchy_schwarz_ok"});
    for (const auto& row : result["trials"])
      t.add_row({row["trial"].get<std::int64_t>(),
                 static_cast<std::int64_t>(row["energy"].get<std::uint64_t>()),
                 static_cast<std::int64_t>(row["quotient_size"].get<std::uint64_t>()),
                 std::string(row["cauchy_schwarz_ok"].get<bool>() ? "yes" : "no")});
    return t;
  }
  if (cmd == "sl2 helfgott") {
    Table t({"trial", "trace", "conj_factor", "a0_size", "min_centr_factor", "ok"});
    for (const auto& row : result["trials"])
      t.add_row({row["trial"].get<std::int64_t>(),
                 row["trace"].get<std::int64_t>(),
                 static_cast<std::int64_t>(row["conj_factor"].get<std::uint64_t>()),
                 static_cast<std::int64_t>(row["a0_size"].get<std::uint64_t>()),
                 static_cast<std::int64_t>(row["min_centr_factor"].get<std::uint64_t>()),
                 std::string(row["ok"].get<bool>() ? "yes" : "no")});
    return t;
  }
  throw std::logic_error("no table form for " + cmd);
}

inline bool has_table(const std::string& cmd) {
  return cmd == "zset enum" || cmd == "zset dim" || cmd == "search table" ||
         cmd == "sl2 energy" || cmd == "sl2 helfgott";
}

// stable key order per command for the scalar part of text reports
inline std::vector<std::string> scalar_keys(const json& result) {
  std::vector<std::string> keys;
  for (auto it = result.begin(); it != result.end(); ++it)
    if (!it.value().is_array() && !it.value().is_object()) keys.push_back(it.key());
  return keys;  // json objects iterate in sorted key order
}

inline std::string scalar_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "yes" : "no";
  if (v.is_number_float()) return Table::format_double(v.get<double>());
  return v.dump();
}

inline void render(const std::string& cmd, const json& params, std::uint64_t seed,
                   const json& result, const std::string& format, std::ostream& out) {
  if (format == "json") {
    json rec{{"schema_version", kSchemaVersion},
             {"cmd", cmd},
             {"params", params},
             {"seed", seed},
             {"result", result}};
    out << rec.dump() << '\n';
    return;
  }
  out << "# zlab " << cmd << " schema=" << kSchemaVersion << " seed=" << seed << '\n';
  if (format == "csv") {
    if (has_table(cmd)) {
      result_table(cmd, result).write_csv(out);
    } else {
      Table t({"key", "value"});
      for (const std::string& k : scalar_keys(result)) t.add_row({k, scalar_text(result[k])});
      t.write_csv(out);
    }
    return;
  }
  // text
  if (cmd == "cf expand") {
    out << result["cf"].get<std::string>() << '\n';
    return;
  }
  if (cmd == "cf eval") {
    out << frac_str(result, "num", "den") << '\n';
    return;
  }
  if (cmd == "rep inventory") {
    out << result["sum_of_squares"].get<std::string>() << " = "
        << result["order"].get<std::string>() << (result["ok"].get<bool>() ? " OK" : " MISMATCH")
        << '\n';
    return;
  }
  for (const std::string& k : scalar_keys(result))
    out << k << " = " << scalar_text(result[k]) << '\n';
  if (has_table(cmd)) result_table(cmd, result).write_text(out);
}

// ---------------------------------------------------------------------------
// handlers

inline Outcome handle_cf_expand(const std::string& frac) {
  const Fraction f = parse_fraction(frac);
  const CfExpansion cf = expand(f);
  Outcome o;
  o.result = json{{"cf", cf_to_string(cf)},
                  {"num", f.num().str()},
                  {"den", f.den().str()},
                  {"length", cf.size()},
                  {"canonical", is_canonical(cf)}};
  return o;
}

inline Outcome handle_cf_eval(const std::string& cf_text) {
  const CfExpansion cf = parse_cf(cf_text);
  const Fraction f = evaluate(cf);
  Outcome o;
  o.result = json{{"num", f.num().str()}, {"den", f.den().str()}, {"length", cf.size()}};
  return o;
}

inline Outcome handle_zset_enum(unsigned M, const Integer& Q, MembershipRule rule,
                                const std::string& out_path, std::ostream& err) {
  const ZarembaSet zs = enumerate_fractions(M, Q, rule);
  Outcome o;
  json members = json::array();
  for (const Fraction& f : zs.members) members.push_back({f.num().str(), f.den().str()});
  o.result = json{{"count", zs.members.size()}, {"members", std::move(members)}};
  if (!out_path.empty()) {
    std::ofstream fs(out_path);
    if (!fs) {
      err << "zlab: cannot open output file: " << out_path << "\n";
      o.exit_code = kExitBadParams;
      return o;
    }
    write_members_csv(zs, fs);
  }
  return o;
}

inline Outcome handle_zset_count(unsigned M, const Integer& Q, MembershipRule rule) {
  Outcome o;
  o.result = json{{"count", count_fractions(M, Q, rule)}};
  return o;
}

inline Outcome handle_zset_dim(unsigned M, const std::vector<Integer>& Qs, MembershipRule rule) {
  const DimensionEstimate est = estimate_dimension(M, Qs, rule);
  Outcome o;
  json samples = json::array();
  for (std::size_t i = 0; i < est.sample_Qs.size(); ++i)
    samples.push_back(json{{"Q", est.sample_Qs[i].str()}, {"count", est.counts[i]}});
  o.result = json{{"w_hat", est.w_hat},
                  {"residual", est.residual},
                  {"degenerate", est.degenerate},
                  {"samples", std::move(samples)}};
  if (est.degenerate) o.exit_code = kExitCheckFailed;
  return o;
}

inline json search_record_json(const SearchResult& res) {
  json row;
  row["found"] = res.record.has_value();
  row["nodes_explored"] = res.stats.nodes_explored;
  row["cap"] = res.stats.cap.str();
  if (res.record) {
    row["q"] = res.record->q.str();
    row["a"] = res.record->a.str();
    row["cf"] = cf_to_string(res.record->cf);
    row["exponent"] = res.record->exponent;
  }
  return row;
}

inline Outcome handle_search_minq(std::uint64_t p, unsigned M, std::optional<Integer> cap) {
  if (!is_prime(p)) throw std::invalid_argument("p must be prime, got " + std::to_string(p));
  const SearchResult res = min_modular_denominator(p, M, cap);
  Outcome o;
  o.result = search_record_json(res);
  o.result["p"] = p;
  o.result["M"] = M;
  if (!res.record) o.exit_code = kExitCapExhausted;
  return o;
}

inline Outcome handle_search_table(const std::vector<std::uint64_t>& primes, unsigned M,
                                   std::optional<Integer> cap) {
  const ExponentTable table = exponent_table(primes, M, cap);
  Outcome o;
  json rows = json::array();
  for (const ExponentRow& row : table.rows) {
    json r = search_record_json(row.result);
    r["p"] = row.p;
    rows.push_back(std::move(r));
  }
  o.result = json{{"rows", std::move(rows)},
                  {"max_exponent", table.max_exponent},
                  {"all_found", table.all_found},
                  {"M", M}};
  if (!table.all_found) o.exit_code = kExitCapExhausted;
  return o;
}

inline Outcome handle_search_power(std::uint64_t p, unsigned M, unsigned n_max) {
  const Residue pp = checked_prime(p);
  const PowerIntersectResult res = power_intersect_search(pp, M, n_max);
  Outcome o;
  using Status = PowerIntersectResult::Status;
  o.result["status"] = res.status == Status::found        ? "found"
                       : res.status == Status::empty_base ? "empty-base-set"
                                                          : "no-intersection";
  o.result["p"] = p;
  o.result["M"] = M;
  o.result["n_max"] = n_max;
  o.result["power_sizes"] = res.power_sizes;
  if (res.status == Status::found) {
    o.result["n"] = res.n;
    o.result["witness"] = {res.witness->a, res.witness->b, res.witness->c, res.witness->d};
    o.result["factors"] = [&] {
      json fs = json::array();
      for (const auto& f : res.factor_quotients) {
        CfExpansion cf;
        for (unsigned b : f) cf.emplace_back(b);
        fs.push_back(cf_to_string(cf));
      }
      return fs;
    }();
    o.result["concatenated"] = cf_to_string(res.concatenated);
    o.result["u"] = res.u.str();
    o.result["v"] = res.v.str();
    o.result["q_full"] = res.q_full.str();
  } else {
    o.exit_code = kExitCapExhausted;
  }
  return o;
}

inline Outcome handle_search_bounds(double w, double alpha) {
  const BoundEvaluation ev = evaluate_n_bounds(w, alpha);
  Outcome o;
  o.result = json{{"w", ev.w},
                  {"alpha", ev.alpha},
                  {"n1", ev.n1_finite ? json(ev.n1) : json("infinite")},
                  {"n2", ev.n2_finite ? json(ev.n2) : json("infinite")},
                  {"n1_finite", ev.n1_finite},
                  {"n2_finite", ev.n2_finite},
                  {"alpha_star", ev.alpha_star}};
  return o;
}

inline Outcome handle_sl2_verify_bgb(std::uint64_t p) {
  const Residue pp = checked_prime(p);
  const DoubleCosetReport rep = verify_double_coset(pp);
  Outcome o;
  o.result = json{{"p", p},
                  {"checked_g", rep.checked_g},
                  {"max_multiplicity", rep.max_r},
                  {"min_max_multiplicity", rep.min_max_r},
                  {"bound_ok", rep.bound_ok},
                  {"complement_ok", rep.complement_ok},
                  {"ok", rep.bound_ok && rep.complement_ok}};
  if (!(rep.bound_ok && rep.complement_ok)) o.exit_code = kExitCheckFailed;
  return o;
}

inline Outcome handle_sl2_energy(std::uint64_t p, std::size_t size_a, std::size_t size_b,
                                 unsigned trials, std::uint64_t seed) {
  const Residue pp = checked_prime(p);
  Rng64 rng(seed);
  Outcome o;
  json rows = json::array();
  bool all_ok = true;
  for (unsigned t = 0; t < trials; ++t) {
    const GroupSet a = random_subset(pp, size_a, rng);
    const GroupSet b = random_subset(pp, size_b, rng);
    const EnergyReport rep = energy(a, b);
    all_ok = all_ok && rep.cauchy_schwarz_ok;
    rows.push_back(json{{"trial", t},
                        {"energy", rep.value},
                        {"quotient_size", rep.left_quotient_size},
                        {"cauchy_schwarz_ok", rep.cauchy_schwarz_ok}});
  }
  o.result = json{{"p", p}, {"all_ok", all_ok}, {"trials", std::move(rows)}};
  if (!all_ok) o.exit_code = kExitCheckFailed;
  return o;
}

inline GroupSet zaremba_even_set(Residue p, unsigned M, const Integer& Q) {
  const ParitySplit split = split_parity(M, Q, p);
  if (split.even.empty()) throw std::invalid_argument("even-parity set is empty at these parameters");
  return split.even;
}

inline Outcome handle_sl2_tripling(std::uint64_t p, unsigned M, std::optional<Integer> Q) {
  const Residue pp = checked_prime(p);
  const GroupSet a = zaremba_even_set(pp, M, Q ? *Q : Integer(pp) - 1);
  const TriplingReport rep = tripling(a);
  Outcome o;
  o.result = json{{"p", p},
                  {"M", M},
                  {"size", rep.size},
                  {"double_size", rep.double_size},
                  {"triple_size", rep.triple_size},
                  {"K", to_double(rep.K)},
                  {"K_tilde", to_double(rep.K_tilde)},
                  {"K_exact", rep.K.str()},
                  {"K_tilde_exact", rep.K_tilde.str()}};
  return o;
}

inline Outcome handle_sl2_borel(std::uint64_t p, unsigned M, std::optional<Integer> Q) {
  const Residue pp = checked_prime(p);
  const GroupSet a = zaremba_even_set(pp, M, Q ? *Q : Integer(pp) - 1);
  const TriplingReport trip = tripling(a);
  const BorelIntersectionReport rep = borel_intersections(a, trip.K);
  Outcome o;
  o.result = json{{"p", p},
                  {"M", M},
                  {"size", rep.size},
                  {"K", to_double(trip.K)},
                  {"max_borel_intersection", rep.max_borel},
                  {"lemma_rhs", rep.lemma_rhs},
                  {"lemma_ok", rep.lemma_ok},
                  {"max_coset_intersection", rep.max_coset},
                  {"remark_ok", rep.remark_ok},
                  {"ok", rep.lemma_ok && rep.remark_ok}};
  if (!(rep.lemma_ok && rep.remark_ok)) o.exit_code = kExitCheckFailed;
  return o;
}

inline Outcome handle_sl2_helfgott(std::uint64_t p, std::size_t size, unsigned trials,
                                   std::uint64_t seed) {
  const Residue pp = checked_prime(p);
  if (pp < 5) throw std::invalid_argument("helfgott check needs p >= 5 (no regular elements below)");
  Rng64 rng(seed);
  const GroupSet a = random_subset(pp, size, rng);
  Outcome o;
  json rows = json::array();
  bool all_ok = true;
  unsigned done = 0;
  while (done < trials) {
    const ModMat2 g = random_element(pp, rng);
    if (!is_regular(g)) continue;
    const HelfgottReport rep = helfgott_inequality(a, g);
    const bool ok = rep.inequality_ok && rep.a0_large_enough;
    all_ok = all_ok && ok;
    rows.push_back(json{{"trial", done},
                        {"trace", trace(g)},
                        {"conj_factor", rep.conj_factor},
                        {"a0_size", rep.a0_size},
                        {"min_centr_factor", rep.min_centr_factor},
                        {"ok", ok}});
    ++done;
  }
  o.result = json{{"p", p}, {"size", size}, {"all_ok", all_ok}, {"trials", std::move(rows)}};
  if (!all_ok) o.exit_code = kExitCheckFailed;
  return o;
}

inline Outcome handle_sl2_threshold(std::uint64_t p, unsigned n, std::optional<std::size_t> size,
                                    std::uint64_t seed) {
  const Residue pp = checked_prime(p);
  const double threshold = 4.0 * std::pow(static_cast<double>(pp), 2.0 + 4.0 / (3.0 * n - 2.0));
  const std::uint64_t order = group_order(pp);
  std::size_t take = size ? *size
                          : static_cast<std::size_t>(
                                std::min<double>(std::ceil(threshold), static_cast<double>(order)));
  Rng64 rng(seed);
  const GroupSet a = random_subset(pp, take, rng);
  const PowerBorelReport rep = power_borel_threshold(a, n);
  Outcome o;
  o.result = json{{"p", p},
                  {"n", n},
                  {"size", take},
                  {"threshold", rep.threshold},
                  {"vacuous", rep.vacuous},
                  {"hypothesis_met", rep.hypothesis_met},
                  {"intersect_nonempty", rep.intersect_nonempty}};
  if (rep.witness)
    o.result["witness"] = {rep.witness->a, rep.witness->b, rep.witness->c, rep.witness->d};
  if (rep.hypothesis_met && !rep.intersect_nonempty) o.exit_code = kExitCheckFailed;
  return o;
}

inline Outcome handle_rep_certify(std::uint64_t q) {
  const Residue qq = checked_prime(q);
  const BorelCertificate cert = borel_certificates(qq);
  Outcome o;
  o.result = json{{"q", q},
                  {"borel_order", cert.borel_order.str()},
                  {"steinberg_hs_sq", cert.steinberg_hs_sq.str()},
                  {"steinberg_rank", cert.steinberg_rank},
                  {"hs_norm", cert.hs_norm},
                  {"op_norm", cert.op_norm},
                  {"parseval_lhs", cert.parseval_lhs.str()},
                  {"parseval_rhs", cert.parseval_rhs.str()},
                  {"wiener", cert.wiener_contrib.str()},
                  {"ok", cert.ok}};
  if (!cert.ok) o.exit_code = kExitCheckFailed;
  return o;
}

inline Outcome handle_rep_inventory(std::uint64_t q) {
  const Residue qq = checked_prime(q);
  const DimensionInventory inv = dimension_inventory(qq);
  Outcome o;
  o.result = json{{"q", q},
                  {"sum_of_squares", inv.sum_of_squares.str()},
                  {"order", inv.order.str()},
                  {"nontrivial_count", inv.nontrivial_count},
                  {"counts_ok", inv.counts_ok},
                  {"ok", inv.ok}};
  if (!inv.ok) o.exit_code = kExitCheckFailed;
  return o;
}

inline Outcome handle_rep_gap(std::uint64_t q, std::size_t size, unsigned n, std::uint64_t seed,
                              bool confirm) {
  const Residue qq = checked_prime(q);
  Rng64 rng(seed);
  const GroupSet a = random_subset(qq, size, rng);
  const SpectralGapReport rep = spectral_gap_check(a, n, confirm);
  Outcome o;
  o.result = json{{"q", q},
                  {"size", size},
                  {"n", n},
                  {"op_norm", rep.op_norm},
                  {"bound", rep.bound},
                  {"strictly_below", rep.strictly_below},
                  {"mixing_lower", rep.mixing_lower},
                  {"mixing_positive", rep.mixing_positive}};
  if (rep.power_equals_group) o.result["power_equals_group"] = *rep.power_equals_group;
  const bool failed = !rep.strictly_below ||
                      (rep.power_equals_group.has_value() && !*rep.power_equals_group);
  if (failed) o.exit_code = kExitCheckFailed;
  return o;
}

// ---------------------------------------------------------------------------
// driver

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"desk-scale toolkit for bounded continued fractions and SL2(F_p) combinatorics"};
  app.require_subcommand(1);
  app.fallthrough(true);  // global flags may follow the subcommand

  RunConfig cfg;
  std::string cache_flag;
  app.add_option("--format", cfg.format, "output format: text, json or csv")
      ->check(CLI::IsMember({"text", "json", "csv"}))
      ->capture_default_str();
  app.add_option("--cache", cache_flag, "JSONL cache file (default: $ZLAB_CACHE or zlab_cache.jsonl)");
  app.add_flag("--from-cache", cfg.from_cache, "replay a cached record instead of recomputing");
  app.add_option("--seed", cfg.seed, "64-bit seed for randomized constructions")
      ->capture_default_str();

  std::string cmd;
  json params;
  std::function<Outcome()> compute;

  // cf ----------------------------------------------------------------
  auto* cf = app.add_subcommand("cf", "continued-fraction primitives");
  {
    auto* ex = cf->add_subcommand("expand", "canonical expansion of a fraction");
    auto frac = std::make_shared<std::string>();
    ex->add_option("--frac", *frac, "fraction a/q in [0,1]")->required();
    ex->callback([&, frac] {
      cmd = "cf expand";
      params = json{{"frac", *frac}};
      compute = [frac] { return handle_cf_expand(*frac); };
    });

    auto* ev = cf->add_subcommand("eval", "evaluate an expansion to a fraction");
    auto cf_text = std::make_shared<std::string>();
    ev->add_option("--cf", *cf_text, "expansion, e.g. [0;1,2,2] or 1,2,2")->required();
    ev->callback([&, cf_text] {
      cmd = "cf eval";
      params = json{{"cf", *cf_text}};
      compute = [cf_text] { return handle_cf_eval(*cf_text); };
    });
  }

  // zset --------------------------------------------------------------
  auto* zset = app.add_subcommand("zset", "the fraction sets F_M(Q)");
  {
    auto M = std::make_shared<unsigned>(2);
    auto Q = std::make_shared<std::string>("100");
    auto conv = std::make_shared<std::string>("twin");
    auto out_path = std::make_shared<std::string>();

    auto* en = zset->add_subcommand("enum", "enumerate F_M(Q)");
    en->add_option("--M", *M, "partial quotient bound")->required();
    en->add_option("--Q", *Q, "denominator bound")->required();
    en->add_option("--convention", *conv, "membership rule: canonical or twin");
    en->add_option("--out", *out_path, "also write the sorted u,v CSV to this file");
    en->callback([&, M, Q, conv, out_path] {
      cmd = "zset enum";
      params = json{{"M", *M}, {"Q", *Q}, {"convention", *conv}};
      compute = [&err, M, Q, conv, out_path] {
        return handle_zset_enum(*M, Integer(*Q), parse_rule(*conv), *out_path, err);
      };
    });

    auto* cnt = zset->add_subcommand("count", "count F_M(Q) without materializing it");
    cnt->add_option("--M", *M, "partial quotient bound")->required();
    cnt->add_option("--Q", *Q, "denominator bound")->required();
    cnt->add_option("--convention", *conv, "membership rule: canonical or twin");
    cnt->callback([&, M, Q, conv] {
      cmd = "zset count";
      params = json{{"M", *M}, {"Q", *Q}, {"convention", *conv}};
      compute = [M, Q, conv] { return handle_zset_count(*M, Integer(*Q), parse_rule(*conv)); };
    });

    auto qs = std::make_shared<std::string>();
    auto dyadic = std::make_shared<std::string>();
    auto* dim = zset->add_subcommand("dim", "least-squares estimate of w_M from counts");
    dim->add_option("--M", *M, "partial quotient bound")->required();
    dim->add_option("--Qs", *qs, "comma-separated sample denominators");
    dim->add_option("--dyadic", *dyadic, "exponent range lo:hi for Q = 2^lo .. 2^hi");
    dim->add_option("--convention", *conv, "membership rule: canonical or twin");
    dim->callback([&, M, qs, dyadic, conv] {
      cmd = "zset dim";
      params = json{{"M", *M}, {"Qs", *qs}, {"dyadic", *dyadic}, {"convention", *conv}};
      compute = [M, qs, dyadic, conv] {
        std::vector<Integer> Qs;
        if (!dyadic->empty()) {
          const auto colon = dyadic->find(':');
          if (colon == std::string::npos)
            throw std::invalid_argument("--dyadic expects lo:hi exponents");
          Qs = dyadic_qs(static_cast<unsigned>(std::stoul(dyadic->substr(0, colon))),
                         static_cast<unsigned>(std::stoul(dyadic->substr(colon + 1))));
        } else {
          std::istringstream in(*qs);
          std::string tok;
          while (std::getline(in, tok, ','))
            if (!tok.empty()) Qs.emplace_back(tok);
        }
        return handle_zset_dim(*M, Qs, parse_rule(*conv));
      };
    });
  }

  // search ------------------------------------------------------------
  auto* search = app.add_subcommand("search", "denominators divisible by p with bounded quotients");
  {
    auto p = std::make_shared<std::uint64_t>(0);
    auto M = std::make_shared<unsigned>(2);
    auto cap = std::make_shared<std::string>();

    auto* minq = search->add_subcommand("minq", "minimal q = 0 (mod p) with quotients <= M");
    minq->add_option("--p", *p, "prime modulus")->required();
    minq->add_option("--M", *M, "partial quotient bound");
    minq->add_option("--cap", *cap, "largest denominator explored (default p^4)");
    minq->callback([&, p, M, cap] {
      cmd = "search minq";
      params = json{{"p", *p}, {"M", *M}, {"cap", *cap}};
      compute = [p, M, cap] {
        std::optional<Integer> c;
        if (!cap->empty()) c = Integer(*cap);
        return handle_search_minq(*p, *M, c);
      };
    });

    auto primes = std::make_shared<std::string>();
    auto pmax = std::make_shared<std::uint64_t>(0);
    auto* table = search->add_subcommand("table", "exponent table over a list of primes");
    table->add_option("--primes", *primes, "comma-separated primes");
    table->add_option("--pmax", *pmax, "use every prime <= pmax");
    table->add_option("--M", *M, "partial quotient bound");
    table->add_option("--cap", *cap, "largest denominator explored per prime (default p^4)");
    table->callback([&, primes, pmax, M, cap] {
      cmd = "search table";
      params = json{{"primes", *primes}, {"pmax", *pmax}, {"M", *M}, {"cap", *cap}};
      compute = [primes, pmax, M, cap] {
        std::vector<std::uint64_t> ps = parse_uint_list(*primes);
        if (*pmax > 0)
          for (std::uint64_t q : primes_up_to(*pmax)) ps.push_back(q);
        std::optional<Integer> c;
        if (!cap->empty()) c = Integer(*cap);
        return handle_search_table(ps, *M, c);
      };
    });

    auto n_max = std::make_shared<unsigned>(8);
    auto* pw = search->add_subcommand("power", "least n with A^n meeting the standard Borel");
    pw->add_option("--p", *p, "prime modulus")->required();
    pw->add_option("--M", *M, "partial quotient bound");
    pw->add_option("--n-max", *n_max, "largest power tried");
    pw->callback([&, p, M, n_max] {
      cmd = "search power";
      params = json{{"p", *p}, {"M", *M}, {"n_max", *n_max}};
      compute = [p, M, n_max] { return handle_search_power(*p, *M, *n_max); };
    });

    auto w = std::make_shared<double>(1.0);
    auto alpha = std::make_shared<double>(0.0);
    auto* bounds = search->add_subcommand("bounds", "closed-form n-bound calculator");
    bounds->add_option("--w", *w, "dimension w_M in (0,1]")->required();
    bounds->add_option("--alpha", *alpha, "tripling exponent alpha in [0,1]")->required();
    bounds->callback([&, w, alpha] {
      cmd = "search bounds";
      params = json{{"w", *w}, {"alpha", *alpha}};
      compute = [w, alpha] { return handle_search_bounds(*w, *alpha); };
    });
  }

  // sl2 ----------------------------------------------------------------
  auto* sl2 = app.add_subcommand("sl2", "group-combinatorics checks in SL2(F_p)");
  {
    auto p = std::make_shared<std::uint64_t>(0);

    auto* bgb = sl2->add_subcommand("verify-bgb", "double-coset multiplicity and Bruhat complement");
    bgb->add_option("--p", *p, "prime modulus")->required();
    bgb->callback([&, p] {
      cmd = "sl2 verify-bgb";
      params = json{{"p", *p}};
      compute = [p] { return handle_sl2_verify_bgb(*p); };
    });

    auto size_a = std::make_shared<std::size_t>(10);
    auto size_b = std::make_shared<std::size_t>(10);
    auto trials = std::make_shared<unsigned>(10);
    auto* en = sl2->add_subcommand("energy", "common energy and Cauchy-Schwarz on random sets");
    en->add_option("--p", *p, "prime modulus")->required();
    en->add_option("--size-a", *size_a, "size of A");
    en->add_option("--size-b", *size_b, "size of B");
    en->add_option("--trials", *trials, "number of random instances");
    en->callback([&, p, size_a, size_b, trials] {
      cmd = "sl2 energy";
      params = json{{"p", *p}, {"size_a", *size_a}, {"size_b", *size_b}, {"trials", *trials}};
      compute = [&cfg, p, size_a, size_b, trials] {
        return handle_sl2_energy(*p, *size_a, *size_b, *trials, cfg.seed);
      };
    });

    auto M = std::make_shared<unsigned>(2);
    auto Q = std::make_shared<std::string>();
    auto* tri = sl2->add_subcommand("tripling", "growth ratios of the even-parity matrix set");
    tri->add_option("--p", *p, "prime modulus")->required();
    tri->add_option("--M", *M, "partial quotient bound");
    tri->add_option("--Q", *Q, "denominator bound (default p-1)");
    tri->callback([&, p, M, Q] {
      cmd = "sl2 tripling";
      params = json{{"p", *p}, {"M", *M}, {"Q", *Q}};
      compute = [p, M, Q] {
        std::optional<Integer> qq;
        if (!Q->empty()) qq = Integer(*Q);
        return handle_sl2_tripling(*p, *M, qq);
      };
    });

    auto* bor = sl2->add_subcommand("borel", "Borel and coset intersections of the even-parity set");
    bor->add_option("--p", *p, "prime modulus")->required();
    bor->add_option("--M", *M, "partial quotient bound");
    bor->add_option("--Q", *Q, "denominator bound (default p-1)");
    bor->callback([&, p, M, Q] {
      cmd = "sl2 borel";
      params = json{{"p", *p}, {"M", *M}, {"Q", *Q}};
      compute = [p, M, Q] {
        std::optional<Integer> qq;
        if (!Q->empty()) qq = Integer(*Q);
        return handle_sl2_borel(*p, *M, qq);
      };
    });

    auto size = std::make_shared<std::size_t>(50);
    auto* hel = sl2->add_subcommand("helfgott", "conjugacy/centralizer inequality on random sets");
    hel->add_option("--p", *p, "prime modulus")->required();
    hel->add_option("--size", *size, "size of the random set A");
    hel->add_option("--trials", *trials, "number of regular elements tested");
    hel->callback([&, p, size, trials] {
      cmd = "sl2 helfgott";
      params = json{{"p", *p}, {"size", *size}, {"trials", *trials}};
      compute = [&cfg, p, size, trials] {
        return handle_sl2_helfgott(*p, *size, *trials, cfg.seed);
      };
    });

    auto n = std::make_shared<unsigned>(3);
    auto thr_size = std::make_shared<std::size_t>(0);
    auto* thr = sl2->add_subcommand("threshold", "A^n meets the Borel above the size threshold");
    thr->add_option("--p", *p, "prime modulus")->required();
    thr->add_option("--n", *n, "power (>= 3)");
    thr->add_option("--size", *thr_size, "size of A (default: the threshold, capped at |G|)");
    thr->callback([&, p, n, thr_size] {
      cmd = "sl2 threshold";
      params = json{{"p", *p}, {"n", *n}, {"size", *thr_size}};
      compute = [&cfg, p, n, thr_size] {
        std::optional<std::size_t> sz;
        if (*thr_size > 0) sz = *thr_size;
        return handle_sl2_threshold(*p, *n, sz, cfg.seed);
      };
    });
  }

  // rep ----------------------------------------------------------------
  auto* rep = app.add_subcommand("rep", "exact Fourier analysis on the projective line");
  {
    auto q = std::make_shared<std::uint64_t>(0);

    auto* cert = rep->add_subcommand("certify", "Borel indicator certificates (norms, rank, Wiener)");
    cert->add_option("--q", *q, "odd prime field size")->required();
    cert->callback([&, q] {
      cmd = "rep certify";
      params = json{{"q", *q}};
      compute = [q] { return handle_rep_certify(*q); };
    });

    auto* inv = rep->add_subcommand("inventory", "sum of squared representation dimensions");
    inv->add_option("--q", *q, "odd prime field size")->required();
    inv->callback([&, q] {
      cmd = "rep inventory";
      params = json{{"q", *q}};
      compute = [q] { return handle_rep_inventory(*q); };
    });

    auto size = std::make_shared<std::size_t>(0);
    auto n = std::make_shared<unsigned>(10);
    auto confirm = std::make_shared<bool>(true);
    auto* gap = rep->add_subcommand("gap", "spectral-gap mixing bound with direct cross-check");
    gap->add_option("--q", *q, "odd prime field size")->required();
    gap->add_option("--size", *size, "size of the random set A")->required();
    gap->add_option("--n", *n, "power for the mixing bound");
    gap->add_flag("!--no-confirm", *confirm, "skip the direct powering cross-check");
    gap->callback([&, q, size, n, confirm] {
      cmd = "rep gap";
      params = json{{"q", *q}, {"size", *size}, {"n", *n}, {"confirm", *confirm}};
      compute = [&cfg, q, size, n, confirm] {
        return handle_rep_gap(*q, *size, *n, cfg.seed, *confirm);
      };
    });
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  cfg.cache_path = resolve_cache_path(cache_flag);
  if (!compute) {
    err << "zlab: no subcommand selected\n";
    return kExitBadParams;
  }

  if (cfg.from_cache) {
    const CacheLookup lookup = find_cached(cfg.cache_path, cmd, params, cfg.seed);
    if (!lookup.error.empty()) {
      err << "zlab: " << lookup.error << "\n";
      return kExitCacheError;
    }
    if (lookup.matches.empty()) {
      err << "zlab: no cached record for this configuration in " << cfg.cache_path << "\n";
      return kExitCacheError;
    }
    for (std::size_t i = 1; i < lookup.matches.size(); ++i)
      if (lookup.matches[i]["result"] != lookup.matches[0]["result"]) {
        err << "zlab: cache divergence: " << lookup.matches.size()
            << " records for this configuration disagree (code change?)\n";
        return kExitCheckFailed;
      }
    const json& rec = lookup.matches.back();
    render(cmd, params, cfg.seed, rec["result"], cfg.format, out);
    return rec.value("exit", kExitOk);
  }

  Outcome outcome;
  try {
    outcome = compute();
  } catch (const std::invalid_argument& e) {
    err << "zlab: " << e.what() << "\n";
    return kExitBadParams;
  } catch (const std::domain_error& e) {
    err << "zlab: " << e.what() << "\n";
    return kExitBadParams;
  }

  const json record{{"schema_version", kSchemaVersion}, {"cmd", cmd},     {"params", params},
                    {"seed", cfg.seed},                 {"exit", outcome.exit_code},
                    {"result", outcome.result}};
  if (!append_cache(cfg.cache_path, record, err)) return kExitCacheError;
  render(cmd, params, cfg.seed, outcome.result, cfg.format, out);
  return outcome.exit_code;
}

}  // namespace zlab::cli
