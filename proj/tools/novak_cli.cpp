// novak: command-line front end for the Novak-number toolkit.
//
// Exit codes: 0 success, 2 invalid arguments or malformed input,
// 3 exhausted budget / size ceiling / failed cache product check.

#include <cstdio>
#include <functional>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "novak/carmichael.hpp"
#include "novak/divseq.hpp"
#include "novak/errors.hpp"
#include "novak/factor_cache.hpp"
#include "novak/novak_numbers.hpp"
#include "novak/novak_primes.hpp"
#include "novak/run_config.hpp"
#include "novak/zsigmondy.hpp"

using json = nlohmann::json;
using namespace novak;

namespace {

struct CliOptions {
  RunConfig config;
  std::string config_file;
  bool json_flag = false;
  bool csv_flag = false;
  bool exclude_one = false;
  std::optional<std::string> cache_flag;
  std::optional<std::uint64_t> trial_flag;
  std::optional<std::uint64_t> rho_flag;
  std::optional<unsigned> workers_flag;
  std::optional<std::string> format_flag;
  std::optional<std::uint64_t> ceiling_flag;

  std::shared_ptr<FactorCache> cache;

  void finalize() {
    if (!config_file.empty()) config.apply_file(config_file);
    config.apply_env();
    if (cache_flag) config.cache_path = *cache_flag;
    if (trial_flag) config.trial_bound = *trial_flag;
    if (rho_flag) config.rho_iterations = *rho_flag;
    if (workers_flag) config.workers = *workers_flag;
    if (format_flag) config.format = *format_flag;
    if (ceiling_flag) config.size_ceiling_bits = *ceiling_flag;
    if (json_flag) config.format = "json";
    if (csv_flag) config.format = "csv";
    if (exclude_one) config.include_one = false;
    if (config.workers == 0 || config.trial_bound == 0 ||
        config.rho_iterations == 0)
      throw InvalidArgument("budgets and workers must be positive");
    if (config.format != "human" && config.format != "json" &&
        config.format != "csv")
      throw InvalidArgument("format must be human, json or csv");
    if (!config.cache_path.empty()) {
      cache = std::make_shared<FactorCache>();
      cache->load_file(config.cache_path);
    }
  }

  const FactorLookup* lookup() const { return cache.get(); }
};

json config_json(const RunConfig& c) {
  return json{{"cache", c.cache_path},
              {"trial_bound", c.trial_bound},
              {"rho_iterations", c.rho_iterations},
              {"size_ceiling_bits", c.size_ceiling_bits},
              {"saturation_ceiling_bits", c.saturation_ceiling_bits},
              {"workers", c.workers},
              {"format", c.format},
              {"include_one", c.include_one}};
}

json output_shell(const CliOptions& opt, const std::string& command) {
  return json{{"schema_version", 1},
              {"command", command},
              {"config", config_json(opt.config)}};
}

void emit_json(const json& j) { std::cout << j.dump(2) << "\n"; }

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

json naturals_to_json(const std::vector<Natural>& xs) {
  json arr = json::array();
  for (const auto& x : xs) arr.push_back(x.str());
  return arr;
}

json u64s_to_json(const std::vector<std::uint64_t>& xs) {
  json arr = json::array();
  for (auto x : xs) arr.push_back(x);
  return arr;
}

json certificate_json(const NovakPrimeCertificate& cert) {
  json step_json;
  auto factors_json = [](const std::vector<std::pair<Natural, std::uint32_t>>&
                             fs) {
    json arr = json::array();
    for (const auto& [p, e] : fs) arr.push_back(json{{"prime", p.str()},
                                                     {"exponent", e}});
    return arr;
  };
  auto witness_json = [](const std::map<Natural, std::uint32_t>& w) {
    json obj = json::object();
    for (const auto& [p, e] : w) obj[p.str()] = e;
    return obj;
  };
  json chain = json::array();
  for (const auto& s : cert.chain)
    chain.push_back(json{{"prime", s.q.str()},
                         {"order", s.order.str()},
                         {"odd_part_factors", factors_json(s.odd_part_factors)},
                         {"witness_exponents", witness_json(s.witness_exponents)}});
  return json{{"q", cert.q.str()},
              {"order", cert.order.order.str()},
              {"odd_part_factors", factors_json(cert.odd_part_factors)},
              {"chain", chain},
              {"witness_exponents", witness_json(cert.witness_exponents)},
              {"witness", cert.witness_value().str()}};
}

// ---------------------------------------------------------------- check
int cmd_check(const CliOptions& opt, const std::string& n_str) {
  Natural n = parse_natural(n_str);
  bool result = is_novak(n);
  if (opt.config.format == "json") {
    json out = output_shell(opt, "check");
    out["n"] = n.str();
    out["is_novak"] = result;
    emit_json(out);
  } else if (opt.config.format == "csv") {
    throw InvalidArgument("check has no list-shaped output; csv unavailable");
  } else {
    std::cout << n.str() << (result ? " is" : " is not")
              << " a Novak number\n";
  }
  return 0;
}

// ----------------------------------------------------------------- list
int cmd_list(const CliOptions& opt, std::uint64_t max_x,
             const std::string& method) {
  CountingReport report =
      method == "closure"
          ? enumerate_closure(max_x, opt.config.budget(), opt.config.workers)
          : enumerate_brute(max_x, opt.config.workers);
  std::vector<std::uint64_t> values = report.values_u64();
  if (!opt.config.include_one && !values.empty() && values.front() == 1)
    values.erase(values.begin());

  if (opt.config.format == "json") {
    json out = output_shell(opt, "list");
    out["x"] = max_x;
    out["method"] = method;
    out["count"] = values.size();
    out["elements"] = u64s_to_json(values);
    emit_json(out);
  } else if (opt.config.format == "csv") {
    std::cout << "n\n";
    for (auto v : values) std::cout << v << "\n";
  } else {
    std::cout << "Novak numbers <= " << max_x << " (" << method
              << "): " << values.size() << "\n";
    for (auto v : values) std::cout << v << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------- bound
int cmd_bound(const CliOptions& opt, std::uint64_t x,
              std::optional<std::uint64_t> witness) {
  json out = output_shell(opt, "bound");
  out["x"] = x;
  if (witness) {
    NovakNumber n = NovakNumber::verify(Natural(*witness));
    OmegaLowerResult harvest =
        omega_lower_via_tau(n.value(), opt.config.budget(), opt.lookup());
    double bound = lemma6_bound(Natural(x), n, harvest.bound);
    out["witness"] = std::to_string(*witness);
    out["omega_lower"] = harvest.bound;
    out["bound"] = fmt_double(bound);
    if (opt.config.format == "json") {
      emit_json(out);
    } else if (opt.config.format == "csv") {
      throw InvalidArgument("bound has no list-shaped output; csv unavailable");
    } else {
      std::cout << "witness " << *witness << ": omega(2^N+1) >= "
                << harvest.bound << ", count bound " << fmt_double(bound)
                << "\n";
    }
  } else {
    Theorem1Parameters params =
        theorem1_parameters(static_cast<double>(x));
    out["level"] = params.level;
    out["k"] = params.k;
    if (opt.config.format == "json") {
      emit_json(out);
    } else if (opt.config.format == "csv") {
      throw InvalidArgument("bound has no list-shaped output; csv unavailable");
    } else {
      std::cout << "tower parameters for x = " << x << ": level "
                << params.level << ", k " << params.k << "\n";
    }
  }
  return 0;
}

// --------------------------------------------------------------- dlower
int cmd_dlower(const CliOptions& opt, std::uint64_t max_x) {
  DLowerResult r =
      d_lower(max_x, opt.config.budget(), opt.lookup(), opt.config.workers);
  if (opt.config.format == "json") {
    json out = output_shell(opt, "dlower");
    out["x"] = max_x;
    out["value"] = r.value.str();
    out["witness"] = r.witness.value().str();
    out["exact"] = r.exact;
    emit_json(out);
  } else if (opt.config.format == "csv") {
    throw InvalidArgument("dlower has no list-shaped output; csv unavailable");
  } else {
    std::cout << "d(" << max_x << ") >= " << r.value.str() << " via witness "
              << r.witness.value().str() << (r.exact ? " (exact)" : "")
              << "\n";
  }
  return 0;
}

// ----------------------------------------------------------------- zsig
int cmd_zsig(const CliOptions& opt, const std::string& a, const std::string& b,
             std::uint64_t n) {
  PrimitiveDivisorResult r = primitive_prime(parse_natural(a),
                                             parse_natural(b), n,
                                             opt.config.budget());
  if (opt.config.format == "json") {
    json out = output_shell(opt, "zsig");
    out["a"] = a;
    out["b"] = b;
    out["n"] = n;
    out["exceptional"] = r.exceptional;
    out["prime"] = r.prime ? json(r.prime->str()) : json(nullptr);
    emit_json(out);
  } else if (opt.config.format == "csv") {
    throw InvalidArgument("zsig has no list-shaped output; csv unavailable");
  } else {
    if (r.exceptional)
      std::cout << "exceptional case: no primitive prime\n";
    else
      std::cout << "primitive prime of " << a << "^" << n << "+" << b << "^"
                << n << ": " << r.prime->str() << "\n";
  }
  return 0;
}

// ----------------------------------------------------------- omega-lower
int cmd_omega_lower(const CliOptions& opt, const std::string& n_str) {
  OmegaLowerResult r = omega_lower_via_tau(parse_natural(n_str),
                                           opt.config.budget(), opt.lookup());
  if (opt.config.format == "json") {
    json out = output_shell(opt, "omega-lower");
    out["n"] = n_str;
    out["bound"] = r.bound;
    out["tau"] = r.tau.str();
    out["primes"] = naturals_to_json(r.primes);
    out["failed_divisors"] = naturals_to_json(r.failed_divisors);
    emit_json(out);
  } else if (opt.config.format == "csv") {
    std::cout << "prime\n";
    for (const auto& p : r.primes) std::cout << p.str() << "\n";
  } else {
    std::cout << "omega(2^" << n_str << "+1) >= " << r.bound << " (tau-1 = "
              << Natural(r.tau - 1).str() << ")\n";
    for (const auto& p : r.primes) std::cout << p.str() << "\n";
    if (!r.failed_divisors.empty()) {
      std::cout << "unharvested divisors:";
      for (const auto& d : r.failed_divisors) std::cout << " " << d.str();
      std::cout << "\n";
    }
  }
  return 0;
}

const char* flag_name(FactorFlag f) {
  switch (f) {
    case FactorFlag::two: return "two";
    case FactorFlag::novak_prime: return "novak_prime";
    default: return "neither";
  }
}

// ---------------------------------------------------------------- primes
int cmd_primes(const CliOptions& opt, std::uint64_t max_x, bool certify,
               bool table1) {
  if (table1) {
    Table1Report report = table1_report(opt.config.budget(),
                                        opt.config.workers);
    if (opt.config.format == "json") {
      json rows = json::array();
      for (const auto& row : report.rows) {
        json fs = json::array();
        for (const auto& [p, e, flag] : row.factors)
          fs.push_back(json{{"prime", p.str()},
                            {"exponent", e},
                            {"flag", flag_name(flag)}});
        rows.push_back(json{{"p", row.p.str()}, {"factors", fs}});
      }
      json out = output_shell(opt, "primes");
      out["table1"] = rows;
      emit_json(out);
    } else if (opt.config.format == "csv") {
      std::cout << "p,factorization\n";
      for (const auto& row : report.rows) {
        std::cout << row.p.str() << ",";
        bool first = true;
        for (const auto& [p, e, flag] : row.factors) {
          if (!first) std::cout << ".";
          first = false;
          std::cout << p.str();
          if (e > 1) std::cout << "^" << e;
          if (flag != FactorFlag::neither) std::cout << "*";
        }
        std::cout << "\n";
      }
    } else {
      for (const auto& row : report.rows) {
        std::cout << row.p.str() << " - 1 =";
        for (const auto& [p, e, flag] : row.factors) {
          std::cout << " " << p.str();
          if (e > 1) std::cout << "^" << e;
          if (flag != FactorFlag::neither) std::cout << "*";
        }
        std::cout << "\n";
      }
      std::cout << "(* marks 2 and certified Novak primes)\n";
    }
    return 0;
  }

  SieveReport report =
      sieve_novak_primes(max_x, opt.config.budget(), opt.config.workers);
  if (opt.config.format == "json") {
    json out = output_shell(opt, "primes");
    out["x"] = max_x;
    out["pi_n"] = report.pi_n;
    out["ratio"] = fmt_double(report.ratio);
    out["undecided"] = u64s_to_json(report.undecided);
    if (certify) {
      json arr = json::array();
      for (const auto& c : report.primes) arr.push_back(certificate_json(c));
      out["primes"] = arr;
    } else {
      json arr = json::array();
      for (const auto& c : report.primes) arr.push_back(c.q.str());
      out["primes"] = arr;
    }
    emit_json(out);
  } else if (opt.config.format == "csv") {
    std::cout << "q,order,witness\n";
    for (const auto& c : report.primes)
      std::cout << c.q.str() << "," << c.order.order.str() << ","
                << c.witness_value().str() << "\n";
  } else {
    std::cout << "Novak primes <= " << max_x << ": " << report.pi_n
              << " (ratio " << fmt_double(report.ratio) << ")\n";
    for (const auto& c : report.primes) {
      std::cout << c.q.str() << "  order " << c.order.order.str()
                << "  witness " << c.witness_value().str() << "\n";
    }
    if (!report.undecided.empty()) {
      std::cout << "undecided:";
      for (auto u : report.undecided) std::cout << " " << u;
      std::cout << "\n";
    }
  }
  return 0;
}

// -------------------------------------------------------------- orderstat
int cmd_orderstat(const CliOptions& opt, std::uint64_t max_x, double L) {
  OrderStatistic st = order_statistic(max_x, L, opt.config.workers);
  if (opt.config.format == "json") {
    json out = output_shell(opt, "orderstat");
    out["x"] = st.x;
    out["L"] = fmt_double(st.L);
    out["count"] = st.count;
    out["pi"] = st.pi;
    out["fraction"] = fmt_double(st.fraction);
    out["within_lemma_range"] = st.within_lemma_range;
    emit_json(out);
  } else if (opt.config.format == "csv") {
    std::cout << "x,L,count,pi,fraction\n";
    std::cout << st.x << "," << fmt_double(st.L) << "," << st.count << ","
              << st.pi << "," << fmt_double(st.fraction) << "\n";
  } else {
    std::cout << "primes p <= " << st.x << " with ord_p(2) <= (p-1)/"
              << fmt_double(st.L) << ": " << st.count << " of " << st.pi
              << " (fraction " << fmt_double(st.fraction) << ", 1/L = "
              << fmt_double(1.0 / st.L) << ")\n";
    if (!st.within_lemma_range)
      std::cout << "warning: L outside [1, ln x / lnln x]\n";
  }
  return 0;
}

// ------------------------------------------------------------- carmichael
int cmd_carmichael_check(const CliOptions& opt, const std::string& n_str) {
  Natural n = parse_natural(n_str);
  bool result = is_novak_carmichael(n, opt.config.budget(), opt.lookup());
  if (opt.config.format == "json") {
    json out = output_shell(opt, "carmichael-check");
    out["n"] = n.str();
    out["is_novak_carmichael"] = result;
    emit_json(out);
  } else if (opt.config.format == "csv") {
    throw InvalidArgument("carmichael check has no list-shaped output");
  } else {
    std::cout << n.str() << (result ? " is" : " is not")
              << " a Novak-Carmichael number\n";
  }
  return 0;
}

int cmd_carmichael_list(const CliOptions& opt, std::uint64_t max_x) {
  std::vector<std::uint64_t> values = enumerate_carmichael(max_x);
  if (!opt.config.include_one && !values.empty() && values.front() == 1)
    values.erase(values.begin());
  if (opt.config.format == "json") {
    json out = output_shell(opt, "carmichael-list");
    out["x"] = max_x;
    out["count"] = values.size();
    out["elements"] = u64s_to_json(values);
    emit_json(out);
  } else if (opt.config.format == "csv") {
    std::cout << "n\n";
    for (auto v : values) std::cout << v << "\n";
  } else {
    std::cout << "Novak-Carmichael numbers <= " << max_x << ": "
              << values.size() << "\n";
    for (auto v : values) std::cout << v << "\n";
  }
  return 0;
}

// ------------------------------------------------------------------ pset
int cmd_pset(const CliOptions& opt, const std::string& level_str,
             std::uint64_t max_x) {
  PSetReport report;
  if (level_str == "inf" || level_str == "infinity") {
    report = p_infinity(max_x, opt.config.budget(), opt.config.workers);
  } else {
    std::int64_t level = 0;
    try {
      level = static_cast<std::int64_t>(to_u64(parse_natural(level_str)));
    } catch (const InvalidArgument&) {
      throw InvalidArgument("pset: level must be a number or 'inf'");
    }
    report = p_set(level, max_x, opt.config.budget(), opt.config.workers);
  }
  if (opt.config.format == "json") {
    json out = output_shell(opt, "pset");
    out["level"] = report.level == kLevelInfinity
                       ? json("inf")
                       : json(report.level);
    out["x"] = report.x;
    out["count"] = report.primes.size();
    out["primes"] = u64s_to_json(report.primes);
    out["undecided"] = u64s_to_json(report.undecided);
    emit_json(out);
  } else if (opt.config.format == "csv") {
    std::cout << "p\n";
    for (auto p : report.primes) std::cout << p << "\n";
  } else {
    std::cout << "P_" << level_str << " up to " << max_x << ": "
              << report.primes.size() << "\n";
    for (auto p : report.primes) std::cout << p << "\n";
  }
  return 0;
}

// --------------------------------------------------------------- saturate
int cmd_saturate(const CliOptions& opt, const std::string& p_str) {
  SaturationTrace trace =
      saturate(parse_natural(p_str), opt.config.budget(),
               opt.config.saturation_ceiling_bits, opt.lookup());
  if (opt.config.format == "json") {
    json out = output_shell(opt, "saturate");
    out["p"] = trace.p.str();
    out["steps"] = naturals_to_json(trace.steps);
    out["A"] = trace.A.str();
    out["N"] = trace.N.str();
    emit_json(out);
  } else if (opt.config.format == "csv") {
    std::cout << "step\n";
    for (const auto& s : trace.steps) std::cout << s.str() << "\n";
  } else {
    std::cout << "saturation of " << trace.p.str() << ":";
    for (const auto& s : trace.steps) std::cout << " " << s.str();
    std::cout << "\nA = " << trace.A.str() << " = 2 * " << trace.N.str()
              << "\n";
  }
  return 0;
}

// ----------------------------------------------------------------- divseq
DivSeqSpec divseq_spec_from_options(const std::string& spec_file,
                                    const std::string& a, const std::string& b,
                                    bool plus, bool minus, double growth_base,
                                    bool weak_growth) {
  DivSeqSpec spec;
  if (!spec_file.empty()) {
    spec = parse_divseq_spec(spec_file);
  } else {
    if (plus && minus)
      throw InvalidArgument("divseq: choose one of --plus/--minus");
    spec = DivSeqSpec::family(parse_integer(a), parse_integer(b),
                              plus ? 1 : -1,
                              growth_base > 0
                                  ? std::optional<double>(growth_base)
                                  : std::nullopt);
  }
  spec.weak_growth = weak_growth;
  return spec;
}

const char* verdict_name(AxiomVerdict v) {
  switch (v) {
    case AxiomVerdict::pass: return "pass";
    case AxiomVerdict::fail: return "fail";
    default: return "vacuous";
  }
}

int cmd_divseq_check(const CliOptions& opt, const DivSeqSpec& spec,
                     std::uint64_t bound) {
  AxiomReport report = check_axioms(spec, bound);
  auto outcome_json = [](const AxiomOutcome& o) {
    json j{{"verdict", verdict_name(o.verdict)}};
    if (o.verdict == AxiomVerdict::fail) j["counterexample"] = o.counterexample;
    return j;
  };
  if (opt.config.format == "json") {
    json out = output_shell(opt, "divseq-check");
    out["spec"] = report.spec_name;
    out["bound"] = report.bound;
    out["divisibility"] = outcome_json(report.divisibility);
    out["lte"] = outcome_json(report.lte);
    out["zsigmondy"] = outcome_json(report.zsigmondy);
    out["zsigmondy_exceptions"] = u64s_to_json(report.zsigmondy_exceptions);
    out["growth"] = outcome_json(report.growth);
    out["nondegeneracy"] = outcome_json(report.nondegeneracy);
    out["truncated_at"] = report.truncated_at;
    emit_json(out);
  } else if (opt.config.format == "csv") {
    throw InvalidArgument("divseq check has no list-shaped output");
  } else {
    std::cout << report.spec_name << " up to n = " << report.bound << ":\n";
    auto show = [&](const char* name, const AxiomOutcome& o) {
      std::cout << "  " << name << ": " << verdict_name(o.verdict);
      if (o.verdict == AxiomVerdict::fail)
        std::cout << " at " << o.counterexample;
      std::cout << "\n";
    };
    show("divisibility", report.divisibility);
    show("lifting-the-exponent", report.lte);
    show("primitive-prime", report.zsigmondy);
    if (!report.zsigmondy_exceptions.empty()) {
      std::cout << "    exceptions:";
      for (auto n : report.zsigmondy_exceptions) std::cout << " " << n;
      std::cout << "\n";
    }
    show("growth", report.growth);
    show("nondegeneracy", report.nondegeneracy);
  }
  return 0;
}

int cmd_divseq_selfdiv(const CliOptions& opt, const DivSeqSpec& spec,
                       std::uint64_t max_x) {
  SelfDivisorReport report =
      self_divisors(spec, max_x, opt.config.workers);
  std::vector<std::uint64_t> values = report.values;
  if (!opt.config.include_one && !values.empty() && values.front() == 1)
    values.erase(values.begin());
  if (opt.config.format == "json") {
    json out = output_shell(opt, "divseq-selfdiv");
    out["spec"] = spec.name;
    out["x"] = max_x;
    out["count"] = values.size();
    out["elements"] = u64s_to_json(values);
    out["skipped"] = u64s_to_json(report.skipped);
    emit_json(out);
  } else if (opt.config.format == "csv") {
    std::cout << "n\n";
    for (auto v : values) std::cout << v << "\n";
  } else {
    std::cout << "self divisors of " << spec.name << " up to " << max_x
              << ": " << values.size() << "\n";
    for (auto v : values) std::cout << v << "\n";
  }
  return 0;
}

// ------------------------------------------------------------------ cache
int cmd_cache_verify(const CliOptions& opt,
                     const std::vector<std::string>& paths) {
  std::size_t records = 0;
  for (const auto& path : paths) {
    FactorCache cache;
    cache.load_file(path);
    records += cache.verify();
  }
  if (opt.config.format == "json") {
    json out = output_shell(opt, "cache-verify");
    out["paths"] = paths;
    out["records"] = records;
    out["ok"] = true;
    emit_json(out);
  } else {
    std::cout << "verified " << records << " records across " << paths.size()
              << " file(s)\n";
  }
  return 0;
}

int cmd_cache_merge(const CliOptions& opt,
                    const std::vector<std::string>& paths,
                    const std::string& out_path) {
  FactorCache merged;
  for (const auto& path : paths) {
    FactorCache cache;
    cache.load_file(path);
    merged.merge_from(cache);
  }
  merged.save_file(out_path);
  if (opt.config.format == "json") {
    json out = output_shell(opt, "cache-merge");
    out["paths"] = paths;
    out["out"] = out_path;
    out["records"] = merged.size();
    emit_json(out);
  } else {
    std::cout << "merged " << merged.size() << " records into " << out_path
              << "\n";
  }
  return 0;
}

int cmd_cache_stats(const CliOptions& opt,
                    const std::vector<std::string>& paths) {
  FactorCache cache;
  for (const auto& path : paths) cache.load_file(path);
  FactorCache::Stats stats = cache.stats();
  if (opt.config.format == "json") {
    json out = output_shell(opt, "cache-stats");
    out["paths"] = paths;
    out["records"] = stats.records;
    out["complete"] = u64s_to_json(stats.complete);
    out["incomplete"] = u64s_to_json(stats.incomplete);
    emit_json(out);
  } else if (opt.config.format == "csv") {
    std::cout << "n,complete\n";
    for (auto n : stats.complete) std::cout << n << ",1\n";
    for (auto n : stats.incomplete) std::cout << n << ",0\n";
  } else {
    std::cout << stats.records << " records, " << stats.complete.size()
              << " complete\ncomplete n:";
    for (auto n : stats.complete) std::cout << " " << n;
    std::cout << "\n";
    if (!stats.incomplete.empty()) {
      std::cout << "incomplete n:";
      for (auto n : stats.incomplete) std::cout << " " << n;
      std::cout << "\n";
    }
  }
  return 0;
}

int cmd_cache_seed(const CliOptions& opt, std::uint64_t max_n,
                   const std::string& out_path) {
  FactorCache cache;
  if (!out_path.empty()) {
    std::ifstream probe(out_path);
    if (probe.good()) cache.load_file(out_path);
  }
  for (std::uint64_t d = 1; d <= max_n; d += 2) {
    if (cache.lookup_exponent(d)) continue;
    cache.store(d, factorize_pow2p1(d, opt.config.budget(), opt.lookup()));
  }
  if (!out_path.empty()) cache.save_file(out_path);
  FactorCache::Stats stats = cache.stats();
  if (opt.config.format == "json") {
    json out = output_shell(opt, "cache-seed");
    out["max_n"] = max_n;
    out["out"] = out_path;
    out["records"] = stats.records;
    out["complete"] = u64s_to_json(stats.complete);
    out["incomplete"] = u64s_to_json(stats.incomplete);
    emit_json(out);
  } else {
    std::cout << "seeded " << stats.records << " records ("
              << stats.complete.size() << " complete)\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Novak numbers: predicates, enumerations, certified primes, "
               "Carmichael analogues and divisibility sequences"};
  app.require_subcommand(1);

  CliOptions opt;
  app.add_option("--config", opt.config_file, "key = value settings file");
  bool json_flag = false, csv_flag = false, exclude_one = false;
  app.add_flag("--json", json_flag, "emit a single JSON object");
  app.add_flag("--csv", csv_flag, "emit CSV (list-shaped outputs only)");
  app.add_flag("--exclude-one", exclude_one, "do not count 1 as a member");
  std::string cache_path, format;
  std::uint64_t trial = 0, rho = 0, ceiling = 0;
  unsigned workers = 0;
  auto* cache_opt = app.add_option("--cache", cache_path,
                                   "factor cache file (default $NOVAK_CACHE)");
  auto* trial_opt = app.add_option("--trial-bound", trial,
                                   "trial division bound");
  auto* rho_opt = app.add_option("--rho-iters", rho, "Pollard rho budget");
  auto* workers_opt = app.add_option("--workers", workers, "worker threads");
  auto* format_opt = app.add_option("--format", format, "human | json | csv");
  auto* ceiling_opt = app.add_option("--size-ceiling-bits", ceiling,
                                     "constructed-number size ceiling");

  // check
  std::string check_n;
  auto* sc_check = app.add_subcommand("check", "test n | 2^n + 1");
  sc_check->add_option("n", check_n, "the number to test")->required();

  // list
  std::uint64_t list_max = 0;
  std::string list_method = "brute";
  auto* sc_list = app.add_subcommand("list", "enumerate members up to a bound");
  sc_list->add_option("--max", list_max, "upper bound")->required();
  sc_list->add_option("--method", list_method, "brute | closure")
      ->check(CLI::IsMember({"brute", "closure"}));

  // bound
  std::uint64_t bound_x = 0;
  std::uint64_t bound_witness = 0;
  auto* sc_bound = app.add_subcommand("bound", "count lower bound from a witness");
  sc_bound->add_option("--x", bound_x, "range endpoint")->required();
  auto* witness_opt = sc_bound->add_option("--witness", bound_witness,
                                           "witness member");

  // dlower
  std::uint64_t dlower_max = 0;
  auto* sc_dlower = app.add_subcommand("dlower", "best omega lower bound");
  sc_dlower->add_option("--max", dlower_max, "upper bound")->required();

  // zsig
  std::string zsig_a, zsig_b;
  std::uint64_t zsig_n = 0;
  auto* sc_zsig = app.add_subcommand("zsig", "primitive prime of a^n + b^n");
  sc_zsig->add_option("--a", zsig_a)->required();
  sc_zsig->add_option("--b", zsig_b)->required();
  sc_zsig->add_option("--n", zsig_n)->required();

  // omega-lower
  std::string omega_n;
  auto* sc_omega = app.add_subcommand("omega-lower",
                                      "harvested lower bound for omega(2^N+1)");
  sc_omega->add_option("--n", omega_n)->required();

  // primes
  std::uint64_t primes_max = 0;
  bool primes_certify = false, primes_table1 = false;
  auto* sc_primes = app.add_subcommand("primes", "certified Novak prime sieve");
  auto* primes_max_opt = sc_primes->add_option("--max", primes_max);
  sc_primes->add_flag("--certify", primes_certify, "export full certificates");
  sc_primes->add_flag("--table1", primes_table1,
                      "factor p-1 for the first 24 primes below 10^6");

  // orderstat
  std::uint64_t orderstat_max = 0;
  double orderstat_L = 1.0;
  auto* sc_orderstat = app.add_subcommand("orderstat",
                                          "order statistic diagnostic");
  sc_orderstat->add_option("--max", orderstat_max)->required();
  sc_orderstat->add_option("--L", orderstat_L)->required();

  // carmichael
  auto* sc_car = app.add_subcommand("carmichael", "Novak-Carmichael numbers");
  sc_car->require_subcommand(1);
  std::string car_check_n;
  auto* sc_car_check = sc_car->add_subcommand("check",
                                              "test the divisor criterion");
  sc_car_check->add_option("n", car_check_n)->required();
  std::uint64_t car_list_max = 0;
  auto* sc_car_list = sc_car->add_subcommand("list", "enumerate up to a bound");
  sc_car_list->add_option("--max", car_list_max)->required();

  // pset
  std::string pset_level;
  std::uint64_t pset_max = 0;
  auto* sc_pset = app.add_subcommand("pset", "recursive prime filtration");
  sc_pset->add_option("--level", pset_level, "level number or 'inf'")
      ->required();
  sc_pset->add_option("--max", pset_max)->required();

  // saturate
  std::string saturate_p;
  auto* sc_saturate = app.add_subcommand("saturate", "lcm saturation trace");
  sc_saturate->add_option("--p", saturate_p)->required();

  // divseq
  auto* sc_divseq = app.add_subcommand("divseq", "divisibility sequences");
  sc_divseq->require_subcommand(1);
  std::string ds_a = "2", ds_b = "1", ds_spec_file;
  bool ds_plus = false, ds_minus = false, ds_weak = false;
  double ds_growth = 0.0;
  std::uint64_t ds_bound = 0, ds_max = 0;
  auto* sc_ds_check = sc_divseq->add_subcommand("check",
                                                "verify the sequence axioms");
  sc_ds_check->add_option("--a", ds_a);
  sc_ds_check->add_option("--b", ds_b);
  sc_ds_check->add_flag("--plus", ds_plus, "u_n = a^n + b^n");
  sc_ds_check->add_flag("--minus", ds_minus, "u_n = a^n - b^n (default)");
  sc_ds_check->add_option("--growth-base", ds_growth);
  sc_ds_check->add_flag("--weak-growth", ds_weak);
  sc_ds_check->add_option("--spec", ds_spec_file, "sequence spec file");
  sc_ds_check->add_option("--bound", ds_bound)->required();
  auto* sc_ds_selfdiv = sc_divseq->add_subcommand("selfdiv",
                                                  "members of {n : n | u_n}");
  sc_ds_selfdiv->add_option("--a", ds_a);
  sc_ds_selfdiv->add_option("--b", ds_b);
  sc_ds_selfdiv->add_flag("--plus", ds_plus);
  sc_ds_selfdiv->add_flag("--minus", ds_minus);
  sc_ds_selfdiv->add_option("--spec", ds_spec_file);
  sc_ds_selfdiv->add_option("--max", ds_max)->required();

  // cache
  auto* sc_cache = app.add_subcommand("cache", "factor cache administration");
  sc_cache->require_subcommand(1);
  std::vector<std::string> cache_paths;
  std::string cache_out;
  std::uint64_t seed_max = 0;
  auto* sc_cache_verify = sc_cache->add_subcommand("verify",
                                                   "re-multiply every record");
  sc_cache_verify->add_option("paths", cache_paths)->required();
  auto* sc_cache_merge = sc_cache->add_subcommand("merge",
                                                  "union caches, reject conflicts");
  sc_cache_merge->add_option("paths", cache_paths)->required();
  sc_cache_merge->add_option("--out", cache_out)->required();
  auto* sc_cache_stats = sc_cache->add_subcommand("stats", "coverage report");
  sc_cache_stats->add_option("paths", cache_paths)->required();
  auto* sc_cache_seed = sc_cache->add_subcommand("seed",
                                                 "factor 2^d+1 for odd d");
  sc_cache_seed->add_option("--max-n", seed_max)->required();
  sc_cache_seed->add_option("--out", cache_out);

  // let global options appear after any subcommand
  std::function<void(CLI::App*)> enable_fallthrough = [&](CLI::App* a) {
    a->fallthrough();
    for (CLI::App* s : a->get_subcommands([](CLI::App*) { return true; }))
      enable_fallthrough(s);
  };
  enable_fallthrough(&app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    std::cerr << app.help() << "\n";
    return 2;
  }

  try {
    opt.json_flag = json_flag;
    opt.csv_flag = csv_flag;
    opt.exclude_one = exclude_one;
    if (*cache_opt) opt.cache_flag = cache_path;
    if (*trial_opt) opt.trial_flag = trial;
    if (*rho_opt) opt.rho_flag = rho;
    if (*workers_opt) opt.workers_flag = workers;
    if (*format_opt) opt.format_flag = format;
    if (*ceiling_opt) opt.ceiling_flag = ceiling;
    opt.finalize();

    if (*sc_check) return cmd_check(opt, check_n);
    if (*sc_list) return cmd_list(opt, list_max, list_method);
    if (*sc_bound)
      return cmd_bound(opt, bound_x,
                       *witness_opt ? std::optional<std::uint64_t>(bound_witness)
                                    : std::nullopt);
    if (*sc_dlower) return cmd_dlower(opt, dlower_max);
    if (*sc_zsig) return cmd_zsig(opt, zsig_a, zsig_b, zsig_n);
    if (*sc_omega) return cmd_omega_lower(opt, omega_n);
    if (*sc_primes) {
      if (!primes_table1 && !*primes_max_opt)
        throw InvalidArgument("primes: --max is required without --table1");
      return cmd_primes(opt, primes_max, primes_certify, primes_table1);
    }
    if (*sc_orderstat) return cmd_orderstat(opt, orderstat_max, orderstat_L);
    if (*sc_car_check) return cmd_carmichael_check(opt, car_check_n);
    if (*sc_car_list) return cmd_carmichael_list(opt, car_list_max);
    if (*sc_pset) return cmd_pset(opt, pset_level, pset_max);
    if (*sc_saturate) return cmd_saturate(opt, saturate_p);
    if (*sc_ds_check || *sc_ds_selfdiv) {
      DivSeqSpec spec = divseq_spec_from_options(ds_spec_file, ds_a, ds_b,
                                                 ds_plus, ds_minus, ds_growth,
                                                 ds_weak);
      if (*sc_ds_check) return cmd_divseq_check(opt, spec, ds_bound);
      return cmd_divseq_selfdiv(opt, spec, ds_max);
    }
    if (*sc_cache_verify) return cmd_cache_verify(opt, cache_paths);
    if (*sc_cache_merge) return cmd_cache_merge(opt, cache_paths, cache_out);
    if (*sc_cache_stats) return cmd_cache_stats(opt, cache_paths);
    if (*sc_cache_seed) return cmd_cache_seed(opt, seed_max, cache_out);
    std::cerr << app.help() << "\n";
    return 2;
  } catch (const CacheProductError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const CacheFormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const BudgetExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const SizeLimitExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const PreconditionViolation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
