#pragma once

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "novak/divseq.hpp"
#include "novak/errors.hpp"
#include "novak/factorization.hpp"
#include "novak/novak_numbers.hpp"

namespace novak {

// `key = value` lines, `#` comments, blank lines ignored.
inline std::map<std::string, std::string> parse_key_values(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::string line;
  std::size_t line_no = 0;
  auto trim = [](std::string s) {
    auto b = s.find_first_not_of(" \t");
    auto e = s.find_last_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    return s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto eq = t.find('=');
    if (eq == std::string::npos)
      throw InvalidArgument("config line " + std::to_string(line_no) +
                            ": expected key = value");
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (key.empty())
      throw InvalidArgument("config line " + std::to_string(line_no) +
                            ": empty key");
    kv[key] = value;
  }
  return kv;
}

inline std::map<std::string, std::string> parse_key_value_file(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config file: " + path);
  return parse_key_values(in);
}

// Effective run settings; echoed into every JSON output so results are
// reproducible from the output alone.
struct RunConfig {
  std::string cache_path;
  std::uint64_t trial_bound = 100000;
  std::uint64_t rho_iterations = 1000000;
  std::uint64_t size_ceiling_bits = kDefaultSizeCeilingBits;
  std::uint64_t saturation_ceiling_bits = 1ull << 20;
  unsigned workers = 1;
  std::string format = "human";  // human | json | csv
  bool include_one = true;

  FactorBudget budget() const { return {trial_bound, rho_iterations}; }

  void apply_env() {
    if (const char* env = std::getenv("NOVAK_CACHE"))
      if (cache_path.empty()) cache_path = env;
  }

  void apply_file(const std::string& path) {
    auto kv = parse_key_value_file(path);
    auto u64 = [&](const std::string& key, std::uint64_t& out) {
      auto it = kv.find(key);
      if (it == kv.end()) return;
      try {
        out = to_u64(parse_natural(it->second));
      } catch (const InvalidArgument&) {
        throw InvalidArgument("config: bad value for " + key);
      }
    };
    if (auto it = kv.find("cache"); it != kv.end()) cache_path = it->second;
    u64("trial_bound", trial_bound);
    u64("rho_iterations", rho_iterations);
    u64("size_ceiling_bits", size_ceiling_bits);
    u64("saturation_ceiling_bits", saturation_ceiling_bits);
    std::uint64_t w = workers;
    u64("workers", w);
    workers = static_cast<unsigned>(w);
    if (auto it = kv.find("format"); it != kv.end()) {
      if (it->second != "human" && it->second != "json" && it->second != "csv")
        throw InvalidArgument("config: format must be human, json or csv");
      format = it->second;
    }
    if (auto it = kv.find("include_one"); it != kv.end()) {
      if (it->second == "true" || it->second == "1")
        include_one = true;
      else if (it->second == "false" || it->second == "0")
        include_one = false;
      else
        throw InvalidArgument("config: include_one must be boolean");
    }
    if (trial_bound == 0 || rho_iterations == 0 || workers == 0)
      throw InvalidArgument("config: budgets and workers must be positive");
  }
};

// Sequence spec files reuse the key = value format: keys family, a, b,
// sign, growth_base.
inline DivSeqSpec parse_divseq_spec(const std::string& path) {
  auto kv = parse_key_value_file(path);
  if (auto it = kv.find("family"); it == kv.end() || it->second != "anbn")
    throw InvalidArgument("sequence spec: family must be 'anbn'");
  auto need = [&](const std::string& key) -> std::string {
    auto it = kv.find(key);
    if (it == kv.end())
      throw InvalidArgument("sequence spec: missing key " + key);
    return it->second;
  };
  Integer a = parse_integer(need("a"));
  Integer b = parse_integer(need("b"));
  std::string sign = need("sign");
  if (sign != "plus" && sign != "minus")
    throw InvalidArgument("sequence spec: sign must be plus or minus");
  std::optional<double> growth;
  if (auto it = kv.find("growth_base"); it != kv.end())
    growth = std::stod(it->second);
  return DivSeqSpec::family(a, b, sign == "plus" ? 1 : -1, growth);
}

}  // namespace novak
