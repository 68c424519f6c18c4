#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <sstream>
#include <string>
#include <vector>

#include "novak/errors.hpp"
#include "novak/factorization.hpp"
#include "novak/natural.hpp"
#include "novak/primality.hpp"

namespace novak {

// Persisted partial factorizations of numbers 2^n + 1, one ASCII record
// per line:
//
//   2+ <n>: <p1>^<e1> <p2>^<e2> ... [C<cofactor>]
//
// Decimal numbers, single spaces, `C` marks a composite cofactor, `#`
// starts a comment line.  Reads are shared, writes exclusive; re-inserting
// a record is only legal with the identical factorization.
class FactorCache : public FactorLookup {
 public:
  struct Stats {
    std::size_t records = 0;
    std::vector<std::uint64_t> complete;    // n with cofactor 1
    std::vector<std::uint64_t> incomplete;  // n with a composite cofactor
  };

  std::optional<FactoredInteger> lookup(const Natural& n) const override {
    std::shared_lock lock(mutex_);
    auto it = by_value_.find(n);
    if (it == by_value_.end()) return std::nullopt;
    return records_.at(it->second);
  }

  std::optional<FactoredInteger> lookup_exponent(std::uint64_t n) const {
    std::shared_lock lock(mutex_);
    auto it = records_.find(n);
    if (it == records_.end()) return std::nullopt;
    return it->second;
  }

  // Idempotent insert: storing the same n twice requires an identical
  // record, otherwise the caches are in conflict.
  void store(std::uint64_t exponent, const FactoredInteger& fi) {
    if (!fi.consistent() || fi.n != pow2p1(exponent))
      throw InvalidArgument("factor cache: inconsistent record for n=" +
                            std::to_string(exponent));
    if (!fi.complete && check_prime(fi.cofactor).prime)
      throw InvalidArgument("factor cache: prime cofactor in record for n=" +
                            std::to_string(exponent) +
                            " must be listed as a factor");
    std::unique_lock lock(mutex_);
    auto it = records_.find(exponent);
    if (it != records_.end()) {
      if (!same_record(it->second, fi))
        throw InvalidArgument("factor cache: conflicting record for n=" +
                              std::to_string(exponent));
      return;
    }
    records_.emplace(exponent, fi);
    by_value_.emplace(fi.n, exponent);
  }

  std::size_t size() const {
    std::shared_lock lock(mutex_);
    return records_.size();
  }

  Stats stats() const {
    std::shared_lock lock(mutex_);
    Stats s;
    s.records = records_.size();
    for (const auto& [n, fi] : records_)
      (fi.complete ? s.complete : s.incomplete).push_back(n);
    return s;
  }

  // Re-multiplies every record; returns the number checked.
  std::size_t verify() const {
    std::shared_lock lock(mutex_);
    for (const auto& [n, fi] : records_) {
      if (!fi.consistent() || fi.n != pow2p1(n))
        throw CacheProductError(0, "record 2+ " + std::to_string(n) +
                                       " fails its product check");
    }
    return records_.size();
  }

  void merge_from(const FactorCache& other) {
    std::map<std::uint64_t, FactoredInteger> snapshot;
    {
      std::shared_lock lock(other.mutex_);
      snapshot = other.records_;
    }
    for (const auto& [n, fi] : snapshot) store(n, fi);
  }

  void load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open factor cache: " + path);
    load_stream(in);
  }

  void load_stream(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty() || line[0] == '#') continue;
      parse_record(line, line_no);
    }
  }

  void save_file(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw InvalidArgument("cannot write factor cache: " + path);
    save_stream(out);
  }

  void save_stream(std::ostream& out) const {
    std::shared_lock lock(mutex_);
    for (const auto& [n, fi] : records_) {
      out << "2+ " << n << ":";
      for (const auto& f : fi.factors)
        out << " " << f.prime.str() << "^" << f.exponent;
      if (!fi.complete) out << " C" << fi.cofactor.str();
      out << "\n";
    }
  }

 private:
  static bool same_record(const FactoredInteger& a, const FactoredInteger& b) {
    if (a.n != b.n || a.cofactor != b.cofactor ||
        a.factors.size() != b.factors.size())
      return false;
    for (std::size_t i = 0; i < a.factors.size(); ++i)
      if (a.factors[i].prime != b.factors[i].prime ||
          a.factors[i].exponent != b.factors[i].exponent)
        return false;
    return true;
  }

  void parse_record(const std::string& line, std::size_t line_no) {
    std::istringstream ss(line);
    std::string tag;
    ss >> tag;
    if (tag != "2+") throw CacheFormatError(line_no, "expected '2+' tag");
    std::string ntok;
    ss >> ntok;
    if (ntok.empty() || ntok.back() != ':')
      throw CacheFormatError(line_no, "expected '<n>:' after tag");
    std::uint64_t exponent = 0;
    try {
      exponent = to_u64(parse_natural(ntok.substr(0, ntok.size() - 1)));
    } catch (const InvalidArgument&) {
      throw CacheFormatError(line_no, "bad exponent '" + ntok + "'");
    }

    FactoredInteger fi;
    fi.n = pow2p1(exponent);
    std::string tok;
    bool saw_cofactor = false;
    while (ss >> tok) {
      if (saw_cofactor)
        throw CacheFormatError(line_no, "tokens after cofactor");
      if (tok[0] == 'C') {
        Natural c;
        try {
          c = parse_natural(tok.substr(1));
        } catch (const InvalidArgument&) {
          throw CacheFormatError(line_no, "bad cofactor '" + tok + "'");
        }
        if (c < 2) throw CacheFormatError(line_no, "cofactor must exceed 1");
        if (check_prime(c).prime)
          throw CacheFormatError(
              line_no, "cofactor is prime and must be listed as a factor");
        fi.cofactor = c;
        fi.complete = false;
        saw_cofactor = true;
        continue;
      }
      Natural p;
      std::uint32_t e = 1;
      auto caret = tok.find('^');
      try {
        if (caret == std::string::npos) {
          p = parse_natural(tok);
        } else {
          p = parse_natural(tok.substr(0, caret));
          e = static_cast<std::uint32_t>(
              to_u64(parse_natural(tok.substr(caret + 1))));
        }
      } catch (const InvalidArgument&) {
        throw CacheFormatError(line_no, "bad factor token '" + tok + "'");
      }
      if (e == 0) throw CacheFormatError(line_no, "zero exponent");
      if (!fi.factors.empty() && !(fi.factors.back().prime < p))
        throw CacheFormatError(line_no, "primes not strictly increasing");
      auto pr = check_prime(p);
      if (!pr.prime)
        throw CacheFormatError(line_no, "listed factor " + p.str() +
                                            " is not prime");
      fi.factors.push_back({p, e, pr.regime});
    }
    if (fi.product() != fi.n)
      throw CacheProductError(line_no,
                              "product check failed for 2+ " +
                                  std::to_string(exponent));
    store(exponent, fi);
  }

  mutable std::shared_mutex mutex_;
  std::map<std::uint64_t, FactoredInteger> records_;
  std::map<Natural, std::uint64_t> by_value_;
};

}  // namespace novak
