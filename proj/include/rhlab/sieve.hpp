#pragma once

// Deterministic prime and Moebius computation.
//
// Small limits use full tables (odd-only sieve, smallest-prime-factor table).
// Large limits go through MoebiusSieve, which produces mu over arbitrary
// blocks [lo, hi] from a fixed set of base primes <= sqrt(max_hi). Memory is
// bounded by the block length, not by hi.

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rhlab/errors.hpp"

namespace rhlab {

struct Budget {
  // Largest limit for full tables (primes_up_to, spf_table, pi_exact).
  std::int64_t table_limit = 100'000'000;
  std::int64_t max_block_length = std::int64_t{1} << 26;
  // Base primes for segmented mu are kept up to sqrt of this.
  std::int64_t max_segment_hi = 1'000'000'000'000;
};

inline constexpr std::int64_t kDefaultBlockLength = std::int64_t{1} << 20;

// floor(sqrt(n)) without floating-point drift.
constexpr std::int64_t isqrt(std::int64_t n) {
  if (n < 2) return n < 0 ? 0 : n;
  std::int64_t x = n;
  std::int64_t y = (x + 1) / 2;
  while (y < x) {
    x = y;
    y = (x + n / x) / 2;
  }
  return x;
}

struct PrimeTable {
  std::int64_t limit = 0;
  std::vector<std::int64_t> primes;

  std::size_t size() const { return primes.size(); }
  bool contains(std::int64_t n) const {
    return std::binary_search(primes.begin(), primes.end(), n);
  }
};

namespace detail {

inline void check_table_limit(std::int64_t limit, const Budget& budget, const char* what) {
  if (limit > budget.table_limit) {
    throw CapacityError(std::string(what) + ": limit " + std::to_string(limit) +
                        " exceeds table budget " + std::to_string(budget.table_limit));
  }
}

// composite[i] == 1 iff 2*i+1 is composite (index 0, i.e. 1, is marked too).
inline std::vector<std::uint8_t> odd_composite_flags(std::int64_t limit) {
  const std::int64_t half = limit < 1 ? 0 : (limit - 1) / 2 + 1;
  std::vector<std::uint8_t> composite(static_cast<std::size_t>(half), 0);
  if (half > 0) composite[0] = 1;
  for (std::int64_t p = 3; p * p <= limit; p += 2) {
    if (composite[p / 2]) continue;
    for (std::int64_t j = p * p; j <= limit; j += 2 * p) composite[j / 2] = 1;
  }
  return composite;
}

}  // namespace detail

inline PrimeTable primes_up_to(std::int64_t limit, const Budget& budget = {}) {
  if (limit < 0) throw DomainError("primes_up_to: negative limit");
  detail::check_table_limit(limit, budget, "primes_up_to");
  PrimeTable table;
  table.limit = limit;
  if (limit < 2) return table;
  const auto composite = detail::odd_composite_flags(limit);
  table.primes.push_back(2);
  for (std::size_t i = 1; i < composite.size(); ++i) {
    if (!composite[i]) table.primes.push_back(static_cast<std::int64_t>(2 * i + 1));
  }
  return table;
}

// pi(x) without materialising the prime list.
inline std::int64_t count_primes(std::int64_t x, const Budget& budget = {}) {
  if (x < 0) throw DomainError("count_primes: negative argument");
  detail::check_table_limit(x, budget, "count_primes");
  if (x < 2) return 0;
  const auto composite = detail::odd_composite_flags(x);
  return 1 + std::count(composite.begin(), composite.end(), std::uint8_t{0});
}

class SpfTable {
 public:
  SpfTable() = default;

  explicit SpfTable(std::int64_t limit, const Budget& budget = {}) : limit_(limit) {
    if (limit < 2) throw DomainError("spf_table: limit must be >= 2");
    detail::check_table_limit(limit, budget, "spf_table");
    spf_.assign(static_cast<std::size_t>(limit) + 1, 0);
    std::vector<std::uint32_t> primes;
    // Linear sieve: each composite is written exactly once, by its smallest factor.
    for (std::int64_t i = 2; i <= limit; ++i) {
      if (spf_[i] == 0) {
        spf_[i] = static_cast<std::uint32_t>(i);
        primes.push_back(static_cast<std::uint32_t>(i));
      }
      for (std::uint32_t p : primes) {
        const std::int64_t m = std::int64_t{p} * i;
        if (p > spf_[i] || m > limit) break;
        spf_[m] = p;
      }
    }
  }

  std::int64_t limit() const { return limit_; }

  std::int64_t smallest_factor(std::int64_t n) const {
    if (n < 2 || n > limit_) {
      throw DomainError("spf: " + std::to_string(n) + " outside [2, " + std::to_string(limit_) + "]");
    }
    return spf_[static_cast<std::size_t>(n)];
  }

  int mu(std::int64_t n) const {
    if (n == 1) return 1;
    int sign = 1;
    while (n > 1) {
      const std::int64_t p = smallest_factor(n);
      n /= p;
      if (n % p == 0) return 0;
      sign = -sign;
    }
    return sign;
  }

 private:
  std::int64_t limit_ = 0;
  std::vector<std::uint32_t> spf_;
};

inline SpfTable spf_table(std::int64_t limit, const Budget& budget = {}) {
  return SpfTable(limit, budget);
}

// Trial division; fine for isolated n up to ~1e14.
inline int mu_of(std::int64_t n) {
  if (n < 1) throw DomainError("mu_of: n must be >= 1");
  int sign = 1;
  auto strip = [&](std::int64_t p) -> bool {
    if (n % p != 0) return true;
    n /= p;
    if (n % p == 0) return false;
    sign = -sign;
    return true;
  };
  if (!strip(2)) return 0;
  for (std::int64_t d = 3; d * d <= n; d += 2) {
    if (!strip(d)) return 0;
  }
  if (n > 1) sign = -sign;
  return sign;
}

struct MoebiusBlock {
  std::int64_t lo = 1;
  std::int64_t hi = 0;
  std::vector<std::int8_t> values;

  std::size_t size() const { return values.size(); }
  int at(std::int64_t n) const { return values.at(static_cast<std::size_t>(n - lo)); }
};

// Segmented Moebius sieve. Immutable after construction; fill() may be called
// concurrently from several threads as long as each uses its own buffers.
class MoebiusSieve {
 public:
  explicit MoebiusSieve(std::int64_t max_hi, const Budget& budget = {})
      : max_hi_(max_hi), budget_(budget) {
    if (max_hi < 1) throw DomainError("MoebiusSieve: max_hi must be >= 1");
    if (max_hi > budget.max_segment_hi) {
      throw CapacityError("MoebiusSieve: hi " + std::to_string(max_hi) + " exceeds segment capacity " +
                          std::to_string(budget.max_segment_hi));
    }
    base_ = primes_up_to(isqrt(max_hi), budget).primes;
  }

  std::int64_t max_hi() const { return max_hi_; }
  std::span<const std::int64_t> base_primes() const { return base_; }

  // Writes mu(lo..hi) into out; scratch holds the running product of found primes.
  void fill(std::int64_t lo, std::int64_t hi, std::span<std::int8_t> out,
            std::vector<std::int64_t>& scratch) const {
    check_range(lo, hi);
    const auto len = static_cast<std::size_t>(hi - lo + 1);
    if (out.size() < len) throw CapacityError("MoebiusSieve: output span too small");
    std::fill_n(out.begin(), len, std::int8_t{1});
    scratch.assign(len, 1);

    for (const std::int64_t p : base_) {
      if (p * p > hi) break;
      for (std::int64_t j = (lo + p - 1) / p * p; j <= hi; j += p) {
        const auto i = static_cast<std::size_t>(j - lo);
        out[i] = static_cast<std::int8_t>(-out[i]);
        scratch[i] *= p;
      }
      const std::int64_t pp = p * p;
      for (std::int64_t j = (lo + pp - 1) / pp * pp; j <= hi; j += pp) {
        out[static_cast<std::size_t>(j - lo)] = 0;
      }
    }
    // At most one prime factor above sqrt(hi) survives as the cofactor.
    for (std::size_t i = 0; i < len; ++i) {
      if (out[i] != 0 && scratch[i] != lo + static_cast<std::int64_t>(i)) {
        out[i] = static_cast<std::int8_t>(-out[i]);
      }
    }
  }

  MoebiusBlock block(std::int64_t lo, std::int64_t hi) const {
    check_range(lo, hi);
    MoebiusBlock b{lo, hi, std::vector<std::int8_t>(static_cast<std::size_t>(hi - lo + 1))};
    std::vector<std::int64_t> scratch;
    fill(lo, hi, b.values, scratch);
    return b;
  }

 private:
  void check_range(std::int64_t lo, std::int64_t hi) const {
    if (lo < 1 || hi < lo) throw DomainError("mu_block: need 1 <= lo <= hi");
    if (hi > max_hi_) {
      throw CapacityError("mu_block: hi " + std::to_string(hi) + " beyond sieve capacity " +
                          std::to_string(max_hi_));
    }
    if (hi - lo + 1 > budget_.max_block_length) {
      throw CapacityError("mu_block: block length " + std::to_string(hi - lo + 1) +
                          " exceeds " + std::to_string(budget_.max_block_length));
    }
  }

  std::int64_t max_hi_;
  Budget budget_;
  std::vector<std::int64_t> base_;
};

inline MoebiusBlock mu_block(std::int64_t lo, std::int64_t hi, const Budget& budget = {}) {
  if (lo < 1 || hi < lo) throw DomainError("mu_block: need 1 <= lo <= hi");
  return MoebiusSieve(hi, budget).block(lo, hi);
}

}  // namespace rhlab
