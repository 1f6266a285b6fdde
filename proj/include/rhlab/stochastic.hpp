#pragma once

// The random side of the mu-as-coin-toss analogy: fair-coin walks with the
// iterated-logarithm envelope, Hawkins random sieves, Miller-Rabin.
// Everything is a pure function of its arguments, the Seed and a trial index.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "rhlab/errors.hpp"
#include "rhlab/random.hpp"
#include "rhlab/sieve.hpp"

namespace rhlab {

// Envelope comparisons start here; below it ln ln k is too close to zero.
inline constexpr std::int64_t kLilMinN = 16;

inline double lil_envelope(std::int64_t n) {
  if (n < kLilMinN) throw DomainError("lil_envelope: n must be >= 16, got " + std::to_string(n));
  const double x = static_cast<double>(n);
  return std::sqrt(2.0 * x * std::log(std::log(x)));
}

struct WalkSummary {
  std::int64_t n = 0;
  std::int64_t final_s = 0;
  std::int64_t max_abs_s = 0;
  std::int64_t envelope_exceed_count = 0;  // k >= 16 with |S_k| > lil_envelope(k)

  bool operator==(const WalkSummary&) const = default;
};

namespace detail {

// squared envelope 2 k ln ln k, indexed by k; entries below kLilMinN unused.
inline std::vector<double> lil_envelope_sq(std::int64_t n) {
  std::vector<double> env(static_cast<std::size_t>(std::max<std::int64_t>(n, 0)) + 1, 0.0);
  for (std::int64_t k = kLilMinN; k <= n; ++k) {
    const double x = static_cast<double>(k);
    env[static_cast<std::size_t>(k)] = 2.0 * x * std::log(std::log(x));
  }
  return env;
}

inline WalkSummary walk(std::int64_t n, SplitMix64 gen, const std::vector<double>& env_sq) {
  WalkSummary w;
  w.n = n;
  std::int64_t s = 0;
  for (std::int64_t k = 1; k <= n; ++k) {
    s += (gen() & 1) ? 1 : -1;
    const std::int64_t a = s < 0 ? -s : s;
    if (a > w.max_abs_s) w.max_abs_s = a;
    if (k >= kLilMinN && static_cast<double>(a) * static_cast<double>(a) > env_sq[static_cast<std::size_t>(k)]) {
      ++w.envelope_exceed_count;
    }
  }
  w.final_s = s;
  return w;
}

template <typename Fn>
void parallel_trials(std::int64_t trials, unsigned threads, Fn&& fn) {
  const unsigned workers =
      std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::min<std::int64_t>(trials, 1 << 16))));
  if (workers == 1) {
    for (std::int64_t t = 0; t < trials; ++t) fn(t);
    return;
  }
  std::vector<std::jthread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::int64_t t = w; t < trials; t += workers) fn(t);
    });
  }
}

}  // namespace detail

// Step k is +1 when the lowest bit of the k-th generator output is set.
inline WalkSummary coin_walk(std::int64_t n, Seed seed, std::uint64_t trial) {
  if (n < 1) throw DomainError("coin_walk: n must be >= 1");
  return detail::walk(n, SplitMix64::for_trial(seed, trial), detail::lil_envelope_sq(n));
}

inline std::vector<WalkSummary> run_walks(std::int64_t trials, std::int64_t n, Seed seed, unsigned threads = 1) {
  if (trials < 1) throw DomainError("run_walks: trials must be >= 1");
  if (n < 1) throw DomainError("run_walks: n must be >= 1");
  const auto env = detail::lil_envelope_sq(n);
  std::vector<WalkSummary> out(static_cast<std::size_t>(trials));
  detail::parallel_trials(trials, threads, [&](std::int64_t t) {
    out[static_cast<std::size_t>(t)] = detail::walk(n, SplitMix64::for_trial(seed, static_cast<std::uint64_t>(t)), env);
  });
  return out;
}

struct EnsembleStats {
  std::int64_t trials = 0;
  std::int64_t n = 0;
  double mean_final = 0.0;
  double var_final = 0.0;  // unbiased sample variance
  std::vector<std::pair<double, double>> frac_within;  // (c, fraction with max_abs_s <= c*sqrt(n))
  double frac_ever_exceed_envelope = 0.0;
};

// Sums are accumulated in exact integers, so the result does not depend on
// the order in which trials finished.
inline EnsembleStats summarize_walks(const std::vector<WalkSummary>& walks, std::int64_t n,
                                     const std::vector<double>& c_list) {
  EnsembleStats st;
  st.trials = static_cast<std::int64_t>(walks.size());
  st.n = n;
  if (walks.empty()) return st;
  __int128 sum = 0, sum_sq = 0;
  std::int64_t ever = 0;
  for (const auto& w : walks) {
    sum += w.final_s;
    sum_sq += static_cast<__int128>(w.final_s) * w.final_s;
    ever += w.envelope_exceed_count > 0;
  }
  const auto t = static_cast<long double>(st.trials);
  st.mean_final = static_cast<double>(static_cast<long double>(sum) / t);
  if (st.trials > 1) {
    // (T * sum_sq - sum^2) is exact; divide once at the end.
    const __int128 centered = static_cast<__int128>(st.trials) * sum_sq - sum * sum;
    st.var_final = static_cast<double>(static_cast<long double>(centered) / (t * (t - 1)));
  }
  const double root_n = std::sqrt(static_cast<double>(n));
  for (const double c : c_list) {
    std::int64_t inside = 0;
    for (const auto& w : walks) inside += static_cast<double>(w.max_abs_s) <= c * root_n;
    st.frac_within.emplace_back(c, static_cast<double>(inside) / static_cast<double>(st.trials));
  }
  st.frac_ever_exceed_envelope = static_cast<double>(ever) / static_cast<double>(st.trials);
  return st;
}

inline EnsembleStats walk_ensemble(std::int64_t trials, std::int64_t n, Seed seed, const std::vector<double>& c_list,
                                   unsigned threads = 1) {
  if (trials < 2) throw DomainError("walk_ensemble: trials must be >= 2");
  return summarize_walks(run_walks(trials, n, seed, threads), n, c_list);
}

struct HawkinsResult {
  std::int64_t limit = 0;
  std::int64_t survivor_count = 0;
  std::vector<std::int64_t> survivors;  // empty unless requested
  std::vector<std::pair<std::int64_t, std::int64_t>> density_samples;  // (n, survivors <= n)
};

// Hawkins random sieve. Starting from 2..limit, repeatedly take the smallest
// survivor p not yet used as a pivot and delete every larger survivor
// independently with probability 1/p. One uniform draw is consumed per
// (pivot, larger survivor) pair, in ascending survivor order.
// density_samples are taken at every power of ten <= limit and at limit.
inline HawkinsResult hawkins_sieve(std::int64_t limit, Seed seed, std::uint64_t trial, bool keep_survivors = false,
                                   const Budget& budget = {}) {
  if (limit < 2) throw DomainError("hawkins_sieve: limit must be >= 2");
  detail::check_table_limit(limit, budget, "hawkins_sieve");
  auto gen = SplitMix64::for_trial(seed, trial);

  std::vector<std::int64_t> alive(static_cast<std::size_t>(limit - 1));
  for (std::size_t i = 0; i < alive.size(); ++i) alive[i] = static_cast<std::int64_t>(i) + 2;

  for (std::size_t pivot = 0; pivot < alive.size(); ++pivot) {
    const double drop = 1.0 / static_cast<double>(alive[pivot]);
    std::size_t out = pivot + 1;
    for (std::size_t i = pivot + 1; i < alive.size(); ++i) {
      const bool keep = gen.uniform01() >= drop;
      alive[out] = alive[i];
      out += keep;
    }
    alive.resize(out);
  }

  HawkinsResult r;
  r.limit = limit;
  r.survivor_count = static_cast<std::int64_t>(alive.size());
  std::vector<std::int64_t> marks;
  for (std::int64_t p = 10; p <= limit; p *= 10) {
    marks.push_back(p);
    if (p > limit / 10) break;
  }
  if (marks.empty() || marks.back() != limit) marks.push_back(limit);
  for (const std::int64_t mark : marks) {
    const auto c = std::upper_bound(alive.begin(), alive.end(), mark) - alive.begin();
    r.density_samples.emplace_back(mark, static_cast<std::int64_t>(c));
  }
  if (keep_survivors) r.survivors = std::move(alive);
  return r;
}

enum class PrimalityTag { composite, probably_prime };

struct PrimalityVerdict {
  PrimalityTag tag = PrimalityTag::composite;
  int rounds = 0;  // rounds actually run (0 for the direct small-n cases)

  bool probably_prime() const { return tag == PrimalityTag::probably_prime; }
  // Chance that a composite survived all rounds.
  double error_bound() const { return probably_prime() ? std::pow(4.0, -rounds) : 0.0; }
};

namespace detail {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

}  // namespace detail

// Bases are uniform on [2, n-2] from the stream for (seed, trial = n).
// n <= 4 is decided directly.
inline PrimalityVerdict miller_rabin(std::uint64_t n, int rounds, Seed seed) {
  if (n < 2) throw DomainError("miller_rabin: n must be >= 2");
  if (rounds < 1) throw DomainError("miller_rabin: rounds must be >= 1");
  if (n <= 4) return {n == 4 ? PrimalityTag::composite : PrimalityTag::probably_prime, 0};
  if (n % 2 == 0) return {PrimalityTag::composite, 0};

  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  auto gen = SplitMix64::for_trial(seed, n);
  for (int round = 1; round <= rounds; ++round) {
    const std::uint64_t a = gen.uniform_int(2, n - 2);
    std::uint64_t x = detail::powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int r = 1; r < s; ++r) {
      x = detail::mulmod(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return {PrimalityTag::composite, round};
  }
  return {PrimalityTag::probably_prime, rounds};
}

}  // namespace rhlab
