#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "oracles.hpp"
#include "rhlab/sieve.hpp"
#include "rhlab/stochastic.hpp"

using namespace rhlab;

TEST(SplitMix64, ReferenceStream) {
  // Published SplitMix64 outputs for state 0.
  SplitMix64 g(0);
  EXPECT_EQ(g(), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(g(), 0x6e789e6aa1b965f4ULL);
  EXPECT_EQ(g(), 0x06c45d188009454fULL);
}

TEST(SplitMix64, TrialStreamsDifferAndRepeat) {
  auto a = SplitMix64::for_trial(Seed{42}, 0);
  auto b = SplitMix64::for_trial(Seed{42}, 1);
  auto c = SplitMix64::for_trial(Seed{42}, 0);
  EXPECT_NE(a.state(), b.state());
  EXPECT_EQ(a(), c());
  EXPECT_EQ(SplitMix64::for_trial(Seed{7}, 3).state(), mix64(7 ^ mix64(3 ^ 0xd1b54a32d192ed03ULL)));
}

TEST(SplitMix64, UniformIntCoversRangeEvenly) {
  SplitMix64 g(9);
  std::vector<int> hist(5, 0);
  for (int i = 0; i < 50'000; ++i) {
    const auto v = g.uniform_int(2, 6);
    ASSERT_GE(v, 2u);
    ASSERT_LE(v, 6u);
    ++hist[v - 2];
  }
  for (int h : hist) EXPECT_NEAR(h, 10'000, 500);
  for (int i = 0; i < 1000; ++i) {
    const double u = g.uniform01();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(LilEnvelope, Values) {
  EXPECT_NEAR(lil_envelope(16), 5.712530621, 1e-8);
  EXPECT_NEAR(lil_envelope(100), 17.476725241, 1e-8);
  EXPECT_THROW(lil_envelope(15), DomainError);
  EXPECT_THROW(lil_envelope(0), DomainError);
}

TEST(CoinWalk, SingleStep) {
  for (std::uint64_t t = 0; t < 50; ++t) {
    const auto w = coin_walk(1, Seed{3}, t);
    EXPECT_TRUE(w.final_s == 1 || w.final_s == -1);
    EXPECT_EQ(w.max_abs_s, 1);
    EXPECT_EQ(w.envelope_exceed_count, 0);
  }
  EXPECT_THROW(coin_walk(0, Seed{1}, 0), DomainError);
}

TEST(CoinWalk, DeterministicAndMatchesLowBitRule) {
  const auto a = coin_walk(5000, Seed{11}, 4);
  EXPECT_EQ(a, coin_walk(5000, Seed{11}, 4));

  auto g = SplitMix64::for_trial(Seed{11}, 4);
  std::int64_t s = 0, max_abs = 0, exceed = 0;
  for (std::int64_t k = 1; k <= 5000; ++k) {
    s += (g() & 1) ? 1 : -1;
    max_abs = std::max<std::int64_t>(max_abs, std::llabs(s));
    if (k >= 16 && static_cast<double>(std::llabs(s)) > lil_envelope(k)) ++exceed;
  }
  EXPECT_EQ(a.final_s, s);
  EXPECT_EQ(a.max_abs_s, max_abs);
  EXPECT_EQ(a.envelope_exceed_count, exceed);
}

TEST(CoinWalk, ParityAndBoundsEveryTrial) {
  for (std::int64_t n : {1, 2, 17, 100, 1001}) {
    for (const auto& w : run_walks(200, n, Seed{5})) {
      EXPECT_EQ(((w.final_s % 2) + 2) % 2, n % 2);
      EXPECT_LE(std::llabs(w.final_s), w.max_abs_s);
      EXPECT_LE(w.max_abs_s, n);
    }
  }
}

TEST(WalkEnsemble, ReproducibleAndThreadIndependent) {
  const std::vector<double> cs{1.0, 2.0, 3.0};
  const auto a = walk_ensemble(2, 1000, Seed{99}, cs);
  const auto b = walk_ensemble(2, 1000, Seed{99}, cs);
  EXPECT_EQ(a.mean_final, b.mean_final);
  EXPECT_EQ(a.var_final, b.var_final);

  const auto serial = walk_ensemble(500, 2000, Seed{1}, cs, 1);
  const auto parallel = walk_ensemble(500, 2000, Seed{1}, cs, 3);
  EXPECT_EQ(serial.mean_final, parallel.mean_final);
  EXPECT_EQ(serial.var_final, parallel.var_final);
  EXPECT_EQ(serial.frac_within, parallel.frac_within);
  EXPECT_EQ(serial.frac_ever_exceed_envelope, parallel.frac_ever_exceed_envelope);
  EXPECT_THROW(walk_ensemble(1, 10, Seed{1}, cs), DomainError);
}

TEST(WalkEnsemble, FractionsAndVarianceSane) {
  const auto st = walk_ensemble(2000, 1000, Seed{8}, {0.5, 1.0, 3.0, 100.0});
  ASSERT_EQ(st.frac_within.size(), 4u);
  for (std::size_t i = 0; i < st.frac_within.size(); ++i) {
    EXPECT_GE(st.frac_within[i].second, 0.0);
    EXPECT_LE(st.frac_within[i].second, 1.0);
    if (i) {
      EXPECT_GE(st.frac_within[i].second, st.frac_within[i - 1].second);
    }
  }
  EXPECT_EQ(st.frac_within.back().second, 1.0);
  EXPECT_GE(st.var_final, 0.0);
  EXPECT_GE(st.frac_ever_exceed_envelope, 0.0);
  EXPECT_LE(st.frac_ever_exceed_envelope, 1.0);
  // Var(S_n) = n; 2000 trials give a relative standard error of about 3%.
  EXPECT_NEAR(st.var_final / 1000.0, 1.0, 0.15);
}

// Monte Carlo fraction with max|S_k| <= c sqrt(n) against the exact
// distribution from dynamic programming.
TEST(WalkEnsemble, FracWithinMatchesExactDistribution) {
  constexpr int kN = 100;
  constexpr std::int64_t kTrials = 20'000;
  const auto st = walk_ensemble(kTrials, kN, Seed{2718}, {1.0, 1.5, 2.0});
  for (const auto& [c, frac] : st.frac_within) {
    const int bound = static_cast<int>(std::floor(c * std::sqrt(static_cast<double>(kN))));
    const double p = oracle::prob_max_abs_within(kN, bound);
    const double sigma = std::sqrt(p * (1 - p) / kTrials);
    EXPECT_NEAR(frac, p, 4.5 * sigma) << "c=" << c;
  }
}

TEST(Hawkins, LimitTwo) {
  const auto r = hawkins_sieve(2, Seed{0}, 0, true);
  EXPECT_EQ(r.survivors, (std::vector<std::int64_t>{2}));
  EXPECT_EQ(r.survivor_count, 1);
  EXPECT_THROW(hawkins_sieve(1, Seed{0}, 0), DomainError);
  Budget b;
  b.table_limit = 100;
  EXPECT_THROW(hawkins_sieve(101, Seed{0}, 0, false, b), CapacityError);
}

TEST(Hawkins, DeterministicAndWellFormed) {
  for (std::uint64_t t = 0; t < 20; ++t) {
    const auto a = hawkins_sieve(5000, Seed{77}, t, true);
    const auto b = hawkins_sieve(5000, Seed{77}, t, true);
    EXPECT_EQ(a.survivors, b.survivors);
    ASSERT_FALSE(a.survivors.empty());
    EXPECT_EQ(a.survivors.front(), 2);
    EXPECT_EQ(static_cast<std::int64_t>(a.survivors.size()), a.survivor_count);
    for (std::size_t i = 1; i < a.survivors.size(); ++i) EXPECT_LT(a.survivors[i - 1], a.survivors[i]);
    EXPECT_LE(a.survivors.back(), 5000);
    std::int64_t prev = 0;
    for (const auto& [n, count] : a.density_samples) {
      EXPECT_GE(count, prev);
      prev = count;
    }
    EXPECT_EQ(a.density_samples.back(), (std::pair<std::int64_t, std::int64_t>{5000, a.survivor_count}));
  }
  EXPECT_NE(hawkins_sieve(5000, Seed{77}, 0, true).survivors, hawkins_sieve(5000, Seed{77}, 1, true).survivors);
}

// Replays the documented draw order by hand.
TEST(Hawkins, FollowsDrawOrder) {
  const std::int64_t limit = 60;
  auto g = SplitMix64::for_trial(Seed{5}, 2);
  std::vector<std::int64_t> alive;
  for (std::int64_t n = 2; n <= limit; ++n) alive.push_back(n);
  for (std::size_t k = 0; k < alive.size(); ++k) {
    std::vector<std::int64_t> next(alive.begin(), alive.begin() + static_cast<std::ptrdiff_t>(k) + 1);
    for (std::size_t i = k + 1; i < alive.size(); ++i) {
      if (g.uniform01() >= 1.0 / static_cast<double>(alive[k])) next.push_back(alive[i]);
    }
    alive = next;
  }
  EXPECT_EQ(hawkins_sieve(limit, Seed{5}, 2, true).survivors, alive);
}

TEST(MillerRabin, Examples) {
  EXPECT_FALSE(miller_rabin(561, 20, Seed{1}).probably_prime());
  EXPECT_TRUE(miller_rabin(97, 20, Seed{1}).probably_prime());
  EXPECT_TRUE(miller_rabin(2, 1, Seed{1}).probably_prime());
  EXPECT_TRUE(miller_rabin(3, 1, Seed{1}).probably_prime());
  EXPECT_FALSE(miller_rabin(4, 1, Seed{1}).probably_prime());
  EXPECT_TRUE(miller_rabin(5, 1, Seed{1}).probably_prime());
  EXPECT_THROW(miller_rabin(1, 5, Seed{1}), DomainError);
  EXPECT_THROW(miller_rabin(0, 5, Seed{1}), DomainError);
  EXPECT_THROW(miller_rabin(7, 0, Seed{1}), DomainError);

  const auto v = miller_rabin(97, 10, Seed{1});
  EXPECT_EQ(v.rounds, 10);
  EXPECT_DOUBLE_EQ(v.error_bound(), std::pow(4.0, -10));
  EXPECT_EQ(miller_rabin(561, 10, Seed{1}).error_bound(), 0.0);
}

TEST(MillerRabin, LargeValues) {
  EXPECT_TRUE(miller_rabin((1ULL << 61) - 1, 20, Seed{3}).probably_prime());
  EXPECT_TRUE(miller_rabin(18'446'744'073'709'551'557ULL, 20, Seed{3}).probably_prime());  // largest 64-bit prime
  EXPECT_FALSE(miller_rabin(3'215'031'751ULL, 20, Seed{3}).probably_prime());  // spsp to bases 2,3,5,7
  EXPECT_FALSE(miller_rabin(1'000'000'007ULL * 998'244'353ULL, 20, Seed{3}).probably_prime());
}

TEST(MillerRabin, NeverRejectsAPrime) {
  const auto primes = primes_up_to(100'000);
  for (std::uint64_t seed : {0ULL, 1ULL, 0xdeadbeefULL}) {
    for (const auto p : primes.primes) {
      for (int rounds : {1, 3}) {
        ASSERT_TRUE(miller_rabin(static_cast<std::uint64_t>(p), rounds, Seed{seed}).probably_prime()) << p;
      }
    }
  }
}

TEST(MillerRabin, CatchesEveryCompositeBelow1e5) {
  const auto primes = primes_up_to(100'000);
  const std::set<std::int64_t> prime_set(primes.primes.begin(), primes.primes.end());
  for (std::uint64_t seed : {0ULL, 17ULL, 123456789ULL}) {
    for (std::int64_t n = 4; n < 100'000; ++n) {
      if (prime_set.count(n)) continue;
      ASSERT_FALSE(miller_rabin(static_cast<std::uint64_t>(n), 20, Seed{seed}).probably_prime()) << n;
    }
  }
  for (std::uint64_t carmichael : {561ULL, 1105ULL, 1729ULL, 2465ULL, 2821ULL, 6601ULL, 8911ULL, 41041ULL}) {
    EXPECT_FALSE(miller_rabin(carmichael, 20, Seed{4}).probably_prime()) << carmichael;
  }
}
