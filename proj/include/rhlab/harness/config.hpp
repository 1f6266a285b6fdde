#pragma once

// Command-line configuration for the `rhlab` tool.
//
//   mu         --limit N [--lo L]                 n,mu
//   mertens    --limit N [--block-length B] [--samples K] [--envelope]
//              [--checkpoint F [--checkpoint-every BLOCKS] [--resume] [--halt-after N]]
//                                                 n,M,ratio[,envelope]  (+ .records.csv: n,abs_M)
//   walk       --n N [--trials T] [--seed S] [--c C ...]
//                                                 trial,final,max_abs,exceed_count
//   hawkins    --limit N [--trials T] [--seed S]  trial,survivor_count
//   pi-li      --limit N [--stride D] [--tol E]   x,pi,li,gap
//   twins      --limit N [--stride D] [--prime-limit P] [--tol E]
//                                                 x,twins,heuristic,rel_err
//   zeta       [--s S ...] [--terms N] [--prime-limit P]
//                                                 s,method,terms,value,tail_bound
//   gamma      --limit N                          x,gamma,gamma_err,mertens_product
//   primality  --limit N [--lo L] [--rounds R] [--seed S]
//                                                 n,verdict,sieve_prime
//
// Shared: --out PATH (default <subcommand>.csv), --threads T (default: all cores), --quiet.

#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "rhlab/errors.hpp"
#include "rhlab/random.hpp"
#include "rhlab/sieve.hpp"

namespace rhlab::harness {

inline constexpr const char* kToolVersion = "0.1.0";

struct ExperimentConfig {
  std::string subcommand;
  std::int64_t limit = 0;
  std::int64_t lo = 1;
  std::int64_t n = 0;
  std::int64_t stride = 0;
  std::int64_t terms = 10'000;
  std::int64_t prime_limit = 0;
  std::vector<double> s_list{2.0, 3.0, 4.0};
  std::vector<double> c_list{1.0, 2.0, 3.0};
  double tol = 1e-8;
  std::int64_t trials = 100;
  Seed seed{0};
  int rounds = 20;
  std::int64_t block_length = kDefaultBlockLength;
  std::int64_t sample_count = 200;
  bool envelope = false;
  std::string output_path;
  std::optional<std::string> checkpoint_path;
  std::int64_t checkpoint_every = 16;
  bool resume = false;
  std::int64_t halt_after = 0;
  unsigned threads = 1;
  bool quiet = false;
  std::vector<std::string> argv;  // as given, for the manifest
};

// Thrown for --help; what() carries the help text.
class HelpRequested : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool ok, const std::string& message) {
  if (!ok) throw UsageError(message);
}

}  // namespace detail

inline ExperimentConfig parse_config(const std::vector<std::string>& args) {
  ExperimentConfig cfg;
  cfg.argv = args;
  const unsigned hw = std::thread::hardware_concurrency();
  cfg.threads = hw == 0 ? 1 : hw;

  CLI::App app{"Experiments on the Moebius and Mertens functions and their probabilistic models", "rhlab"};
  app.require_subcommand(1);
  std::uint64_t seed = 0;
  std::int64_t threads = cfg.threads;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--out", cfg.output_path, "Output CSV path");
    sub->add_option("--threads", threads, "Worker threads");
    sub->add_flag("--quiet", cfg.quiet, "No progress log on stderr");
  };
  auto seeded = [&](CLI::App* sub) { sub->add_option("--seed", seed, "64-bit seed"); };

  auto* mu = app.add_subcommand("mu", "Moebius values over [lo, limit]");
  mu->add_option("--limit", cfg.limit, "Upper end")->required();
  mu->add_option("--lo", cfg.lo, "Lower end");
  common(mu);

  auto* mertens = app.add_subcommand("mertens", "Stream M(n) up to limit");
  mertens->add_option("--limit", cfg.limit, "Upper end")->required();
  mertens->add_option("--block-length", cfg.block_length, "Sieve block length");
  mertens->add_option("--samples", cfg.sample_count, "Trajectory sample count");
  mertens->add_flag("--envelope", cfg.envelope, "Add sqrt(n ln ln n) column");
  mertens->add_option("--checkpoint", cfg.checkpoint_path, "Checkpoint file");
  mertens->add_option("--checkpoint-every", cfg.checkpoint_every, "Blocks between checkpoints");
  mertens->add_flag("--resume", cfg.resume, "Continue from --checkpoint");
  mertens->add_option("--halt-after", cfg.halt_after, "Stop at the first block boundary >= this n");
  common(mertens);

  auto* walk = app.add_subcommand("walk", "Fair-coin random walk ensemble");
  walk->add_option("--n", cfg.n, "Steps per walk")->required();
  walk->add_option("--trials", cfg.trials, "Number of walks");
  walk->add_option("--c", cfg.c_list, "Multiples c of sqrt(n) for frac_within");
  seeded(walk);
  common(walk);

  auto* hawkins = app.add_subcommand("hawkins", "Hawkins random sieve");
  hawkins->add_option("--limit", cfg.limit, "Sieve limit")->required();
  hawkins->add_option("--trials", cfg.trials, "Number of sieves");
  seeded(hawkins);
  common(hawkins);

  auto* pili = app.add_subcommand("pi-li", "Li(x) - pi(x) scan");
  pili->add_option("--limit", cfg.limit, "Largest x")->required();
  pili->add_option("--stride", cfg.stride, "Grid spacing");
  pili->add_option("--tol", cfg.tol, "Quadrature tolerance per panel");
  common(pili);

  auto* twins = app.add_subcommand("twins", "Twin prime counts against the heuristic");
  twins->add_option("--limit", cfg.limit, "Largest x")->required();
  twins->add_option("--stride", cfg.stride, "Grid spacing (default: powers of ten)");
  twins->add_option("--prime-limit", cfg.prime_limit, "Primes used for C2 (default: limit)");
  twins->add_option("--tol", cfg.tol, "Quadrature tolerance");
  common(twins);

  auto* zeta = app.add_subcommand("zeta", "zeta(s) for real s > 1 by four routes");
  zeta->add_option("--s", cfg.s_list, "Arguments s");
  zeta->add_option("--terms", cfg.terms, "Terms for sum-based routes");
  zeta->add_option("--prime-limit", cfg.prime_limit, "Prime limit for the Euler product");
  common(zeta);

  auto* gamma = app.add_subcommand("gamma", "Euler's gamma and Mertens' product theorem");
  gamma->add_option("--limit", cfg.limit, "Largest x")->required();
  common(gamma);

  auto* primality = app.add_subcommand("primality", "Miller-Rabin against the sieve");
  primality->add_option("--limit", cfg.limit, "Upper end")->required();
  primality->add_option("--lo", cfg.lo, "Lower end");
  primality->add_option("--rounds", cfg.rounds, "Rounds per number");
  seeded(primality);
  common(primality);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  cfg.subcommand = app.get_subcommands().front()->get_name();
  cfg.seed = Seed{seed};
  detail::require(threads >= 1 && threads <= 1024, "--threads must be in [1, 1024]");
  cfg.threads = static_cast<unsigned>(threads);
  if (cfg.output_path.empty()) cfg.output_path = cfg.subcommand + ".csv";

  const Budget budget;
  const auto& sc = cfg.subcommand;
  using detail::require;
  if (sc == "mertens") {
    require(cfg.limit >= 1 && cfg.limit <= budget.max_segment_hi, "--limit must be in [1, 1e12]");
    require(cfg.block_length >= 1 && cfg.block_length <= budget.max_block_length,
            "--block-length must be in [1, 2^26]");
    require(cfg.sample_count >= 0, "--samples must be >= 0");
    require(cfg.checkpoint_every >= 1, "--checkpoint-every must be >= 1");
    require(!cfg.resume || cfg.checkpoint_path, "--resume requires --checkpoint");
    require(cfg.halt_after >= 0, "--halt-after must be >= 0");
    require(cfg.halt_after == 0 || cfg.checkpoint_path, "--halt-after requires --checkpoint");
  } else if (sc == "walk") {
    require(cfg.n >= 1 && cfg.n <= 1'000'000'000, "--n must be in [1, 1e9]");
    require(cfg.trials >= 2 && cfg.trials <= 100'000'000, "--trials must be in [2, 1e8]");
    for (double c : cfg.c_list) require(c > 0.0, "--c values must be positive");
  } else if (sc == "hawkins") {
    require(cfg.limit >= 2 && cfg.limit <= budget.table_limit, "--limit must be in [2, 1e8]");
    require(cfg.trials >= 1 && cfg.trials <= 1'000'000, "--trials must be in [1, 1e6]");
  } else if (sc == "zeta") {
    require(!cfg.s_list.empty(), "--s needs at least one value");
    for (double s : cfg.s_list) require(s > 1.0, "--s values must be > 1");
    require(cfg.terms >= 1 && cfg.terms <= budget.table_limit, "--terms must be in [1, 1e8]");
    if (cfg.prime_limit == 0) cfg.prime_limit = 1'000'000;
    require(cfg.prime_limit >= 2 && cfg.prime_limit <= budget.table_limit, "--prime-limit must be in [2, 1e8]");
  } else {
    std::int64_t min_limit = 1;
    if (sc == "pi-li" || sc == "gamma") min_limit = 3;
    if (sc == "twins") min_limit = 4;
    if (sc == "primality") min_limit = 2;
    require(cfg.limit >= min_limit && cfg.limit <= budget.table_limit,
            "--limit must be in [" + std::to_string(min_limit) + ", 1e8]");
    require(cfg.lo >= 1 && cfg.lo <= cfg.limit, "--lo must be in [1, limit]");
    if (sc == "primality") {
      if (cfg.lo < 2) cfg.lo = 2;
      require(cfg.rounds >= 1 && cfg.rounds <= 64, "--rounds must be in [1, 64]");
    }
    if (sc == "pi-li") {
      if (cfg.stride == 0) cfg.stride = 1000;
      require(cfg.stride >= 1, "--stride must be >= 1");
      require(cfg.tol > 0.0, "--tol must be positive");
    }
    if (sc == "twins") {
      require(cfg.stride >= 0, "--stride must be >= 0");
      if (cfg.prime_limit == 0) cfg.prime_limit = cfg.limit;
      require(cfg.prime_limit >= 3 && cfg.prime_limit <= budget.table_limit, "--prime-limit must be in [3, 1e8]");
      require(cfg.tol > 0.0, "--tol must be positive");
    }
  }
  return cfg;
}

inline ExperimentConfig parse_config(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return parse_config(args);
}

}  // namespace rhlab::harness
