#pragma once

// Dispatches a parsed ExperimentConfig to the owning module, writes the CSV
// series and the run manifest. Data bytes depend only on the config (thread
// count included only as a speed knob).

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "rhlab/analytic.hpp"
#include "rhlab/checkpoint.hpp"
#include "rhlab/harness/config.hpp"
#include "rhlab/harness/csv.hpp"
#include "rhlab/harness/manifest.hpp"
#include "rhlab/mertens.hpp"
#include "rhlab/sieve.hpp"
#include "rhlab/stochastic.hpp"

namespace rhlab::harness {

namespace detail {

inline std::vector<std::int64_t> decade_grid(std::int64_t first, std::int64_t limit) {
  std::vector<std::int64_t> grid;
  for (std::int64_t p = 10; p <= limit; p *= 10) {
    if (p >= first) grid.push_back(p);
    if (p > limit / 10) break;
  }
  if (grid.empty() || grid.back() != limit) grid.push_back(limit);
  return grid;
}

inline std::string join_args(const std::vector<std::string>& argv) {
  std::string s = "rhlab";
  for (const auto& a : argv) s += " " + a;
  return s;
}

class Log {
 public:
  explicit Log(bool quiet) : quiet_(quiet) {}
  template <typename... Ts>
  void line(const Ts&... parts) const {
    if (quiet_) return;
    (std::cerr << ... << parts) << '\n';
  }

 private:
  bool quiet_;
};

inline void run_mu(const ExperimentConfig& cfg, RunManifest& man) {
  const MoebiusSieve sieve(cfg.limit);
  CsvAppender out(cfg.output_path, {"n", "mu"});
  std::vector<std::int8_t> mu;
  std::vector<std::int64_t> scratch;
  std::int64_t sum = 0;
  for (std::int64_t lo = cfg.lo; lo <= cfg.limit; lo += kDefaultBlockLength) {
    const std::int64_t hi = std::min(cfg.limit, lo + kDefaultBlockLength - 1);
    mu.resize(static_cast<std::size_t>(hi - lo + 1));
    sieve.fill(lo, hi, mu, scratch);
    for (std::int64_t n = lo; n <= hi; ++n) {
      const int v = mu[static_cast<std::size_t>(n - lo)];
      sum += v;
      out.append({format_int(n), format_int(v)});
    }
  }
  out.finish();
  man.results["sum_mu"] = sum;
  man.files.push_back(digest_file(cfg.output_path));
}

inline void run_mertens(const ExperimentConfig& cfg, RunManifest& man, const Log& log) {
  const std::filesystem::path data_path = cfg.output_path;
  const auto records_path = sibling_path(data_path, ".records.csv");
  std::vector<std::string> headers{"n", "M", "ratio"};
  if (cfg.envelope) headers.emplace_back("envelope");
  const std::vector<std::string> record_headers{"n", "abs_M"};

  const MertensOptions opts{cfg.limit, cfg.block_length, cfg.sample_count, cfg.threads, {}};
  std::optional<MertensStream> stream;
  std::optional<CsvAppender> data, records;
  if (cfg.resume) {
    const auto cp = checkpoint_resume(*cfg.checkpoint_path);
    stream.emplace(opts, cp);
    data.emplace(data_path, headers, cp.n_processed);
    records.emplace(records_path, record_headers, cp.n_processed);
    log.line("mertens: resumed at n=", cp.n_processed, " M=", cp.m);
  } else {
    stream.emplace(opts);
    data.emplace(data_path, headers);
    records.emplace(records_path, record_headers);
  }

  auto flush_rows = [&] {
    for (const auto& s : stream->drain_samples()) {
      std::vector<std::string> row{format_int(s.n), format_int(s.m), format_real(s.ratio)};
      if (cfg.envelope) {
        const double x = static_cast<double>(s.n);
        row.push_back(s.n >= kLilMinN ? format_real(std::sqrt(x * std::log(std::log(x)))) : "");
      }
      data->append(row);
    }
    for (const auto& r : stream->drain_records()) records->append({format_int(r.n), format_int(r.abs_m)});
    data->flush();
    records->flush();
  };
  auto save_checkpoint = [&] {
    flush_rows();
    auto cp = stream->checkpoint();
    checkpoint_save(cp, *cfg.checkpoint_path);
    log.line("mertens: checkpoint n=", cp.n_processed, " M=", cp.m, " max|M|=", cp.max_abs_m,
             " max_ratio=", format_real(cp.max_ratio));
  };

  const std::int64_t batch = std::max<std::int64_t>(1, cfg.threads);
  std::int64_t since_checkpoint = 0;
  while (!stream->done()) {
    since_checkpoint += stream->advance(batch);
    if (cfg.halt_after > 0 && stream->n_processed() >= cfg.halt_after && !stream->done()) {
      save_checkpoint();
      man.status = "halted";
      man.results["n_processed"] = stream->n_processed();
      log.line("mertens: halted at n=", stream->n_processed(), "; partial files kept");
      return;
    }
    if (cfg.checkpoint_path && since_checkpoint >= cfg.checkpoint_every) {
      save_checkpoint();
      since_checkpoint = 0;
    }
  }
  flush_rows();
  data->finish();
  records->finish();
  if (cfg.checkpoint_path) {
    auto cp = stream->checkpoint();
    checkpoint_save(cp, *cfg.checkpoint_path);
  }

  const auto s = stream->summary();
  auto& r = man.results;
  r["final_m"] = s.final_m;
  r["max_abs_m"] = s.max_abs_m;
  r["argmax"] = s.argmax;
  r["count_neg"] = s.count_neg;
  r["count_pos"] = s.count_pos;
  r["count_zero"] = s.count_zero;
  r["difference"] = s.count_neg - s.count_pos;
  r["max_ratio"] = s.max_ratio;

  const auto rec = parse_csv(read_file(records_path));
  std::vector<RecordMaximum> maxima;
  for (const auto& row : rec.rows) maxima.push_back({std::stoll(row[0]), std::stoll(row[1])});
  try {
    const auto fit = fit_growth_exponent(std::span<const RecordMaximum>(maxima));
    r["growth_fit"] = {{"alpha", fit.alpha},
                       {"intercept", fit.intercept},
                       {"points_used", fit.points_used},
                       {"residual", fit.residual}};
  } catch (const InsufficientDataError&) {
    r["growth_fit"] = nullptr;
  }
  man.files.push_back(digest_file(data_path));
  man.files.push_back(digest_file(records_path));
  log.line("mertens: done n=", s.limit, " M=", s.final_m, " max_ratio=", format_real(s.max_ratio));
}

inline void run_walk(const ExperimentConfig& cfg, RunManifest& man) {
  const auto walks = run_walks(cfg.trials, cfg.n, cfg.seed, cfg.threads);
  CsvSeries csv{{"trial", "final", "max_abs", "exceed_count"}, {}};
  for (std::size_t t = 0; t < walks.size(); ++t) {
    const auto& w = walks[t];
    csv.add_row({format_int(static_cast<std::int64_t>(t)), format_int(w.final_s), format_int(w.max_abs_s),
                 format_int(w.envelope_exceed_count)});
  }
  emit_csv(csv, cfg.output_path);

  const auto st = summarize_walks(walks, cfg.n, cfg.c_list);
  auto& r = man.results;
  r["mean_final"] = st.mean_final;
  r["var_final"] = st.var_final;
  r["var_over_n"] = st.var_final / static_cast<double>(cfg.n);
  r["mean_band"] = 3.0 * std::sqrt(static_cast<double>(cfg.n) / static_cast<double>(cfg.trials));
  r["frac_within"] = nlohmann::ordered_json::object();
  for (const auto& [c, f] : st.frac_within) r["frac_within"][format_real(c)] = f;
  r["frac_ever_exceed_envelope"] = st.frac_ever_exceed_envelope;
  man.files.push_back(digest_file(cfg.output_path));
}

inline void run_hawkins(const ExperimentConfig& cfg, RunManifest& man) {
  std::vector<std::int64_t> counts(static_cast<std::size_t>(cfg.trials));
  rhlab::detail::parallel_trials(cfg.trials, cfg.threads, [&](std::int64_t t) {
    counts[static_cast<std::size_t>(t)] =
        hawkins_sieve(cfg.limit, cfg.seed, static_cast<std::uint64_t>(t)).survivor_count;
  });
  CsvSeries csv{{"trial", "survivor_count"}, {}};
  std::int64_t total = 0;
  for (std::size_t t = 0; t < counts.size(); ++t) {
    csv.add_row({format_int(static_cast<std::int64_t>(t)), format_int(counts[t])});
    total += counts[t];
  }
  emit_csv(csv, cfg.output_path);
  const double mean = static_cast<double>(total) / static_cast<double>(cfg.trials);
  const double reference = static_cast<double>(cfg.limit) / std::log(static_cast<double>(cfg.limit));
  man.results["mean_survivors"] = mean;
  man.results["x_over_ln_x"] = reference;
  man.results["relative_deviation"] = mean / reference - 1.0;
  man.files.push_back(digest_file(cfg.output_path));
}

inline void run_pi_li(const ExperimentConfig& cfg, RunManifest& man) {
  const auto scan = gauss_gap_scan(cfg.limit, cfg.stride, cfg.tol);
  CsvSeries csv{{"x", "pi", "li", "gap"}, {}};
  double min_gap = INFINITY;
  for (const auto& p : scan.points) {
    csv.add_row({format_int(p.x), format_int(p.pi), format_real(p.li), format_real(p.gap)});
    min_gap = std::min(min_gap, p.gap);
  }
  emit_csv(csv, cfg.output_path);
  man.results["all_gaps_positive"] = scan.all_positive;
  man.results["min_gap"] = min_gap;
  man.results["li_error_estimate"] = scan.li_error;
  man.files.push_back(digest_file(cfg.output_path));
}

inline void run_twins(const ExperimentConfig& cfg, RunManifest& man) {
  const auto c2 = twin_prime_constant(cfg.prime_limit);
  std::vector<std::int64_t> grid;
  if (cfg.stride == 0) {
    grid = decade_grid(4, cfg.limit);
  } else {
    for (std::int64_t x = cfg.stride; x <= cfg.limit; x += cfg.stride) {
      if (x >= 4) grid.push_back(x);
    }
    if (grid.empty() || grid.back() != cfg.limit) grid.push_back(cfg.limit);
  }
  const auto composite = rhlab::detail::odd_composite_flags(cfg.limit);
  auto odd_prime = [&](std::int64_t n) { return !composite[static_cast<std::size_t>(n / 2)]; };

  CsvSeries csv{{"x", "twins", "heuristic", "rel_err"}, {}};
  std::int64_t twins = 0;
  std::int64_t next_upper = 5;  // upper member p + 2 of the next candidate pair (3, 5)
  double prev_x = 2.0;
  CompensatedSum integral;
  for (const std::int64_t x : grid) {
    for (; next_upper <= x; next_upper += 2) twins += odd_prime(next_upper) && odd_prime(next_upper - 2);
    const auto piece = adaptive_simpson(
        [](double t) {
          const double l = std::log(t);
          return 1.0 / (l * l);
        },
        prev_x, static_cast<double>(x), cfg.tol);
    integral.add(piece.value);
    prev_x = static_cast<double>(x);
    const double h = 2.0 * c2.c2_partial * integral.value();
    csv.add_row({format_int(x), format_int(twins), format_real(h),
                 format_real(static_cast<double>(twins) / h - 1.0)});
  }
  emit_csv(csv, cfg.output_path);
  man.results["c2_partial"] = c2.c2_partial;
  man.results["prime_limit"] = c2.prime_limit;
  man.files.push_back(digest_file(cfg.output_path));
}

inline void run_zeta(const ExperimentConfig& cfg, RunManifest& man) {
  CsvSeries csv{{"s", "method", "terms", "value", "tail_bound"}, {}};
  man.results["mu_reciprocal_identity"] = nlohmann::ordered_json::object();
  for (const double s : cfg.s_list) {
    const ZetaEval evals[] = {zeta_real(s, cfg.terms, ZetaMethod::direct_sum),
                              zeta_real(s, cfg.terms, ZetaMethod::euler_maclaurin),
                              zeta_euler_product(s, cfg.prime_limit),
                              zeta_moebius_reciprocal(s, cfg.terms)};
    for (const auto& e : evals) {
      const std::int64_t terms = e.method == ZetaMethod::euler_product ? cfg.prime_limit : cfg.terms;
      csv.add_row({format_real(s), std::string(to_string(e.method)), format_int(terms), format_real(e.value, 17),
                   format_real(e.tail_bound, 6)});
    }
    man.results["mu_reciprocal_identity"][format_real(s)] = mu_reciprocal_identity(s, cfg.terms);
  }
  emit_csv(csv, cfg.output_path);
  man.files.push_back(digest_file(cfg.output_path));
}

inline void run_gamma(const ExperimentConfig& cfg, RunManifest& man) {
  CsvSeries csv{{"x", "gamma", "gamma_err", "mertens_product"}, {}};
  double last_gamma = 0.0, last_product = 0.0;
  for (const std::int64_t x : decade_grid(10, cfg.limit)) {
    last_gamma = euler_gamma(x).value;
    last_product = mertens_product_check(x);
    csv.add_row({format_int(x), format_real(last_gamma, 17), format_real(last_gamma - std::numbers::egamma, 6),
                 format_real(last_product)});
  }
  emit_csv(csv, cfg.output_path);
  man.results["gamma_estimate"] = last_gamma;
  man.results["mertens_product"] = last_product;
  man.files.push_back(digest_file(cfg.output_path));
}

inline void run_primality(const ExperimentConfig& cfg, RunManifest& man) {
  const auto composite = rhlab::detail::odd_composite_flags(cfg.limit);
  auto is_prime = [&](std::int64_t n) {
    return n == 2 || (n > 2 && (n & 1) && !composite[static_cast<std::size_t>(n / 2)]);
  };
  CsvAppender out(cfg.output_path, {"n", "verdict", "sieve_prime"});
  std::int64_t disagreements = 0, primes_called_composite = 0;
  for (std::int64_t n = cfg.lo; n <= cfg.limit; ++n) {
    const auto v = miller_rabin(static_cast<std::uint64_t>(n), cfg.rounds, cfg.seed);
    const bool p = is_prime(n);
    disagreements += v.probably_prime() != p;
    primes_called_composite += p && !v.probably_prime();
    out.append({format_int(n), v.probably_prime() ? "probably_prime" : "composite", p ? "1" : "0"});
  }
  out.finish();
  man.results["disagreements"] = disagreements;
  man.results["primes_labeled_composite"] = primes_called_composite;
  man.files.push_back(digest_file(cfg.output_path));
}

inline nlohmann::ordered_json parameters_of(const ExperimentConfig& c) {
  nlohmann::ordered_json p;
  p["subcommand"] = c.subcommand;
  p["limit"] = c.limit;
  p["lo"] = c.lo;
  p["n"] = c.n;
  p["stride"] = c.stride;
  p["terms"] = c.terms;
  p["prime_limit"] = c.prime_limit;
  p["s"] = c.s_list;
  p["c"] = c.c_list;
  p["tol"] = c.tol;
  p["trials"] = c.trials;
  p["rounds"] = c.rounds;
  p["block_length"] = c.block_length;
  p["sample_count"] = c.sample_count;
  p["envelope"] = c.envelope;
  p["output_path"] = c.output_path;
  p["checkpoint_path"] = c.checkpoint_path ? nlohmann::ordered_json(*c.checkpoint_path) : nullptr;
  p["resume"] = c.resume;
  p["threads"] = c.threads;
  return p;
}

}  // namespace detail

// Runs the experiment, writes its data files and `<out stem>.manifest.json`.
inline RunManifest run_experiment(const ExperimentConfig& cfg) {
  RunManifest man;
  man.tool_version = kToolVersion;
  man.command_line = detail::join_args(cfg.argv);
  man.seed = cfg.seed.value;
  man.started_at = utc_timestamp();
  man.parameters = detail::parameters_of(cfg);
  const detail::Log log(cfg.quiet);

  const auto& sc = cfg.subcommand;
  if (sc == "mu") {
    detail::run_mu(cfg, man);
  } else if (sc == "mertens") {
    detail::run_mertens(cfg, man, log);
  } else if (sc == "walk") {
    detail::run_walk(cfg, man);
  } else if (sc == "hawkins") {
    detail::run_hawkins(cfg, man);
  } else if (sc == "pi-li") {
    detail::run_pi_li(cfg, man);
  } else if (sc == "twins") {
    detail::run_twins(cfg, man);
  } else if (sc == "zeta") {
    detail::run_zeta(cfg, man);
  } else if (sc == "gamma") {
    detail::run_gamma(cfg, man);
  } else if (sc == "primality") {
    detail::run_primality(cfg, man);
  } else {
    throw UsageError("unknown subcommand " + sc);
  }
  man.finished_at = utc_timestamp();
  write_manifest(man, sibling_path(cfg.output_path, ".manifest.json"));
  return man;
}

}  // namespace rhlab::harness
