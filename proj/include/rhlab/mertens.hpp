#pragma once

// Streaming Mertens function M(n) = sum_{k<=n} mu(k).
//
// mu is produced block by block by MoebiusSieve (optionally on several
// threads) and reduced strictly in block order. M(n) and all counts are exact
// 64-bit integers; ratios |M(n)|/sqrt(n) are derived views only.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <thread>
#include <utility>
#include <vector>

#include "rhlab/checkpoint.hpp"
#include "rhlab/errors.hpp"
#include "rhlab/sieve.hpp"

namespace rhlab {

struct MertensSummary {
  std::int64_t limit = 0;
  std::int64_t final_m = 0;
  std::int64_t max_abs_m = 0;
  std::int64_t argmax = 0;  // first n attaining max_abs_m
  std::int64_t count_neg = 0;
  std::int64_t count_pos = 0;
  std::int64_t count_zero = 0;
  double max_ratio = 0.0;  // max over 2 <= n <= limit of |M(n)|/sqrt(n)

  bool operator==(const MertensSummary&) const = default;
};

struct TrajectorySample {
  std::int64_t n = 0;
  std::int64_t m = 0;
  double ratio = 0.0;  // m / sqrt(n)

  bool operator==(const TrajectorySample&) const = default;
};

// n at which |M(n)| exceeds every earlier |M(k)|.
struct RecordMaximum {
  std::int64_t n = 0;
  std::int64_t abs_m = 0;

  bool operator==(const RecordMaximum&) const = default;
};

struct GrowthPoint {
  double n = 0.0;
  double abs_m = 0.0;
};

struct GrowthFit {
  double alpha = 0.0;
  double intercept = 0.0;
  std::size_t points_used = 0;
  double residual = 0.0;  // RMS residual in log space
};

struct SignBalance {
  std::int64_t count_neg = 0;
  std::int64_t count_pos = 0;
  std::int64_t count_zero = 0;
  std::int64_t difference = 0;  // count_neg - count_pos == -M(limit)

  bool operator==(const SignBalance&) const = default;
};

// Sample positions: sample_count geometrically spaced points between 2 and
// limit, merged with every power of ten <= limit and limit itself.
inline std::vector<std::int64_t> sample_grid(std::int64_t limit, std::int64_t sample_count) {
  std::vector<std::int64_t> grid;
  if (sample_count <= 0 || limit < 1) return grid;
  if (limit == 1) return {1};
  if (sample_count >= 2) {
    const double span = std::log(static_cast<double>(limit) / 2.0);
    for (std::int64_t i = 0; i < sample_count; ++i) {
      const double t = static_cast<double>(i) / static_cast<double>(sample_count - 1);
      auto n = static_cast<std::int64_t>(std::llround(2.0 * std::exp(span * t)));
      grid.push_back(std::clamp<std::int64_t>(n, 2, limit));
    }
  }
  for (std::int64_t p = 10; p <= limit; p *= 10) {
    grid.push_back(p);
    if (p > limit / 10) break;
  }
  grid.push_back(limit);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

struct MertensOptions {
  std::int64_t limit = 1;
  std::int64_t block_length = kDefaultBlockLength;
  std::int64_t sample_count = 200;
  unsigned threads = 1;
  Budget budget{};
};

class MertensStream {
 public:
  explicit MertensStream(const MertensOptions& opts) : opts_(opts), sieve_(checked(opts).limit, opts.budget) {
    grid_ = sample_grid(opts_.limit, opts_.sample_count);
  }

  // Continues from a checkpoint taken at a block boundary of an earlier run
  // with the same limit and sample_count. The checkpoint's block_length wins.
  MertensStream(MertensOptions opts, const Checkpoint& resume)
      : opts_(with_block_length(opts, resume.block_length)), sieve_(checked(opts_).limit, opts_.budget) {
    detail::validate_checkpoint(resume);
    if (resume.n_processed > opts_.limit) {
      throw CheckpointError("checkpoint rejected: n_processed " + std::to_string(resume.n_processed) +
                            " beyond limit " + std::to_string(opts_.limit));
    }
    n_ = resume.n_processed;
    m_ = resume.m;
    count_neg_ = resume.count_neg;
    count_pos_ = resume.count_pos;
    count_zero_ = resume.count_zero;
    max_abs_ = resume.max_abs_m;
    argmax_ = resume.argmax;
    max_ratio_ = resume.max_ratio;
    grid_ = sample_grid(opts_.limit, opts_.sample_count);
    next_sample_ = static_cast<std::size_t>(
        std::upper_bound(grid_.begin(), grid_.end(), n_) - grid_.begin());
  }

  const MertensOptions& options() const { return opts_; }
  std::int64_t n_processed() const { return n_; }
  std::int64_t m() const { return m_; }
  bool done() const { return n_ >= opts_.limit; }

  // Processes up to max_blocks further blocks; returns how many were done.
  std::int64_t advance(std::int64_t max_blocks = 1) {
    const std::int64_t bl = opts_.block_length;
    const std::int64_t remaining_blocks = (opts_.limit - n_ + bl - 1) / bl;
    const std::int64_t count = std::min(max_blocks, remaining_blocks);
    if (count <= 0) return 0;

    const auto nb = static_cast<std::size_t>(count);
    buffers_.resize(nb);
    std::vector<std::int64_t> lo(nb), hi(nb);
    for (std::size_t b = 0; b < nb; ++b) {
      lo[b] = n_ + 1 + static_cast<std::int64_t>(b) * bl;
      hi[b] = std::min(lo[b] + bl - 1, opts_.limit);
      buffers_[b].resize(static_cast<std::size_t>(hi[b] - lo[b] + 1));
    }

    const unsigned workers = std::max(1u, std::min<unsigned>(opts_.threads, static_cast<unsigned>(nb)));
    auto work = [&](unsigned w) {
      std::vector<std::int64_t> scratch;
      for (std::size_t b = w; b < nb; b += workers) sieve_.fill(lo[b], hi[b], buffers_[b], scratch);
    };
    if (workers == 1) {
      work(0);
    } else {
      std::vector<std::jthread> pool;
      for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    }

    for (std::size_t b = 0; b < nb; ++b) reduce(lo[b], buffers_[b]);
    return count;
  }

  void run() {
    const std::int64_t batch = std::max<std::int64_t>(1, opts_.threads);
    while (!done()) advance(batch);
  }

  MertensSummary summary() const {
    return {n_, m_, max_abs_, argmax_, count_neg_, count_pos_, count_zero_, max_ratio_};
  }

  Checkpoint checkpoint() const {
    Checkpoint c;
    c.n_processed = n_;
    c.m = m_;
    c.count_neg = count_neg_;
    c.count_pos = count_pos_;
    c.count_zero = count_zero_;
    c.max_abs_m = max_abs_;
    c.argmax = argmax_;
    c.max_ratio = max_ratio_;
    c.block_length = opts_.block_length;
    return c;
  }

  std::vector<TrajectorySample> drain_samples() { return std::exchange(samples_, {}); }
  std::vector<RecordMaximum> drain_records() { return std::exchange(records_, {}); }

 private:
  static const MertensOptions& checked(const MertensOptions& o) {
    if (o.limit < 1) throw DomainError("mertens: limit must be >= 1");
    if (o.block_length < 1) throw DomainError("mertens: block_length must be >= 1");
    if (o.block_length > o.budget.max_block_length) {
      throw CapacityError("mertens: block_length exceeds " + std::to_string(o.budget.max_block_length));
    }
    if (o.sample_count < 0) throw DomainError("mertens: sample_count must be >= 0");
    return o;
  }

  static MertensOptions with_block_length(MertensOptions o, std::int64_t bl) {
    o.block_length = bl;
    return o;
  }

  void reduce(std::int64_t lo, std::span<const std::int8_t> mu) {
    std::int64_t m = m_;
    std::int64_t neg = 0, pos = 0;
    std::int64_t n = lo;
    std::int64_t pending = next_sample_ < grid_.size() ? grid_[next_sample_] : -1;
    for (const std::int8_t v : mu) {
      m += v;
      neg += v < 0;
      pos += v > 0;
      const std::int64_t a = m < 0 ? -m : m;
      if (a > max_abs_) {
        max_abs_ = a;
        argmax_ = n;
        records_.push_back({n, a});
      }
      if (n >= 2) {
        const double ad = static_cast<double>(a);
        if (ad * ad > max_ratio_ * max_ratio_ * static_cast<double>(n)) {
          const double r = ad / std::sqrt(static_cast<double>(n));
          if (r > max_ratio_) max_ratio_ = r;
        }
      }
      if (n == pending) {
        samples_.push_back({n, m, static_cast<double>(m) / std::sqrt(static_cast<double>(n))});
        ++next_sample_;
        pending = next_sample_ < grid_.size() ? grid_[next_sample_] : -1;
      }
      ++n;
    }
    const auto len = static_cast<std::int64_t>(mu.size());
    m_ = m;
    count_neg_ += neg;
    count_pos_ += pos;
    count_zero_ += len - neg - pos;
    n_ += len;
  }

  MertensOptions opts_;
  MoebiusSieve sieve_;
  std::vector<std::int64_t> grid_;
  std::size_t next_sample_ = 0;
  std::vector<std::vector<std::int8_t>> buffers_;

  std::int64_t n_ = 0;
  std::int64_t m_ = 0;
  std::int64_t count_neg_ = 0;
  std::int64_t count_pos_ = 0;
  std::int64_t count_zero_ = 0;
  std::int64_t max_abs_ = 0;
  std::int64_t argmax_ = 0;
  double max_ratio_ = 0.0;

  std::vector<TrajectorySample> samples_;
  std::vector<RecordMaximum> records_;
};

struct MertensRun {
  MertensSummary summary;
  std::vector<TrajectorySample> samples;
  std::vector<RecordMaximum> records;
};

inline MertensRun mertens_stream(std::int64_t limit, std::int64_t block_length = kDefaultBlockLength,
                                 std::int64_t sample_count = 200, unsigned threads = 1) {
  MertensStream stream({limit, block_length, sample_count, threads, {}});
  stream.run();
  return {stream.summary(), stream.drain_samples(), stream.drain_records()};
}

inline std::int64_t mertens_at(std::int64_t n) {
  if (n < 1) throw DomainError("mertens_at: n must be >= 1");
  return mertens_stream(n, std::min(n, kDefaultBlockLength), 0).summary.final_m;
}

inline SignBalance sign_balance(std::int64_t limit) {
  if (limit < 1) throw DomainError("sign_balance: limit must be >= 1");
  const auto s = mertens_stream(limit, std::min(limit, kDefaultBlockLength), 0).summary;
  return {s.count_neg, s.count_pos, s.count_zero, s.count_neg - s.count_pos};
}

// Least-squares slope of log|M| against log n. Points with |M| < 1 are skipped.
inline GrowthFit fit_growth_exponent(std::span<const GrowthPoint> samples) {
  std::vector<std::pair<double, double>> xy;
  double prev_n = -INFINITY;
  for (const auto& p : samples) {
    if (!(p.n > prev_n)) throw DomainError("fit_growth_exponent: n must be strictly increasing");
    prev_n = p.n;
    if (p.n <= 0.0 || !(p.abs_m >= 1.0)) continue;
    xy.emplace_back(std::log(p.n), std::log(p.abs_m));
  }
  if (xy.size() < 2) throw InsufficientDataError("fit_growth_exponent: need at least 2 points with |M| >= 1");

  const double k = static_cast<double>(xy.size());
  double mx = 0, my = 0;
  for (const auto& [x, y] : xy) {
    mx += x;
    my += y;
  }
  mx /= k;
  my /= k;
  double sxx = 0, sxy = 0;
  for (const auto& [x, y] : xy) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  if (sxx <= 0.0) throw InsufficientDataError("fit_growth_exponent: all n identical");

  GrowthFit fit;
  fit.alpha = sxy / sxx;
  fit.intercept = my - fit.alpha * mx;
  fit.points_used = xy.size();
  double ss = 0;
  for (const auto& [x, y] : xy) {
    const double r = y - (fit.intercept + fit.alpha * x);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / k);
  return fit;
}

inline GrowthFit fit_growth_exponent(std::span<const RecordMaximum> records) {
  std::vector<GrowthPoint> pts;
  pts.reserve(records.size());
  for (const auto& r : records) pts.push_back({static_cast<double>(r.n), static_cast<double>(r.abs_m)});
  return fit_growth_exponent(std::span<const GrowthPoint>(pts));
}

}  // namespace rhlab
