#pragma once

// Analytic baselines on the real axis: Li(x) against pi(x), twin primes
// against the Hardy-Littlewood integral, Euler's gamma and Mertens' product
// theorem, and zeta(s) for real s > 1 by four routes.
// Every value is reported with an explicit bound or tolerance.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "rhlab/errors.hpp"
#include "rhlab/quadrature.hpp"
#include "rhlab/sieve.hpp"

namespace rhlab {

// Li(x) = integral from 2 to x of du / ln u (no principal value through u = 1).
inline Quadrature li(double x, double tol = 1e-8) {
  if (!(x >= 2.0)) throw DomainError("li: x must be >= 2");
  if (!(tol > 0.0)) throw DomainError("li: tol must be positive");
  return adaptive_simpson([](double u) { return 1.0 / std::log(u); }, 2.0, x, tol);
}

inline std::int64_t pi_exact(std::int64_t x, const Budget& budget = {}) { return count_primes(x, budget); }

struct GapPoint {
  std::int64_t x = 0;
  std::int64_t pi = 0;
  double li = 0.0;
  double gap = 0.0;  // li - pi
};

struct GapScan {
  std::vector<GapPoint> points;
  bool all_positive = true;
  double li_error = 0.0;  // accumulated quadrature error estimate at the last point
};

// Grid: multiples of stride that are >= 3, plus x_max. Li is integrated
// incrementally between grid points, each panel to tol.
inline GapScan gauss_gap_scan(std::int64_t x_max, std::int64_t stride, double tol = 1e-8,
                              const Budget& budget = {}) {
  if (x_max < 3) throw DomainError("gauss_gap_scan: x_max must be >= 3");
  if (stride < 1) throw DomainError("gauss_gap_scan: stride must be >= 1");
  detail::check_table_limit(x_max, budget, "gauss_gap_scan");

  std::vector<std::int64_t> grid;
  for (std::int64_t x = std::max<std::int64_t>(stride, (3 + stride - 1) / stride * stride); x <= x_max; x += stride) {
    grid.push_back(x);
  }
  if (grid.empty() || grid.back() != x_max) grid.push_back(x_max);

  const auto composite = detail::odd_composite_flags(x_max);
  auto is_prime = [&](std::int64_t n) {
    return n == 2 || (n > 2 && (n & 1) && !composite[static_cast<std::size_t>(n / 2)]);
  };

  GapScan scan;
  scan.points.reserve(grid.size());
  std::int64_t pi = 0;
  std::int64_t counted_to = 1;
  double prev_x = 2.0;
  CompensatedSum li_acc;
  for (const std::int64_t x : grid) {
    for (std::int64_t n = counted_to + 1; n <= x; ++n) pi += is_prime(n);
    counted_to = x;
    const auto piece = adaptive_simpson([](double u) { return 1.0 / std::log(u); }, prev_x,
                                        static_cast<double>(x), tol);
    li_acc.add(piece.value);
    scan.li_error += piece.error_estimate;
    prev_x = static_cast<double>(x);
    const double li_x = li_acc.value();
    const double gap = li_x - static_cast<double>(pi);
    scan.points.push_back({x, pi, li_x, gap});
    if (!(gap > 0.0)) scan.all_positive = false;
  }
  return scan;
}

// Pairs (p, p + 2), both prime, with p + 2 <= x.
inline std::int64_t twin_prime_count(std::int64_t x, const Budget& budget = {}) {
  if (x < 2) throw DomainError("twin_prime_count: x must be >= 2");
  detail::check_table_limit(x, budget, "twin_prime_count");
  const auto composite = detail::odd_composite_flags(x);
  std::int64_t count = 0;
  for (std::size_t i = 1; i + 1 < composite.size(); ++i) count += !composite[i] && !composite[i + 1];
  return count;
}

struct TwinConstants {
  double c2_partial = 1.0;
  std::int64_t prime_limit = 0;
};

// Product over odd primes p <= prime_limit of (1 - 1/(p-1)^2).
inline TwinConstants twin_prime_constant(std::int64_t prime_limit, const Budget& budget = {}) {
  if (prime_limit < 3) throw DomainError("twin_prime_constant: prime_limit must be >= 3");
  const auto table = primes_up_to(prime_limit, budget);
  double c2 = 1.0;
  for (const std::int64_t p : table.primes) {
    if (p == 2) continue;
    const double q = static_cast<double>(p - 1);
    c2 *= 1.0 - 1.0 / (q * q);
  }
  return {c2, prime_limit};
}

// integral from 2 to x of dt / (ln t)^2; x = 2 gives 0.
inline Quadrature twin_integral(double x, double tol = 1e-8) {
  if (!(x >= 2.0)) throw DomainError("twin_integral: x must be >= 2");
  return adaptive_simpson(
      [](double t) {
        const double l = std::log(t);
        return 1.0 / (l * l);
      },
      2.0, x, tol);
}

// 2 * c2 * integral_2^x dt / (ln t)^2, with the error estimate scaled the same way.
inline Quadrature twin_heuristic(double x, double c2, double tol = 1e-8) {
  if (!(x >= 4.0)) throw DomainError("twin_heuristic: x must be >= 4");
  const auto q = twin_integral(x, tol);
  return {2.0 * c2 * q.value, 2.0 * c2 * q.error_estimate};
}

struct GammaEstimate {
  std::int64_t terms = 0;
  double value = 0.0;
};

// H_N - ln N - 1/(2N); the remaining error is about -1/(12 N^2).
inline GammaEstimate euler_gamma(std::int64_t terms) {
  if (terms < 1) throw DomainError("euler_gamma: terms must be >= 1");
  CompensatedSum h;
  for (std::int64_t k = terms; k >= 1; --k) h.add(1.0 / static_cast<double>(k));
  const double n = static_cast<double>(terms);
  return {terms, h.value() - std::log(n) - 0.5 / n};
}

// e^gamma * ln x * prod_{p <= x} (1 - 1/p); tends to 1.
inline double mertens_product_check(std::int64_t x, const Budget& budget = {}) {
  if (x < 3) throw DomainError("mertens_product_check: x must be >= 3");
  const auto table = primes_up_to(x, budget);
  double prod = 1.0;
  for (const std::int64_t p : table.primes) prod *= 1.0 - 1.0 / static_cast<double>(p);
  return std::exp(std::numbers::egamma) * std::log(static_cast<double>(x)) * prod;
}

enum class ZetaMethod { direct_sum, euler_maclaurin, euler_product, moebius_reciprocal };

inline std::string_view to_string(ZetaMethod m) {
  switch (m) {
    case ZetaMethod::direct_sum: return "direct-sum";
    case ZetaMethod::euler_maclaurin: return "euler-maclaurin";
    case ZetaMethod::euler_product: return "euler-product";
    case ZetaMethod::moebius_reciprocal: return "moebius-reciprocal";
  }
  return "?";
}

struct ZetaEval {
  double s = 0.0;
  double value = 0.0;
  ZetaMethod method = ZetaMethod::direct_sum;
  // Direct sum and Euler product sit below zeta(s) by at most this much;
  // the other two methods are within +-tail_bound.
  double tail_bound = 0.0;
};

namespace detail {

inline void check_s(double s) {
  if (!(s > 1.0)) throw DomainError("zeta: s must be > 1 (no analytic continuation)");
}

inline double power_sum(double s, std::int64_t terms) {
  CompensatedSum sum;
  for (std::int64_t n = terms; n >= 1; --n) sum.add(std::pow(static_cast<double>(n), -s));
  return sum.value();
}

inline double moebius_dirichlet_sum(double s, std::int64_t terms) {
  CompensatedSum sum;
  const MoebiusSieve sieve(terms);
  std::vector<std::int8_t> mu;
  std::vector<std::int64_t> scratch;
  // Accumulate from the top block down so small terms go in first.
  for (std::int64_t hi = terms; hi >= 1;) {
    const std::int64_t lo = std::max<std::int64_t>(1, hi - kDefaultBlockLength + 1);
    mu.resize(static_cast<std::size_t>(hi - lo + 1));
    sieve.fill(lo, hi, mu, scratch);
    for (std::int64_t n = hi; n >= lo; --n) {
      const int v = mu[static_cast<std::size_t>(n - lo)];
      if (v != 0) sum.add(v * std::pow(static_cast<double>(n), -s));
    }
    hi = lo - 1;
  }
  return sum.value();
}

}  // namespace detail

inline ZetaEval zeta_euler_product(double s, std::int64_t prime_limit, const Budget& budget = {});
inline ZetaEval zeta_moebius_reciprocal(double s, std::int64_t terms);

// direct-sum: sum_{n<=N} n^-s, tail below N^(1-s)/(s-1).
// euler-maclaurin: adds N^(1-s)/(s-1) - N^(-s)/2; the remainder lies within
// s N^(-s-1) / 12.
inline ZetaEval zeta_real(double s, std::int64_t terms, ZetaMethod method = ZetaMethod::euler_maclaurin) {
  detail::check_s(s);
  if (terms < 1) throw DomainError("zeta_real: terms must be >= 1");
  switch (method) {
    case ZetaMethod::euler_product: return zeta_euler_product(s, terms);
    case ZetaMethod::moebius_reciprocal: return zeta_moebius_reciprocal(s, terms);
    default: break;
  }
  const double n = static_cast<double>(terms);
  const double partial = detail::power_sum(s, terms);
  const double integral_tail = std::pow(n, 1.0 - s) / (s - 1.0);
  if (method == ZetaMethod::direct_sum) return {s, partial, method, integral_tail};
  const double value = partial + integral_tail - 0.5 * std::pow(n, -s);
  return {s, value, method, s * std::pow(n, -s - 1.0) / 12.0};
}

// prod_{p <= L} 1/(1 - p^-s). The missing factors multiply the product by at
// most exp(T / (1 - L^-s)) with T = L^(1-s)/(s-1), which gives tail_bound.
inline ZetaEval zeta_euler_product(double s, std::int64_t prime_limit, const Budget& budget) {
  detail::check_s(s);
  if (prime_limit < 2) throw DomainError("zeta_euler_product: prime_limit must be >= 2");
  const auto table = primes_up_to(prime_limit, budget);
  double prod = 1.0;
  for (const std::int64_t p : table.primes) prod /= 1.0 - std::pow(static_cast<double>(p), -s);
  const double l = static_cast<double>(prime_limit);
  const double tail = std::pow(l, 1.0 - s) / (s - 1.0) / (1.0 - std::pow(l, -s));
  return {s, prod, ZetaMethod::euler_product, prod * std::expm1(tail)};
}

// 1 / sum_{n<=N} mu(n) n^-s. The Dirichlet tail is at most T = N^(1-s)/(s-1)
// in absolute value.
inline ZetaEval zeta_moebius_reciprocal(double s, std::int64_t terms) {
  detail::check_s(s);
  if (terms < 1) throw DomainError("zeta_moebius_reciprocal: terms must be >= 1");
  const double d = detail::moebius_dirichlet_sum(s, terms);
  const double t = std::pow(static_cast<double>(terms), 1.0 - s) / (s - 1.0);
  const double bound = d > t ? 1.0 / (d - t) - 1.0 / d : INFINITY;
  return {s, 1.0 / d, ZetaMethod::moebius_reciprocal, bound};
}

// (sum_{n<=N} mu(n) n^-s) * zeta(s); tends to 1.
inline double mu_reciprocal_identity(double s, std::int64_t terms) {
  detail::check_s(s);
  if (terms < 1) throw DomainError("mu_reciprocal_identity: terms must be >= 1");
  return detail::moebius_dirichlet_sum(s, terms) * zeta_real(s, terms, ZetaMethod::euler_maclaurin).value;
}

}  // namespace rhlab
