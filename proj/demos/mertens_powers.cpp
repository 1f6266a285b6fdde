// Prints M(10^k) and |M|/sqrt(n) at the decades up to the given limit.
#include <cstdio>
#include <cstdlib>

#include "rhlab/mertens.hpp"

int main(int argc, char** argv) {
  const std::int64_t limit = argc > 1 ? std::atoll(argv[1]) : 10'000'000;
  rhlab::MertensStream stream({limit, rhlab::kDefaultBlockLength, 1, 4, {}});
  stream.run();
  std::printf("%12s %8s %10s\n", "n", "M(n)", "M/sqrt(n)");
  for (const auto& s : stream.drain_samples()) std::printf("%12lld %8lld %10.5f\n", (long long)s.n, (long long)s.m, s.ratio);
  const auto sum = stream.summary();
  std::printf("max |M| = %lld at n = %lld, max ratio %.6f\n", (long long)sum.max_abs_m, (long long)sum.argmax,
              sum.max_ratio);
}
