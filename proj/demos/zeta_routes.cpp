#include <cstdio>

#include "rhlab/analytic.hpp"

int main() {
  for (const double s : {1.5, 2.0, 3.0, 4.0}) {
    const rhlab::ZetaEval evals[] = {rhlab::zeta_real(s, 1000, rhlab::ZetaMethod::direct_sum),
                                     rhlab::zeta_real(s, 1000, rhlab::ZetaMethod::euler_maclaurin),
                                     rhlab::zeta_euler_product(s, 100'000),
                                     rhlab::zeta_moebius_reciprocal(s, 100'000)};
    for (const auto& e : evals) {
      std::printf("s=%-4g %-19s %.15f  (bound %.2e)\n", s, std::string(rhlab::to_string(e.method)).c_str(), e.value,
                  e.tail_bound);
    }
  }
}
