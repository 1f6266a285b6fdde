// rhlab: command-line front end. Exit codes: 0 success, 2 usage, 3 runtime / I/O.

#include <exception>
#include <iostream>

#include "rhlab/harness/config.hpp"
#include "rhlab/harness/run.hpp"

int main(int argc, char** argv) {
  using namespace rhlab::harness;
  ExperimentConfig cfg;
  try {
    cfg = parse_config(argc, argv);
  } catch (const HelpRequested& help) {
    std::cout << help.what();
    return 0;
  } catch (const rhlab::UsageError& e) {
    std::cerr << "rhlab: usage error: " << e.what() << "\n(run `rhlab --help`)\n";
    return 2;
  }

  try {
    run_experiment(cfg);
  } catch (const std::exception& e) {
    std::cerr << "rhlab: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
