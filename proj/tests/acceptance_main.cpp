#include <fmt/format.h>

#include <iostream>

#include "emanet/acceptance.hpp"

// Exit status: 0 when every criterion passes or fails only in a sub-check
// known to be unattainable under the model (see CriterionResult::expected).
int main(int argc, char** argv) {
  emanet::AcceptanceOptions opts;
  if (argc > 1) opts.parallel = std::max(1, std::atoi(argv[1]));
  const auto results = emanet::run_acceptance(opts, std::cout);
  int unexpected = 0, passed = 0;
  for (const auto& r : results) {
    passed += r.pass;
    unexpected += !r.pass && !r.expected;
  }
  fmt::print("{}/{} criteria pass, {} unexpected failure(s)\n", passed, results.size(), unexpected);
  return unexpected == 0 ? 0 : 1;
}
