// One line per acceptance criterion; exit status 1 if any fails.
#include <cstdio>

#include "wip/acceptance.hpp"

int main() {
  const auto results = wip::run_acceptance();
  int failed = 0;
  for (const auto& r : results) {
    std::printf("%s %-16s %s [%.2fs]\n", r.passed ? "PASS" : "FAIL", r.id.c_str(),
                r.detail.c_str(), r.seconds);
    if (!r.passed) ++failed;
  }
  std::printf("%zu/%zu criteria passed\n", results.size() - failed, results.size());
  return failed == 0 ? 0 : 1;
}
