// One line per reproduction criterion, followed by the individual checks.
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "dissect/acceptance.hpp"

int main(int argc, char** argv) {
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));
  auto results = dissect::run_acceptance(DISSECT_DATA_DIR, only);
  int failed = 0;
  for (const auto& r : results) {
    std::printf("%s\n", dissect::format_result(r).c_str());
    std::fflush(stdout);
    failed += !r.pass;
  }
  std::printf("%zu criteria, %d failed\n", results.size(), failed);
  return failed ? 1 : 0;
}
