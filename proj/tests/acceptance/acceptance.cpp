// Runs the acceptance battery and prints one line per criterion.

#include <cstdio>
#include <cstring>

#include "freemoments/suite.hpp"

int main(int argc, char** argv) {
  freemoments::SuiteConfig config;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) config.only.insert(argv[++i]);
  }
  const auto report = freemoments::run_suite(config);
  for (const auto& c : report.criteria) {
    std::printf("criterion %2d %s  %-32s %7.2f s", c.id, c.pass ? "PASS" : "FAIL", c.name.c_str(), c.seconds);
    if (!c.checks.empty()) std::printf("  %s", c.checks.front().c_str());
    std::printf("\n");
    if (!c.pass) {
      for (std::size_t i = 1; i < c.checks.size(); ++i) std::printf("      %s\n", c.checks[i].c_str());
    }
  }
  std::printf("%s\n", report.pass ? "ALL PASS" : "FAILURES");
  return report.pass ? 0 : 1;
}
