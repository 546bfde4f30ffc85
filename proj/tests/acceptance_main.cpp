// Acceptance gate. Usage: amcf_acceptance [--mutate] [--quick] [id ...]
// With no ids every criterion runs. Prints one line per criterion and exits
// 0 only if all of them pass.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "amcf/acceptance.hpp"

int main(int argc, char** argv) {
  amcf::AcceptanceOptions opt;
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--mutate") {
      opt.mutate_f = true;
    } else if (a == "--quick") {
      opt.quick = true;
    } else {
      ids.push_back(std::atoi(a.c_str()));
    }
  }
  bool all = true;
  if (ids.empty()) {
    for (const auto& r : amcf::run_acceptance(opt, std::cout)) all = all && r.passed;
  } else {
    for (int id : ids) {
      const auto r = amcf::run_criterion(id, opt);
      std::cout << amcf::format_result(r) << std::endl;
      all = all && r.passed;
    }
  }
  return all ? 0 : 1;
}
