// Runs acceptance criteria and prints one line per criterion.
// Usage: acceptance [id ...]   (no ids: all)
#include "kssim/checks.hpp"

#include <cstdlib>
#include <iostream>
#include <vector>

int main(int argc, char** argv) {
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) ids.push_back(std::atoi(argv[i]));
  if (ids.empty()) {
    for (int i = 1; i <= kssim::criterion_count; ++i) ids.push_back(i);
  }
  bool pass = true;
  for (int id : ids) {
    const auto r = kssim::run_criterion(id);
    std::cout << kssim::summary_line(r) << std::endl;
    for (const auto& m : r.measurements) {
      std::cout << "    " << (m.pass ? "ok   " : "FAIL ") << m.name << " = " << m.value << " (" << m.relation << " "
                << m.limit << ")\n";
    }
    for (const auto& n : r.notes) std::cout << "    note: " << n << "\n";
    pass = pass && r.pass;
  }
  return pass ? 0 : 1;
}
