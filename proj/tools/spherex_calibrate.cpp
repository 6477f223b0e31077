// Runs the published calibration suites and prints the worst observed ratios.

#include <algorithm>
#include <iomanip>
#include <iostream>
#include <map>

#include "suites.hpp"

using namespace spherex;

int main() {
  std::cout << std::setprecision(17);
  std::map<std::pair<std::string, int>, suites::RatioCase> worst;
  for (const auto& c : suites::ratio_suite()) {
    auto key = std::pair{c.kind, c.q};
    auto it = worst.find(key);
    if (it == worst.end() || c.ratio > it->second.ratio) worst[key] = c;
  }
  for (const auto& [key, c] : worst) {
    std::cout << "ratio " << key.first << " q=" << key.second << " worst " << c.ratio << " (seed " << c.seed << ", value " << c.value
              << ", upper " << c.upper << ")\n";
  }
  suites::WeakCase top;
  for (const auto& c : suites::weak_suite()) {
    if (c.ratio > top.ratio) top = c;
  }
  std::cout << "weak decoupling worst " << top.ratio << " (seed " << top.seed << ", alpha " << top.alpha.to_string() << ")\n";
}
