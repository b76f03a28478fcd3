#pragma once

#include <string>
#include <vector>

namespace qineq {

/// One "value <= limit" assertion of a structural check.
struct CheckItem {
  std::string label;
  double value = 0.0;
  double limit = 0.0;

  bool pass() const { return value <= limit; }
};

struct CheckReport {
  std::string name;
  std::vector<CheckItem> items;

  bool pass() const {
    for (const auto& it : items)
      if (!it.pass()) return false;
    return true;
  }
  void add(std::string label, double value, double limit) {
    items.push_back({std::move(label), value, limit});
  }
};

}  // namespace qineq
