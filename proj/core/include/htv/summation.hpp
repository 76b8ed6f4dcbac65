#pragma once

#include <span>
#include <vector>

namespace htv {

// Correctly rounded floating-point sum (Shewchuk partials). The result does
// not depend on the order in which terms are added.
class ExactSum {
 public:
  void add(double x);
  double value() const;

 private:
  std::vector<double> partials_;
};

double exact_sum(std::span<const double> terms);

}  // namespace htv
