#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace htv {

// Axis-aligned box, lower < upper on every axis.
class BoxDomain {
 public:
  BoxDomain(std::vector<double> lower, std::vector<double> upper);
  static BoxDomain cube(int dim, double lo, double hi);
  // "lo:hi,lo:hi,..." one pair per axis
  static BoxDomain parse(std::string_view text);

  int dim() const noexcept { return static_cast<int>(lower_.size()); }
  const std::vector<double>& lower() const noexcept { return lower_; }
  const std::vector<double>& upper() const noexcept { return upper_; }
  double lower(int i) const { return lower_[static_cast<std::size_t>(i)]; }
  double upper(int i) const { return upper_[static_cast<std::size_t>(i)]; }
  double width(int i) const { return upper(i) - lower(i); }
  double volume() const;
  bool contains(std::span<const double> x, double tol = 0.0) const;
  std::string to_string() const;

  friend bool operator==(const BoxDomain&, const BoxDomain&) = default;

 private:
  std::vector<double> lower_, upper_;
};

}  // namespace htv
