#include "htv/box.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "htv/error.hpp"

namespace htv {

BoxDomain::BoxDomain(std::vector<double> lower, std::vector<double> upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.empty()) fail(ErrorKind::invalid_input, "box needs at least one axis");
  if (lower_.size() != upper_.size()) fail(ErrorKind::dimension_mismatch, "box corners differ in dimension");
  for (std::size_t i = 0; i < lower_.size(); ++i) {
    if (!std::isfinite(lower_[i]) || !std::isfinite(upper_[i]))
      fail(ErrorKind::invalid_input, "box corners must be finite");
    if (!(lower_[i] < upper_[i]))
      fail(ErrorKind::invalid_input, "box axis " + std::to_string(i) + " has lower >= upper");
  }
}

BoxDomain BoxDomain::cube(int dim, double lo, double hi) {
  if (dim < 1) fail(ErrorKind::invalid_input, "box needs at least one axis");
  return BoxDomain(std::vector<double>(static_cast<std::size_t>(dim), lo),
                   std::vector<double>(static_cast<std::size_t>(dim), hi));
}

namespace {

double parse_number(std::string_view s, std::string_view whole) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    fail(ErrorKind::parse, "bad number '" + std::string(s) + "' in box '" + std::string(whole) + "'");
  return v;
}

}  // namespace

BoxDomain BoxDomain::parse(std::string_view text) {
  std::vector<double> lo, hi;
  std::string_view rest = text;
  while (true) {
    const auto comma = rest.find(',');
    const std::string_view axis = rest.substr(0, comma);
    const auto colon = axis.find(':');
    if (colon == std::string_view::npos)
      fail(ErrorKind::parse, "box axis '" + std::string(axis) + "' is not of the form lo:hi");
    lo.push_back(parse_number(axis.substr(0, colon), text));
    hi.push_back(parse_number(axis.substr(colon + 1), text));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return BoxDomain(lo, hi);
}

double BoxDomain::volume() const {
  double v = 1.0;
  for (int i = 0; i < dim(); ++i) v *= width(i);
  return v;
}

bool BoxDomain::contains(std::span<const double> x, double tol) const {
  if (static_cast<int>(x.size()) != dim()) return false;
  for (int i = 0; i < dim(); ++i)
    if (x[static_cast<std::size_t>(i)] < lower(i) - tol || x[static_cast<std::size_t>(i)] > upper(i) + tol) return false;
  return true;
}

std::string BoxDomain::to_string() const {
  std::ostringstream os;
  os.precision(12);
  for (int i = 0; i < dim(); ++i) os << (i ? "," : "") << lower(i) << ':' << upper(i);
  return os.str();
}

}  // namespace htv
