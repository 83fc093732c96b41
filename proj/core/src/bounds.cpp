#include "spherecode/bounds.hpp"

#include <cmath>
#include <string>

#include "spherecode/errors.hpp"

namespace spherecode {

namespace {

void check_domain(int dim, int count, const char* where) {
  if (dim < 2) {
    throw InvalidShape(std::string(where) + ": dimension must be at least 2, got " +
                       std::to_string(dim));
  }
  if (count < 2) {
    throw InvalidShape(std::string(where) + ": count must be at least 2, got " +
                       std::to_string(count));
  }
}

}  // namespace

double one_vs_one_lower_bound(int dim, int count) {
  check_domain(dim, count, "one_vs_one_lower_bound");
  const double d = dim;
  const double k = count;
  // log of sqrt(pi)/K * Gamma((d+1)/2) / Gamma(d/2 + 1); the whole bound is
  // that ratio raised to 1/(d-1).
  const double log_ratio = 0.5 * std::log(M_PI) - std::log(k) +
                           std::lgamma((d + 1.0) / 2.0) -
                           std::lgamma(d / 2.0 + 1.0);
  return std::exp(log_ratio / (d - 1.0));
}

MarginBounds margin_bounds(int dim, int count) {
  check_domain(dim, count, "margin_bounds");
  const double d = dim;
  const double k = count;

  // The one-vs-rest lower bound is exactly half the squared pairwise bound,
  // so it is computed that way and the structural identity holds verbatim.
  const double pairwise = one_vs_one_lower_bound(dim, count);
  const double lower = 0.5 * pairwise * pairwise;

  const double log_upper_ratio = std::log(2.0) + 0.5 * std::log(M_PI) -
                                 std::log(k) + std::lgamma((d + 1.0) / 2.0) -
                                 std::lgamma(d / 2.0);
  const double upper = 2.0 * std::exp(log_upper_ratio / (d - 1.0));

  const bool applicable =
      k >= std::sqrt(2.0 * M_PI * std::sqrt(M_E) * d);

  return MarginBounds{dim, count, lower, upper, applicable};
}

std::vector<DimensionScanRow> scan_dimensions(
    int count, const std::vector<int>& dims,
    const std::function<double(int, int)>& solve_rho) {
  if (dims.empty()) {
    throw InvalidConfig("scan_dimensions: dims must be nonempty");
  }
  std::vector<DimensionScanRow> rows;
  rows.reserve(dims.size());
  for (const int dim : dims) {
    const MarginBounds bounds = margin_bounds(dim, count);
    DimensionScanRow row;
    row.dim = dim;
    row.lower = bounds.lower;
    row.upper = bounds.upper;
    if (solve_rho) {
      row.solver_rho = solve_rho(dim, count);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace spherecode
