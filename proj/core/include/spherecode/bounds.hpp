#pragma once

#include <functional>
#include <optional>
#include <vector>

namespace spherecode {

/// Analytic envelope for the best achievable one-vs-rest margin of K points
/// on the unit sphere in R^d. `applicable` records whether K is large enough
/// relative to d for the lower bound's derivation to hold.
struct MarginBounds {
  int dim = 0;
  int count = 0;
  double lower = 0.0;
  double upper = 0.0;
  bool applicable = false;
};

/// Evaluates both margin bounds in the log-Gamma domain so large dimensions
/// neither overflow nor lose precision. Requires d >= 2 and K >= 2.
MarginBounds margin_bounds(int dim, int count);

/// Packing-style lower bound on the best minimum pairwise distance. The
/// one-vs-rest lower bound equals half the square of this quantity.
double one_vs_one_lower_bound(int dim, int count);

/// One row of a dimension scan at fixed K. `solver_rho` is present only
/// when a solver callback was supplied.
struct DimensionScanRow {
  int dim = 0;
  double lower = 0.0;
  double upper = 0.0;
  std::optional<double> solver_rho;
};

/// Tabulates margin_bounds over `dims` at fixed K. When `solve_rho` is
/// nonempty it is invoked as solve_rho(dim, count) to fill the solver
/// column; the bounds module stays independent of any particular solver.
std::vector<DimensionScanRow> scan_dimensions(
    int count, const std::vector<int>& dims,
    const std::function<double(int, int)>& solve_rho = {});

}  // namespace spherecode
