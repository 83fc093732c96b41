#pragma once

#include <Eigen/Core>

namespace spherecode {

/// Projects a Euclidean gradient onto the tangent space of the product of
/// unit spheres, column by column: g_k <- g_k - (x_k . g_k) x_k. The points
/// matrix must have unit columns.
Eigen::MatrixXd tangent_project(const Eigen::MatrixXd& points,
                                const Eigen::MatrixXd& grad);

/// Retraction onto the product of unit spheres: renormalizes every column
/// in place. Columns with vanishing norm are left untouched.
void normalize_columns(Eigen::MatrixXd& points);

}  // namespace spherecode
