#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <span>
#include <vector>

namespace dal {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;  // column-major
using Index = Eigen::Index;

/// Column indices into a design matrix, ascending.
using IndexSet = std::vector<Index>;
using IndexSpan = std::span<const Index>;

}  // namespace dal
