#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>

namespace posasym {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// max_i |x_i|
double max_norm(const Vector& x);

/// Operator norm induced by the max norm: the largest absolute row sum.
double operator_norm(const Matrix& a);

/// Largest absolute entry.
double max_abs_entry(const Matrix& a);

/// a^n by repeated squaring; a^0 = I.
Matrix matrix_power(const Matrix& a, std::uint64_t n);

/// Standard basis vector e_j of length dim.
Vector basis_vector(std::size_t dim, std::size_t j);

}  // namespace posasym
