#include "posasym/linalg.hpp"

#include "posasym/errors.hpp"

namespace posasym {

double max_norm(const Vector& x) { return x.size() == 0 ? 0.0 : x.cwiseAbs().maxCoeff(); }

double operator_norm(const Matrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().rowwise().sum().maxCoeff();
}

double max_abs_entry(const Matrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

Matrix matrix_power(const Matrix& a, std::uint64_t n) {
  if (a.rows() != a.cols()) throw DimensionError(a.rows(), a.cols());
  Matrix result = Matrix::Identity(a.rows(), a.cols());
  Matrix base = a;
  while (n > 0) {
    if (n & 1U) result = result * base;
    n >>= 1U;
    if (n > 0) base = base * base;
  }
  return result;
}

Vector basis_vector(std::size_t dim, std::size_t j) {
  if (j >= dim) throw DimensionError(dim, j + 1);
  Vector e = Vector::Zero(static_cast<Eigen::Index>(dim));
  e(static_cast<Eigen::Index>(j)) = 1.0;
  return e;
}

}  // namespace posasym
