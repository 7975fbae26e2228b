#pragma once

// Dense exact rational matrices. Sizes in this library stay in the tens, so
// plain Gaussian elimination with first-nonzero pivoting is enough.

#include "qjd/qalgebra.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace qjd {

class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static RationalMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Scalar& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Scalar& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  RationalMatrix operator*(const RationalMatrix& other) const;
  std::vector<Scalar> operator*(const std::vector<Scalar>& v) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Scalar> data_;
};

std::size_t rank(RationalMatrix m);

/// Inverse of a square matrix, or nullopt when singular.
std::optional<RationalMatrix> inverse(const RationalMatrix& m);

/// Solves m x = rhs for square nonsingular m; nullopt when singular.
std::optional<std::vector<Scalar>> solve(const RationalMatrix& m, const std::vector<Scalar>& rhs);

}  // namespace qjd
