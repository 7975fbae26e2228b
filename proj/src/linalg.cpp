#include "qjd/linalg.hpp"

#include <stdexcept>
#include <utility>

namespace qjd {

RationalMatrix RationalMatrix::identity(std::size_t n) {
  RationalMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

RationalMatrix RationalMatrix::operator*(const RationalMatrix& other) const {
  if (cols_ != other.rows_) throw std::invalid_argument("matrix product: shape mismatch");
  RationalMatrix out(rows_, other.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const Scalar& a = (*this)(i, k);
      if (a == 0) continue;
      for (std::size_t j = 0; j < other.cols_; ++j) out(i, j) += a * other(k, j);
    }
  return out;
}

std::vector<Scalar> RationalMatrix::operator*(const std::vector<Scalar>& v) const {
  if (cols_ != v.size()) throw std::invalid_argument("matrix-vector product: shape mismatch");
  std::vector<Scalar> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k)
      if ((*this)(i, k) != 0) out[i] += (*this)(i, k) * v[k];
  return out;
}

namespace {

void swap_rows(RationalMatrix& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m(a, c), m(b, c));
}

}  // namespace

std::size_t rank(RationalMatrix m) {
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t piv = r;
    while (piv < m.rows() && m(piv, c) == 0) ++piv;
    if (piv == m.rows()) continue;
    swap_rows(m, r, piv);
    for (std::size_t i = r + 1; i < m.rows(); ++i) {
      if (m(i, c) == 0) continue;
      Scalar f = m(i, c) / m(r, c);
      for (std::size_t j = c; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
    }
    ++r;
  }
  return r;
}

std::optional<RationalMatrix> inverse(const RationalMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("inverse of non-square matrix");
  const std::size_t n = m.rows();
  RationalMatrix a = m;
  RationalMatrix inv = RationalMatrix::identity(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && a(piv, c) == 0) ++piv;
    if (piv == n) return std::nullopt;
    swap_rows(a, c, piv);
    swap_rows(inv, c, piv);
    Scalar p = a(c, c);
    for (std::size_t j = 0; j < n; ++j) {
      a(c, j) /= p;
      inv(c, j) /= p;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || a(i, c) == 0) continue;
      Scalar f = a(i, c);
      for (std::size_t j = 0; j < n; ++j) {
        if (a(c, j) != 0) a(i, j) -= f * a(c, j);
        if (inv(c, j) != 0) inv(i, j) -= f * inv(c, j);
      }
    }
  }
  return inv;
}

std::optional<std::vector<Scalar>> solve(const RationalMatrix& m, const std::vector<Scalar>& rhs) {
  auto inv = inverse(m);
  if (!inv) return std::nullopt;
  return (*inv) * rhs;
}

}  // namespace qjd
