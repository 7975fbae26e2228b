#pragma once

// Eigenvectors of operators that are triangular on the monomial basis.

#include "qjd/symfunc.hpp"

#include <functional>
#include <stdexcept>
#include <vector>

namespace qjd {

/// Two basis elements share an eigenvalue, so the triangular eigenvector of
/// `target` is not determined.
class EigenvalueCollision : public std::runtime_error {
 public:
  EigenvalueCollision(Partition target, Partition other, const Scalar& value);
  const Partition& target() const { return target_; }
  const Partition& other() const { return other_; }

 private:
  Partition target_;
  Partition other_;
};

using ColumnFunction = std::function<SymPoly(const Partition&)>;
using DiagonalFunction = std::function<Scalar(const Partition&)>;

/// Solves (A - a_top) c = 0 with c_top = 1, where column(rho) is A m_rho.
/// `support` must be in strictly decreasing lex order with support[0] the
/// top element, and closed under A. Every column is checked to be supported
/// on support elements that are lex-below rho, and its diagonal entry is
/// checked against `expected_diagonal`; violations throw std::logic_error.
SymPoly triangular_eigenvector(int nvars, const std::vector<Partition>& support,
                               const ColumnFunction& column,
                               const DiagonalFunction& expected_diagonal);

}  // namespace qjd
