#pragma once

// N-variate Macdonald polynomials P_{lambda|N}(x; q, t), computed as the
// monic dominance-triangular eigenfunctions of the first Macdonald operator
//   E = sum_i prod_{j != i} (t x_i - x_j) / (x_i - x_j) T_{q,i}.

#include "qjd/symfunc.hpp"
#include "qjd/triangular.hpp"

namespace qjd {

/// E f, re-expanded in the monomial basis.
SymPoly macdonald_operator_apply(const SymPoly& f, const Scalar& q, const Scalar& t);

/// Eigenvalue of E on P_{lambda|N}: sum_{i=1}^N q^{lambda_i} t^{N-i}.
Scalar macdonald_eigenvalue(const Partition& lambda, int nvars, const Scalar& q, const Scalar& t);

/// P_{lambda|N}; requires length(lambda) <= N. Cached per (N, q, t, lambda).
/// Throws EigenvalueCollision for non-generic (q, t).
const SymPoly& macdonald_poly(const Partition& lambda, int nvars, const Scalar& q, const Scalar& t);

/// Coefficients of f in the basis {P_{nu|N}}.
SymFuncExpansion macdonald_expand(const SymPoly& f, const Scalar& q, const Scalar& t);

/// sum_nu c_nu P_{nu|N}; terms with length(nu) > N project to zero.
SymPoly macdonald_to_monomial(const SymFuncExpansion& f, int nvars, const Scalar& q, const Scalar& t);

/// Whether the lifts of P_{lambda|N} and P_{lambda|N+1} coincide in Sym.
/// Requires N >= |lambda|.
bool macdonald_stability_check(const Partition& lambda, int nvars, const Scalar& q, const Scalar& t);

}  // namespace qjd
