#pragma once

// The q-difference operators D (one variable) and D_N (N variables), their
// eigenvalues, the big q-Jacobi polynomials phi_{lambda|N}, the stable
// coefficients pi(lambda, nu), the symmetric functions Phi_lambda and the
// squared norms h_lambda.

#include "qjd/linalg.hpp"
#include "qjd/symfunc.hpp"
#include "qjd/triangular.hpp"

#include <map>
#include <span>
#include <stdexcept>
#include <vector>

namespace qjd {

/// sigma_N^{+/-}(x) = s0 + s1 / x + s2 / x^2.
struct OperatorCoeffs {
  Params params;
  int nvars = 1;
  Scalar plus0, plus1, plus2;
  Scalar minus0, minus1, minus2;

  OperatorCoeffs(const Params& p, int N);
  Scalar sigma_plus(const Scalar& x) const;
  Scalar sigma_minus(const Scalar& x) const;
};

enum class Sign { plus, minus };

/// sigma_N^{+/-}(x); x must be nonzero.
Scalar sigma(const Params& p, int N, const Scalar& x, Sign sign);

/// Univariate polynomial, coefficient of x^n at index n.
using UniPoly = std::vector<Scalar>;

/// D f through the closed-form action on monomials.
UniPoly apply_D1(const UniPoly& f, const Params& p);
/// sigma^+(x)(f(qx) - f(x)) + sigma^-(x)(f(x/q) - f(x)) at a nonzero point.
Scalar apply_D1_at(const UniPoly& f, const Params& p, const Scalar& x);
Scalar evaluate(const UniPoly& f, const Scalar& x);

/// (D_N f)(X) straight from the difference-operator definition; the
/// coordinates must be nonzero and pairwise distinct.
Scalar apply_DN_at(const SymPoly& f, const OperatorCoeffs& op, std::span<const Scalar> x);

/// D_N f in the monomial basis (N = f.nvars()).
SymPoly apply_DN(const SymPoly& f, const Params& p);

/// D_N on Sym(N)_{<=d}: entry (r, c) is the m_{basis[r]} coefficient of
/// D_N m_{basis[c]}; basis ordered by degree, then decreasing lex.
struct OperatorMatrix {
  std::vector<Partition> basis;
  RationalMatrix matrix;
};
OperatorMatrix dn_matrix(const Params& p, int N, int max_degree);

/// Eigenvalue of D_N on phi_{lambda|N}.
Scalar mu_N(const Partition& lambda, const Params& p, int N);
/// N-independent eigenvalue attached to base parameters.
Scalar mu_infinity(const Partition& lambda, const Params& base);

/// phi_{lambda|N}: the D_N eigenfunction P_{lambda|N} + lower degree terms.
/// Throws EigenvalueCollision when the eigenvalue is not simple on the cone.
const SymPoly& big_qjacobi_poly(const Partition& lambda, const Params& p, int N);

/// pi_N(lambda, nu) from
///   phi_{lambda|N} = sum_nu (t^N;q,t)_lambda / (t^N;q,t)_nu pi_N(lambda,nu) P_{nu|N}.
std::map<Partition, Scalar> pi_coeffs(const Partition& lambda, const Params& p, int N);

/// pi at level N with parameters shift_level(base, N) against level N+1 with
/// shift_level(base, N+1).
bool pi_stability_check(const Partition& lambda, const Params& base, int N);

class StabilityViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Phi_lambda in the Macdonald basis. Computed at the smallest admissible level
/// and certified against the next one (StabilityViolation on mismatch).
SymFuncExpansion phi_symfunc(const Partition& lambda, const Params& base);
/// Phi_lambda in the monomial basis of Sym.
SymFuncExpansion phi_symfunc_monomial(const Partition& lambda, const Params& base);

/// Closed-form squared norm of Phi_lambda under the limiting measure.
Scalar h_norm(const Partition& lambda, const Params& base);

/// Constant-term identities for D_N applied to p_2 and e_2.
Scalar ct_scale(const Params& p, int N);
Scalar ct_p2_formula(const Params& p, int N);
Scalar ct_e2_formula(const Params& p, int N);

/// Closed interval [lo, hi] containing an algebraic number; lo == hi when exact.
struct Interval {
  Scalar lo;
  Scalar hi;
  bool exact() const { return lo == hi; }
};

/// Exact sqrt when x is the square of a rational, otherwise an enclosure of
/// width below 10^-digits relative to the denominator scale.
Interval sqrt_enclosure(const Scalar& x, int digits = 30);

/// (1+q)/sqrt(q) and max((1+q)/sqrt(q), (1+t^2)/t).
struct QuadraticFormBounds {
  Interval first;
  Interval second;
};
QuadraticFormBounds quadratic_form_bounds(const Scalar& q, const Scalar& t);

}  // namespace qjd
