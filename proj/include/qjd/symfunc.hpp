#pragma once

// Symmetric polynomials in N variables over the monomial basis, and symmetric
// functions as finite basis expansions.

#include "qjd/qalgebra.hpp"

#include <cstddef>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace qjd {

/// Element of Sym(N) stored as m_lambda coefficients (zero terms are never
/// stored, every key has at most N parts).
class SymPoly {
 public:
  explicit SymPoly(int nvars = 0) : nvars_(nvars) {}

  static SymPoly constant(int nvars, const Scalar& c);
  static SymPoly monomial(int nvars, const Partition& lambda, const Scalar& c = 1);
  /// p_m = m_(m)
  static SymPoly power_sum(int nvars, int m);
  /// e_k = m_(1^k)
  static SymPoly elementary(int nvars, int k);

  int nvars() const { return nvars_; }
  const std::map<Partition, Scalar>& terms() const { return terms_; }
  Scalar coeff(const Partition& lambda) const;
  void add_term(const Partition& lambda, const Scalar& c);

  bool is_zero() const { return terms_.empty(); }
  /// -1 for the zero polynomial.
  int degree() const;
  Scalar constant_term() const { return coeff(Partition{}); }
  SymPoly homogeneous_component(int d) const;

  SymPoly& operator+=(const SymPoly& o);
  SymPoly& operator-=(const SymPoly& o);
  SymPoly& operator*=(const Scalar& c);
  friend SymPoly operator+(SymPoly a, const SymPoly& b) { return a += b; }
  friend SymPoly operator-(SymPoly a, const SymPoly& b) { return a -= b; }
  friend SymPoly operator*(SymPoly a, const Scalar& c) { return a *= c; }
  friend SymPoly operator*(const Scalar& c, SymPoly a) { return a *= c; }
  friend bool operator==(const SymPoly& a, const SymPoly& b) = default;

  std::string to_string() const;

 private:
  int nvars_;
  std::map<Partition, Scalar> terms_;
};

/// Thrown on operations between polynomials in different numbers of variables.
class VariableCountMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

SymPoly multiply(const SymPoly& f, const SymPoly& g);

/// m_lambda at the explicit point x (all coordinates, zeros allowed).
template <class T>
T monomial_symmetric(const Partition& lambda, std::span<const T> x);

/// f at the listed coordinates, padded with zeros up to nvars. Throws when more
/// than nvars coordinates are nonzero.
Scalar evaluate(const SymPoly& f, std::span<const Scalar> coords);
long double evaluate(const SymPoly& f, std::span<const long double> coords);

/// Per-side tail bound |sum_{i>=cut} x_i^m| <= |x_cut|^m / (1 - t^m) for a
/// sequence decaying at least geometrically with ratio t.
Scalar power_sum_tail_bound(const Scalar& abs_x_cut, int m, const Scalar& t);

// ---------------------------------------------------------------------------

enum class Basis { monomial, macdonald, bigqjacobi };
std::string to_string(Basis b);
Basis parse_basis(const std::string& s);

/// A finite expansion in one of the bases of Sym.
struct SymFuncExpansion {
  Basis basis = Basis::monomial;
  std::map<Partition, Scalar> coeffs;

  int degree() const;
  friend bool operator==(const SymFuncExpansion& a, const SymFuncExpansion& b) = default;
};

/// Canonical projection Sym -> Sym(N): drops monomials with more than N parts.
SymPoly project(const SymFuncExpansion& f, int nvars);

/// Inverse of the projection on Sym(N)_{<=d}; requires deg f <= d <= N.
SymFuncExpansion lift(const SymPoly& f, int d);

// ---------------------------------------------------------------------------
// JSON: {"N":..., "basis":..., "terms":[{"partition":[...],"num":"...","den":"..."}]}
// num/den are decimal strings so arbitrarily large values survive.

nlohmann::json to_json(const SymPoly& f);
nlohmann::json to_json(const SymFuncExpansion& f, int nvars = -1);
SymPoly sympoly_from_json(const nlohmann::json& j);
SymFuncExpansion expansion_from_json(const nlohmann::json& j);

}  // namespace qjd
