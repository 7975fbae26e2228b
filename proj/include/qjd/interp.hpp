#pragma once

// Recovering the monomial expansion of a symmetric polynomial from its values.
// Operators whose output is known to be a symmetric polynomial of bounded
// degree (q-difference operators with rational coefficients) are applied by
// evaluating them at exact points and solving for the coefficients.

#include "qjd/linalg.hpp"
#include "qjd/symfunc.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace qjd {

/// The values did not come from a symmetric polynomial of the declared degree.
/// Seeing this means an operator was applied outside its domain or a bug.
class InterpolationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using PointFunction = std::function<Scalar(std::span<const Scalar>)>;

/// Sample points for Sym(N)_{<=d}: one row per basis element plus a final
/// verification point. Coordinates are distinct nonzero integers drawn from a
/// fixed-seed generator, so the set is reproducible.
struct InterpolationGrid {
  int nvars = 0;
  int max_degree = 0;
  std::uint64_t seed = 0;
  std::vector<Partition> basis;
  std::vector<std::vector<Scalar>> points;  // basis.size() + 1 entries
  RationalMatrix inverse;                   // inverse of [m_basis[c](points[r])]
};

inline constexpr std::uint64_t kInterpolationSeed = 20240611;

/// Cached per (N, d).
const InterpolationGrid& interpolation_grid(int nvars, int max_degree);

/// Symmetric polynomial g of degree <= d in N variables with g(x) = values(x)
/// on the grid; the extra point is checked and a mismatch throws.
SymPoly interpolate_symmetric(int nvars, int max_degree, const PointFunction& values);

}  // namespace qjd
