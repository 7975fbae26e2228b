#pragma once

// Shared generators for the test binaries.

#include "qjd/qalgebra.hpp"
#include "qjd/symfunc.hpp"

#include <random>
#include <vector>

namespace qjd::testing {

inline Scalar rational_in(std::mt19937_64& rng, int lo_num, int hi_num, int max_den) {
  std::uniform_int_distribution<int> den(1, max_den);
  const int d = den(rng);
  std::uniform_int_distribution<int> num(lo_num * d, hi_num * d);
  Scalar v(num(rng), d);
  v.canonicalize();
  return v;
}

/// Strictly inside (0, 1).
inline Scalar unit_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> den(3, 11);
  const int d = den(rng);
  std::uniform_int_distribution<int> num(1, d - 1);
  Scalar v(num(rng), d);
  v.canonicalize();
  return v;
}

/// Admissible (q, t; a, b; c, conj c) with small denominators.
inline Params random_params(std::mt19937_64& rng) {
  Params p;
  p.q = unit_rational(rng);
  p.t = unit_rational(rng);
  std::uniform_int_distribution<int> n(1, 9), d(1, 4);
  p.a = Scalar(n(rng), d(rng));
  p.b = -Scalar(n(rng), d(rng));
  p.a.canonicalize();
  p.b.canonicalize();
  Scalar re = rational_in(rng, -2, 2, 4);
  Scalar im = 0;
  while (im == 0) im = rational_in(rng, -2, 2, 4);
  p.cd = ConjugatePair::from_real_imag(re, im);
  p.validate();
  return p;
}

/// The tuple most of the suites use.
inline Params reference_params() {
  return Params{Scalar(1, 4), Scalar(1, 5), Scalar(2), Scalar(-3),
                ConjugatePair::from_real_imag(Scalar(1, 2), Scalar(1))};
}

/// Distinct nonzero rationals.
inline std::vector<Scalar> generic_point(std::mt19937_64& rng, int n) {
  std::vector<Scalar> x;
  std::uniform_int_distribution<int> num(-40, 40), den(1, 7);
  while (static_cast<int>(x.size()) < n) {
    Scalar v(num(rng), den(rng));
    v.canonicalize();
    if (v == 0) continue;
    bool ok = true;
    for (const auto& y : x)
      if (y == v) ok = false;
    if (ok) x.push_back(v);
  }
  return x;
}

}  // namespace qjd::testing
