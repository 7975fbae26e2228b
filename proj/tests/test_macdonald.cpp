#include "qjd/macdonald.hpp"

#include "support.hpp"

#include <doctest.h>

using namespace qjd;

namespace {

// The first Macdonald operator written out directly, no interpolation.
Scalar E_at(const SymPoly& f, const Scalar& q, const Scalar& t, const std::vector<Scalar>& x) {
  Scalar total = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    Scalar a = 1;
    for (std::size_t j = 0; j < x.size(); ++j)
      if (j != i) a *= (t * x[i] - x[j]) / (x[i] - x[j]);
    auto y = x;
    y[i] *= q;
    total += a * evaluate(f, y);
  }
  return total;
}

}  // namespace

TEST_CASE("E on constants") {
  const Scalar q(1, 3), t(2, 7);
  for (int N = 1; N <= 4; ++N) {
    SymPoly one = SymPoly::constant(N, 1);
    // degree-0 interpolation is a single point
    std::mt19937_64 rng(static_cast<unsigned>(N));
    auto x = testing::generic_point(rng, N);
    CHECK(E_at(one, q, t, x) == (1 - ipow(t, N)) / (1 - t));
  }
}

TEST_CASE("E applied through interpolation agrees with the direct formula") {
  std::mt19937_64 rng(71);
  const Scalar q(2, 5), t(1, 3);
  for (int N = 1; N <= 3; ++N)
    for (const auto& lam : partitions_up_to(3, static_cast<std::size_t>(N))) {
      if (lam.empty()) continue;
      SymPoly m = SymPoly::monomial(N, lam);
      SymPoly Em = macdonald_operator_apply(m, q, t);
      for (int k = 0; k < 3; ++k) {
        auto x = testing::generic_point(rng, N);
        CHECK(evaluate(Em, x) == E_at(m, q, t, x));
      }
    }
}

TEST_CASE("E is lex-triangular with the stated diagonal (N=2, |lambda|<=3)") {
  const Scalar q(3, 7), t(1, 4);
  for (const auto& lam : partitions_up_to(3, 2)) {
    if (lam.empty()) continue;
    SymPoly Em = macdonald_operator_apply(SymPoly::monomial(2, lam), q, t);
    for (const auto& [nu, c] : Em.terms()) {
      CHECK(nu.size() == lam.size());
      CHECK(nu <= lam);
    }
    CHECK(Em.coeff(lam) == macdonald_eigenvalue(lam, 2, q, t));
  }
}

TEST_CASE("property: eigenvalues are distinct for random (q, t)") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const Scalar q = testing::unit_rational(rng), t = testing::unit_rational(rng);
    for (int N = 1; N <= 4; ++N)
      for (int n = 1; n <= 4; ++n) {
        auto ps = partitions_of(n, static_cast<std::size_t>(N));
        for (std::size_t i = 0; i < ps.size(); ++i)
          for (std::size_t j = i + 1; j < ps.size(); ++j)
            CHECK(macdonald_eigenvalue(ps[i], N, q, t) != macdonald_eigenvalue(ps[j], N, q, t));
      }
  }
}

TEST_CASE("small Macdonald polynomials") {
  const Scalar q(1, 3), t(2, 5);
  for (int N = 1; N <= 3; ++N) CHECK(macdonald_poly(Partition{1}, N, q, t) == SymPoly::power_sum(N, 1));
  CHECK(macdonald_poly(Partition{1, 1}, 2, q, t) == SymPoly::elementary(2, 2));
  const SymPoly& p2 = macdonald_poly(Partition{2}, 2, q, t);
  CHECK(p2.coeff(Partition{2}) == 1);
  CHECK(p2.coeff(Partition{1, 1}) == (1 + q) * (1 - t) / (1 - q * t));
  CHECK_THROWS(macdonald_poly(Partition{1, 1, 1}, 2, q, t));
}

TEST_CASE("P_(2)|2 against a pointwise two-by-two eigen-solve") {
  // E(m2 + c m11) = e (m2 + c m11) at any point x gives c directly.
  std::mt19937_64 rng(404);
  for (int trial = 0; trial < 10; ++trial) {
    const Scalar q = testing::unit_rational(rng), t = testing::unit_rational(rng);
    if (q * t == 1) continue;
    const Scalar e = q * q * t + 1;
    SymPoly m2 = SymPoly::monomial(2, Partition{2}), m11 = SymPoly::monomial(2, Partition{1, 1});
    auto x = testing::generic_point(rng, 2);
    const Scalar denom = E_at(m11, q, t, x) - e * evaluate(m11, x);
    if (denom == 0) continue;
    const Scalar c = (e * evaluate(m2, x) - E_at(m2, q, t, x)) / denom;
    CHECK(c == (1 + q) * (1 - t) / (1 - q * t));
    CHECK(macdonald_poly(Partition{2}, 2, q, t).coeff(Partition{1, 1}) == c);
  }
}

TEST_CASE("q = t gives Schur polynomials") {
  const Scalar q(2, 7);
  auto m = [](std::initializer_list<int> p, int c = 1) { return SymPoly::monomial(3, Partition(p), c); };
  CHECK(macdonald_poly(Partition{2, 1}, 3, q, q) == m({2, 1}) + m({1, 1, 1}, 2));
  CHECK(macdonald_poly(Partition{3}, 3, q, q) == m({3}) + m({2, 1}) + m({1, 1, 1}));
  CHECK(macdonald_poly(Partition{3, 1}, 3, q, q) == m({3, 1}) + m({2, 2}) + m({2, 1, 1}, 2));
  CHECK(macdonald_poly(Partition{2, 2}, 3, q, q) == m({2, 2}) + m({2, 1, 1}));
  CHECK(macdonald_poly(Partition{4}, 3, q, q) == m({4}) + m({3, 1}) + m({2, 2}) + m({2, 1, 1}));
}

TEST_CASE("property: eigenrelation holds exactly for N <= 3, |lambda| <= 4") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 3; ++trial) {
    const Scalar q = testing::unit_rational(rng), t = testing::unit_rational(rng);
    for (int N = 1; N <= 3; ++N)
      for (const auto& lam : partitions_up_to(4, static_cast<std::size_t>(N))) {
        if (lam.empty()) continue;
        const SymPoly& P = macdonald_poly(lam, N, q, t);
        CHECK((macdonald_operator_apply(P, q, t) - P * macdonald_eigenvalue(lam, N, q, t)).is_zero());
        for (const auto& [nu, c] : P.terms()) CHECK(dominated_by(nu, lam));
      }
  }
}

TEST_CASE("stability of Macdonald polynomials in N") {
  const Scalar q(1, 3), t(2, 5);
  CHECK(macdonald_stability_check(Partition{1}, 1, q, t));
  CHECK(macdonald_stability_check(Partition{2}, 2, q, t));
  CHECK(macdonald_stability_check(Partition{2, 1}, 3, q, t));
  CHECK_THROWS(macdonald_stability_check(Partition{2, 1}, 2, q, t));
}

TEST_CASE("basis conversion round trip") {
  std::mt19937_64 rng(31);
  const Scalar q(1, 2), t(1, 3);
  for (int trial = 0; trial < 10; ++trial) {
    SymPoly f(3);
    for (const auto& lam : partitions_up_to(3, 3)) f.add_term(lam, testing::rational_in(rng, -3, 3, 5));
    auto F = macdonald_expand(f, q, t);
    CHECK(F.basis == Basis::macdonald);
    CHECK(macdonald_to_monomial(F, 3, q, t) == f);
  }
}
