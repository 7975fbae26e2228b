#include "qjd/macdonald.hpp"

#include "qjd/interp.hpp"

#include <map>
#include <mutex>
#include <tuple>

namespace qjd {

namespace {

// T_{q,i} shifts are evaluated at y with y_i = q x_i.
Scalar macdonald_operator_at(const SymPoly& f, const Scalar& q, const Scalar& t,
                             std::span<const Scalar> x) {
  const std::size_t n = x.size();
  std::vector<Scalar> y(x.begin(), x.end());
  Scalar total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    Scalar ratio = 1;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) ratio *= (t * x[i] - x[j]) / (x[i] - x[j]);
    y[i] = q * x[i];
    total += ratio * evaluate(f, y);
    y[i] = x[i];
  }
  return total;
}

using Key = std::tuple<int, Scalar, Scalar, Partition>;

}  // namespace

SymPoly macdonald_operator_apply(const SymPoly& f, const Scalar& q, const Scalar& t) {
  return interpolate_symmetric(f.nvars(), f.degree(), [&](std::span<const Scalar> x) {
    return macdonald_operator_at(f, q, t, x);
  });
}

Scalar macdonald_eigenvalue(const Partition& lambda, int nvars, const Scalar& q, const Scalar& t) {
  Scalar total = 0;
  for (int i = 1; i <= nvars; ++i)
    total += ipow(q, lambda[static_cast<std::size_t>(i)]) * ipow(t, nvars - i);
  return total;
}

const SymPoly& macdonald_poly(const Partition& lambda, int nvars, const Scalar& q, const Scalar& t) {
  if (lambda.length() > static_cast<std::size_t>(nvars))
    throw std::invalid_argument("P" + lambda.to_string() + " needs at least " +
                                std::to_string(lambda.length()) + " variables");
  static std::mutex mutex;
  static std::map<Key, SymPoly> cache;
  Key key{nvars, q, t, lambda};
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }

  std::vector<Partition> support;
  for (const auto& nu : partitions_of(lambda.size(), static_cast<std::size_t>(nvars)))
    if (nu <= lambda && dominated_by(nu, lambda)) support.push_back(nu);

  SymPoly p = triangular_eigenvector(
      nvars, support,
      [&](const Partition& rho) { return macdonald_operator_apply(SymPoly::monomial(nvars, rho), q, t); },
      [&](const Partition& rho) { return macdonald_eigenvalue(rho, nvars, q, t); });

  std::lock_guard lock(mutex);
  return cache.try_emplace(key, std::move(p)).first->second;
}

SymFuncExpansion macdonald_expand(const SymPoly& f, const Scalar& q, const Scalar& t) {
  SymFuncExpansion out;
  out.basis = Basis::macdonald;
  SymPoly rest = f;
  while (!rest.is_zero()) {
    const auto& [top, c] = *rest.terms().rbegin();
    const Partition nu = top;
    const Scalar coeff = c;
    out.coeffs[nu] = coeff;
    rest -= macdonald_poly(nu, f.nvars(), q, t) * coeff;
  }
  return out;
}

SymPoly macdonald_to_monomial(const SymFuncExpansion& f, int nvars, const Scalar& q, const Scalar& t) {
  if (f.basis != Basis::macdonald) throw std::invalid_argument("expected a Macdonald-basis expansion");
  SymPoly out(nvars);
  for (const auto& [nu, c] : f.coeffs) {
    if (nu.length() > static_cast<std::size_t>(nvars) || c == 0) continue;
    out += macdonald_poly(nu, nvars, q, t) * c;
  }
  return out;
}

bool macdonald_stability_check(const Partition& lambda, int nvars, const Scalar& q, const Scalar& t) {
  const int d = lambda.size();
  if (nvars < d) throw std::invalid_argument("stability check requires N >= |lambda|");
  return lift(macdonald_poly(lambda, nvars, q, t), d) == lift(macdonald_poly(lambda, nvars + 1, q, t), d);
}

}  // namespace qjd
