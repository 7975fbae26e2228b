#include "qjd/bigqjacobi.hpp"

#include "qjd/interp.hpp"
#include "qjd/macdonald.hpp"

#include <algorithm>
#include <mutex>
#include <tuple>

namespace qjd {

namespace {

using ParamsKey = std::tuple<Scalar, Scalar, Scalar, Scalar, Scalar, Scalar, int>;

ParamsKey params_key(const Params& p, int N) { return {p.q, p.t, p.a, p.b, p.cd.s1, p.cd.s2, N}; }

/// Shared get-or-compute map; the value is computed outside the lock.
template <class Key, class Value>
class Memo {
 public:
  template <class Fn>
  const Value& get(const Key& key, Fn&& compute) {
    {
      std::lock_guard lock(mutex_);
      if (auto it = map_.find(key); it != map_.end()) return it->second;
    }
    Value v = compute();
    std::lock_guard lock(mutex_);
    return map_.try_emplace(key, std::move(v)).first->second;
  }

 private:
  std::mutex mutex_;
  std::map<Key, Value> map_;
};

}  // namespace

OperatorCoeffs::OperatorCoeffs(const Params& p, int N) : params(p), nvars(N) {
  if (N < 1) throw std::invalid_argument("operator needs N >= 1");
  const Scalar tn = ipow(p.t, N - 1);
  const Scalar ab = p.a * p.b;
  const Scalar kp = -p.q * tn / ab;
  plus0 = kp * p.cd.s2;
  plus1 = -kp * p.cd.s1;
  plus2 = kp;
  const Scalar km = -p.q * p.q * tn / ab;
  minus0 = km * ab / (p.q * p.q);
  minus1 = -km * (p.a + p.b) / p.q;
  minus2 = km;
}

Scalar OperatorCoeffs::sigma_plus(const Scalar& x) const {
  if (x == 0) throw std::domain_error("sigma is undefined at x = 0");
  Scalar y = 1 / x;
  return plus0 + y * (plus1 + y * plus2);
}

Scalar OperatorCoeffs::sigma_minus(const Scalar& x) const {
  if (x == 0) throw std::domain_error("sigma is undefined at x = 0");
  Scalar y = 1 / x;
  return minus0 + y * (minus1 + y * minus2);
}

Scalar sigma(const Params& p, int N, const Scalar& x, Sign sign) {
  OperatorCoeffs op(p, N);
  return sign == Sign::plus ? op.sigma_plus(x) : op.sigma_minus(x);
}

// ---------------------------------------------------------------------------

UniPoly apply_D1(const UniPoly& f, const Params& p) {
  UniPoly out(f.size());
  const Scalar ab = p.a * p.b;
  const Scalar k = p.q / ab;
  for (std::size_t n = 1; n < f.size(); ++n) {
    if (f[n] == 0) continue;
    const long e = static_cast<long>(n);
    const Scalar qn = ipow(p.q, e) - 1;
    const Scalar qmn = ipow(p.q, -e) - 1;
    out[n] += f[n] * (-qmn * (1 - p.cd.s2 * ipow(p.q, e + 1) / ab));
    out[n - 1] += f[n] * k * (p.cd.s1 * qn + (p.a + p.b) * qmn);
    if (n >= 2) {
      out[n - 2] += f[n] * (-k * (qn + p.q * qmn));
    } else if (qn + p.q * qmn != 0) {
      throw std::logic_error("D x has a pole at 0");
    }
  }
  while (!out.empty() && out.back() == 0) out.pop_back();
  return out;
}

Scalar evaluate(const UniPoly& f, const Scalar& x) {
  Scalar acc = 0;
  for (auto it = f.rbegin(); it != f.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Scalar apply_D1_at(const UniPoly& f, const Params& p, const Scalar& x) {
  OperatorCoeffs op(p, 1);
  const Scalar fx = evaluate(f, x);
  return op.sigma_plus(x) * (evaluate(f, x * p.q) - fx) + op.sigma_minus(x) * (evaluate(f, x / p.q) - fx);
}

Scalar apply_DN_at(const SymPoly& f, const OperatorCoeffs& op, std::span<const Scalar> x) {
  const std::size_t n = x.size();
  if (static_cast<int>(n) != op.nvars || f.nvars() != op.nvars)
    throw VariableCountMismatch("D_N point evaluation: variable count mismatch");
  const Scalar& q = op.params.q;
  const Scalar& t = op.params.t;
  const Scalar fx = evaluate(f, x);
  std::vector<Scalar> y(x.begin(), x.end());
  Scalar total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i] == 0) throw std::domain_error("D_N point evaluation needs nonzero coordinates");
    Scalar up = 1, down = 1;
    const Scalar xt = x[i] * t, xd = x[i] / t;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const Scalar diff = x[i] - x[j];
      if (diff == 0) throw std::domain_error("D_N point evaluation needs distinct coordinates");
      up *= (xt - x[j]) / diff;
      down *= (xd - x[j]) / diff;
    }
    if (up != 0) {
      y[i] = x[i] * q;
      total += up * op.sigma_plus(x[i]) * (evaluate(f, y) - fx);
    }
    if (down != 0) {
      y[i] = x[i] / q;
      total += down * op.sigma_minus(x[i]) * (evaluate(f, y) - fx);
    }
    y[i] = x[i];
  }
  return total;
}

SymPoly apply_DN(const SymPoly& f, const Params& p) {
  const OperatorCoeffs op(p, f.nvars());
  if (f.degree() <= 0) return SymPoly(f.nvars());
  return interpolate_symmetric(f.nvars(), f.degree(),
                               [&](std::span<const Scalar> x) { return apply_DN_at(f, op, x); });
}

namespace {

const SymPoly& dn_column(const Params& p, int N, const Partition& rho) {
  static Memo<std::pair<ParamsKey, Partition>, SymPoly> memo;
  return memo.get({params_key(p, N), rho}, [&] { return apply_DN(SymPoly::monomial(N, rho), p); });
}

}  // namespace

OperatorMatrix dn_matrix(const Params& p, int N, int max_degree) {
  OperatorMatrix out;
  out.basis = partitions_up_to(max_degree, static_cast<std::size_t>(N));
  const std::size_t n = out.basis.size();
  out.matrix = RationalMatrix(n, n);
  std::map<Partition, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) index[out.basis[i]] = i;
  for (std::size_t c = 0; c < n; ++c)
    for (const auto& [kappa, v] : dn_column(p, N, out.basis[c]).terms()) out.matrix(index.at(kappa), c) = v;
  return out;
}

// ---------------------------------------------------------------------------

Scalar mu_N(const Partition& lambda, const Params& p, int N) {
  if (lambda.length() > static_cast<std::size_t>(N))
    throw std::invalid_argument("mu_N needs length(lambda) <= N");
  const Scalar k = p.cd.s2 * p.q / (p.a * p.b);
  Scalar total = 0;
  for (int i = 1; i <= N; ++i) {
    const int li = lambda[static_cast<std::size_t>(i)];
    if (li == 0) continue;
    total += k * ipow(p.t, 2 * N - i - 1) * (ipow(p.q, li) - 1) + ipow(p.t, i - 1) * (ipow(p.q, -li) - 1);
  }
  return -total;
}

Scalar mu_infinity(const Partition& lambda, const Params& base) {
  const Scalar k = base.cd.s2 * base.q / (base.a * base.b);
  Scalar total = 0;
  for (std::size_t i = 1; i <= lambda.length(); ++i) {
    const long li = lambda[i];
    const long e = static_cast<long>(i) - 1;
    total += k * ipow(base.t, -e) * (ipow(base.q, li) - 1) + ipow(base.t, e) * (ipow(base.q, -li) - 1);
  }
  return -total;
}

const SymPoly& big_qjacobi_poly(const Partition& lambda, const Params& p, int N) {
  if (lambda.length() > static_cast<std::size_t>(N))
    throw std::invalid_argument("phi" + lambda.to_string() + " needs at least " +
                                std::to_string(lambda.length()) + " variables");
  static Memo<std::pair<ParamsKey, Partition>, SymPoly> memo;
  return memo.get({params_key(p, N), lambda}, [&] {
    std::vector<Partition> support;
    for (const auto& nu : partitions_up_to(lambda.size(), static_cast<std::size_t>(N)))
      if (nu <= lambda) support.push_back(nu);
    std::sort(support.begin(), support.end(), [](const Partition& x, const Partition& y) { return y < x; });
    return triangular_eigenvector(
        N, support, [&](const Partition& rho) { return dn_column(p, N, rho); },
        [&](const Partition& rho) { return mu_N(rho, p, N); });
  });
}

std::map<Partition, Scalar> pi_coeffs(const Partition& lambda, const Params& p, int N) {
  const auto& phi = big_qjacobi_poly(lambda, p, N);
  const Scalar tN = ipow(p.t, N);
  const Scalar top = gen_pochhammer(tN, lambda, p.q, p.t);
  std::map<Partition, Scalar> out;
  for (const auto& [nu, b] : macdonald_expand(phi, p.q, p.t).coeffs)
    if (b != 0) out[nu] = b * gen_pochhammer(tN, nu, p.q, p.t) / top;
  return out;
}

bool pi_stability_check(const Partition& lambda, const Params& base, int N) {
  return pi_coeffs(lambda, shift_level(base, N), N) == pi_coeffs(lambda, shift_level(base, N + 1), N + 1);
}

SymFuncExpansion phi_symfunc(const Partition& lambda, const Params& base) {
  const int N = std::max<int>(1, static_cast<int>(lambda.length()));
  auto lo = pi_coeffs(lambda, shift_level(base, N), N);
  auto hi = pi_coeffs(lambda, shift_level(base, N + 1), N + 1);
  if (lo != hi)
    throw StabilityViolation("pi coefficients of " + lambda.to_string() + " differ between N=" +
                             std::to_string(N) + " and N=" + std::to_string(N + 1));
  SymFuncExpansion out;
  out.basis = Basis::macdonald;
  out.coeffs = std::move(lo);
  return out;
}

SymFuncExpansion phi_symfunc_monomial(const Partition& lambda, const Params& base) {
  const auto phi = phi_symfunc(lambda, base);
  const int M = std::max(1, lambda.size());
  SymFuncExpansion out;
  out.basis = Basis::monomial;
  for (const auto& [nu, c] : phi.coeffs)
    for (const auto& [kappa, v] : macdonald_poly(nu, M, base.q, base.t).terms()) {
      out.coeffs[kappa] += c * v;
      if (out.coeffs[kappa] == 0) out.coeffs.erase(kappa);
    }
  return out;
}

Scalar h_norm(const Partition& lambda, const Params& base) {
  const Scalar& q = base.q;
  const Scalar& t = base.t;
  const Scalar ab = base.a * base.b;
  const Scalar s = base.cd.s2 * q / ab;
  const auto stats = partition_stats(lambda);
  Scalar h = c_minus(q, lambda, q, t) / c_minus(t, lambda, q, t);
  h *= c_plus(s * q / t, lambda, q, t) / c_plus(s, lambda, q, t);
  h *= ipow(s * q * q * q / (ab * t), stats.size);
  h *= ipow(q, 2 * stats.conjugate.n()) / ipow(t, 2 * stats.n_lambda);
  h /= gen_pochhammer(s * q, stats.double_union, q, t);
  h *= gen_pochhammer_conjpair(q / base.a, base.cd, lambda, q, t);
  h *= gen_pochhammer_conjpair(q / base.b, base.cd, lambda, q, t);
  return h;
}

// ---------------------------------------------------------------------------

Scalar ct_scale(const Params& p, int N) {
  const Scalar abs_b = -p.b;
  return p.q * ipow(p.t, N - 1) / (p.a * abs_b) * (1 - p.q) * (1 - ipow(p.t, N)) / (1 - p.t);
}

Scalar ct_p2_formula(const Params& p, int N) {
  return ct_scale(p, N) * (1 + p.q) * (ipow(p.t, 1 - N) / p.q - 1);
}

Scalar ct_e2_formula(const Params& p, int N) { return -ct_scale(p, N) * (ipow(p.t, 1 - N) - 1); }

Interval sqrt_enclosure(const Scalar& x, int digits) {
  if (x < 0) throw std::domain_error("sqrt of a negative number");
  const mpz_class& n = x.get_num();
  const mpz_class& d = x.get_den();
  if (mpz_perfect_square_p(n.get_mpz_t()) && mpz_perfect_square_p(d.get_mpz_t())) {
    mpz_class rn, rd;
    mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
    mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
    Scalar r(rn, rd);
    r.canonicalize();
    return {r, r};
  }
  // sqrt(n/d) = sqrt(n d 10^{2k}) / (d 10^k)
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
  mpz_class radicand = n * d * scale * scale;
  mpz_class root;
  mpz_sqrt(root.get_mpz_t(), radicand.get_mpz_t());
  Scalar lo(root, d * scale), hi(root + 1, d * scale);
  lo.canonicalize();
  hi.canonicalize();
  return {lo, hi};
}

QuadraticFormBounds quadratic_form_bounds(const Scalar& q, const Scalar& t) {
  if (!(q > 0 && q < 1 && t > 0 && t < 1)) throw ParameterError("bounds need q, t in (0, 1)");
  const Interval r = sqrt_enclosure(q);
  Interval first{(1 + q) / r.hi, (1 + q) / r.lo};
  const Scalar other = (1 + t * t) / t;
  Interval second{std::max(first.lo, other), std::max(first.hi, other)};
  return {first, second};
}

}  // namespace qjd
