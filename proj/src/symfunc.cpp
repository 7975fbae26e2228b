#include "qjd/symfunc.hpp"

#include <algorithm>
#include <mutex>
#include <sstream>
#include <tuple>

namespace qjd {

SymPoly SymPoly::constant(int nvars, const Scalar& c) {
  SymPoly p(nvars);
  p.add_term(Partition{}, c);
  return p;
}

SymPoly SymPoly::monomial(int nvars, const Partition& lambda, const Scalar& c) {
  SymPoly p(nvars);
  p.add_term(lambda, c);
  return p;
}

SymPoly SymPoly::power_sum(int nvars, int m) { return monomial(nvars, Partition{m}); }

SymPoly SymPoly::elementary(int nvars, int k) {
  if (k > nvars) return SymPoly(nvars);
  return monomial(nvars, Partition(std::vector<int>(static_cast<std::size_t>(k), 1)));
}

Scalar SymPoly::coeff(const Partition& lambda) const {
  auto it = terms_.find(lambda);
  return it == terms_.end() ? Scalar(0) : it->second;
}

void SymPoly::add_term(const Partition& lambda, const Scalar& c) {
  if (c == 0) return;
  if (lambda.length() > static_cast<std::size_t>(nvars_)) {
    throw std::invalid_argument("monomial " + lambda.to_string() + " has more than " +
                                std::to_string(nvars_) + " parts");
  }
  auto [it, inserted] = terms_.try_emplace(lambda, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

int SymPoly::degree() const {
  int d = -1;
  for (const auto& [lam, c] : terms_) d = std::max(d, lam.size());
  return d;
}

SymPoly SymPoly::homogeneous_component(int d) const {
  SymPoly out(nvars_);
  for (const auto& [lam, c] : terms_)
    if (lam.size() == d) out.terms_.emplace(lam, c);
  return out;
}

SymPoly& SymPoly::operator+=(const SymPoly& o) {
  if (o.nvars_ != nvars_) throw VariableCountMismatch("adding polynomials in different variable counts");
  for (const auto& [lam, c] : o.terms_) add_term(lam, c);
  return *this;
}

SymPoly& SymPoly::operator-=(const SymPoly& o) {
  if (o.nvars_ != nvars_) throw VariableCountMismatch("subtracting polynomials in different variable counts");
  for (const auto& [lam, c] : o.terms_) add_term(lam, -c);
  return *this;
}

SymPoly& SymPoly::operator*=(const Scalar& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [lam, v] : terms_) v *= c;
  return *this;
}

std::string SymPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    os << (first ? "" : " + ") << "(" << it->second << ")*m" << it->first;
    first = false;
  }
  return os.str();
}

// ---------------------------------------------------------------------------

namespace {

/// Distinct permutations of lambda padded with zeros to n entries.
std::vector<std::vector<int>> distinct_permutations(const Partition& lambda, std::size_t n) {
  std::vector<int> e(n, 0);
  for (std::size_t i = 0; i < lambda.length(); ++i) e[i] = lambda.parts()[i];
  std::sort(e.begin(), e.end());
  std::vector<std::vector<int>> out;
  do {
    out.push_back(e);
  } while (std::next_permutation(e.begin(), e.end()));
  return out;
}

using ProductKey = std::tuple<int, Partition, Partition>;
using ProductTable = std::map<Partition, long>;

const ProductTable& monomial_product(int n, const Partition& lam, const Partition& mu) {
  static std::mutex mutex;
  static std::map<ProductKey, ProductTable> cache;
  std::lock_guard lock(mutex);
  ProductKey key{n, std::min(lam, mu), std::max(lam, mu)};
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  ProductTable table;
  const auto pa = distinct_permutations(lam, static_cast<std::size_t>(n));
  const auto pb = distinct_permutations(mu, static_cast<std::size_t>(n));
  std::vector<int> v(static_cast<std::size_t>(n));
  for (const auto& a : pa) {
    for (const auto& b : pb) {
      bool sorted = true;
      for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = a[i] + b[i];
        if (i > 0 && v[i] > v[i - 1]) {
          sorted = false;
          break;
        }
      }
      if (sorted) ++table[Partition(v)];
    }
  }
  return cache.emplace(key, std::move(table)).first->second;
}

}  // namespace

SymPoly multiply(const SymPoly& f, const SymPoly& g) {
  if (f.nvars() != g.nvars()) throw VariableCountMismatch("multiplying polynomials in different variable counts");
  SymPoly out(f.nvars());
  for (const auto& [lam, a] : f.terms())
    for (const auto& [mu, b] : g.terms()) {
      Scalar ab = a * b;
      for (const auto& [nu, count] : monomial_product(f.nvars(), lam, mu)) out.add_term(nu, ab * count);
    }
  return out;
}

template <class T>
T monomial_symmetric(const Partition& lambda, std::span<const T> x) {
  std::vector<T> nz;
  nz.reserve(x.size());
  for (const T& v : x)
    if (v != 0) nz.push_back(v);
  if (lambda.length() > nz.size()) return T(0);
  if (lambda.empty()) return T(1);
  const int maxp = lambda[1];
  std::vector<std::vector<T>> pw(nz.size(), std::vector<T>(static_cast<std::size_t>(maxp) + 1));
  for (std::size_t i = 0; i < nz.size(); ++i) {
    pw[i][0] = 1;
    for (int k = 1; k <= maxp; ++k) pw[i][static_cast<std::size_t>(k)] = pw[i][static_cast<std::size_t>(k) - 1] * nz[i];
  }
  std::vector<int> e(nz.size(), 0);
  for (std::size_t i = 0; i < lambda.length(); ++i) e[i] = lambda.parts()[i];
  std::sort(e.begin(), e.end());
  T total(0);
  do {
    T term(1);
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i]) term *= pw[i][static_cast<std::size_t>(e[i])];
    total += term;
  } while (std::next_permutation(e.begin(), e.end()));
  return total;
}

template Scalar monomial_symmetric<Scalar>(const Partition&, std::span<const Scalar>);
template long double monomial_symmetric<long double>(const Partition&, std::span<const long double>);
template double monomial_symmetric<double>(const Partition&, std::span<const double>);

namespace {

template <class T>
T evaluate_impl(const SymPoly& f, std::span<const T> coords) {
  std::size_t nonzero = 0;
  for (const T& v : coords)
    if (v != 0) ++nonzero;
  if (nonzero > static_cast<std::size_t>(f.nvars()))
    throw std::invalid_argument("evaluation point has more nonzero coordinates than variables");
  T total(0);
  for (const auto& [lam, c] : f.terms()) {
    if constexpr (std::is_same_v<T, Scalar>) {
      total += c * monomial_symmetric<T>(lam, coords);
    } else {
      total += static_cast<T>(to_long_double(c)) * monomial_symmetric<T>(lam, coords);
    }
  }
  return total;
}

}  // namespace

Scalar evaluate(const SymPoly& f, std::span<const Scalar> coords) { return evaluate_impl(f, coords); }

long double evaluate(const SymPoly& f, std::span<const long double> coords) {
  return evaluate_impl(f, coords);
}

Scalar power_sum_tail_bound(const Scalar& abs_x_cut, int m, const Scalar& t) {
  Scalar tm = ipow(t, m);
  return ipow(abs_x_cut, m) / (1 - tm);
}

// ---------------------------------------------------------------------------

std::string to_string(Basis b) {
  switch (b) {
    case Basis::monomial: return "monomial";
    case Basis::macdonald: return "macdonald";
    case Basis::bigqjacobi: return "bigqjacobi";
  }
  return "monomial";
}

Basis parse_basis(const std::string& s) {
  if (s == "monomial") return Basis::monomial;
  if (s == "macdonald") return Basis::macdonald;
  if (s == "bigqjacobi") return Basis::bigqjacobi;
  throw std::invalid_argument("unknown basis: " + s);
}

int SymFuncExpansion::degree() const {
  int d = -1;
  for (const auto& [lam, c] : coeffs)
    if (c != 0) d = std::max(d, lam.size());
  return d;
}

SymPoly project(const SymFuncExpansion& f, int nvars) {
  if (f.basis != Basis::monomial) throw std::invalid_argument("project expects a monomial-basis expansion");
  SymPoly out(nvars);
  for (const auto& [lam, c] : f.coeffs)
    if (lam.length() <= static_cast<std::size_t>(nvars)) out.add_term(lam, c);
  return out;
}

SymFuncExpansion lift(const SymPoly& f, int d) {
  if (d > f.nvars()) {
    throw std::invalid_argument("lift requires d <= N (d=" + std::to_string(d) +
                                ", N=" + std::to_string(f.nvars()) + ")");
  }
  if (f.degree() > d) throw std::invalid_argument("lift requires deg f <= d");
  SymFuncExpansion out;
  out.basis = Basis::monomial;
  out.coeffs = f.terms();
  return out;
}

// ---------------------------------------------------------------------------

namespace {

nlohmann::json terms_json(const std::map<Partition, Scalar>& terms) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [lam, c] : terms) {
    if (c == 0) continue;
    arr.push_back({{"partition", lam.parts()},
                   {"num", c.get_num().get_str()},
                   {"den", c.get_den().get_str()}});
  }
  return arr;
}

std::map<Partition, Scalar> terms_from_json(const nlohmann::json& arr) {
  std::map<Partition, Scalar> out;
  for (const auto& term : arr) {
    Partition lam(term.at("partition").get<std::vector<int>>());
    auto read = [](const nlohmann::json& v) {
      return v.is_string() ? mpz_class(v.get<std::string>()) : mpz_class(v.get<long>());
    };
    Scalar c(read(term.at("num")), read(term.at("den")));
    c.canonicalize();
    if (c != 0) out[lam] += c;
  }
  return out;
}

}  // namespace

nlohmann::json to_json(const SymPoly& f) {
  return {{"N", f.nvars()}, {"basis", "monomial"}, {"terms", terms_json(f.terms())}};
}

nlohmann::json to_json(const SymFuncExpansion& f, int nvars) {
  nlohmann::json j = {{"basis", to_string(f.basis)}, {"terms", terms_json(f.coeffs)}};
  j["N"] = nvars < 0 ? nlohmann::json("inf") : nlohmann::json(nvars);
  return j;
}

SymPoly sympoly_from_json(const nlohmann::json& j) {
  if (j.at("basis").get<std::string>() != "monomial")
    throw std::invalid_argument("SymPoly JSON must use the monomial basis");
  SymPoly p(j.at("N").get<int>());
  for (const auto& [lam, c] : terms_from_json(j.at("terms"))) p.add_term(lam, c);
  return p;
}

SymFuncExpansion expansion_from_json(const nlohmann::json& j) {
  SymFuncExpansion f;
  f.basis = parse_basis(j.at("basis").get<std::string>());
  f.coeffs = terms_from_json(j.at("terms"));
  return f;
}

}  // namespace qjd
