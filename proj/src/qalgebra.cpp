#include "qjd/qalgebra.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

namespace qjd {

Scalar ipow(const Scalar& x, long e) {
  if (e < 0) {
    if (x == 0) throw std::domain_error("ipow: negative power of zero");
    return ipow(Scalar(1) / x, -e);
  }
  Scalar result(1);
  Scalar base(x);
  unsigned long n = static_cast<unsigned long>(e);
  while (n) {
    if (n & 1U) result *= base;
    n >>= 1U;
    if (n) base *= base;
  }
  return result;
}

Scalar parse_scalar(std::string_view text) {
  std::string s(text);
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }),
          s.end());
  if (s.empty()) throw ParameterError("empty number");
  auto dot = s.find('.');
  if (dot != std::string::npos) {
    if (s.find('/') != std::string::npos) throw ParameterError("malformed number: " + s);
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    std::size_t frac = s.size() - dot - 1;
    if (digits.empty() || digits == "-" || digits == "+") throw ParameterError("malformed number: " + s);
    if (digits[0] == '+') digits.erase(0, 1);
    Scalar value;
    if (value.set_str(digits, 10) != 0) throw ParameterError("malformed number: " + s);
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac);
    value /= Scalar(scale);
    value.canonicalize();
    return value;
  }
  if (s[0] == '+') s.erase(0, 1);
  Scalar value;
  if (value.set_str(s, 10) != 0) throw ParameterError("malformed number: " + s);
  if (value.get_den() == 0) throw ParameterError("zero denominator: " + s);
  value.canonicalize();
  return value;
}

std::string to_string(const Scalar& x) { return x.get_str(); }

double to_double(const Scalar& x) { return x.get_d(); }

long double to_long_double(const Scalar& x) {
  if (x == 0) return 0.0L;
  long en = 0, ed = 0;
  double mn = mpz_get_d_2exp(&en, x.get_num_mpz_t());
  double md = mpz_get_d_2exp(&ed, x.get_den_mpz_t());
  return std::ldexp(static_cast<long double>(mn) / static_cast<long double>(md),
                    static_cast<int>(en - ed));
}

// ---------------------------------------------------------------------------

Partition::Partition(std::initializer_list<int> parts) : Partition(std::vector<int>(parts)) {}

Partition::Partition(std::vector<int> parts) : parts_(std::move(parts)) {
  while (!parts_.empty() && parts_.back() == 0) parts_.pop_back();
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (parts_[i] < 0) throw std::invalid_argument("partition with negative part");
    if (i + 1 < parts_.size() && parts_[i] < parts_[i + 1])
      throw std::invalid_argument("partition parts must be weakly decreasing");
  }
}

int Partition::size() const {
  int s = 0;
  for (int p : parts_) s += p;
  return s;
}

Partition Partition::conjugate() const {
  if (parts_.empty()) return {};
  std::vector<int> c(static_cast<std::size_t>(parts_.front()), 0);
  for (int p : parts_)
    for (int j = 0; j < p; ++j) ++c[static_cast<std::size_t>(j)];
  return Partition(std::move(c));
}

long Partition::n() const {
  long s = 0;
  for (std::size_t i = 0; i < parts_.size(); ++i) s += static_cast<long>(i) * parts_[i];
  return s;
}

Partition Partition::doubled_union() const {
  std::vector<int> d;
  d.reserve(2 * parts_.size());
  for (int p : parts_) {
    d.push_back(2 * p);
    d.push_back(2 * p);
  }
  return Partition(std::move(d));
}

bool Partition::contains(const Partition& nu) const {
  if (nu.length() > length()) return false;
  for (std::size_t i = 1; i <= nu.length(); ++i)
    if (nu[i] > (*this)[i]) return false;
  return true;
}

std::string Partition::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < parts_.size(); ++i) os << (i ? "," : "") << parts_[i];
  os << ')';
  return os.str();
}

std::strong_ordering operator<=>(const Partition& a, const Partition& b) {
  std::size_t n = std::max(a.length(), b.length());
  for (std::size_t i = 1; i <= n; ++i) {
    if (auto c = a[i] <=> b[i]; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

std::ostream& operator<<(std::ostream& os, const Partition& p) { return os << p.to_string(); }

Partition parse_partition(std::string_view text) {
  std::vector<int> parts;
  std::string cur;
  auto flush = [&] {
    if (cur.empty()) return;
    std::size_t used = 0;
    int v = std::stoi(cur, &used);
    if (used != cur.size()) throw ParameterError("malformed partition entry: " + cur);
    parts.push_back(v);
    cur.clear();
  };
  for (char c : text) {
    if (c == ',' || c == ' ') {
      flush();
    } else if (c == '(' || c == ')' || c == '[' || c == ']') {
      continue;
    } else {
      cur.push_back(c);
    }
  }
  flush();
  try {
    return Partition(std::move(parts));
  } catch (const std::invalid_argument& e) {
    throw ParameterError(std::string("invalid partition '") + std::string(text) + "': " + e.what());
  }
}

bool partial_sums_below(const Partition& mu, const Partition& lambda) {
  std::size_t n = std::max(mu.length(), lambda.length());
  long sm = 0, sl = 0;
  for (std::size_t i = 1; i <= n; ++i) {
    sm += mu[i];
    sl += lambda[i];
    if (sm > sl) return false;
  }
  return true;
}

bool dominated_by(const Partition& mu, const Partition& lambda) {
  return mu.size() == lambda.size() && partial_sums_below(mu, lambda);
}

namespace {

void partitions_rec(int remaining, int max_part, std::size_t max_len, std::vector<int>& cur,
                    std::vector<Partition>& out) {
  if (remaining == 0) {
    out.emplace_back(cur);
    return;
  }
  if (cur.size() == max_len) return;
  for (int p = std::min(remaining, max_part); p >= 1; --p) {
    cur.push_back(p);
    partitions_rec(remaining - p, p, max_len, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<Partition> partitions_of(int n, std::size_t max_len) {
  std::vector<Partition> out;
  std::vector<int> cur;
  if (n < 0) return out;
  partitions_rec(n, n, max_len, cur, out);
  return out;
}

std::vector<Partition> partitions_up_to(int d, std::size_t max_len) {
  std::vector<Partition> out;
  for (int n = 0; n <= d; ++n) {
    auto level = partitions_of(n, max_len);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

std::vector<Partition> subdiagrams(const Partition& lambda) {
  std::vector<Partition> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, std::size_t row, int cap) -> void {
    if (row > lambda.length()) {
      out.emplace_back(cur);
      return;
    }
    for (int p = std::min(cap, lambda[row]); p >= 0; --p) {
      cur.push_back(p);
      if (p == 0) {
        out.emplace_back(cur);
      } else {
        self(self, row + 1, p);
      }
      cur.pop_back();
    }
  };
  rec(rec, 1, lambda.empty() ? 0 : lambda[1]);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

PartitionStats partition_stats(const Partition& lambda) {
  return {lambda.conjugate(), lambda.n(), lambda.doubled_union(), lambda.size()};
}

// ---------------------------------------------------------------------------

ConjugatePair ConjugatePair::from_real_imag(const Scalar& re, const Scalar& im) {
  if (im == 0) throw ParameterError("gamma must be non-real (imaginary part 0 given)");
  ConjugatePair p{2 * re, re * re + im * im};
  return p;
}

void ConjugatePair::validate() const {
  if (!(s2 > 0)) throw ParameterError("conjugate pair requires cd > 0");
  if (!(s1 * s1 < 4 * s2)) throw ParameterError("conjugate pair requires (c+d)^2 < 4cd (c non-real)");
}

void Params::validate() const {
  if (!(q > 0 && q < 1)) throw ParameterError("constraint 0 < q < 1 violated");
  if (!(t > 0 && t < 1)) throw ParameterError("constraint 0 < t < 1 violated");
  if (!(b < 0)) throw ParameterError("constraint b < 0 violated");
  if (!(a > 0)) throw ParameterError("constraint a > 0 violated");
  cd.validate();
}

std::string Params::to_string() const {
  std::ostringstream os;
  os << "q=" << q << " t=" << t << " a=" << a << " b=" << b << " c+d=" << cd.s1 << " cd=" << cd.s2;
  return os.str();
}

Params shift_level(const Params& base, int N) {
  if (N < 1) throw std::invalid_argument("shift_level requires N >= 1");
  Params p = base;
  Scalar f = ipow(base.t, 1 - N);
  p.cd.s1 = base.cd.s1 * f;
  p.cd.s2 = base.cd.s2 * f * f;
  return p;
}

// ---------------------------------------------------------------------------

Scalar gen_pochhammer(const Scalar& z, const Partition& lambda, const Scalar& q,
                      const Scalar& t) {
  Scalar result(1);
  for (std::size_t i = 1; i <= lambda.length(); ++i) {
    Scalar v = ipow(t, 1 - static_cast<long>(i));
    for (int j = 1; j <= lambda[i]; ++j) {
      result *= 1 - z * v;
      v *= q;
    }
  }
  return result;
}

Scalar gen_pochhammer_conjpair(const Scalar& u, const ConjugatePair& pair,
                               const Partition& lambda, const Scalar& q, const Scalar& t) {
  Scalar result(1);
  for (std::size_t i = 1; i <= lambda.length(); ++i) {
    Scalar v = ipow(t, 1 - static_cast<long>(i));
    for (int j = 1; j <= lambda[i]; ++j) {
      Scalar uv = u * v;
      result *= 1 - pair.s1 * uv + pair.s2 * uv * uv;
      v *= q;
    }
  }
  return result;
}

Scalar c_plus(const Scalar& x, const Partition& lambda, const Scalar& q, const Scalar& t) {
  Partition conj = lambda.conjugate();
  Scalar result(1);
  for (std::size_t i = 1; i <= lambda.length(); ++i)
    for (int j = 1; j <= lambda[i]; ++j)
      result *= 1 - ipow(q, lambda[i] + j - 1) *
                        ipow(t, 2 - conj[static_cast<std::size_t>(j)] - static_cast<long>(i)) * x;
  return result;
}

Scalar c_minus(const Scalar& x, const Partition& lambda, const Scalar& q, const Scalar& t) {
  Partition conj = lambda.conjugate();
  Scalar result(1);
  for (std::size_t i = 1; i <= lambda.length(); ++i)
    for (int j = 1; j <= lambda[i]; ++j)
      result *= 1 - ipow(q, lambda[i] - j) *
                        ipow(t, conj[static_cast<std::size_t>(j)] - static_cast<long>(i)) * x;
  return result;
}

}  // namespace qjd
