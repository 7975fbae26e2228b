#pragma once

// Exact scalars, partitions and the (q,t)-Pochhammer building blocks used by
// every polynomial family in the library.

#include <gmpxx.h>

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qjd {

using Scalar = mpq_class;

/// Thrown when a parameter tuple violates one of its admissibility constraints.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// x^e for any integer e; x must be nonzero when e < 0.
Scalar ipow(const Scalar& x, long e);

/// Parses "p/q", "p" or a finite decimal such as "-0.25" into an exact rational.
Scalar parse_scalar(std::string_view text);

std::string to_string(const Scalar& x);
double to_double(const Scalar& x);
long double to_long_double(const Scalar& x);

// ---------------------------------------------------------------------------
// Partitions

/// Weakly decreasing sequence of positive integers; trailing zeros are trimmed
/// on construction.
class Partition {
 public:
  Partition() = default;
  Partition(std::initializer_list<int> parts);
  explicit Partition(std::vector<int> parts);

  const std::vector<int>& parts() const { return parts_; }
  /// lambda_i with 1-based row index; zero past the last row.
  int operator[](std::size_t row) const {
    return row >= 1 && row <= parts_.size() ? parts_[row - 1] : 0;
  }
  std::size_t length() const { return parts_.size(); }
  int size() const;
  bool empty() const { return parts_.empty(); }

  Partition conjugate() const;
  /// n(lambda) = sum_i (i-1) lambda_i.
  long n() const;
  /// (2l1, 2l1, 2l2, 2l2, ...)
  Partition doubled_union() const;
  /// Box containment nu subset of this.
  bool contains(const Partition& nu) const;

  std::string to_string() const;

  /// Lexicographic comparison of zero-padded part sequences. This is a total
  /// order extending the partial-sum order used for triangularity.
  friend std::strong_ordering operator<=>(const Partition& a, const Partition& b);
  friend bool operator==(const Partition& a, const Partition& b) = default;

 private:
  std::vector<int> parts_;
};

std::ostream& operator<<(std::ostream& os, const Partition& p);

/// Parses "2,1" (or "" for the empty partition); rejects non-monotone input.
Partition parse_partition(std::string_view text);

/// Dominance for partitions of equal size: mu <= lambda iff every partial sum
/// of mu is at most the corresponding partial sum of lambda.
bool dominated_by(const Partition& mu, const Partition& lambda);
/// Partial-sum order without the equal-size requirement.
bool partial_sums_below(const Partition& mu, const Partition& lambda);

/// All partitions of n with at most max_len parts, in decreasing lex order.
std::vector<Partition> partitions_of(int n, std::size_t max_len);
/// All partitions with |lambda| <= d and at most max_len parts, ordered by
/// degree then decreasing lex order within each degree.
std::vector<Partition> partitions_up_to(int d, std::size_t max_len);
/// All nu contained in lambda (including the empty and full diagrams).
std::vector<Partition> subdiagrams(const Partition& lambda);

struct PartitionStats {
  Partition conjugate;
  long n_lambda = 0;
  Partition double_union;
  int size = 0;
};
PartitionStats partition_stats(const Partition& lambda);

// ---------------------------------------------------------------------------
// Parameters

/// A complex pair c = conj(d) stored through s1 = c + d and s2 = c d.
struct ConjugatePair {
  Scalar s1;
  Scalar s2;

  /// Pair from c = re + i*im (im != 0).
  static ConjugatePair from_real_imag(const Scalar& re, const Scalar& im);
  void validate() const;
};

/// The 6-tuple (q, t; a, b; c, d) with (c, d) kept as a conjugate pair.
struct Params {
  Scalar q;
  Scalar t;
  Scalar a;
  Scalar b;
  ConjugatePair cd;

  void validate() const;
  std::string to_string() const;
};

/// Level-N parameters (a, b; c t^{1-N}, d t^{1-N}) from base parameters.
Params shift_level(const Params& base, int N);

// ---------------------------------------------------------------------------
// Pochhammer-type products

/// prod over boxes (i,j) of (1 - z t^{1-i} q^{j-1}).
Scalar gen_pochhammer(const Scalar& z, const Partition& lambda, const Scalar& q,
                      const Scalar& t);

/// (u c; q,t)_lambda (u d; q,t)_lambda computed box by box from (s1, s2).
Scalar gen_pochhammer_conjpair(const Scalar& u, const ConjugatePair& pair,
                               const Partition& lambda, const Scalar& q, const Scalar& t);

Scalar c_plus(const Scalar& x, const Partition& lambda, const Scalar& q, const Scalar& t);
Scalar c_minus(const Scalar& x, const Partition& lambda, const Scalar& q, const Scalar& t);

}  // namespace qjd
