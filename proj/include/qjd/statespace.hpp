#pragma once

// Configurations of at most N particles on the two-sided q-grid
//   a^{-1} q^k t^{i-1} (k >= 1)  and  b^{-1} q^l t^{i-1} (l >= 1),
// encoded by the weakly increasing index sequences on each side. Particles at
// 0 (infinite index) are only counted.

#include "qjd/qalgebra.hpp"

#include <compare>
#include <string>
#include <string_view>
#include <vector>

namespace qjd {

struct State {
  int capacity = 0;        // N
  std::vector<int> plus;   // k_1 <= k_2 <= ...
  std::vector<int> minus;  // l_1 <= l_2 <= ...

  int particles() const { return static_cast<int>(plus.size() + minus.size()); }
  int zeros() const { return capacity - particles(); }

  friend auto operator<=>(const State&, const State&) = default;
  friend bool operator==(const State&, const State&) = default;
};

/// "N=<n>;+[k1,...];-[l1,...];z=<zeros>"
std::string to_string(const State& s);
State parse_state(std::string_view text);

struct Coordinates {
  std::vector<Scalar> plus;   // decreasing, positive
  std::vector<Scalar> minus;  // increasing, negative
  int zeros = 0;

  /// plus, then minus, then the zeros: N entries in total.
  std::vector<Scalar> all() const;
};

Coordinates coords_of(const State& s, const Params& p);
std::vector<long double> coords_long_double(const State& s, const Params& p);

/// Index lists weakly increasing with entries >= 1, and particle count <= N.
bool is_admissible(const State& s);

/// All admissible states with every index <= K, ordered by particle count,
/// then by decreasing number of positive particles, then lexicographically.
std::vector<State> enumerate_truncated(int nvars, int K);

/// States with exactly m_plus positive and m_minus negative particles and all
/// indices <= K, in lexicographic order.
std::vector<State> enumerate_sector(int m_plus, int m_minus, int K);

/// Some index equals K.
bool on_frontier(const State& s, int K);

enum class Side { plus, minus };
/// up: index + 1 (x -> q x); down: index - 1 (x -> x / q).
enum class Direction { up, down };

struct Move {
  State target;
  Side side;
  int position;  // 0-based within its side
  Direction direction;
};

/// Admissible single-index moves from s.
std::vector<Move> jump_targets(const State& s);

}  // namespace qjd
