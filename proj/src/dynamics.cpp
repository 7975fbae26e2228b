#include "qjd/dynamics.hpp"

#include "qjd/linalg.hpp"
#include "qjd/macdonald.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

namespace qjd {

// ---------------------------------------------------------------------------
// Rates

RateEntry rates(const State& s, const Params& p) {
  if (s.zeros() != 0) throw std::domain_error("rates are undefined at a state with particles at 0: " + to_string(s));
  if (!is_admissible(s)) throw std::invalid_argument("rates of an inadmissible state: " + to_string(s));
  const int N = s.capacity;
  const OperatorCoeffs op(p, N);
  const std::vector<Scalar> x = coords_of(s, p).all();
  RateEntry out;

  auto particle = [&](Side side, std::size_t pos, std::size_t g) {
    for (Direction dir : {Direction::up, Direction::down}) {
      Scalar ratio = 1;
      const Scalar shifted = dir == Direction::up ? Scalar(x[g] * p.t) : Scalar(x[g] / p.t);
      for (std::size_t j = 0; j < x.size() && ratio != 0; ++j)
        if (j != g) ratio *= (shifted - x[j]) / (x[g] - x[j]);
      Scalar rate = ratio == 0 ? Scalar(0)
                               : ratio * (dir == Direction::up ? op.sigma_plus(x[g]) : op.sigma_minus(x[g]));
      State next = s;
      auto& v = side == Side::plus ? next.plus : next.minus;
      v[pos] += dir == Direction::up ? 1 : -1;
      if (!is_admissible(next)) {
        if (rate != 0) throw std::logic_error("nonzero rate " + rate.get_str() + " towards an inadmissible state from " + to_string(s));
        continue;
      }
      if (rate < 0) throw std::logic_error("negative rate out of " + to_string(s));
      out.total += rate;
      out.transitions.push_back(Transition{std::move(next), rate, side, static_cast<int>(pos), dir});
    }
  };
  for (std::size_t i = 0; i < s.plus.size(); ++i) particle(Side::plus, i, i);
  for (std::size_t i = 0; i < s.minus.size(); ++i) particle(Side::minus, i, s.plus.size() + i);
  return out;
}

// ---------------------------------------------------------------------------
// Stationary measure

namespace {

bool within(const State& s, int K) {
  for (int k : s.plus)
    if (k > K) return false;
  for (int l : s.minus)
    if (l > K) return false;
  return true;
}

struct SectorGraph {
  std::vector<State> states;
  std::map<State, std::size_t> index;
  std::vector<std::vector<std::pair<std::size_t, Scalar>>> out;  // in-window transitions
  std::vector<std::vector<Scalar>> outside;                      // ratios r(X->Y)/r(Y->X) for Y beyond K
};

Scalar reverse_rate(const SectorGraph& g, std::size_t from, std::size_t to) {
  for (const auto& [j, r] : g.out[to])
    if (j == from) return r;
  return 0;
}

SectorGraph build_sector(int mp, int mm, int K, const Params& p) {
  SectorGraph g;
  g.states = enumerate_sector(mp, mm, K);
  for (std::size_t i = 0; i < g.states.size(); ++i) g.index[g.states[i]] = i;
  g.out.resize(g.states.size());
  g.outside.resize(g.states.size());
  for (std::size_t i = 0; i < g.states.size(); ++i) {
    for (auto& tr : rates(g.states[i], p).transitions) {
      if (tr.rate == 0) continue;
      if (within(tr.target, K)) {
        g.out[i].emplace_back(g.index.at(tr.target), tr.rate);
      } else {
        // The reverse move from a state just outside the window.
        for (const auto& back : rates(tr.target, p).transitions)
          if (back.target == g.states[i]) {
            if (back.rate == 0) throw std::runtime_error("one-way transition at the window frontier");
            g.outside[i].push_back(tr.rate / back.rate);
          }
      }
    }
  }
  return g;
}

std::optional<std::vector<Scalar>> global_balance_weights(const SectorGraph& g) {
  const std::size_t n = g.states.size();
  if (n > 600) return std::nullopt;
  // Rows: balance equations for states 1..n-1 plus normalization.
  RationalMatrix a(n, n);
  for (std::size_t x = 0; x < n; ++x)
    for (const auto& [y, r] : g.out[x]) {
      // flow x -> y enters the balance of y and leaves x
      if (y != 0) a(y, x) += r;
      if (x != 0) a(x, x) -= r;
    }
  for (std::size_t c = 0; c < n; ++c) a(0, c) = 1;
  std::vector<Scalar> rhs(n);
  rhs[0] = 1;
  return solve(a, rhs);
}

}  // namespace

std::size_t MeasureTable::index_of(const State& s) const {
  auto it = index.find(s);
  if (it == index.end()) throw std::out_of_range("state outside the measure's window: " + to_string(s));
  return it->second;
}

MeasureTable stationary_measure(const Params& p, int N, int K) {
  p.validate();
  if (N < 1 || K < 2) throw std::invalid_argument("stationary_measure needs N >= 1 and K >= 2");
  MeasureTable m;
  m.params = p;
  m.N = N;
  m.K = K;

  std::vector<std::vector<Scalar>> sector_weights;
  for (int mp = N; mp >= 0; --mp) {
    SectorGraph g = build_sector(mp, N - mp, K, p);
    SectorSummary sum;
    sum.m_plus = mp;
    sum.m_minus = N - mp;
    sum.states = g.states.size();
    const std::size_t n = g.states.size();

    std::vector<Scalar> w(n);
    std::vector<std::ptrdiff_t> parent(n, -1);
    std::vector<bool> seen(n, false);
    std::deque<std::size_t> queue{0};
    seen[0] = true;
    w[0] = 1;
    while (!queue.empty()) {
      const std::size_t x = queue.front();
      queue.pop_front();
      for (const auto& [y, r] : g.out[x]) {
        if (seen[y]) continue;
        const Scalar back = reverse_rate(g, x, y);
        if (back == 0) throw std::runtime_error("transition without reverse in sector, detailed balance impossible");
        w[y] = w[x] * r / back;
        parent[y] = static_cast<std::ptrdiff_t>(x);
        seen[y] = true;
        ++sum.tree_edges;
        queue.push_back(y);
      }
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end())
      throw std::runtime_error("sector (" + std::to_string(mp) + "," + std::to_string(N - mp) + ") is disconnected");

    for (std::size_t x = 0; x < n; ++x)
      for (const auto& [y, r] : g.out[x]) {
        if (y < x || parent[y] == static_cast<std::ptrdiff_t>(x) || parent[x] == static_cast<std::ptrdiff_t>(y)) continue;
        ++sum.cycles_checked;
        if (w[x] * r != w[y] * reverse_rate(g, x, y)) ++sum.cycle_failures;
      }
    sum.method = "detailed_balance";
    if (sum.cycle_failures > 0) {
      auto gb = global_balance_weights(g);
      if (!gb) throw std::runtime_error("cycle condition fails and the sector is too large for a direct balance solve");
      w = std::move(*gb);
      sum.method = "global_balance";
    }

    for (std::size_t x = 0; x < n; ++x) {
      if (on_frontier(g.states[x], K)) continue;
      ++sum.balance_checked;
      Scalar flow = 0;
      for (const auto& [y, r] : g.out[x]) flow += w[y] * reverse_rate(g, x, y) - w[x] * r;
      if (flow != 0) ++sum.balance_failures;
    }

    Scalar z = std::accumulate(w.begin(), w.end(), Scalar(0));
    for (auto& v : w) v /= z;
    long double frontier = 0, ratio = 0;
    for (std::size_t x = 0; x < n; ++x) {
      if (!on_frontier(g.states[x], K)) continue;
      frontier += to_long_double(w[x]);
      for (const auto& r : g.outside[x]) ratio = std::max(ratio, to_long_double(r));
    }
    sum.frontier = frontier;
    sum.outward_ratio = ratio;

    for (auto& s : g.states) {
      m.sector_of.push_back(m.sectors.size());
      m.states.push_back(std::move(s));
    }
    m.sectors.push_back(sum);
    sector_weights.push_back(std::move(w));
  }

  // Sector masses from the moment conditions.
  const std::size_t S = m.sectors.size();
  std::vector<Partition> moments;
  for (const auto& lam : partitions_up_to(N, static_cast<std::size_t>(N)))
    if (!lam.empty()) moments.push_back(lam);
  using MatrixL = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  using VectorL = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
  MatrixL e(moments.size(), S);
  std::vector<std::vector<long double>> coords;
  coords.reserve(m.states.size());
  for (const auto& s : m.states) coords.push_back(coords_long_double(s, p));
  for (std::size_t r = 0; r < moments.size(); ++r) {
    const SymPoly& phi = big_qjacobi_poly(moments[r], p, N);
    std::vector<long double> acc(S, 0);
    std::size_t offset = 0;
    for (std::size_t sec = 0; sec < S; ++sec) {
      for (std::size_t i = 0; i < sector_weights[sec].size(); ++i)
        acc[sec] += to_long_double(sector_weights[sec][i]) * evaluate(phi, coords[offset + i]);
      offset += sector_weights[sec].size();
    }
    for (std::size_t sec = 0; sec < S; ++sec) e(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(sec)) = acc[sec];
  }
  MatrixL scaled = e;
  for (Eigen::Index r = 0; r < scaled.rows(); ++r) {
    long double norm = scaled.row(r).cwiseAbs().maxCoeff();
    if (norm > 0) scaled.row(r) /= norm;
  }
  // M = e_0 + sum_k y_k (e_k - e_0)
  MatrixL a(scaled.rows(), static_cast<Eigen::Index>(S) - 1);
  for (Eigen::Index k = 1; k < static_cast<Eigen::Index>(S); ++k) a.col(k - 1) = scaled.col(k) - scaled.col(0);
  VectorL y = a.colPivHouseholderQr().solve(VectorL(-scaled.col(0)));
  std::vector<Scalar> mass(S);
  Scalar rest = 1;
  for (std::size_t k = 1; k < S; ++k) {
    mass[k] = Scalar(static_cast<double>(y(static_cast<Eigen::Index>(k) - 1)));
    rest -= mass[k];
  }
  mass[0] = rest;
  for (std::size_t sec = 0; sec < S; ++sec) {
    if (mass[sec] < 0) throw std::runtime_error("sector mass fit produced a negative mass");
    m.sectors[sec].mass = to_long_double(mass[sec]);
  }
  for (Eigen::Index r = 0; r < e.rows(); ++r) {
    long double v = 0;
    for (std::size_t sec = 0; sec < S; ++sec) v += m.sectors[sec].mass * e(r, static_cast<Eigen::Index>(sec));
    m.fit_residual = std::max(m.fit_residual, std::fabs(v));
  }

  for (std::size_t sec = 0; sec < S; ++sec)
    for (auto& v : sector_weights[sec]) {
      m.weights.push_back(v * mass[sec]);
      m.weights_ld.push_back(to_long_double(m.weights.back()));
    }
  for (std::size_t i = 0; i < m.states.size(); ++i) m.index[m.states[i]] = i;

  long double tail = 0;
  for (const auto& sec : m.sectors) {
    const long double rho = std::min(sec.outward_ratio, 0.999L);
    tail += sec.mass * static_cast<long double>(N) * sec.frontier * rho / (1 - rho);
  }
  m.tail_mass = tail;
  return m;
}

std::vector<long double> values_on(const MeasureTable& m, const SymPoly& f) {
  std::vector<long double> out;
  out.reserve(m.states.size());
  for (const auto& s : m.states) out.push_back(evaluate(f, coords_long_double(s, m.params)));
  return out;
}

long double expectation(const MeasureTable& m, const std::vector<long double>& values) {
  long double acc = 0;
  for (std::size_t i = 0; i < values.size(); ++i) acc += m.weights_ld[i] * values[i];
  return acc;
}

std::vector<long double> sector_conditional(const MeasureTable& m, const State& s) {
  const std::size_t sec = m.sector_of[m.index_of(s)];
  std::vector<long double> out(m.states.size(), 0);
  for (std::size_t i = 0; i < out.size(); ++i)
    if (m.sector_of[i] == sec) out[i] = m.weights_ld[i] / m.sectors[sec].mass;
  return out;
}

long double sup_bound(const SymPoly& f, const Params& p) {
  const Scalar r = std::max<Scalar>(p.q / p.a, p.q / -p.b);
  std::vector<long double> y;
  Scalar v = r;
  for (int k = 0; k < f.nvars(); ++k) {
    y.push_back(to_long_double(v));
    if (k % 2 == 1) v *= p.t;
  }
  long double total = 0;
  for (const auto& [lam, c] : f.terms())
    total += std::fabs(to_long_double(c)) * monomial_symmetric<long double>(lam, y);
  return total;
}

long double tail_tolerance(const MeasureTable& m, const SymPoly& f) {
  return 2 * m.tail_mass * sup_bound(f, m.params);
}

// ---------------------------------------------------------------------------
// Simulation

Trajectory simulate(const State& start, const Params& p, double horizon, int K, std::uint64_t seed,
                    const SimulationOptions& options) {
  if (horizon < 0) throw std::invalid_argument("negative horizon");
  if (start.zeros() != 0) throw std::invalid_argument("simulation start has particles at 0");
  if (!within(start, K) || on_frontier(start, K))
    throw std::invalid_argument("simulation start must be interior to the window");
  Trajectory traj;
  traj.seed = seed;
  traj.horizon = horizon;
  traj.start = start;
  if (options.record_path) {
    traj.times.push_back(0);
    traj.states.push_back(start);
  }

  struct Entry {
    bool ready = false;
    double total = 0;
    std::vector<std::pair<const State*, double>> moves;
  };
  // map nodes are stable, so targets are referenced by pointer
  std::map<State, Entry> cache;
  auto table = [&](const State& s) -> const Entry& {
    Entry& e = cache[s];
    if (e.ready) return e;
    for (auto& tr : rates(s, p).transitions) {
      if (tr.rate == 0) continue;
      if (options.mode == Truncation::reflect && !within(tr.target, K)) continue;
      const double r = to_double(tr.rate);
      e.total += r;
      e.moves.emplace_back(&cache.try_emplace(tr.target).first->first, r);
    }
    e.ready = true;
    return e;
  };

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double now = 0;
  const State* cur = &cache.try_emplace(start).first->first;
  while (true) {
    const Entry& e = table(*cur);
    if (e.total <= 0) break;
    std::exponential_distribution<double> hold(e.total);
    const double dt = hold(rng);
    if (now + dt >= horizon) break;
    traj.occupation[*cur] += dt;
    now += dt;
    double u = unif(rng) * e.total;
    std::size_t pick = 0;
    while (pick + 1 < e.moves.size() && u >= e.moves[pick].second) {
      u -= e.moves[pick].second;
      ++pick;
    }
    cur = e.moves[pick].first;
    ++traj.events;
    if (options.record_path) {
      traj.times.push_back(now);
      traj.states.push_back(*cur);
    }
    if (on_frontier(*cur, K)) {
      ++traj.frontier_hits;
      if (options.mode == Truncation::stop) {
        traj.truncated = true;
        break;
      }
    }
  }
  traj.end_time = traj.truncated ? now : horizon;
  traj.occupation[*cur] += traj.end_time - now;
  traj.final_state = *cur;
  return traj;
}

double tv_distance(const Trajectory& traj, const MeasureTable& m) {
  const auto cond = sector_conditional(m, traj.start);
  const auto& occ = traj.occupation;
  double total_time = 0;
  for (const auto& [s, d] : occ) total_time += d;
  if (total_time <= 0) throw std::invalid_argument("trajectory has zero duration");
  long double tv = 0;
  std::vector<bool> seen(m.states.size(), false);
  for (const auto& [s, d] : occ) {
    auto it = m.index.find(s);
    const long double target = it == m.index.end() ? 0 : cond[it->second];
    if (it != m.index.end()) seen[it->second] = true;
    tv += std::fabs(static_cast<long double>(d / total_time) - target);
  }
  for (std::size_t i = 0; i < seen.size(); ++i)
    if (!seen[i]) tv += cond[i];
  return static_cast<double>(tv / 2);
}

// ---------------------------------------------------------------------------
// Semigroup

double FloatPoly::evaluate(const std::vector<long double>& x) const {
  long double acc = 0;
  for (const auto& [lam, c] : coeffs) acc += static_cast<long double>(c) * monomial_symmetric<long double>(lam, x);
  return static_cast<double>(acc);
}

std::map<Partition, Scalar> spectral_expand(const SymPoly& f, const Params& p) {
  std::map<Partition, Scalar> out;
  SymPoly rest = f;
  while (!rest.is_zero()) {
    const Partition top = rest.terms().rbegin()->first;
    const Scalar c = rest.terms().rbegin()->second;
    out[top] = c;
    rest -= big_qjacobi_poly(top, p, f.nvars()) * c;
  }
  return out;
}

std::map<Partition, double> spectral_expand(const FloatPoly& f, const Params& p) {
  std::map<Partition, double> out;
  std::map<Partition, double> rest = f.coeffs;
  while (!rest.empty()) {
    auto it = std::prev(rest.end());
    const Partition top = it->first;
    const double c = it->second;
    rest.erase(it);
    out[top] = c;
    for (const auto& [kappa, v] : big_qjacobi_poly(top, p, f.nvars).terms())
      if (kappa != top) rest[kappa] -= c * to_double(v);
  }
  return out;
}

FloatPoly from_spectral(const std::map<Partition, double>& c, const Params& p, int N) {
  FloatPoly out;
  out.nvars = N;
  for (const auto& [lam, v] : c)
    for (const auto& [kappa, w] : big_qjacobi_poly(lam, p, N).terms()) out.coeffs[kappa] += v * to_double(w);
  return out;
}

namespace {

std::map<Partition, double> evolve(const std::map<Partition, double>& c, double s, const Params& p, int N) {
  std::map<Partition, double> out;
  for (const auto& [lam, v] : c) out[lam] = v * std::exp(s * to_double(mu_N(lam, p, N)));
  return out;
}

}  // namespace

FloatPoly semigroup_apply(const SymPoly& f, double s, const Params& p) {
  std::map<Partition, double> c;
  for (const auto& [lam, v] : spectral_expand(f, p)) c[lam] = to_double(v);
  return from_spectral(evolve(c, s, p, f.nvars()), p, f.nvars());
}

FloatPoly semigroup_apply(const FloatPoly& f, double s, const Params& p) {
  return from_spectral(evolve(spectral_expand(f, p), s, p, f.nvars), p, f.nvars);
}

std::map<Partition, Scalar> spectral_expand_infinity(const SymFuncExpansion& f, const Params& base) {
  if (f.basis != Basis::monomial) throw std::invalid_argument("expected a monomial-basis expansion");
  std::map<Partition, Scalar> out;
  std::map<Partition, Scalar> rest = f.coeffs;
  std::erase_if(rest, [](const auto& kv) { return kv.second == 0; });
  while (!rest.empty()) {
    const Partition top = rest.rbegin()->first;
    const Scalar c = rest.rbegin()->second;
    out[top] = c;
    for (const auto& [kappa, v] : phi_symfunc_monomial(top, base).coeffs) {
      rest[kappa] -= c * v;
      if (rest[kappa] == 0) rest.erase(kappa);
    }
  }
  return out;
}

std::map<Partition, double> semigroup_apply_infinity(const SymFuncExpansion& f, double s, const Params& base) {
  std::map<Partition, double> out;
  for (const auto& [lam, c] : spectral_expand_infinity(f, base)) {
    const double scale = to_double(c) * std::exp(s * to_double(mu_infinity(lam, base)));
    for (const auto& [kappa, v] : phi_symfunc_monomial(lam, base).coeffs) out[kappa] += scale * to_double(v);
  }
  return out;
}

SymPoly generator_from_spectrum(const SymPoly& f, const Params& p) {
  SymPoly out(f.nvars());
  for (const auto& [lam, c] : spectral_expand(f, p))
    out += big_qjacobi_poly(lam, p, f.nvars()) * (c * mu_N(lam, p, f.nvars()));
  return out;
}

ResolventReport resolvent_approx_check(const SymPoly& f, double s, const std::vector<double>& r_values,
                                       const Params& p, int K) {
  const int N = f.nvars();
  const int d = std::max(0, f.degree());
  const OperatorMatrix op = dn_matrix(p, N, d);
  const auto n = static_cast<Eigen::Index>(op.basis.size());
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c)
      a(r, c) = to_double(op.matrix(static_cast<std::size_t>(r), static_cast<std::size_t>(c)));
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = to_double(f.coeff(op.basis[static_cast<std::size_t>(i)]));
  const FloatPoly exact = semigroup_apply(f, s, p);

  std::vector<std::vector<long double>> points;
  for (const auto& st : enumerate_truncated(N, K)) points.push_back(coords_long_double(st, p));

  ResolventReport rep;
  for (double r : r_values) {
    if (!(r > 0)) throw std::invalid_argument("resolvent parameter must be positive");
    const Eigen::MatrixXd shifted = r * Eigen::MatrixXd::Identity(n, n) - a;
    const Eigen::MatrixXd ar = r * a * shifted.partialPivLu().inverse();
    const Eigen::MatrixXd e = (s * ar).exp();
    const Eigen::VectorXd u = e * v;
    FloatPoly diff;
    diff.nvars = N;
    for (Eigen::Index i = 0; i < n; ++i) {
      const Partition& kappa = op.basis[static_cast<std::size_t>(i)];
      auto it = exact.coeffs.find(kappa);
      diff.coeffs[kappa] = u(i) - (it == exact.coeffs.end() ? 0.0 : it->second);
    }
    double sup = 0;
    for (const auto& x : points) sup = std::max(sup, std::fabs(diff.evaluate(x)));
    rep.r_values.push_back(r);
    rep.distances.push_back(sup);
  }
  rep.strictly_decreasing = true;
  for (std::size_t i = 1; i < rep.distances.size(); ++i)
    if (!(rep.distances[i] < rep.distances[i - 1])) rep.strictly_decreasing = false;
  return rep;
}

// ---------------------------------------------------------------------------
// Positive maximum principle

namespace {

Scalar random_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-9, 9), den(1, 9);
  Scalar v(num(rng), den(rng));
  v.canonicalize();
  return v;
}

SymPoly random_dense(int N, int max_degree, std::mt19937_64& rng) {
  SymPoly f(N);
  std::bernoulli_distribution keep(0.6);
  for (const auto& lam : partitions_up_to(max_degree, static_cast<std::size_t>(N)))
    if (keep(rng)) f.add_term(lam, random_rational(rng));
  return f;
}

}  // namespace

SymPoly random_sympoly(int N, int max_degree, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> mode(0, 1);
  if (mode(rng) == 0 || max_degree < 2) return random_dense(N, max_degree, rng);
  SymPoly f(N);
  for (int k = 0; k < 2; ++k) {
    SymPoly g = random_dense(N, max_degree / 2, rng);
    f += multiply(g, g);
  }
  f += random_dense(N, 1, rng);
  return f;
}

PmpReport pmp_test(const Params& p, int N, int K, int trials, std::uint64_t seed, int max_degree) {
  p.validate();
  const auto states = enumerate_truncated(N, K);
  std::vector<std::vector<Scalar>> coords;
  coords.reserve(states.size());
  for (const auto& s : states) coords.push_back(coords_of(s, p).all());

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, states.size() - 1);
  PmpReport rep;
  for (int trial = 0; trial < trials; ++trial) {
    SymPoly f(N);
    if (trial == 0) {
      const SymPoly p1 = SymPoly::power_sum(N, 1);
      f = multiply(p1, p1);
    } else if (trial % 3 == 0) {
      // A square centred at a window state, so the minimum sits inside.
      SymPoly g = random_dense(N, max_degree / 2, rng);
      g -= SymPoly::constant(N, evaluate(g, coords[pick(rng)]));
      f = multiply(g, g) + random_dense(N, 0, rng);
    } else {
      f = random_sympoly(N, max_degree, rng);
    }
    ++rep.trials;

    std::vector<Scalar> values;
    values.reserve(states.size());
    for (const auto& x : coords) values.push_back(evaluate(f, x));
    const Scalar best = *std::min_element(values.begin(), values.end());
    SymPoly df;
    bool have_df = false;
    bool interior = false;
    for (std::size_t i = 0; i < states.size(); ++i) {
      if (values[i] != best) continue;
      if (on_frontier(states[i], K)) {
        ++rep.frontier_discarded;
        continue;
      }
      if (!have_df) {
        df = apply_DN(f, p);
        have_df = true;
      }
      interior = true;
      ++rep.minimizers_checked;
      if (states[i].zeros() > 0) ++rep.zero_state_minimizers;
      const Scalar v = evaluate(df, coords[i]);
      if (v < 0) rep.violations.push_back({to_string(states[i]), v.get_str(), f.to_string()});
    }
    if (interior) ++rep.checked;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Intertwining

bool intertwining_check(const Partition& lambda, const Params& base, int N) {
  if (lambda.length() > static_cast<std::size_t>(N)) throw std::invalid_argument("intertwining needs length(lambda) <= N");
  const Params lo = shift_level(base, N);
  const Params hi = shift_level(base, N + 1);
  const Scalar& q = base.q;
  const Scalar& t = base.t;
  const Scalar tN = ipow(t, N), tN1 = ipow(t, N + 1);
  const Scalar norm_lo = gen_pochhammer(tN, lambda, q, t);
  const Scalar norm_hi = gen_pochhammer(tN1, lambda, q, t);

  SymPoly image(N + 1);
  for (const auto& [nu, b] : macdonald_expand(big_qjacobi_poly(lambda, lo, N), q, t).coeffs) {
    const Scalar coeff = b / norm_lo * gen_pochhammer(tN, nu, q, t) / gen_pochhammer(tN1, nu, q, t);
    image += macdonald_poly(nu, N + 1, q, t) * coeff;
  }
  const SymPoly target = big_qjacobi_poly(lambda, hi, N + 1) * (1 / norm_hi);
  return image == target;
}

// ---------------------------------------------------------------------------
// Measure-based suites

OrthogonalityReport orthogonality_check(const MeasureTable& m, int max_degree) {
  OrthogonalityReport rep;
  rep.fit_residual = m.fit_residual;
  rep.tail_mass = m.tail_mass;
  const auto parts = partitions_up_to(max_degree, static_cast<std::size_t>(m.N));
  std::vector<std::vector<long double>> vals;
  for (const auto& lam : parts) vals.push_back(values_on(m, big_qjacobi_poly(lam, m.params, m.N)));
  for (std::size_t i = 0; i < parts.size(); ++i)
    for (std::size_t j = i + 1; j < parts.size(); ++j) {
      std::vector<long double> prod(vals[i].size());
      for (std::size_t k = 0; k < prod.size(); ++k) prod[k] = vals[i][k] * vals[j][k];
      OrthogonalityEntry e;
      e.lambda = parts[i];
      e.mu = parts[j];
      e.value = expectation(m, prod);
      const SymPoly f = multiply(big_qjacobi_poly(parts[i], m.params, m.N), big_qjacobi_poly(parts[j], m.params, m.N));
      e.tolerance = tail_tolerance(m, f);
      rep.max_ratio = std::max(rep.max_ratio, std::fabs(e.value) / e.tolerance);
      rep.entries.push_back(e);
    }
  return rep;
}

NormLimitReport norm_limit_check(const Partition& lambda, const Params& base, const std::vector<int>& N_list, int K) {
  NormLimitReport rep;
  rep.lambda = lambda;
  rep.h = to_long_double(h_norm(lambda, base));
  for (int N : N_list) {
    const Params p = shift_level(base, N);
    const MeasureTable m = stationary_measure(p, N, K);
    const SymPoly& phi = big_qjacobi_poly(lambda, p, N);
    auto v = values_on(m, phi);
    for (auto& x : v) x *= x;
    NormLimitEntry e;
    e.N = N;
    e.value = expectation(m, v);
    e.gap = std::fabs(e.value / rep.h - 1);
    e.tolerance = tail_tolerance(m, multiply(phi, phi)) / rep.h;
    rep.entries.push_back(e);
  }
  rep.decreasing = true;
  for (std::size_t i = 1; i < rep.entries.size(); ++i)
    if (!(rep.entries[i].gap < rep.entries[i - 1].gap)) rep.decreasing = false;
  return rep;
}

// ---------------------------------------------------------------------------
// Serialization

nlohmann::json params_json(const Params& p) {
  return {{"q", p.q.get_str()},   {"t", p.t.get_str()},         {"a", p.a.get_str()},
          {"b", p.b.get_str()},   {"c_plus_d", p.cd.s1.get_str()}, {"cd", p.cd.s2.get_str()}};
}

double fixed(long double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12Lg", x);
  return std::strtod(buf, nullptr);
}

nlohmann::json Report::to_json() const {
  return {{"check", check},
          {"params", params_json(params)},
          {"N", N},
          {"K", K},
          {"status", pass ? "pass" : "fail"},
          {"max_residual", fixed(max_residual)},
          {"tolerance", fixed(tolerance)},
          {"seed", seed},
          {"details", details}};
}

std::string measure_csv(const MeasureTable& m) {
  std::ostringstream os;
  os << "state,weight_num,weight_den,weight_float\n";
  char buf[64];
  for (std::size_t i = 0; i < m.states.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.12Le", m.weights_ld[i]);
    os << '"' << to_string(m.states[i]) << "\"," << m.weights[i].get_num().get_str() << ','
       << m.weights[i].get_den().get_str() << ',' << buf << '\n';
  }
  return os.str();
}

std::string trajectory_csv(const Trajectory& traj) {
  std::ostringstream os;
  os << "time,state\n";
  char buf[64];
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.15g", traj.times[i]);
    os << buf << ",\"" << to_string(traj.states[i]) << "\"\n";
  }
  return os.str();
}

}  // namespace qjd
