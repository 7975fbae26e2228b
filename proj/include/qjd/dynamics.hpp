#pragma once

// The N-particle jump process generated by D_N: rates, stationary measures on
// truncated windows, event-driven simulation, the spectral semigroup, the
// resolvent approximation, and the verification suites built on them.

#include "qjd/bigqjacobi.hpp"
#include "qjd/statespace.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

namespace qjd {

// ---------------------------------------------------------------------------
// Rates

struct Transition {
  State target;
  Scalar rate;
  Side side;
  int position;
  Direction direction;
};

struct RateEntry {
  std::vector<Transition> transitions;  // admissible targets only
  Scalar total;
};

/// Exact jump rates out of a state with all N particles away from 0. Moves
/// that would break admissibility are evaluated too and must vanish exactly;
/// a nonzero value there throws std::logic_error. Particles at 0 throw
/// std::domain_error.
RateEntry rates(const State& s, const Params& p);

// ---------------------------------------------------------------------------
// Stationary measure

struct SectorSummary {
  int m_plus = 0;
  int m_minus = 0;
  std::size_t states = 0;
  std::size_t tree_edges = 0;
  std::size_t cycles_checked = 0;
  std::size_t cycle_failures = 0;
  std::size_t balance_checked = 0;
  std::size_t balance_failures = 0;
  std::string method;       // "detailed_balance" or "global_balance"
  long double mass = 0;     // fitted probability of the sector
  long double frontier = 0; // conditional mass of frontier states
  long double outward_ratio = 0;
};

/// Probability measure on the N-particle states of the window, exact weights.
/// Within each sign sector (m+, m-) the weights come from detailed balance of
/// the exact rates; the sector masses, which the jump dynamics cannot relate
/// because particles never change sign, are fitted to the moment conditions
/// <phi_lambda> = 0 for 0 < |lambda| <= N.
struct MeasureTable {
  Params params;
  int N = 0;
  int K = 0;
  std::vector<State> states;
  std::vector<Scalar> weights;          // exact, sum to 1
  std::vector<long double> weights_ld;  // same weights in extended precision
  std::vector<std::size_t> sector_of;
  std::vector<SectorSummary> sectors;
  long double fit_residual = 0;  // largest |<phi_lambda>| left by the mass fit
  long double tail_mass = 0;     // estimated probability outside the window

  std::size_t index_of(const State& s) const;
  std::map<State, std::size_t> index;
};

/// Throws std::runtime_error when a sector's interior is disconnected or when
/// both the cycle condition and the global-balance fallback fail.
MeasureTable stationary_measure(const Params& p, int N, int K);

/// Values of f on the measure's states (extended precision).
std::vector<long double> values_on(const MeasureTable& m, const SymPoly& f);
long double expectation(const MeasureTable& m, const std::vector<long double>& values);
/// Conditional measure of the sector containing `s`.
std::vector<long double> sector_conditional(const MeasureTable& m, const State& s);

/// Upper bound for sup |f| over all configurations with at most N particles:
/// the monomials with absolute coefficients at magnitudes (R,R,Rt,Rt,...).
long double sup_bound(const SymPoly& f, const Params& p);

/// 2 * tail_mass * sup|f|, the error allowance for <f> on the window.
long double tail_tolerance(const MeasureTable& m, const SymPoly& f);

// ---------------------------------------------------------------------------
// Simulation

enum class Truncation { stop, reflect };

struct SimulationOptions {
  Truncation mode = Truncation::reflect;
  bool record_path = true;  // keep every (time, state); off for long runs
};

struct Trajectory {
  std::vector<double> times;  // only when the path is recorded
  std::vector<State> states;
  State start;
  State final_state;
  std::uint64_t seed = 0;
  double horizon = 0;
  double end_time = 0;
  std::size_t events = 0;
  bool truncated = false;  // stop mode reached the frontier
  std::size_t frontier_hits = 0;
  std::map<State, double> occupation;  // time spent in each state
};

/// Event-driven trajectory. In stop mode the run ends when an index reaches
/// K; in reflect mode moves past K are suppressed, which keeps the window's
/// detailed-balance measure stationary.
Trajectory simulate(const State& start, const Params& p, double horizon, int K, std::uint64_t seed,
                    const SimulationOptions& options = {});

/// Total variation distance between the time-normalised occupation and the
/// stationary measure conditioned on the start state's sector.
double tv_distance(const Trajectory& traj, const MeasureTable& m);

// ---------------------------------------------------------------------------
// Semigroup

/// Symmetric polynomial with floating coefficients (monomial basis).
struct FloatPoly {
  int nvars = 0;
  std::map<Partition, double> coeffs;
  double evaluate(const std::vector<long double>& x) const;
};

/// f = sum_lambda c_lambda phi_{lambda|N}.
std::map<Partition, Scalar> spectral_expand(const SymPoly& f, const Params& p);
std::map<Partition, double> spectral_expand(const FloatPoly& f, const Params& p);
FloatPoly from_spectral(const std::map<Partition, double>& c, const Params& p, int N);

/// T_N(s) f = sum c_lambda exp(s mu_lambda) phi_lambda.
FloatPoly semigroup_apply(const SymPoly& f, double s, const Params& p);
FloatPoly semigroup_apply(const FloatPoly& f, double s, const Params& p);

/// Level-independent semigroup on Sym, through the Phi_lambda basis.
/// Input and output are monomial-basis expansions.
std::map<Partition, Scalar> spectral_expand_infinity(const SymFuncExpansion& f, const Params& base);
std::map<Partition, double> semigroup_apply_infinity(const SymFuncExpansion& f, double s,
                                                     const Params& base);

/// d/ds T(s) f at s = 0 from the eigenvalues: sum c_lambda mu_lambda phi_lambda.
SymPoly generator_from_spectrum(const SymPoly& f, const Params& p);

struct ResolventReport {
  std::vector<double> r_values;
  std::vector<double> distances;
  bool strictly_decreasing = false;
};

/// exp(s A_r) f with A_r = r A (r - A)^{-1}, A the matrix of D_N on the
/// degree cone of f, against T_N(s) f; sup distance over the window states.
ResolventReport resolvent_approx_check(const SymPoly& f, double s, const std::vector<double>& r_values,
                                       const Params& p, int K);

// ---------------------------------------------------------------------------
// Positive maximum principle

struct PmpViolation {
  std::string state;
  std::string value;
  std::string polynomial;
};

struct PmpReport {
  int trials = 0;
  int checked = 0;           // trials with at least one interior minimizer
  int frontier_discarded = 0;
  int minimizers_checked = 0;
  int zero_state_minimizers = 0;
  std::vector<PmpViolation> violations;
};

/// Random symmetric polynomial of degree <= max_degree: random rational
/// coefficients or a sum of squares, chosen by the generator.
SymPoly random_sympoly(int N, int max_degree, std::mt19937_64& rng);

PmpReport pmp_test(const Params& p, int N, int K, int trials, std::uint64_t seed, int max_degree = 4);

// ---------------------------------------------------------------------------
// Intertwining

/// Maps phi_{lambda|N}/(t^N)_lambda through P_{nu|N}/(t^N)_nu -> P_{nu|N+1}/(t^{N+1})_nu
/// and compares with phi_{lambda|N+1}/(t^{N+1})_lambda, both at shifted
/// parameters, exactly in Sym(N+1).
bool intertwining_check(const Partition& lambda, const Params& base, int N);

// ---------------------------------------------------------------------------
// Measure-based suites

struct OrthogonalityEntry {
  Partition lambda;
  Partition mu;
  long double value = 0;
  long double tolerance = 0;
};

struct OrthogonalityReport {
  std::vector<OrthogonalityEntry> entries;
  long double max_ratio = 0;  // max |value| / tolerance
  long double fit_residual = 0;
  long double tail_mass = 0;
};

OrthogonalityReport orthogonality_check(const MeasureTable& m, int max_degree);

struct NormLimitEntry {
  int N = 0;
  long double value = 0;
  long double gap = 0;
  long double tolerance = 0;
};

struct NormLimitReport {
  Partition lambda;
  long double h = 0;
  std::vector<NormLimitEntry> entries;
  bool decreasing = false;
};

NormLimitReport norm_limit_check(const Partition& lambda, const Params& base, const std::vector<int>& N_list,
                                 int K);

// ---------------------------------------------------------------------------
// Serialization

nlohmann::json params_json(const Params& p);
/// Rounds to 12 significant digits so reports are byte-stable.
double fixed(long double x);

struct Report {
  std::string check;
  Params params;
  int N = 0;
  int K = 0;
  bool pass = false;
  double max_residual = 0;
  double tolerance = 0;
  std::uint64_t seed = 0;
  nlohmann::json details = nlohmann::json::object();

  nlohmann::json to_json() const;
};

std::string measure_csv(const MeasureTable& m);
std::string trajectory_csv(const Trajectory& traj);

}  // namespace qjd
