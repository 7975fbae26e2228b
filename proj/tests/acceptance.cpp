// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include "qjd/dynamics.hpp"
#include "qjd/macdonald.hpp"

#include "support.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

using namespace qjd;

namespace {

// Pinned tolerances.
constexpr double kSemigroupRelTol = 1e-12;
constexpr double kResolventFinal = 1e-3;
constexpr long double kNormGapFinal = 1e-2L;
// large enough that the truncation bound at N = 4 sits below the final gap
constexpr int kNormTruncation = 18;
constexpr double kTvOneParticle = 0.05;
constexpr double kTvTwoParticles = 0.08;
constexpr std::size_t kMinEvents = 100000;
constexpr int kRandomTuples = 12;
constexpr int kPmpTrials = 200;

struct Outcome {
  bool pass = true;
  std::string detail;
};

Params orthogonality_params() { return testing::reference_params(); }

Params norm_params() {
  return Params{Scalar(1, 4), Scalar(1, 20), Scalar(2), Scalar(-3),
                ConjugatePair::from_real_imag(Scalar(1, 2), Scalar(1))};
}

Params simulation_params() {
  return Params{Scalar(1, 2), Scalar(1, 5), Scalar(2), Scalar(-3),
                ConjugatePair::from_real_imag(Scalar(1, 2), Scalar(1))};
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

Outcome eigenrelation() {
  std::mt19937_64 rng(20240611);
  std::size_t checked = 0, bad = 0, pointwise = 0;
  for (int k = 0; k < kRandomTuples; ++k) {
    const Params p = testing::random_params(rng);
    for (int N = 1; N <= 3; ++N) {
      const OperatorCoeffs op(p, N);
      for (const auto& lam : partitions_up_to(4, static_cast<std::size_t>(N))) {
        const SymPoly& phi = big_qjacobi_poly(lam, p, N);
        const Scalar mu = mu_N(lam, p, N);
        ++checked;
        if (!(apply_DN(phi, p) - phi * mu).is_zero()) ++bad;
        // independent of the interpolation grid: the operator at fresh points
        const auto x = testing::generic_point(rng, N);
        ++pointwise;
        if (apply_DN_at(phi, op, x) != mu * evaluate(phi, x)) ++bad;
      }
    }
  }
  return {bad == 0, std::to_string(checked) + " eigenpairs over " + std::to_string(kRandomTuples) +
                        " tuples, " + std::to_string(pointwise) + " pointwise checks, nonzero residuals " +
                        std::to_string(bad)};
}

Outcome constant_terms() {
  std::mt19937_64 rng(7);
  std::vector<Params> tuples{testing::reference_params()};
  for (int k = 0; k < 5; ++k) tuples.push_back(testing::random_params(rng));
  std::size_t bad = 0, checked = 0;
  for (const auto& p : tuples) {
    for (int N = 1; N <= 5; ++N) {
      ++checked;
      if (apply_DN(SymPoly::power_sum(N, 2), p).constant_term() != ct_p2_formula(p, N)) ++bad;
      if (N >= 2) {
        ++checked;
        if (apply_DN(SymPoly::elementary(N, 2), p).constant_term() != ct_e2_formula(p, N)) ++bad;
      }
    }
    const Scalar one = (1 - p.q) * (1 - p.q) * (1 + p.q) / (p.a * -p.b);
    ++checked;
    if (apply_D1(UniPoly{0, 0, 1}, p)[0] != one || ct_p2_formula(p, 1) != one) ++bad;
  }
  return {bad == 0, std::to_string(checked) + " exact identities, mismatches " + std::to_string(bad)};
}

Outcome stability() {
  const Params base = testing::reference_params();
  std::size_t checked = 0, bad = 0;
  for (int N = 1; N <= 3; ++N)
    for (const auto& lam : partitions_up_to(4, static_cast<std::size_t>(N))) {
      checked += 2;
      if (!pi_stability_check(lam, base, N)) ++bad;
      if (!intertwining_check(lam, base, N)) ++bad;
    }
  return {bad == 0, std::to_string(checked) + " pi/intertwining comparisons, failures " + std::to_string(bad)};
}

Outcome maximum_principle() {
  const Params p = testing::reference_params();
  Outcome out;
  std::ostringstream os;
  for (auto [N, K] : {std::pair{1, 12}, {2, 8}, {3, 6}}) {
    const auto rep = pmp_test(p, N, K, kPmpTrials, 42);
    os << "(N=" << N << ",K=" << K << ") trials " << rep.trials << " minimizers " << rep.minimizers_checked
       << " violations " << rep.violations.size() << "; ";
    if (!rep.violations.empty() || rep.trials < kPmpTrials || rep.checked == 0) out.pass = false;
  }
  out.detail = os.str();
  return out;
}

Outcome reversibility() {
  const Params p = testing::reference_params();
  Outcome out;
  std::size_t cycles = 0, cycle_fail = 0, balance = 0, balance_fail = 0;
  for (int N = 1; N <= 2; ++N)
    for (int K = 3; K <= 8; ++K) {
      const auto m = stationary_measure(p, N, K);
      for (const auto& s : m.sectors) {
        cycles += s.cycles_checked;
        cycle_fail += s.cycle_failures;
        balance += s.balance_checked;
        balance_fail += s.balance_failures;
        if (s.method != "detailed_balance") out.pass = false;
      }
    }
  if (cycle_fail || balance_fail || balance == 0) out.pass = false;
  out.detail = "cycles " + std::to_string(cycles) + " (failures " + std::to_string(cycle_fail) + "), balance rows " +
               std::to_string(balance) + " (nonzero " + std::to_string(balance_fail) + ")";
  return out;
}

Outcome orthogonality() {
  const Params base = orthogonality_params();
  Outcome out;
  std::ostringstream os;
  for (int N = 1; N <= 2; ++N) {
    const auto m = stationary_measure(shift_level(base, N), N, 10);
    const auto rep = orthogonality_check(m, 3);
    long double worst = 0, tol = 0;
    for (const auto& e : rep.entries)
      if (std::fabs(e.value) / e.tolerance >= worst) {
        worst = std::fabs(e.value) / e.tolerance;
        tol = e.tolerance;
      }
    os << "N=" << N << " pairs " << rep.entries.size() << " max |<.>|/tol " << fmt(static_cast<double>(worst))
       << " (tol at worst " << fmt(static_cast<double>(tol)) << ", tail mass "
       << fmt(static_cast<double>(rep.tail_mass)) << "); ";
    if (!(rep.max_ratio <= 1)) out.pass = false;
  }
  out.detail = os.str();
  return out;
}

Outcome norm_limit() {
  const Params base = norm_params();
  Outcome out;
  std::ostringstream os;
  for (const auto& lam : {Partition{1}, Partition{2}, Partition{1, 1}}) {
    const auto rep = norm_limit_check(lam, base, {2, 3, 4}, kNormTruncation);
    os << lam.to_string() << " gaps";
    for (const auto& e : rep.entries)
      os << ' ' << fmt(static_cast<double>(e.gap)) << "(tol " << fmt(static_cast<double>(e.tolerance)) << ")";
    os << "; ";
    const auto& last = rep.entries.back();
    if (!rep.decreasing || !(last.gap < kNormGapFinal) || !(last.tolerance < kNormGapFinal)) out.pass = false;
  }
  out.detail = os.str();
  return out;
}

double rel_gap(const FloatPoly& a, const FloatPoly& b) {
  double num = 0, den = 0;
  for (const auto& [k, v] : a.coeffs) {
    auto it = b.coeffs.find(k);
    num = std::max(num, std::fabs(v - (it == b.coeffs.end() ? 0.0 : it->second)));
  }
  for (const auto& [k, v] : b.coeffs) {
    den = std::max(den, std::fabs(v));
    if (!a.coeffs.count(k)) num = std::max(num, std::fabs(v));
  }
  return num / den;
}

Outcome semigroup_resolvent() {
  const Params p = testing::reference_params();
  Outcome out;
  std::mt19937_64 rng(3);
  double worst = 0;
  for (int N = 1; N <= 3; ++N)
    for (int k = 0; k < 10; ++k) {
      const SymPoly f = random_sympoly(N, 3, rng);
      if (f.is_zero()) continue;
      std::uniform_real_distribution<double> u(0.05, 2.0);
      const double s = u(rng), s2 = u(rng);
      worst = std::max(worst, rel_gap(semigroup_apply(semigroup_apply(f, s, p), s2, p), semigroup_apply(f, s + s2, p)));
    }
  if (!(worst <= kSemigroupRelTol)) out.pass = false;

  const SymPoly f = SymPoly::power_sum(2, 3) + SymPoly::monomial(2, Partition{1, 1}, 2) + SymPoly::power_sum(2, 1);
  const auto rep = resolvent_approx_check(f, 1.0, {10, 100, 1000, 10000}, p, 6);
  if (!rep.strictly_decreasing || !(rep.distances.back() < kResolventFinal)) out.pass = false;
  std::ostringstream os;
  os << "semigroup rel gap " << fmt(worst) << "; resolvent distances";
  for (double d : rep.distances) os << ' ' << fmt(d);
  out.detail = os.str();
  return out;
}

Outcome simulation() {
  const Params p = simulation_params();
  Outcome out;
  std::ostringstream os;
  struct Run {
    int N, K;
    double horizon;
    double bound;
  };
  for (const Run& run : {Run{1, 10, 5000, kTvOneParticle}, Run{2, 6, 20000, kTvTwoParticles}}) {
    const auto m = stationary_measure(p, run.N, run.K);
    // one trajectory per sign sector, since particles never change sign
    for (int mp = run.N; mp >= 0; --mp) {
      const State start{run.N, std::vector<int>(static_cast<std::size_t>(mp), 2),
                        std::vector<int>(static_cast<std::size_t>(run.N - mp), 2)};
      const auto traj = simulate(start, p, run.horizon, run.K, 7 + static_cast<std::uint64_t>(mp),
                                 {Truncation::reflect, false});
      const double tv = tv_distance(traj, m);
      os << "N=" << run.N << " sector(" << mp << ',' << run.N - mp << ") events " << traj.events << " TV "
         << fmt(tv) << "; ";
      if (traj.events < kMinEvents || !(tv <= run.bound)) out.pass = false;
    }
  }
  out.detail = os.str();
  return out;
}

Outcome macdonald() {
  Outcome out;
  std::size_t bad = 0, checked = 0;
  // the P_(2)|2 coefficient from the operator written out at a point
  std::mt19937_64 rng(404);
  for (int k = 0; k < 10; ++k) {
    const Scalar q = testing::unit_rational(rng), t = testing::unit_rational(rng);
    const auto x = testing::generic_point(rng, 2);
    auto E = [&](const SymPoly& f) {
      Scalar total = 0;
      for (std::size_t i = 0; i < 2; ++i) {
        auto y = x;
        y[i] *= q;
        total += (t * x[i] - x[1 - i]) / (x[i] - x[1 - i]) * evaluate(f, y);
      }
      return total;
    };
    const SymPoly m2 = SymPoly::monomial(2, Partition{2}), m11 = SymPoly::monomial(2, Partition{1, 1});
    const Scalar e = q * q * t + 1;
    const Scalar denom = E(m11) - e * evaluate(m11, x);
    if (denom == 0) continue;
    const Scalar c = (e * evaluate(m2, x) - E(m2)) / denom;
    ++checked;
    if (c != (1 + q) * (1 - t) / (1 - q * t) || macdonald_poly(Partition{2}, 2, q, t).coeff(Partition{1, 1}) != c) ++bad;
  }
  const Scalar q(1, 3), t(2, 5);
  std::size_t stable = 0;
  for (int d = 1; d <= 4; ++d)
    for (const auto& lam : partitions_of(d, static_cast<std::size_t>(d)))
      for (int N = d; N < 5; ++N) {
        ++stable;
        if (!macdonald_stability_check(lam, N, q, t)) ++bad;
      }
  out.pass = bad == 0 && checked > 0;
  out.detail = std::to_string(checked) + " coefficient oracles, " + std::to_string(stable) +
               " stability comparisons up to N=5, failures " + std::to_string(bad);
  return out;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"eigenrelation exactness", eigenrelation},
      {"constant-term identities", constant_terms},
      {"pi stability and intertwining", stability},
      {"positive maximum principle", maximum_principle},
      {"reversibility and stationarity", reversibility},
      {"orthogonality", orthogonality},
      {"norm limit", norm_limit},
      {"semigroup and resolvent", semigroup_resolvent},
      {"simulation vs stationary measure", simulation},
      {"Macdonald oracle and stability", macdonald},
  };
  int failures = 0, index = 0;
  for (const auto& [name, fn] : criteria) {
    ++index;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failures;
    std::printf("criterion %2d %-34s %s  [%.1fs] %s\n", index, name, o.pass ? "PASS" : "FAIL", secs, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
