// qjd: command-line driver for polynomial tables, verification suites and
// simulations.

#include "qjd/dynamics.hpp"
#include "qjd/macdonald.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

using namespace qjd;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitFailure = 2;

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  std::string q = "1/4", t = "1/5", a = "2", b = "-3";
  std::string gamma = "1/2+1i";
  std::string delta;
  int N = 1;
  int K = 8;
  std::vector<std::string> lambdas;
  double horizon = 100;
  std::uint64_t seed = 7;
  std::string out;
  std::optional<double> tol;
  int maxdeg = 4;
  int trials = 200;
  bool check_stability = false;
  std::string truncation = "reflect";
  std::string start;
};

// "re+im i" with rational parts; "1/2+i", "-1-3/4i" and "0.5+2*i" all parse.
std::pair<Scalar, Scalar> parse_complex(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty() || s.back() != 'i') throw ConfigError("complex parameter must end in 'i': " + text);
  s.pop_back();
  if (!s.empty() && s.back() == '*') s.pop_back();
  std::size_t split = std::string::npos;
  for (std::size_t k = s.size(); k-- > 1;)
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      split = k;
      break;
    }
  Scalar re = 0, im;
  std::string im_text = s;
  if (split != std::string::npos) {
    re = parse_scalar(s.substr(0, split));
    im_text = s.substr(split);
  }
  if (im_text.empty() || im_text == "+") im = 1;
  else if (im_text == "-") im = -1;
  else im = parse_scalar(im_text);
  return {re, im};
}

Params params_of(const RunConfig& c) {
  Params p;
  p.q = parse_scalar(c.q);
  p.t = parse_scalar(c.t);
  p.a = parse_scalar(c.a);
  p.b = parse_scalar(c.b);
  auto [re, im] = parse_complex(c.gamma);
  if (!c.delta.empty()) {
    auto [dre, dim] = parse_complex(c.delta);
    if (dre != re || dim != -im) throw ParameterError("delta must be the complex conjugate of gamma");
  }
  p.cd = ConjugatePair::from_real_imag(re, im);
  p.validate();
  return p;
}

std::vector<Partition> lambdas_of(const RunConfig& c) {
  std::vector<Partition> out;
  for (const auto& s : c.lambdas) out.push_back(parse_partition(s));
  return out;
}

unsigned thread_count() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("QJD_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(v));
  }
  return n;
}

// Runs fn(0..n-1) on up to QJD_THREADS workers; results keep index order.
template <class Fn>
auto parallel_map(std::size_t n, Fn fn) -> std::vector<decltype(fn(std::size_t{}))> {
  using R = decltype(fn(std::size_t{}));
  std::vector<std::optional<R>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < n;) {
      try {
        slots[i] = fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned k = std::min<unsigned>(thread_count(), static_cast<unsigned>(std::max<std::size_t>(n, 1)));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < k; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  std::vector<R> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    out.push_back(std::move(*slots[i]));
  }
  return out;
}

void emit(const json& j, const std::string& path) {
  const std::string text = j.dump(2) + "\n";
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write " + path);
  f << text;
}

json expansion_terms(const std::map<Partition, Scalar>& m) {
  SymFuncExpansion f;
  f.basis = Basis::macdonald;
  f.coeffs = m;
  return to_json(f)["terms"];
}

// ---------------------------------------------------------------------------

int cmd_poly(const RunConfig& c) {
  const Params p = params_of(c);
  const int N = c.N;
  if (N < 1) throw ConfigError("--N must be at least 1");
  const auto lams = lambdas_of(c);
  for (const auto& lam : lams)
    if (lam.length() > static_cast<std::size_t>(N))
      throw ConfigError("partition " + lam.to_string() + " has more than N=" + std::to_string(N) + " parts");

  json out = {{"command", "poly"}, {"params", params_json(p)}, {"N", N}, {"provenance", "exact"}};
  if (lams.empty()) {
    SymFuncExpansion one;
    one.coeffs[Partition{}] = 1;
    out["results"] = json::array({{{"lambda", json::array()}, {"Phi", to_json(one)}}});
    emit(out, c.out);
    return kExitOk;
  }
  bool all_stable = true;
  auto rows = parallel_map(lams.size(), [&](std::size_t i) {
    const Partition& lam = lams[i];
    json r = {{"lambda", lam.parts()}};
    r["P"] = to_json(macdonald_poly(lam, N, p.q, p.t));
    r["phi"] = to_json(big_qjacobi_poly(lam, p, N));
    r["mu_N"] = mu_N(lam, p, N).get_str();
    r["mu_infinity"] = mu_infinity(lam, p).get_str();
    r["pi"] = expansion_terms(pi_coeffs(lam, p, N));
    r["Phi"] = to_json(phi_symfunc(lam, p));
    r["Phi_monomial"] = to_json(phi_symfunc_monomial(lam, p));
    r["h"] = h_norm(lam, p).get_str();
    if (c.check_stability) r["stability"] = pi_stability_check(lam, p, N) ? "pass" : "fail";
    return r;
  });
  for (const auto& r : rows)
    if (r.contains("stability") && r["stability"] == "fail") all_stable = false;
  out["results"] = rows;
  emit(out, c.out);
  return all_stable ? kExitOk : kExitFailure;
}

// ---------------------------------------------------------------------------

Report suite_eigen(const RunConfig& c, const Params& p) {
  Report rep;
  rep.check = "eigen";
  const auto lams = partitions_up_to(c.maxdeg, static_cast<std::size_t>(c.N));
  auto rows = parallel_map(lams.size(), [&](std::size_t i) {
    const SymPoly& phi = big_qjacobi_poly(lams[i], p, c.N);
    const SymPoly res = apply_DN(phi, p) - phi * mu_N(lams[i], p, c.N);
    return json{{"lambda", lams[i].parts()}, {"mu", mu_N(lams[i], p, c.N).get_str()},
                {"residual_terms", res.terms().size()}, {"residual", to_json(res)["terms"]}};
  });
  rep.pass = true;
  for (const auto& r : rows)
    if (r["residual_terms"] != 0) rep.pass = false;
  rep.details["residuals"] = rows;
  rep.details["provenance"] = "exact";
  return rep;
}

Report suite_ct(const RunConfig& c, const Params& p) {
  Report rep;
  rep.check = "ct";
  rep.pass = true;
  json rows = json::array();
  for (int n = 1; n <= c.N; ++n) {
    const Scalar p2 = apply_DN(SymPoly::power_sum(n, 2), p).constant_term();
    json r = {{"N", n}, {"ct_p2", p2.get_str()}, {"formula_p2", ct_p2_formula(p, n).get_str()}};
    bool ok = p2 == ct_p2_formula(p, n);
    if (n >= 2) {
      const Scalar e2 = apply_DN(SymPoly::elementary(n, 2), p).constant_term();
      r["ct_e2"] = e2.get_str();
      r["formula_e2"] = ct_e2_formula(p, n).get_str();
      ok = ok && e2 == ct_e2_formula(p, n);
    }
    r["status"] = ok ? "pass" : "fail";
    rep.pass = rep.pass && ok;
    rows.push_back(r);
  }
  rep.details["residuals"] = rows;
  rep.details["provenance"] = "exact";
  return rep;
}

Report suite_exact_per_lambda(const RunConfig& c, const Params& p, const std::string& name,
                              bool (*check)(const Partition&, const Params&, int)) {
  Report rep;
  rep.check = name;
  rep.pass = true;
  std::vector<std::pair<Partition, int>> items;
  for (int n = 1; n <= c.N; ++n)
    for (const auto& lam : partitions_up_to(c.maxdeg, static_cast<std::size_t>(n))) items.emplace_back(lam, n);
  auto ok = parallel_map(items.size(), [&](std::size_t i) { return check(items[i].first, p, items[i].second); });
  json rows = json::array();
  for (std::size_t i = 0; i < items.size(); ++i) {
    rows.push_back({{"lambda", items[i].first.parts()}, {"N", items[i].second}, {"status", ok[i] ? "pass" : "fail"}});
    rep.pass = rep.pass && ok[i];
  }
  rep.details["residuals"] = rows;
  rep.details["provenance"] = "exact";
  return rep;
}

Report suite_pmp(const RunConfig& c, const Params& p) {
  Report rep;
  rep.check = "pmp";
  const auto r = pmp_test(p, c.N, c.K, c.trials, c.seed, c.maxdeg);
  rep.pass = r.violations.empty();
  rep.details = {{"trials", r.trials},
                 {"checked", r.checked},
                 {"minimizers_checked", r.minimizers_checked},
                 {"zero_state_minimizers", r.zero_state_minimizers},
                 {"frontier_discarded", r.frontier_discarded},
                 {"provenance", "exact"}};
  json v = json::array();
  for (const auto& x : r.violations) v.push_back({{"state", x.state}, {"value", x.value}, {"polynomial", x.polynomial}});
  rep.details["violations"] = v;
  return rep;
}

Report suite_resolvent(const RunConfig& c, const Params& p) {
  Report rep;
  rep.check = "resolvent";
  rep.tolerance = c.tol.value_or(1e-3);
  SymPoly f = SymPoly::power_sum(c.N, 3) + SymPoly::power_sum(c.N, 1);
  if (c.N >= 2) f += SymPoly::monomial(c.N, Partition{1, 1}, 2);
  const auto r = resolvent_approx_check(f, c.horizon, {10, 100, 1000, 10000}, p, c.K);
  rep.max_residual = r.distances.back();
  rep.pass = r.strictly_decreasing && r.distances.back() < rep.tolerance;
  json rows = json::array();
  for (std::size_t i = 0; i < r.distances.size(); ++i)
    rows.push_back({{"r", r.r_values[i]}, {"distance", fixed(r.distances[i])}});
  rep.details = {{"f", to_json(f)}, {"s", c.horizon}, {"residuals", rows},
                 {"strictly_decreasing", r.strictly_decreasing}, {"provenance", "float"}};
  return rep;
}

Report suite_cycle(const RunConfig& c, const Params& p) {
  Report rep;
  rep.check = "cycle";
  const auto m = stationary_measure(p, c.N, c.K);
  rep.pass = true;
  json rows = json::array();
  for (const auto& s : m.sectors) {
    rows.push_back({{"m_plus", s.m_plus},
                    {"m_minus", s.m_minus},
                    {"states", s.states},
                    {"method", s.method},
                    {"cycles_checked", s.cycles_checked},
                    {"cycle_failures", s.cycle_failures},
                    {"balance_checked", s.balance_checked},
                    {"balance_failures", s.balance_failures}});
    if (s.cycle_failures || s.balance_failures) rep.pass = false;
  }
  rep.details = {{"residuals", rows}, {"provenance", "exact"}};
  return rep;
}

Report suite_orthogonality(const RunConfig& c, const Params& p) {
  Report rep;
  rep.check = "orthogonality";
  const auto m = stationary_measure(p, c.N, c.K);
  const auto r = orthogonality_check(m, std::min(c.maxdeg, 3));
  json rows = json::array();
  for (const auto& e : r.entries)
    rows.push_back({{"lambda", e.lambda.parts()}, {"mu", e.mu.parts()}, {"value", fixed(e.value)},
                    {"tolerance", fixed(e.tolerance)}});
  rep.max_residual = static_cast<double>(r.max_ratio);
  rep.tolerance = 1;
  rep.pass = r.max_ratio <= 1;
  rep.details = {{"residuals", rows},
                 {"max_ratio", fixed(r.max_ratio)},
                 {"tail_mass", fixed(r.tail_mass)},
                 {"fit_residual", fixed(r.fit_residual)},
                 {"provenance", "float over exact weights"}};
  return rep;
}

Report suite_norm(const RunConfig& c, const Params& p) {
  Report rep;
  rep.check = "norm";
  rep.tolerance = c.tol.value_or(1e-2);
  auto lams = lambdas_of(c);
  if (lams.empty()) lams = {Partition{1}, Partition{2}, Partition{1, 1}};
  std::vector<int> levels;
  for (int n = 2; n <= std::max(2, c.N); ++n) levels.push_back(n);
  rep.pass = true;
  json rows = json::array();
  for (const auto& lam : lams) {
    const auto r = norm_limit_check(lam, p, levels, c.K);
    json entries = json::array();
    for (const auto& e : r.entries)
      entries.push_back({{"N", e.N}, {"value", fixed(e.value)}, {"gap", fixed(e.gap)}, {"tolerance", fixed(e.tolerance)}});
    rows.push_back({{"lambda", lam.parts()}, {"h", fixed(r.h)}, {"entries", entries}, {"decreasing", r.decreasing}});
    rep.max_residual = std::max(rep.max_residual, static_cast<double>(r.entries.back().gap));
    if (!r.decreasing || !(r.entries.back().gap < rep.tolerance)) rep.pass = false;
  }
  rep.details = {{"residuals", rows}, {"provenance", "float over exact weights"}};
  return rep;
}

Report suite_semigroup(const RunConfig& c, const Params& p) {
  Report rep;
  rep.check = "semigroup";
  rep.tolerance = c.tol.value_or(1e-12);
  std::mt19937_64 rng(c.seed);
  json rows = json::array();
  for (int k = 0; k < std::min(c.trials, 50); ++k) {
    const SymPoly f = random_sympoly(c.N, std::min(c.maxdeg, 3), rng);
    if (f.is_zero()) continue;
    const auto lhs = semigroup_apply(semigroup_apply(f, 0.4, p), 0.7, p);
    const auto rhs = semigroup_apply(f, 1.1, p);
    double num = 0, den = 0;
    for (const auto& [kappa, v] : rhs.coeffs) {
      auto it = lhs.coeffs.find(kappa);
      num = std::max(num, std::fabs(v - (it == lhs.coeffs.end() ? 0.0 : it->second)));
      den = std::max(den, std::fabs(v));
    }
    const double rel = den > 0 ? num / den : num;
    rep.max_residual = std::max(rep.max_residual, rel);
    rows.push_back(fixed(rel));
  }
  rep.pass = rep.max_residual <= rep.tolerance;
  rep.details = {{"residuals", rows}, {"provenance", "float exponentials on exact coefficients"}};
  return rep;
}

int cmd_verify(const std::string& suite, const RunConfig& c) {
  const Params p = params_of(c);
  if (c.N < 1) throw ConfigError("--N must be at least 1");
  Report rep;
  if (suite == "eigen") rep = suite_eigen(c, p);
  else if (suite == "ct") rep = suite_ct(c, p);
  else if (suite == "pi") rep = suite_exact_per_lambda(c, p, "pi", pi_stability_check);
  else if (suite == "intertwining") rep = suite_exact_per_lambda(c, p, "intertwining", intertwining_check);
  else if (suite == "pmp") rep = suite_pmp(c, p);
  else if (suite == "resolvent") rep = suite_resolvent(c, p);
  else if (suite == "cycle") rep = suite_cycle(c, p);
  else if (suite == "orthogonality") rep = suite_orthogonality(c, p);
  else if (suite == "norm") rep = suite_norm(c, p);
  else if (suite == "semigroup") rep = suite_semigroup(c, p);
  else throw ConfigError("unknown suite: " + suite);
  rep.params = p;
  rep.N = c.N;
  rep.K = c.K;
  rep.seed = c.seed;
  emit(rep.to_json(), c.out);
  return rep.pass ? kExitOk : kExitFailure;
}

// ---------------------------------------------------------------------------

int cmd_simulate(const RunConfig& c) {
  const Params p = params_of(c);
  if (c.N < 1) throw ConfigError("--N must be at least 1");
  if (c.K < 3) throw ConfigError("--K must be at least 3");
  if (c.horizon < 0) throw ConfigError("--horizon must be nonnegative");
  SimulationOptions opts;
  if (c.truncation == "reflect") opts.mode = Truncation::reflect;
  else if (c.truncation == "stop") opts.mode = Truncation::stop;
  else throw ConfigError("--truncation must be reflect or stop");
  opts.record_path = !c.out.empty();

  State start{c.N, std::vector<int>(static_cast<std::size_t>(c.N), 2), {}};
  if (!c.start.empty()) start = parse_state(c.start);
  if (start.capacity != c.N) throw ConfigError("--start capacity differs from --N");

  const auto m = stationary_measure(p, c.N, c.K);
  const auto traj = simulate(start, p, c.horizon, c.K, c.seed, opts);
  json out = {{"command", "simulate"},
              {"params", params_json(p)},
              {"N", c.N},
              {"K", c.K},
              {"seed", c.seed},
              {"horizon", c.horizon},
              {"start", to_string(start)},
              {"final_state", to_string(traj.final_state)},
              {"truncation", c.truncation},
              {"truncated", traj.truncated},
              {"frontier_hits", traj.frontier_hits},
              {"events", traj.events},
              {"end_time", fixed(traj.end_time)},
              {"tail_mass", fixed(m.tail_mass)},
              {"fit_residual", fixed(m.fit_residual)},
              {"provenance", {{"measure", "exact rational weights on the window"}, {"tv_distance", "float"}}}};
  if (traj.end_time > 0) {
    out["tv_distance"] = fixed(tv_distance(traj, m));
    out["tolerance"] = fixed(m.tail_mass);
  } else {
    out["tv_distance"] = nullptr;
  }
  if (c.out.empty()) {
    std::cout << out.dump(2) << "\n";
    return kExitOk;
  }
  namespace fs = std::filesystem;
  fs::create_directories(c.out);
  std::ofstream(fs::path(c.out) / "trajectory.csv") << trajectory_csv(traj);
  std::ofstream(fs::path(c.out) / "measure.csv") << measure_csv(m);
  emit(out, (fs::path(c.out) / "comparison.json").string());
  return kExitOk;
}

void add_common(CLI::App* app, RunConfig& c) {
  app->add_option("--q", c.q, "q in (0,1), as p/q or decimal");
  app->add_option("--t", c.t, "t in (0,1)");
  app->add_option("--a", c.a, "a > 0");
  app->add_option("--b", c.b, "b < 0");
  app->add_option("--gamma", c.gamma, "c as re+im i, im != 0");
  app->add_option("--delta", c.delta, "d, must be the conjugate of c");
  app->add_option("--N", c.N, "number of variables / particles");
  app->add_option("--K", c.K, "window: largest grid index");
  app->add_option("--lambda", c.lambdas, "partition such as 2,1 (repeatable)");
  app->add_option("--horizon", c.horizon, "time horizon (simulate) or s (resolvent)");
  app->add_option("--seed", c.seed, "random seed");
  app->add_option("--out", c.out, "output file (poly, verify) or directory (simulate)");
  app->add_option("--tol", c.tol, "tolerance override");
  app->add_option("--maxdeg", c.maxdeg, "largest degree considered");
  app->add_option("--trials", c.trials, "number of random trials");
  app->add_flag("--check-stability", c.check_stability, "compare pi coefficients at N and N+1");
  app->add_option("--truncation", c.truncation, "reflect or stop");
  app->add_option("--start", c.start, "start state, e.g. N=1;+[2];-[];z=0");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Big q-Jacobi polynomials and the associated jump processes"};
  app.require_subcommand(1);
  RunConfig poly_cfg, verify_cfg, sim_cfg;
  std::string suite;
  auto* poly = app.add_subcommand("poly", "P, phi, pi, Phi, mu and h for the given partitions");
  add_common(poly, poly_cfg);
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("suite", suite,
                     "eigen | ct | pi | intertwining | pmp | resolvent | cycle | orthogonality | norm | semigroup")
      ->required();
  add_common(verify, verify_cfg);
  auto* sim = app.add_subcommand("simulate", "simulate the particle system and compare with the stationary measure");
  add_common(sim, sim_cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  auto fail = [](const char* kind, const std::exception& e, int code) {
    std::cout << json{{"status", "error"}, {"kind", kind}, {"message", e.what()}}.dump(2) << "\n";
    std::cerr << "error: " << e.what() << "\n";
    return code;
  };
  try {
    if (*poly) return cmd_poly(poly_cfg);
    if (*verify) return cmd_verify(suite, verify_cfg);
    if (*sim) return cmd_simulate(sim_cfg);
  } catch (const EigenvalueCollision& e) {
    return fail("eigenvalue_collision", e, kExitFailure);
  } catch (const StabilityViolation& e) {
    return fail("stability_violation", e, kExitFailure);
  } catch (const ParameterError& e) {
    return fail("config", e, kExitConfig);
  } catch (const ConfigError& e) {
    return fail("config", e, kExitConfig);
  } catch (const std::invalid_argument& e) {
    return fail("config", e, kExitConfig);
  } catch (const std::exception& e) {
    return fail("computation", e, kExitFailure);
  }
  return kExitOk;
}
