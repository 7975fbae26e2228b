#include "qjd/interp.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <set>
#include <utility>

namespace qjd {

namespace {

std::vector<Scalar> draw_point(std::mt19937_64& rng, int nvars, int range) {
  std::uniform_int_distribution<int> dist(-range, range);
  std::set<int> used;
  std::vector<Scalar> x;
  while (static_cast<int>(x.size()) < nvars) {
    int v = dist(rng);
    if (v == 0 || !used.insert(v).second) continue;
    x.emplace_back(v);
  }
  return x;
}

std::unique_ptr<InterpolationGrid> build_grid(int nvars, int max_degree) {
  auto grid = std::make_unique<InterpolationGrid>();
  grid->nvars = nvars;
  grid->max_degree = max_degree;
  grid->seed = kInterpolationSeed + 1000003ULL * static_cast<std::uint64_t>(nvars) +
               static_cast<std::uint64_t>(max_degree);
  grid->basis = partitions_up_to(max_degree, static_cast<std::size_t>(nvars));
  const std::size_t n = grid->basis.size();
  std::mt19937_64 rng(grid->seed);
  const int range = 3 * nvars + 2 * max_degree + 4;

  auto row_of = [&](const std::vector<Scalar>& x) {
    std::vector<Scalar> row(n);
    for (std::size_t c = 0; c < n; ++c) row[c] = monomial_symmetric<Scalar>(grid->basis[c], x);
    return row;
  };

  // Greedy: keep a candidate only if it raises the rank.
  std::vector<std::vector<Scalar>> rows;
  std::size_t attempts = 0;
  while (rows.size() < n) {
    if (++attempts > 200 * (n + 1)) throw InterpolationFailure("could not find a unisolvent point set");
    auto x = draw_point(rng, nvars, range);
    auto row = row_of(x);
    RationalMatrix m(rows.size() + 1, n);
    for (std::size_t r = 0; r < rows.size(); ++r)
      for (std::size_t c = 0; c < n; ++c) m(r, c) = rows[r][c];
    for (std::size_t c = 0; c < n; ++c) m(rows.size(), c) = row[c];
    if (rank(m) == rows.size() + 1) {
      rows.push_back(std::move(row));
      grid->points.push_back(std::move(x));
    }
  }
  grid->points.push_back(draw_point(rng, nvars, range));

  RationalMatrix a(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) a(r, c) = rows[r][c];
  auto inv = inverse(a);
  if (!inv) throw InterpolationFailure("interpolation matrix is singular");
  grid->inverse = std::move(*inv);
  return grid;
}

}  // namespace

const InterpolationGrid& interpolation_grid(int nvars, int max_degree) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<InterpolationGrid>> cache;
  const auto key = std::make_pair(nvars, max_degree);
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return *it->second;
  }
  auto grid = build_grid(nvars, max_degree);
  std::lock_guard lock(mutex);
  auto [it, inserted] = cache.try_emplace(key, std::move(grid));
  return *it->second;
}

SymPoly interpolate_symmetric(int nvars, int max_degree, const PointFunction& values) {
  if (nvars < 1) throw std::invalid_argument("interpolation needs at least one variable");
  SymPoly out(nvars);
  if (max_degree < 0) return out;
  const auto& grid = interpolation_grid(nvars, max_degree);
  const std::size_t n = grid.basis.size();
  std::vector<Scalar> rhs(n);
  for (std::size_t r = 0; r < n; ++r) rhs[r] = values(grid.points[r]);
  auto coeffs = grid.inverse * rhs;
  for (std::size_t c = 0; c < n; ++c) out.add_term(grid.basis[c], coeffs[c]);

  const auto& check = grid.points.back();
  if (evaluate(out, check) != values(check)) {
    throw InterpolationFailure("values are not those of a symmetric polynomial of degree <= " +
                               std::to_string(max_degree) + " in " + std::to_string(nvars) +
                               " variables");
  }
  return out;
}

}  // namespace qjd
