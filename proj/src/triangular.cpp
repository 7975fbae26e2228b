#include "qjd/triangular.hpp"

#include <map>
#include <set>

namespace qjd {

EigenvalueCollision::EigenvalueCollision(Partition target, Partition other, const Scalar& value)
    : std::runtime_error("eigenvalue collision between " + target.to_string() + " and " +
                         other.to_string() + " (common value " + value.get_str() +
                         "); choose more generic parameters"),
      target_(std::move(target)),
      other_(std::move(other)) {}

SymPoly triangular_eigenvector(int nvars, const std::vector<Partition>& support,
                               const ColumnFunction& column,
                               const DiagonalFunction& expected_diagonal) {
  if (support.empty()) throw std::invalid_argument("empty support");
  for (std::size_t i = 1; i < support.size(); ++i)
    if (!(support[i] < support[i - 1])) throw std::invalid_argument("support must be strictly decreasing");
  const std::set<Partition> members(support.begin(), support.end());

  std::vector<SymPoly> cols;
  cols.reserve(support.size());
  for (const auto& rho : support) {
    SymPoly col = column(rho);
    for (const auto& [kappa, v] : col.terms()) {
      if (!members.contains(kappa) || rho < kappa) {
        throw std::logic_error("operator is not triangular: m" + rho.to_string() + " maps onto m" +
                               kappa.to_string());
      }
    }
    if (col.coeff(rho) != expected_diagonal(rho)) {
      throw std::logic_error("diagonal entry at " + rho.to_string() + " is " + col.coeff(rho).get_str() +
                             ", expected " + expected_diagonal(rho).get_str());
    }
    cols.push_back(std::move(col));
  }

  const Scalar mu = cols[0].coeff(support[0]);
  std::vector<Scalar> c(support.size());
  c[0] = 1;
  for (std::size_t k = 1; k < support.size(); ++k) {
    const Partition& nu = support[k];
    Scalar rhs = 0;
    for (std::size_t j = 0; j < k; ++j)
      if (c[j] != 0) rhs += cols[j].coeff(nu) * c[j];
    Scalar denom = mu - cols[k].coeff(nu);
    if (denom == 0) throw EigenvalueCollision(support[0], nu, mu);
    c[k] = rhs / denom;
  }
  SymPoly out(nvars);
  for (std::size_t k = 0; k < support.size(); ++k) out.add_term(support[k], c[k]);
  return out;
}

}  // namespace qjd
