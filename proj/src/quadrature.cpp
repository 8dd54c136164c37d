#include "oamtilt/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include "oamtilt/errors.hpp"

namespace oamtilt {

GaussLegendreRule gauss_legendre(std::size_t n, double a, double b) {
  if (n == 0) throw DomainError("Gauss-Legendre rule needs at least one node");
  if (!(b > a)) throw DomainError("Gauss-Legendre interval must have b > a");

  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double mid = 0.5 * (b + a);
  const double half = 0.5 * (b - a);
  const std::size_t m = (n + 1) / 2;
  const double dn = static_cast<double>(n);

  // Returns (P_n(z), P_n'(z)).
  auto legendre = [n, dn](double z) {
    double p0 = 1.0;
    double p1 = z;
    for (std::size_t k = 2; k <= n; ++k) {
      const double dk = static_cast<double>(k);
      const double p2 = ((2.0 * dk - 1.0) * z * p1 - (dk - 1.0) * p0) / dk;
      p0 = p1;
      p1 = p2;
    }
    return std::pair{p1, dn * (z * p1 - p0) / (z * z - 1.0)};
  };

  for (std::size_t i = 0; i < m; ++i) {
    // Tricomi initial guess for the i-th largest root.
    double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (dn + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, d] = legendre(z);
      const double step = p / d;
      z -= step;
      if (std::abs(step) < 4e-16) break;
    }
    const double dp = legendre(z).second;
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    // Roots come out in decreasing order; store ascending.
    rule.nodes[i] = mid - half * z;
    rule.nodes[n - 1 - i] = mid + half * z;
    rule.weights[i] = half * w;
    rule.weights[n - 1 - i] = half * w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = mid;
  return rule;
}

PolarQuadrature::PolarQuadrature(std::size_t n_radial, double r_max, std::size_t n_phi)
    : radial_(gauss_legendre(n_radial, 0.0, r_max)), r_max_(r_max), n_phi_(n_phi) {
  if (n_phi < 4) throw DomainError("polar quadrature needs n_phi >= 4");
}

double PolarQuadrature::phi(std::size_t k) const {
  return 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n_phi_);
}

double PolarQuadrature::phi_weight() const {
  return 2.0 * std::numbers::pi / static_cast<double>(n_phi_);
}

double PolarQuadrature::area_weight(std::size_t i) const {
  return radial_.nodes[i] * radial_.weights[i] * phi_weight();
}

int PolarQuadrature::max_azimuthal_order() const {
  return static_cast<int>(n_phi_ / 4) - 1;
}

}  // namespace oamtilt
