#pragma once

#include <cstddef>
#include <vector>

namespace oamtilt {

struct GaussLegendreRule {
  std::vector<double> nodes;    // strictly increasing
  std::vector<double> weights;  // positive
};

/// n-point Gauss-Legendre rule mapped onto [a, b]. Nodes come from Newton
/// iteration on the three-term Legendre recurrence.
GaussLegendreRule gauss_legendre(std::size_t n, double a, double b);

/// Gauss-Legendre in rho on [0, r_max] times a uniform azimuthal grid
/// phi_k = 2 pi k / n_phi. The area element rho is folded into area_weight().
class PolarQuadrature {
 public:
  PolarQuadrature(std::size_t n_radial, double r_max, std::size_t n_phi);

  std::size_t n_radial() const { return radial_.nodes.size(); }
  std::size_t n_phi() const { return n_phi_; }
  double r_max() const { return r_max_; }
  double radius(std::size_t i) const { return radial_.nodes[i]; }
  double radial_weight(std::size_t i) const { return radial_.weights[i]; }
  double phi(std::size_t k) const;
  double phi_weight() const;
  /// rho_i * w_i * dphi: the full weight of node (i, k).
  double area_weight(std::size_t i) const;

  /// Highest azimuthal order the rule supports (n_phi >= 4 (l_max + 1)).
  int max_azimuthal_order() const;

 private:
  GaussLegendreRule radial_;
  double r_max_;
  std::size_t n_phi_;
};

}  // namespace oamtilt
