#ifndef JCINFO_PHASE_SPACE_HPP
#define JCINFO_PHASE_SPACE_HPP

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "jcinfo/model.hpp"

namespace jcinfo {

// Conventions: beta = X1 + i X2, so d^2 beta = dX1 dX2 = |beta| d|beta| dTheta,
// and <beta|n> = e^{-|beta|^2/2} (beta*)^n / sqrt(n!). The Husimi function
// of a coherent state |alpha> is then exp(-|beta - alpha|^2) / pi, with both
// marginal variances equal to 1/2.

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussLegendreRule gauss_legendre(int n);

struct GridOptions {
  int n_r = 200;
  int n_theta = 256;
  std::optional<double> r_max;  ///< default sqrt(n_max) + 4
};

/// Polar product quadrature: Gauss-Legendre in |beta| on [0, r_max] times the
/// periodic trapezoid rule in Theta.
struct PhaseSpaceGrid {
  std::vector<double> r_nodes;
  std::vector<double> r_weights;
  std::vector<double> theta_nodes;
  double theta_weight = 0.0;
  double r_max = 0.0;
  int n_r = 0;
  int n_theta = 0;

  std::size_t size() const { return static_cast<std::size_t>(n_r) * n_theta; }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * n_theta + j; }
};

/// Throws ConfigurationError if n_r < 16 or n_theta < 32.
PhaseSpaceGrid build_grid(const ModelConfig& cfg, const GridOptions& opts = {});

/// Same rule with an explicit truncation level, for callers that already
/// resolved it.
PhaseSpaceGrid build_grid_for_truncation(int n_max, const GridOptions& opts = {});

/// Husimi samples of one evolved state on a grid. Arrays are row-major with
/// the radial index outer: value(i, j) = q[i * n_theta + j].
struct QField {
  std::vector<double> q;
  std::vector<double> grad_x1;  ///< dQ/dX1
  std::vector<double> grad_x2;  ///< dQ/dX2
  double norm = 0.0;
  double max_q = 0.0;
  double t_scaled = 0.0;
  bool norm_flagged = false;  ///< |norm - 1| > 1e-8 but within the hard 1e-6 limit
  JointStateBranches state;   ///< kept for off-grid resampling (marginals)
};

struct HusimiGradient {
  double d_x1 = 0.0;
  double d_x2 = 0.0;
};

struct HusimiPoint {
  double q = 0.0;
  HusimiGradient grad;
};

/// e^{-|beta|^2/2} sum_n v[n] (beta*)^n / sqrt(n!), i.e. <beta|v>.
Complex coherent_overlap(Complex beta, const FockVector& v);

/// Q_F(beta) = (|<beta|upper>|^2 + |<beta|lower>|^2) / pi.
double husimi_q(Complex beta, const JointStateBranches& s);

/// Cartesian gradient of Q_F from term-wise differentiation of the Fock sums.
HusimiGradient husimi_gradient(Complex beta, const JointStateBranches& s);

/// Value and gradient in one pass.
HusimiPoint husimi_point(Complex beta, const JointStateBranches& s);

/// Samples Q and its gradient at every node. Throws GridCoverageError when the
/// quadrature of Q deviates from 1 by more than 1e-6.
QField sample_qfield(const JointStateBranches& s, const PhaseSpaceGrid& g);

/// sum_{i,j} f(r_i, Theta_j) r_i w_i dTheta, compensated and in ascending (i, j).
double integrate(const PhaseSpaceGrid& g, std::span<const double> f);

/// Radial integral sum_i f(r_i, Theta_j) r_i w_i for every angle, i.e. a
/// density over Theta whose trapezoid sum reproduces integrate().
std::vector<double> radial_integrate(const PhaseSpaceGrid& g, std::span<const double> f);

}  // namespace jcinfo

#endif  // JCINFO_PHASE_SPACE_HPP
