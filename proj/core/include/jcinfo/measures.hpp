#ifndef JCINFO_MEASURES_HPP
#define JCINFO_MEASURES_HPP

#include <optional>
#include <string>
#include <vector>

#include "jcinfo/model.hpp"
#include "jcinfo/phase_space.hpp"

namespace jcinfo {

/// Means and variances of the quadratures X1 = Re(beta), X2 = Im(beta) under Q.
struct VariancePair {
  double var_x1 = 0.0;
  double var_x2 = 0.0;
  double mean_x1 = 0.0;
  double mean_x2 = 0.0;
};

/// Result of the one-dimensional Cramer-Rao check on a Husimi marginal.
struct MarginalCr {
  double variance = 0.0;
  double fisher = 0.0;
  double product = 0.0;  ///< variance * fisher, >= 1 for any density
};

/// Every quantifier for one time sample.
struct MeasureRecord {
  double t_scaled = 0.0;
  double s_w = 0.0;                ///< Wehrl entropy (nats)
  double i_f = 0.0;                ///< Husimi Fisher information
  std::vector<double> s_theta;     ///< Wehrl phase density per theta node
  std::vector<double> i_theta;     ///< Fisher phase density per theta node
  VariancePair variances;
  double delta_sq = 0.0;           ///< <|beta|^2> - <|beta|>^2
  double cr_product = 0.0;         ///< i_f * delta_sq
  std::optional<MarginalCr> marginal_x1;
  std::optional<MarginalCr> marginal_x2;
};

/// Lower bound of the Wehrl entropy, attained by coherent states.
double wehrl_lieb_bound();

double wehrl_entropy(const QField& qf, const PhaseSpaceGrid& g);
std::vector<double> wehrl_pd(const QField& qf, const PhaseSpaceGrid& g);

VariancePair marginal_stats(const QField& qf, const PhaseSpaceGrid& g);

/// Gamma = sum_j (sigma_j dlnQ/dX_j)^2 per node, zero where Q < 1e-12 max Q.
std::vector<double> fisher_gamma(const QField& qf, const VariancePair& vp);

/// I_F = integral of Q Gamma d^2 beta.
double fisher_information(const QField& qf, const PhaseSpaceGrid& g);

/// Radial integral of Q Gamma at each theta node. Nonnegative; its angular
/// trapezoid sum is fisher_information().
std::vector<double> fisher_pd(const QField& qf, const PhaseSpaceGrid& g);

/// Closed-form t = 0 Fisher phase density for a coherent field:
///   (1/2pi) e^{x^2 - a^2} { x sqrt(pi) [1 + erf x] f1 + e^{-x^2} f2 },
/// x = a cos(theta), f_j = a^2 - x^2 + j/2.
double initial_fisher_pd_closed_form(double alpha_mag, double theta);

/// The t = 0 Fisher/Wehrl connections evaluated numerically.
struct InitialIdentityReport {
  double alpha_mag = 0.0;
  double i_f = 0.0;
  double s_w = 0.0;
  double scalar_residual = 0.0;        ///< I_F - (S_W + 1 - ln pi); expected ~0
  double phase_residual_max = 0.0;     ///< max over theta of the phase-density identity residual
  double closed_form_deviation = 0.0;  ///< max over theta |fisher_pd - closed form|
  double difference_at_theta0 = 0.0;   ///< I_F - I_theta(0) - (1 - ln pi)
};
InitialIdentityReport initial_identities(double alpha_mag, const GridOptions& opts = {});

/// <|beta|^s> under Q for s in {1, 2}.
double beta_moments(const QField& qf, const PhaseSpaceGrid& g, int s);

/// I_F * (<|beta|^2> - <|beta|>^2).
double cr_product(const QField& qf, const PhaseSpaceGrid& g);

/// Options for the Cartesian resampling used by the marginal checks.
struct MarginalOptions {
  int points = 512;  ///< uniform nodes per axis on [-r_max, r_max]
};

/// Builds the 1-D marginal of Q along `axis` (1 or 2) and returns its variance,
/// its Fisher information and their product.
MarginalCr marginal_cr_check(const QField& qf, const PhaseSpaceGrid& g, int axis,
                             const MarginalOptions& opts = {});

/// Both axes from a single Cartesian resampling.
std::pair<MarginalCr, MarginalCr> marginal_cr_both(const QField& qf, const PhaseSpaceGrid& g,
                                                   const MarginalOptions& opts = {});

/// All quantifiers for one sample. The marginal checks are the expensive part
/// and only run when requested.
MeasureRecord compute_record(const QField& qf, const PhaseSpaceGrid& g,
                             bool with_marginals = false);

/// Invariant violations of a record, empty when it is sound.
std::vector<std::string> audit_record(const MeasureRecord& rec, const PhaseSpaceGrid& g);

}  // namespace jcinfo

#endif  // JCINFO_MEASURES_HPP
