#include "jcinfo/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "jcinfo/errors.hpp"

namespace jcinfo {

void ModelConfig::validate() const {
  if (!std::isfinite(alpha_mag) || alpha_mag < 0.0) {
    throw InvalidParameterError("alpha_mag must be a finite nonnegative number");
  }
  if (!std::isfinite(alpha_phase)) {
    throw InvalidParameterError("alpha_phase must be finite");
  }
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw InvalidParameterError("lambda must be positive");
  }
  if (!(tail_tol > 0.0 && tail_tol < 1.0)) {
    throw InvalidParameterError("tail_tol must lie in (0, 1)");
  }
  if (n_max && *n_max < 1) {
    throw InvalidParameterError("n_max must be at least 1");
  }
}

double FockVector::norm_sq() const {
  double s = 0.0;
  for (const auto& a : amps) s += std::norm(a);
  return s;
}

FockVector coherent_amplitudes(double alpha_mag, double alpha_phase, int n_max) {
  if (!(alpha_mag >= 0.0)) {
    throw InvalidParameterError("coherent_amplitudes: alpha_mag must be nonnegative");
  }
  if (n_max < 0) {
    throw InvalidParameterError("coherent_amplitudes: n_max must be nonnegative");
  }
  FockVector v(static_cast<std::size_t>(n_max) + 1);
  if (alpha_mag == 0.0) {
    v[0] = 1.0;
    return v;
  }
  const double log_a = std::log(alpha_mag);
  const double half_mean = 0.5 * alpha_mag * alpha_mag;
  for (int n = 0; n <= n_max; ++n) {
    const double log_mag = n * log_a - 0.5 * std::lgamma(n + 1.0) - half_mean;
    v[n] = std::polar(std::exp(log_mag), n * alpha_phase);
  }
  return v;
}

double poisson_tail(double alpha_mag, int n) {
  const double mean = alpha_mag * alpha_mag;
  if (mean == 0.0) return 0.0;
  const double log_mean = std::log(mean);
  // Terms beyond mean + 40 sqrt(mean) + 60 are below 1e-300 relative.
  const int upper = std::max(n + 1, static_cast<int>(mean + 40.0 * std::sqrt(mean) + 60.0));
  double tail = 0.0;
  for (int k = upper; k > n; --k) {
    tail += std::exp(k * log_mean - mean - std::lgamma(k + 1.0));
  }
  return tail;
}

int choose_truncation(double alpha_mag, double tail_tol) {
  if (!(tail_tol > 0.0 && tail_tol < 1.0)) {
    throw InvalidParameterError("choose_truncation: tail_tol must lie in (0, 1)");
  }
  constexpr int kFloor = 16;
  if (alpha_mag == 0.0) return kFloor;

  const double mean = alpha_mag * alpha_mag;
  const double log_mean = std::log(mean);
  const int upper = static_cast<int>(mean + 40.0 * std::sqrt(mean) + 60.0);
  // suffix[k] = sum_{j >= k} p_j, accumulated from the small end of the tail.
  std::vector<double> suffix(upper + 2, 0.0);
  for (int k = upper; k >= 0; --k) {
    suffix[k] = suffix[k + 1] + std::exp(k * log_mean - mean - std::lgamma(k + 1.0));
  }
  int n = 0;
  while (n < upper && suffix[n + 1] >= tail_tol) ++n;
  return std::max(kFloor, n + 1);
}

int resolve_truncation(const ModelConfig& cfg) {
  return cfg.n_max ? *cfg.n_max : choose_truncation(cfg.alpha_mag, cfg.tail_tol);
}

JointStateBranches evolve_closed_form(const ModelConfig& cfg, double t_scaled) {
  cfg.validate();
  const int n_max = resolve_truncation(cfg);
  const FockVector c = coherent_amplitudes(cfg.alpha_mag, cfg.alpha_phase, n_max);

  JointStateBranches s;
  s.t_scaled = t_scaled;
  s.upper = FockVector(c.size());
  s.lower = FockVector(c.size());
  const Complex i{0.0, 1.0};
  for (int n = 0; n <= n_max; ++n) {
    s.upper[n] = c[n] * std::cos((n + 1.0) * t_scaled);
  }
  for (int m = 1; m <= n_max; ++m) {
    s.lower[m] = i * c[m - 1] * std::sin(m * t_scaled);
  }
  return s;
}

JointStateBranches evolve_brute_force(const ModelConfig& cfg, double t_scaled) {
  cfg.validate();
  if (!cfg.n_max) {
    throw InvalidParameterError("evolve_brute_force requires an explicit n_max");
  }
  const int n_max = *cfg.n_max;
  // The amplitude C_{n_max} feeds lower[n_max + 1], which lies outside the
  // truncated space; its weight has to be negligible.
  const double lost = poisson_tail(cfg.alpha_mag, n_max - 1);
  if (lost > cfg.tail_tol) {
    std::ostringstream msg;
    msg << "evolve_brute_force: n_max = " << n_max << " leaves tail mass " << lost
        << " > tail_tol = " << cfg.tail_tol;
    throw TruncationError(msg.str());
  }

  // Basis ordering: index n -> |upper, n>, index (n_max + 1) + n -> |lower, n>.
  // psi^dagger |n> = sqrt(n+1) * sqrt(n+1) |n+1> = (n+1) |n+1>.
  const int dim = 2 * (n_max + 1);
  const int off = n_max + 1;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (int n = 0; n < n_max; ++n) {
    h(off + n + 1, n) = n + 1.0;
    h(n, off + n + 1) = n + 1.0;
  }
  // Same operator as the closed-form matrix, exp(+i H_I T) in scaled units.
  const Eigen::MatrixXcd u = (Complex{0.0, t_scaled} * h).exp();

  const FockVector c = coherent_amplitudes(cfg.alpha_mag, cfg.alpha_phase, n_max);
  Eigen::VectorXcd psi0 = Eigen::VectorXcd::Zero(dim);
  for (int n = 0; n <= n_max; ++n) psi0(n) = c[n];
  const Eigen::VectorXcd psi = u * psi0;

  JointStateBranches s;
  s.t_scaled = t_scaled;
  s.upper = FockVector(c.size());
  s.lower = FockVector(c.size());
  for (int n = 0; n <= n_max; ++n) {
    s.upper[n] = psi(n);
    s.lower[n] = psi(off + n);
  }
  return s;
}

double state_fidelity(const JointStateBranches& a, const JointStateBranches& b) {
  if (a.upper.size() != b.upper.size() || a.lower.size() != b.lower.size()) {
    throw InvalidArgumentError("state_fidelity: truncation lengths differ");
  }
  Complex overlap{0.0, 0.0};
  for (std::size_t n = 0; n < a.upper.size(); ++n) overlap += std::conj(a.upper[n]) * b.upper[n];
  for (std::size_t n = 0; n < a.lower.size(); ++n) overlap += std::conj(a.lower[n]) * b.lower[n];
  return std::norm(overlap);
}

}  // namespace jcinfo
