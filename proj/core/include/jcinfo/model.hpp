#ifndef JCINFO_MODEL_HPP
#define JCINFO_MODEL_HPP

#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

namespace jcinfo {

using Complex = std::complex<double>;

/// Physical parameters of the intensity-dependent Jaynes-Cummings model plus
/// the numerical controls of the Fock truncation.
///
/// Dynamics run in the interaction picture at resonance, so `omega_f` and
/// `omega_a` are carried for bookkeeping only; every observable depends on
/// the scaled time T = lambda * t.
struct ModelConfig {
  double alpha_mag = 1.0;     ///< |alpha|, square root of the mean photon number
  double alpha_phase = 0.0;   ///< arg(alpha) in radians
  double lambda = 1.0;        ///< coupling constant, sets the time unit
  double omega_f = 1.0;
  double omega_a = 1.0;
  std::optional<int> n_max;   ///< explicit truncation; nullopt selects it from tail_tol
  double tail_tol = 1e-12;

  /// Throws InvalidParameterError on a violated invariant.
  void validate() const;

  Complex alpha() const { return std::polar(alpha_mag, alpha_phase); }
};

/// Complex amplitudes over the truncated number basis |0>..|n_max>.
struct FockVector {
  std::vector<Complex> amps;

  FockVector() = default;
  explicit FockVector(std::size_t size) : amps(size, Complex{0.0, 0.0}) {}
  explicit FockVector(std::vector<Complex> a) : amps(std::move(a)) {}

  std::size_t size() const { return amps.size(); }
  int n_max() const { return static_cast<int>(amps.size()) - 1; }
  const Complex& operator[](std::size_t n) const { return amps[n]; }
  Complex& operator[](std::size_t n) { return amps[n]; }

  /// Sum of |amps[n]|^2 in ascending n.
  double norm_sq() const;
};

/// Pure joint atom-field state written as two field branches: the field
/// component with the atom in the upper level and the one with the atom in
/// the lower level.
struct JointStateBranches {
  FockVector upper;
  FockVector lower;
  double t_scaled = 0.0;

  int n_max() const { return upper.n_max(); }
  double norm_sq() const { return upper.norm_sq() + lower.norm_sq(); }
};

/// Coherent-state coefficients alpha^n e^{-|alpha|^2/2} / sqrt(n!) for n = 0..n_max.
/// Magnitudes are accumulated in log space so large n neither overflows nor
/// underflows early.
FockVector coherent_amplitudes(double alpha_mag, double alpha_phase, int n_max);

/// Smallest N whose Poisson(|alpha|^2) tail mass beyond N is below tail_tol,
/// plus one level for the photon emitted into the lower branch. Never below 16.
int choose_truncation(double alpha_mag, double tail_tol);

/// Poisson(|alpha|^2) probability mass strictly above n.
double poisson_tail(double alpha_mag, int n);

/// cfg.n_max if set, otherwise choose_truncation(cfg.alpha_mag, cfg.tail_tol).
int resolve_truncation(const ModelConfig& cfg);

/// Exact state at scaled time T. With C_n the initial coherent amplitudes:
///   upper[n] = C_n cos((n+1) T)
///   lower[m] = i C_{m-1} sin(m T),  lower[0] = 0.
JointStateBranches evolve_closed_form(const ModelConfig& cfg, double t_scaled);

/// Validation oracle: dense matrix exponential of the interaction Hamiltonian
/// on the truncated 2(n_max+1) dimensional space. Requires an explicit n_max;
/// throws TruncationError if the coherent tail at n_max exceeds tail_tol.
JointStateBranches evolve_brute_force(const ModelConfig& cfg, double t_scaled);

/// |<a|b>|^2 over the joint space.
double state_fidelity(const JointStateBranches& a, const JointStateBranches& b);

}  // namespace jcinfo

#endif  // JCINFO_MODEL_HPP
