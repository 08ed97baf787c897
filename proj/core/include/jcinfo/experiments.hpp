#ifndef JCINFO_EXPERIMENTS_HPP
#define JCINFO_EXPERIMENTS_HPP

#include <functional>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "jcinfo/measures.hpp"
#include "jcinfo/model.hpp"
#include "jcinfo/phase_space.hpp"

namespace jcinfo {

enum class Aggregate { kNone, kPeriodMean };

/// Axes of a (alpha, T) sweep. `base` supplies everything except alpha_mag.
struct SweepSpec {
  std::vector<double> alpha_values;
  double t_min = 0.0;
  double t_max = 2.0 * std::numbers::pi;
  int t_steps = 257;
  std::optional<GridOptions> grid_overrides;
  Aggregate aggregate = Aggregate::kNone;
  ModelConfig base;
  int threads = 0;  ///< 0 means hardware concurrency

  /// Throws ConfigurationError on an invalid axis or InvalidParameterError on
  /// a bad alpha.
  void validate() const;

  /// Uniform T nodes including both ends.
  std::vector<double> times() const;
};

/// Rectangular numeric table with free-form metadata.
struct SeriesTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::pair<std::string, std::string>> metadata;

  void set_meta(const std::string& key, const std::string& value);
  const std::string* meta(const std::string& key) const;
  std::size_t column(const std::string& name) const;  ///< throws InvalidArgumentError
  std::vector<double> column_values(const std::string& name) const;
};

/// Information surface over (alpha, T): columns alpha, T, I_F, S_W; alpha outer, T inner.
SeriesTable surface_sweep(const SweepSpec& spec);

/// Time traces: columns alpha, T, I_F, S_W, var_x2.
SeriesTable time_traces(const SweepSpec& spec);

/// Fisher against Wehrl: columns alpha, T, S_W, I_F. Reports the rank correlation of
/// I_F against S_W over T in (0, pi) and the S_W spread over T in (0.5, pi).
SeriesTable parametric_fisher_vs_wehrl(const SweepSpec& spec);

/// Period-averaged measures per alpha: columns alpha, I_F_mean, S_W_mean, averaged over [t_min, t_max].
/// Requires aggregate == kPeriodMean.
SeriesTable alpha_sweep(const SweepSpec& spec);

/// Cramer-Rao traces: columns alpha, T, cr_product, marginal_cr_x1, marginal_cr_x2.
SeriesTable cr_traces(const SweepSpec& spec);

/// Records for every (alpha, T) of the sweep, indexed [alpha][T]. Every record is
/// audited; a violation raises NumericalError.
std::vector<std::vector<MeasureRecord>> evaluate_sweep(const SweepSpec& spec, bool with_marginals);

/// Trapezoid mean of uniformly spaced samples; over an exact period this is
/// the periodic trapezoid rule.
double trapezoid_mean(std::span<const double> values);

/// Spearman rank correlation with average ranks for ties.
double spearman_correlation(std::span<const double> x, std::span<const double> y);

/// Runs fn(k) for k in [0, n) on up to `threads` workers (0: hardware).
/// The first exception thrown by any task is rethrown after all workers join.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace jcinfo

#endif  // JCINFO_EXPERIMENTS_HPP
