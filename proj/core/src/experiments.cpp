#include "jcinfo/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "jcinfo/errors.hpp"

#ifndef JCINFO_VERSION
#define JCINFO_VERSION "unknown"
#endif

namespace jcinfo {
namespace {

constexpr double kPi = std::numbers::pi;

std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

[[noreturn]] void rethrow_with_context(const std::string& ctx) {
  try {
    throw;
  } catch (const GridCoverageError& e) {
    throw GridCoverageError(ctx + ": " + e.what());
  } catch (const TruncationError& e) {
    throw TruncationError(ctx + ": " + e.what());
  } catch (const InvalidParameterError& e) {
    throw InvalidParameterError(ctx + ": " + e.what());
  } catch (const ConfigurationError& e) {
    throw ConfigurationError(ctx + ": " + e.what());
  } catch (const InvalidArgumentError& e) {
    throw InvalidArgumentError(ctx + ": " + e.what());
  } catch (const Error& e) {
    throw NumericalError(ctx + ": " + e.what());
  }
}

void describe(SeriesTable& table, const SweepSpec& spec, const std::string& kind) {
  std::string alphas;
  for (std::size_t k = 0; k < spec.alpha_values.size(); ++k) {
    if (k) alphas += ",";
    alphas += num(spec.alpha_values[k]);
  }
  const GridOptions grid = spec.grid_overrides.value_or(GridOptions{});
  table.set_meta("experiment", kind);
  table.set_meta("code_version", JCINFO_VERSION);
  table.set_meta("alpha_values", alphas);
  table.set_meta("alpha_phase", num(spec.base.alpha_phase));
  table.set_meta("lambda", num(spec.base.lambda));
  table.set_meta("omega_f", num(spec.base.omega_f));
  table.set_meta("omega_a", num(spec.base.omega_a));
  table.set_meta("n_max", spec.base.n_max ? std::to_string(*spec.base.n_max) : "auto");
  table.set_meta("tail_tol", num(spec.base.tail_tol));
  table.set_meta("t_min", num(spec.t_min));
  table.set_meta("t_max", num(spec.t_max));
  table.set_meta("t_steps", std::to_string(spec.t_steps));
  table.set_meta("grid_radial", std::to_string(grid.n_r));
  table.set_meta("grid_angular", std::to_string(grid.n_theta));
}

template <typename Fn>
SeriesTable timed(Fn&& fn) {
  const auto start = std::chrono::steady_clock::now();
  SeriesTable table = fn();
  const std::chrono::duration<double> wall = std::chrono::steady_clock::now() - start;
  table.set_meta("wall_time_s", num(wall.count()));
  return table;
}

// Indices of T nodes strictly inside (lo, hi).
std::vector<std::size_t> interior(const std::vector<double>& times, double lo, double hi) {
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (times[k] > lo && times[k] < hi) idx.push_back(k);
  }
  return idx;
}

}  // namespace

void SweepSpec::validate() const {
  if (alpha_values.empty()) throw ConfigurationError("sweep: alpha list is empty");
  for (double a : alpha_values) {
    if (!std::isfinite(a) || a < 0.0) {
      throw InvalidParameterError("sweep: alpha values must be finite and nonnegative (got " +
                                  num(a) + ")");
    }
  }
  if (t_steps < 2) throw ConfigurationError("sweep: t_steps must be at least 2");
  if (!std::isfinite(t_min) || !std::isfinite(t_max) || !(t_max > t_min)) {
    throw ConfigurationError("sweep: need t_max > t_min");
  }
  if (threads < 0) throw ConfigurationError("sweep: threads must be nonnegative");
  base.validate();
  if (grid_overrides) {
    if (grid_overrides->n_r < 16) throw ConfigurationError("sweep: radial grid needs >= 16 nodes");
    if (grid_overrides->n_theta < 32) {
      throw ConfigurationError("sweep: angular grid needs >= 32 nodes");
    }
  }
}

std::vector<double> SweepSpec::times() const {
  std::vector<double> t(t_steps);
  const double dt = (t_max - t_min) / (t_steps - 1);
  for (int k = 0; k < t_steps; ++k) t[k] = t_min + k * dt;
  t.back() = t_max;
  return t;
}

void SeriesTable::set_meta(const std::string& key, const std::string& value) {
  for (auto& [k, v] : metadata) {
    if (k == key) {
      v = value;
      return;
    }
  }
  metadata.emplace_back(key, value);
}

const std::string* SeriesTable::meta(const std::string& key) const {
  for (const auto& [k, v] : metadata) {
    if (k == key) return &v;
  }
  return nullptr;
}

std::size_t SeriesTable::column(const std::string& name) const {
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c] == name) return c;
  }
  throw InvalidArgumentError("table has no column '" + name + "'");
}

std::vector<double> SeriesTable::column_values(const std::string& name) const {
  const std::size_t c = column(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r[c]);
  return out;
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
  std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads)
                                    : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, n);
  if (workers <= 1) {
    for (std::size_t k = 0; k < n; ++k) fn(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t k = next++; k < n; k = next++) {
        try {
          fn(k);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          next = n;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

std::vector<std::vector<MeasureRecord>> evaluate_sweep(const SweepSpec& spec, bool with_marginals) {
  spec.validate();
  const std::vector<double> times = spec.times();
  const std::size_t n_alpha = spec.alpha_values.size();
  const std::size_t n_t = times.size();

  std::vector<ModelConfig> configs(n_alpha, spec.base);
  std::vector<PhaseSpaceGrid> grids(n_alpha);
  for (std::size_t a = 0; a < n_alpha; ++a) {
    configs[a].alpha_mag = spec.alpha_values[a];
    grids[a] = build_grid(configs[a], spec.grid_overrides.value_or(GridOptions{}));
  }

  std::vector<std::vector<MeasureRecord>> out(n_alpha, std::vector<MeasureRecord>(n_t));
  parallel_for(n_alpha * n_t, spec.threads, [&](std::size_t k) {
    const std::size_t a = k / n_t;
    const std::size_t t = k % n_t;
    try {
      const JointStateBranches s = evolve_closed_form(configs[a], times[t]);
      const QField qf = sample_qfield(s, grids[a]);
      MeasureRecord rec = compute_record(qf, grids[a], with_marginals);
      const auto issues = audit_record(rec, grids[a]);
      if (!issues.empty()) throw NumericalError("audit failed: " + issues.front());
      out[a][t] = std::move(rec);
    } catch (const Error&) {
      rethrow_with_context("alpha = " + num(spec.alpha_values[a]) + ", T = " + num(times[t]));
    }
  });
  return out;
}

SeriesTable surface_sweep(const SweepSpec& spec) {
  return timed([&] {
    const auto recs = evaluate_sweep(spec, false);
    SeriesTable table;
    table.columns = {"alpha", "T", "I_F", "S_W"};
    for (std::size_t a = 0; a < recs.size(); ++a) {
      for (const auto& r : recs[a]) {
        table.rows.push_back({spec.alpha_values[a], r.t_scaled, r.i_f, r.s_w});
      }
    }
    describe(table, spec, "surface");
    return table;
  });
}

SeriesTable time_traces(const SweepSpec& spec) {
  return timed([&] {
    const auto recs = evaluate_sweep(spec, false);
    SeriesTable table;
    table.columns = {"alpha", "T", "I_F", "S_W", "var_x2"};
    for (std::size_t a = 0; a < recs.size(); ++a) {
      double max_sw = -1.0;
      for (const auto& r : recs[a]) {
        table.rows.push_back({spec.alpha_values[a], r.t_scaled, r.i_f, r.s_w, r.variances.var_x2});
        max_sw = std::max(max_sw, r.s_w);
      }
      table.set_meta("max_S_W[alpha=" + num(spec.alpha_values[a]) + "]", num(max_sw));
    }
    describe(table, spec, "trace");
    return table;
  });
}

SeriesTable parametric_fisher_vs_wehrl(const SweepSpec& spec) {
  return timed([&] {
    const auto recs = evaluate_sweep(spec, false);
    const std::vector<double> times = spec.times();
    const auto early = interior(times, 0.0, kPi);
    const auto settled = interior(times, 0.5, kPi);
    SeriesTable table;
    table.columns = {"alpha", "T", "S_W", "I_F"};
    for (std::size_t a = 0; a < recs.size(); ++a) {
      for (const auto& r : recs[a]) {
        table.rows.push_back({spec.alpha_values[a], r.t_scaled, r.s_w, r.i_f});
      }
      const std::string tag = "[alpha=" + num(spec.alpha_values[a]) + "]";
      if (early.size() >= 2) {
        std::vector<double> sw, fi;
        for (auto k : early) {
          sw.push_back(recs[a][k].s_w);
          fi.push_back(recs[a][k].i_f);
        }
        table.set_meta("spearman_I_F_S_W_T_in_(0,pi)" + tag, num(spearman_correlation(fi, sw)));
      }
      if (!settled.empty()) {
        double lo = recs[a][settled.front()].s_w;
        double hi = lo;
        for (auto k : settled) {
          lo = std::min(lo, recs[a][k].s_w);
          hi = std::max(hi, recs[a][k].s_w);
        }
        table.set_meta("S_W_range_T_in_(0.5,pi)" + tag, num(hi - lo));
      }
    }
    describe(table, spec, "parametric");
    return table;
  });
}

SeriesTable alpha_sweep(const SweepSpec& spec) {
  if (spec.aggregate != Aggregate::kPeriodMean) {
    throw ConfigurationError("alpha_sweep: aggregate must be period_mean");
  }
  return timed([&] {
    const auto recs = evaluate_sweep(spec, false);
    SeriesTable table;
    table.columns = {"alpha", "I_F_mean", "S_W_mean"};
    for (std::size_t a = 0; a < recs.size(); ++a) {
      std::vector<double> fi, sw;
      for (const auto& r : recs[a]) {
        fi.push_back(r.i_f);
        sw.push_back(r.s_w);
      }
      table.rows.push_back({spec.alpha_values[a], trapezoid_mean(fi), trapezoid_mean(sw)});
    }
    std::size_t best = 0;
    bool increasing = true;
    for (std::size_t a = 1; a < table.rows.size(); ++a) {
      if (table.rows[a][2] > table.rows[best][2]) best = a;
      if (!(table.rows[a][1] > table.rows[a - 1][1])) increasing = false;
    }
    table.set_meta("S_W_mean_argmax_alpha", num(table.rows[best][0]));
    table.set_meta("I_F_mean_strictly_increasing", increasing ? "true" : "false");
    table.set_meta("aggregate", "period_mean");
    describe(table, spec, "alpha-sweep");
    return table;
  });
}

SeriesTable cr_traces(const SweepSpec& spec) {
  return timed([&] {
    const auto recs = evaluate_sweep(spec, true);
    SeriesTable table;
    table.columns = {"alpha", "T", "cr_product", "marginal_cr_x1", "marginal_cr_x2"};
    for (std::size_t a = 0; a < recs.size(); ++a) {
      std::vector<double> cr;
      for (const auto& r : recs[a]) {
        table.rows.push_back({spec.alpha_values[a], r.t_scaled, r.cr_product,
                              r.marginal_x1->product, r.marginal_x2->product});
        cr.push_back(r.cr_product);
      }
      const std::string tag = "[alpha=" + num(spec.alpha_values[a]) + "]";
      table.set_meta("cr_product_mean" + tag, num(trapezoid_mean(cr)));
      table.set_meta("cr_product_min" + tag, num(*std::min_element(cr.begin(), cr.end())));
    }
    describe(table, spec, "cr");
    return table;
  });
}

double trapezoid_mean(std::span<const double> values) {
  if (values.size() < 2) throw InvalidArgumentError("trapezoid_mean: need at least two samples");
  double s = 0.5 * (values.front() + values.back());
  for (std::size_t k = 1; k + 1 < values.size(); ++k) s += values[k];
  return s / static_cast<double>(values.size() - 1);
}

double spearman_correlation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw InvalidArgumentError("spearman_correlation: need two equal-length series of >= 2 points");
  }
  auto ranks = [](std::span<const double> v) {
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < order.size();) {
      std::size_t j = i;
      while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
      const double avg = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
      for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
      i = j + 1;
    }
    return r;
  };
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < rx.size(); ++k) {
    sxy += (rx[k] - mx) * (ry[k] - my);
    sxx += (rx[k] - mx) * (rx[k] - mx);
    syy += (ry[k] - my) * (ry[k] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace jcinfo
