// Acceptance suite: one PASS/FAIL line per criterion, followed by the
// statistics behind the verdict. Exits nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "jcinfo/errors.hpp"
#include "jcinfo/experiments.hpp"
#include "jcinfo/measures.hpp"
#include "jcinfo/model.hpp"
#include "jcinfo/phase_space.hpp"
#include "jcinfo/validation.hpp"

namespace {

using namespace jcinfo;

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Tolerances and budgets, one block per criterion.
constexpr double kFisherZeroTol = 1e-6;          // 1
constexpr double kFisherZeroBudgetS = 10.0;
constexpr double kIdentityTol = 1e-6;            // 2
constexpr double kIdentityBudgetS = 10.0;
constexpr double kPeriodicityTol = 1e-8;         // 3
constexpr double kRevivalFidelityTol = 1e-12;
constexpr int kPeriodicitySamples = 33;
constexpr double kPeriodicityBudgetS = 120.0;
constexpr double kOracleFidelityTol = 1e-10;     // 4
constexpr double kOracleBudgetS = 60.0;
constexpr double kMarginalCrTol = 1e-3;          // 5
constexpr int kMarginalCrSamples = 17;
constexpr double kMarginalCrBudgetS = 120.0;
constexpr double kCrMinLow = 0.95;               // 6
constexpr double kCrMinHigh = 1.2;
constexpr int kCrSteps = 65;
constexpr double kCrBudgetS = 180.0;
constexpr double kArgmaxLow = 2.0;               // 7
constexpr double kArgmaxHigh = 4.0;
constexpr int kAlphaSweepSteps = 33;
constexpr double kAlphaSweepBudgetS = 300.0;
constexpr int kParametricSteps = 129;            // 8
constexpr double kParametricBudgetS = 60.0;
constexpr double kGradientTol = 1e-6;            // 9
constexpr int kGradientProbes = 100;
constexpr double kNormTol = 1e-8;
constexpr double kRefinementTol = 1e-6;
constexpr int kHygieneSteps = 33;
constexpr double kHygieneBudgetS = 120.0;

struct Verdict {
  bool passed = false;
  std::string summary;
  std::vector<std::string> details;
};

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

ModelConfig model(double alpha) {
  ModelConfig cfg;
  cfg.alpha_mag = alpha;
  return cfg;
}

struct Evaluator {
  explicit Evaluator(double alpha) : cfg(model(alpha)), grid(build_grid(cfg)) {}
  QField field(double t) const { return sample_qfield(evolve_closed_form(cfg, t), grid); }
  MeasureRecord record(double t, bool marginals = false) const {
    return compute_record(field(t), grid, marginals);
  }
  ModelConfig cfg;
  PhaseSpaceGrid grid;
};

Verdict fisher_at_zero() {
  double worst = 0.0;
  Verdict v;
  for (double alpha : {0.0, 0.5, 1.0, 2.0, 3.0}) {
    const Evaluator e(alpha);
    const QField qf = e.field(0.0);
    const double i_f = fisher_information(qf, e.grid);
    worst = std::max(worst, std::fabs(i_f - 2.0));
    v.details.push_back(fmt("alpha=%.1f I_F(0)=%.15f", alpha, i_f));
  }
  v.passed = worst < kFisherZeroTol;
  v.summary = fmt("t=0 Fisher value: max |I_F(0) - 2| = %.3e (tol %.0e)", worst, kFisherZeroTol);
  return v;
}

Verdict initial_identity() {
  double worst = 0.0;
  Verdict v;
  for (double alpha : {0.0, 0.5, 1.0, 2.0, 3.0}) {
    const Evaluator e(alpha);
    const MeasureRecord r = e.record(0.0);
    const double residual = std::fabs(r.i_f - (r.s_w + 1.0 - std::log(kPi)));
    worst = std::max(worst, residual);
    v.details.push_back(fmt("alpha=%.1f S_W(0)=%.15f residual=%.3e", alpha, r.s_w, residual));
  }
  v.passed = worst < kIdentityTol;
  v.summary = fmt("I_F(0) = S_W(0) + 1 - ln pi: max residual = %.3e (tol %.0e)", worst, kIdentityTol);
  return v;
}

Verdict revival_and_mirror() {
  double period = 0.0;
  double mirror = 0.0;
  double fidelity_gap = 0.0;
  Verdict v;
  for (double alpha : {1.0, 2.0, 3.0}) {
    const Evaluator e(alpha);
    double p = 0.0, m = 0.0;
    for (int k = 0; k < kPeriodicitySamples; ++k) {
      const double t = kTwoPi * k / (kPeriodicitySamples - 1);
      const double sw = e.record(t).s_w;
      p = std::max(p, std::fabs(sw - e.record(t + kTwoPi).s_w));
      m = std::max(m, std::fabs(sw - e.record(kTwoPi - t).s_w));
    }
    const double gap = std::fabs(
        1.0 - state_fidelity(evolve_closed_form(e.cfg, 0.0), evolve_closed_form(e.cfg, kTwoPi)));
    period = std::max(period, p);
    mirror = std::max(mirror, m);
    fidelity_gap = std::max(fidelity_gap, gap);
    v.details.push_back(fmt("alpha=%.0f periodicity=%.3e mirror=%.3e |1-F(0,2pi)|=%.3e", alpha, p, m, gap));
  }
  v.passed = period < kPeriodicityTol && mirror < kPeriodicityTol && fidelity_gap < kRevivalFidelityTol;
  v.summary = fmt("revival and mirror symmetry: periodicity %.3e, mirror %.3e (tol %.0e), "
                  "revival |1-F| %.3e (tol %.0e)",
                  period, mirror, kPeriodicityTol, fidelity_gap, kRevivalFidelityTol);
  return v;
}

Verdict oracle_equivalence() {
  double worst = 0.0;
  Verdict v;
  for (double alpha : {1.0, 2.0, 3.0}) {
    ModelConfig cfg = model(alpha);
    cfg.n_max = resolve_truncation(cfg);
    double w = 0.0;
    for (int k = 0; k <= 62; ++k) {
      const double t = 0.1 * k;
      w = std::max(w, 1.0 - state_fidelity(evolve_closed_form(cfg, t), evolve_brute_force(cfg, t)));
    }
    worst = std::max(worst, w);
    v.details.push_back(fmt("alpha=%.0f n_max=%d max 1-F=%.3e", alpha, *cfg.n_max, w));
  }
  v.passed = worst <= kOracleFidelityTol;
  v.summary = fmt("closed form vs matrix exponential: max 1-F = %.3e over 63 T x 3 alpha (tol %.0e)",
                  worst, kOracleFidelityTol);
  return v;
}

Verdict marginal_cramer_rao() {
  double min_product = 1e300;
  double equality = 0.0;
  Verdict v;
  for (double alpha : {1.0, 2.0, 3.0}) {
    const Evaluator e(alpha);
    double lo = 1e300, eq = 0.0;
    for (int k = 0; k < kMarginalCrSamples; ++k) {
      const double t = kTwoPi * k / (kMarginalCrSamples - 1);
      const auto [x1, x2] = marginal_cr_both(e.field(t), e.grid);
      lo = std::min({lo, x1.product, x2.product});
      if (k == 0 || 2 * k == kMarginalCrSamples - 1 || k == kMarginalCrSamples - 1) {
        eq = std::max({eq, std::fabs(x1.product - 1.0), std::fabs(x2.product - 1.0)});
      }
    }
    min_product = std::min(min_product, lo);
    equality = std::max(equality, eq);
    v.details.push_back(fmt("alpha=%.0f min Var*I_x=%.9f max |Var*I_x - 1| at T=0,pi,2pi=%.3e", alpha, lo, eq));
  }
  v.passed = min_product >= 1.0 - kMarginalCrTol && equality <= kMarginalCrTol;
  v.summary = fmt("marginal Cramer-Rao: min Var*I_x = %.6f (>= 1 - %.0e), equality gap %.3e (tol %.0e)",
                  min_product, kMarginalCrTol, equality, kMarginalCrTol);
  return v;
}

SweepSpec sweep(std::vector<double> alphas, int t_steps) {
  SweepSpec s;
  s.alpha_values = std::move(alphas);
  s.t_steps = t_steps;
  return s;
}

double meta_number(const SeriesTable& t, const std::string& key) {
  const std::string* v = t.meta(key);
  if (!v) throw Error("missing metadata '" + key + "'");
  return std::stod(*v);
}

Verdict cramer_rao_ordering() {
  const SeriesTable t = cr_traces(sweep({1.0, 2.0, 3.0}, kCrSteps));
  const double m1 = meta_number(t, "cr_product_mean[alpha=1]");
  const double m2 = meta_number(t, "cr_product_mean[alpha=2]");
  const double m3 = meta_number(t, "cr_product_mean[alpha=3]");
  const double min3 = meta_number(t, "cr_product_min[alpha=3]");
  const bool ordered = m3 < m2 && m2 < m1;
  const bool near_unity = min3 >= kCrMinLow && min3 <= kCrMinHigh;
  Verdict v;
  v.passed = ordered && near_unity;
  v.summary = fmt("Cramer-Rao product: period means %.4f (a=1) %.4f (a=2) %.4f (a=3), ordering a3<a2<a1 %s; "
                  "min at a=3 %.4f in [%.2f, %.2f] %s",
                  m1, m2, m3, ordered ? "holds" : "violated", min3, kCrMinLow, kCrMinHigh,
                  near_unity ? "holds" : "violated");
  for (double a : {1.0, 2.0, 3.0}) {
    const std::string tag = fmt("[alpha=%.0f]", a);
    v.details.push_back(fmt("alpha=%.0f mean=%.6f min=%.6f", a, meta_number(t, "cr_product_mean" + tag),
                            meta_number(t, "cr_product_min" + tag)));
  }
  return v;
}

Verdict alpha_dependence() {
  SweepSpec growth = sweep({1.0, 1.5, 2.0, 2.5, 3.0, 3.5}, kAlphaSweepSteps);
  growth.aggregate = Aggregate::kPeriodMean;
  const SeriesTable g = alpha_sweep(growth);
  const bool increasing = *g.meta("I_F_mean_strictly_increasing") == "true";

  std::vector<double> wide(21);
  for (int k = 0; k < 21; ++k) wide[k] = 1.0 + 0.2 * k;
  SweepSpec peak = sweep(wide, kAlphaSweepSteps);
  peak.aggregate = Aggregate::kPeriodMean;
  const SeriesTable p = alpha_sweep(peak);
  const double argmax = meta_number(p, "S_W_mean_argmax_alpha");
  const bool located = argmax >= kArgmaxLow && argmax <= kArgmaxHigh;

  Verdict v;
  v.passed = increasing && located;
  v.summary = fmt("period-mean alpha dependence: I_F_mean strictly increasing %s; "
                  "S_W_mean argmax over [1,5] at alpha=%.1f, expected in [%.0f, %.0f] %s",
                  increasing ? "holds" : "violated", argmax, kArgmaxLow, kArgmaxHigh,
                  located ? "holds" : "violated");
  for (const auto& r : g.rows) v.details.push_back(fmt("alpha=%.1f I_F_mean=%.6f", r[0], r[1]));
  std::string sw = "S_W_mean over [1,5]:";
  for (const auto& r : p.rows) sw += fmt(" %.1f:%.4f", r[0], r[2]);
  v.details.push_back(sw);
  return v;
}

Verdict fisher_wehrl_correlation() {
  const SeriesTable t = parametric_fisher_vs_wehrl(sweep({1.0}, kParametricSteps));
  const double rho = meta_number(t, "spearman_I_F_S_W_T_in_(0,pi)[alpha=1]");
  Verdict v;
  v.passed = rho > 0.0;
  v.summary = fmt("I_F vs S_W at alpha=1: Spearman rho over T in (0, pi) = %.6f (> 0)", rho);
  v.details.push_back(fmt("S_W range over T in (0.5, pi) = %.6f",
                          meta_number(t, "S_W_range_T_in_(0.5,pi)[alpha=1]")));
  return v;
}

Verdict numerical_hygiene() {
  Verdict v;
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> time(0.0, kTwoPi);
  std::uniform_int_distribution<int> pick(1, 3);
  std::normal_distribution<double> spread(0.0, 1.5);
  double grad_worst = 0.0;
  for (int accepted = 0; accepted < kGradientProbes;) {
    const double alpha = pick(rng);
    const auto s = evolve_closed_form(model(alpha), time(rng));
    const Complex beta = std::polar(alpha, 2.0 * spread(rng)) + Complex{spread(rng), spread(rng)};
    if (husimi_q(beta, s) <= 1e-12 / kPi) continue;
    grad_worst = std::max(grad_worst, gradient_fd_error(beta, s));
    ++accepted;
  }

  double norm_worst = 0.0;
  for (double alpha : {1.0, 2.0, 3.0}) {
    const Evaluator e(alpha);
    for (int k = 0; k < kHygieneSteps; ++k) {
      norm_worst = std::max(norm_worst, std::fabs(e.field(kTwoPi * k / (kHygieneSteps - 1)).norm - 1.0));
    }
  }

  const ModelConfig cfg = model(3.0);
  const auto s = evolve_closed_form(cfg, 1.0);
  const PhaseSpaceGrid coarse = build_grid(cfg);
  GridOptions doubled;
  doubled.n_r *= 2;
  doubled.n_theta *= 2;
  const PhaseSpaceGrid fine = build_grid(cfg, doubled);
  const QField qc = sample_qfield(s, coarse);
  const QField qf = sample_qfield(s, fine);
  const double d_sw = std::fabs(wehrl_entropy(qc, coarse) - wehrl_entropy(qf, fine));
  const double d_if = std::fabs(fisher_information(qc, coarse) - fisher_information(qf, fine));

  v.passed = grad_worst < kGradientTol && norm_worst <= kNormTol && d_sw < kRefinementTol &&
             d_if < kRefinementTol;
  v.summary = fmt("numerical hygiene: gradient rel err %.3e (tol %.0e), |norm-1| %.3e (tol %.0e), "
                  "refinement dS_W %.3e dI_F %.3e (tol %.0e)",
                  grad_worst, kGradientTol, norm_worst, kNormTol, d_sw, d_if, kRefinementTol);
  return v;
}

struct Criterion {
  int id;
  double budget_s;
  std::function<Verdict()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, kFisherZeroBudgetS, fisher_at_zero},
      {2, kIdentityBudgetS, initial_identity},
      {3, kPeriodicityBudgetS, revival_and_mirror},
      {4, kOracleBudgetS, oracle_equivalence},
      {5, kMarginalCrBudgetS, marginal_cramer_rao},
      {6, kCrBudgetS, cramer_rao_ordering},
      {7, kAlphaSweepBudgetS, alpha_dependence},
      {8, kParametricBudgetS, fisher_wehrl_correlation},
      {9, kHygieneBudgetS, numerical_hygiene},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v.passed = false;
      v.summary = std::string("raised: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_budget = secs <= c.budget_s;
    const bool passed = v.passed && in_budget;
    failures += passed ? 0 : 1;
    std::printf("%s %d: %s [%.1f s of %.0f s budget%s]\n", passed ? "PASS" : "FAIL", c.id,
                v.summary.c_str(), secs, c.budget_s, in_budget ? "" : ", over budget");
    for (const auto& d : v.details) std::printf("    %s\n", d.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
