#include "jcinfo/validation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "jcinfo/measures.hpp"
#include "jcinfo/model.hpp"

namespace jcinfo {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string tagged(const std::string& name, double alpha) {
  std::ostringstream os;
  os << name << " [alpha=" << alpha << "]";
  return os.str();
}

CheckResult at_most(std::string name, double value, double limit) {
  return {std::move(name), value <= limit, value, limit};
}

CheckResult at_least(std::string name, double value, double limit) {
  return {std::move(name), value >= limit, value, limit};
}

void model_checks(double alpha, std::vector<CheckResult>& out) {
  ModelConfig cfg;
  cfg.alpha_mag = alpha;

  double norm_dev = 0.0;
  double reversal = 0.0;
  for (int k = 0; k <= 62; ++k) {
    const double t = 0.1 * k;
    const auto s = evolve_closed_form(cfg, t);
    norm_dev = std::max(norm_dev, std::fabs(s.norm_sq() - 1.0));
    const auto r = evolve_closed_form(cfg, -t);
    for (std::size_t n = 0; n < s.upper.size(); ++n) {
      reversal = std::max(reversal, std::abs(r.upper[n] - s.upper[n]));
      reversal = std::max(reversal, std::abs(r.lower[n] + s.lower[n]));
    }
  }
  out.push_back(at_most(tagged("norm conservation |norm-1|", alpha), norm_dev, 1e-10));
  out.push_back(at_most(tagged("time-reversal symmetry", alpha), reversal, 1e-14));

  const auto s0 = evolve_closed_form(cfg, 0.0);
  const double revival = std::fabs(1.0 - state_fidelity(s0, evolve_closed_form(cfg, kTwoPi)));
  out.push_back(at_most(tagged("revival fidelity |1-F(0,2pi)|", alpha), revival, 1e-12));

  double lower_mass = 0.0;
  for (int k = 1; k <= 3; ++k) {
    lower_mass = std::max(lower_mass, evolve_closed_form(cfg, k * kPi).lower.norm_sq());
  }
  out.push_back(at_most(tagged("disentanglement at T=k*pi", alpha), lower_mass, 1e-20));

  ModelConfig explicit_cfg = cfg;
  explicit_cfg.n_max = resolve_truncation(cfg);
  double worst = 0.0;
  for (int k = 0; k <= 62; ++k) {
    const double t = 0.1 * k;
    const double f = state_fidelity(evolve_closed_form(explicit_cfg, t),
                                    evolve_brute_force(explicit_cfg, t));
    worst = std::max(worst, 1.0 - f);
  }
  out.push_back(at_most(tagged("closed form vs matrix exponential 1-F", alpha), worst, 1e-10));
}

void measure_checks(double alpha, const GridOptions& grid_opts, std::vector<CheckResult>& out) {
  ModelConfig cfg;
  cfg.alpha_mag = alpha;
  const PhaseSpaceGrid g = build_grid(cfg, grid_opts);
  auto record_at = [&](double t, bool marginals) {
    const QField qf = sample_qfield(evolve_closed_form(cfg, t), g);
    return std::pair{qf, compute_record(qf, g, marginals)};
  };

  const auto [qf0, rec0] = record_at(0.0, false);
  out.push_back(at_most(tagged("I_F(0) = 2", alpha), std::fabs(rec0.i_f - 2.0), 1e-6));
  out.push_back(at_most(tagged("I_F(0) = S_W(0) + 1 - ln pi", alpha),
                        std::fabs(rec0.i_f - (rec0.s_w + 1.0 - std::log(kPi))), 1e-6));

  double period = 0.0;
  double mirror = 0.0;
  for (int k = 0; k < 9; ++k) {
    const double t = 0.3 + 0.7 * k;
    const double sw = record_at(t, false).second.s_w;
    period = std::max(period, std::fabs(sw - record_at(t + kTwoPi, false).second.s_w));
    mirror = std::max(mirror, std::fabs(sw - record_at(kTwoPi - t, false).second.s_w));
  }
  out.push_back(at_most(tagged("S_W periodicity", alpha), period, 1e-8));
  out.push_back(at_most(tagged("S_W mirror symmetry", alpha), mirror, 1e-8));

  const double times[] = {0.0, 0.4, 0.9, 1.3, kPi / 2, 2.2, kPi, 4.1, 3 * kPi / 2, 5.5, kTwoPi};
  double norm_dev = 0.0;
  double q_excess = -1.0;
  double lieb = 1e300;
  double min_product = 1e300;
  double equality = 0.0;
  std::size_t audit_issues = 0;
  for (double t : times) {
    const auto [qf, rec] = record_at(t, true);
    norm_dev = std::max(norm_dev, std::fabs(qf.norm - 1.0));
    q_excess = std::max(q_excess, qf.max_q - 1.0 / kPi);
    lieb = std::min(lieb, rec.s_w - wehrl_lieb_bound());
    audit_issues += audit_record(rec, g).size();
    min_product = std::min({min_product, rec.marginal_x1->product, rec.marginal_x2->product});
    if (t == 0.0 || t == kPi || t == kTwoPi) {
      equality = std::max({equality, std::fabs(rec.marginal_x1->product - 1.0),
                           std::fabs(rec.marginal_x2->product - 1.0)});
    }
  }
  out.push_back(at_most(tagged("Husimi normalization |norm-1|", alpha), norm_dev, 1e-8));
  out.push_back(at_most(tagged("Husimi bound max Q - 1/pi", alpha), q_excess, 1e-10));
  out.push_back(at_least(tagged("Wehrl-Lieb bound S_W - (1 + ln pi)", alpha), lieb, -1e-6));
  out.push_back(at_most(tagged("record audit issues", alpha), static_cast<double>(audit_issues), 0.0));
  out.push_back(at_least(tagged("marginal Cramer-Rao Var*I_x", alpha), min_product, 1.0 - 1e-3));
  out.push_back(at_most(tagged("marginal Cramer-Rao equality at T=0,pi,2pi", alpha), equality, 1e-3));
}

void gradient_checks(double alpha, const GridOptions& grid_opts, std::uint64_t seed, int probes,
                     std::vector<CheckResult>& out) {
  ModelConfig cfg;
  cfg.alpha_mag = alpha;
  const PhaseSpaceGrid g = build_grid(cfg, grid_opts);
  std::mt19937_64 rng(seed ^ static_cast<std::uint64_t>(alpha * 1000.0));
  std::uniform_real_distribution<double> time(0.0, kTwoPi);
  std::normal_distribution<double> spread(0.0, 1.5);

  constexpr int kTimes = 10;
  const int per_time = std::max(1, probes / kTimes);
  double worst = 0.0;
  for (int k = 0; k < kTimes; ++k) {
    const auto s = evolve_closed_form(cfg, time(rng));
    const double max_q = sample_qfield(s, g).max_q;
    for (int accepted = 0; accepted < per_time;) {
      // Probes scatter around the two counter-rotating lobes and the origin.
      const Complex centre = std::polar(alpha, spread(rng) * 2.0);
      const Complex beta = centre + Complex{spread(rng), spread(rng)};
      if (husimi_q(beta, s) <= 1e-12 * max_q) continue;
      worst = std::max(worst, gradient_fd_error(beta, s));
      ++accepted;
    }
  }
  out.push_back(at_most(tagged("analytic gradient vs central differences", alpha), worst, 1e-6));
}

}  // namespace

double gradient_fd_error(Complex beta, const JointStateBranches& s, double h) {
  const HusimiPoint p = husimi_point(beta, s);
  const double fd1 = (husimi_q(beta + Complex{h, 0.0}, s) - husimi_q(beta - Complex{h, 0.0}, s)) / (2.0 * h);
  const double fd2 = (husimi_q(beta + Complex{0.0, h}, s) - husimi_q(beta - Complex{0.0, h}, s)) / (2.0 * h);
  const double diff = std::hypot(p.grad.d_x1 - fd1, p.grad.d_x2 - fd2);
  const double scale = std::max(std::hypot(p.grad.d_x1, p.grad.d_x2), p.q);
  return diff / scale;
}

std::vector<CheckResult> run_validation_suite(const ValidationOptions& opts) {
  std::vector<CheckResult> out;
  for (double alpha : opts.alphas) {
    model_checks(alpha, out);
    measure_checks(alpha, opts.grid, out);
    gradient_checks(alpha, opts.grid, opts.seed, opts.gradient_probes, out);
  }
  if (!opts.alphas.empty()) {
    const double alpha = *std::max_element(opts.alphas.begin(), opts.alphas.end());
    ModelConfig cfg;
    cfg.alpha_mag = alpha;
    const auto s = evolve_closed_form(cfg, 1.0);
    const PhaseSpaceGrid g = build_grid(cfg, opts.grid);
    GridOptions fine = opts.grid;
    fine.n_r *= 2;
    fine.n_theta *= 2;
    const PhaseSpaceGrid gf = build_grid(cfg, fine);
    const QField q = sample_qfield(s, g);
    const QField qf = sample_qfield(s, gf);
    const double d = std::max(std::fabs(wehrl_entropy(q, g) - wehrl_entropy(qf, gf)),
                              std::fabs(fisher_information(q, g) - fisher_information(qf, gf)));
    out.push_back(at_most(tagged("grid refinement at T=1", alpha), d, 1e-6));
  }
  return out;
}

}  // namespace jcinfo
