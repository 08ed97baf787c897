#include "jcinfo/phase_space.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "jcinfo/errors.hpp"
#include "summation.hpp"

namespace jcinfo {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr Complex kI{0.0, 1.0};

// <beta|n> for n = 0..n_max. The direct recurrence is exact enough while
// e^{-|beta|^2/2} stays far from underflow; beyond that magnitudes go
// through logarithms.
std::vector<Complex> coherent_basis(Complex beta, int n_max) {
  std::vector<Complex> w(static_cast<std::size_t>(n_max) + 1);
  const double r = std::abs(beta);
  const Complex bc = std::conj(beta);
  if (r < 30.0) {
    w[0] = std::exp(-0.5 * r * r);
    for (int n = 1; n <= n_max; ++n) w[n] = w[n - 1] * bc / std::sqrt(static_cast<double>(n));
    return w;
  }
  const double log_r = std::log(r);
  const double phase = std::arg(bc);
  double log_mag = -0.5 * r * r;
  for (int n = 0; n <= n_max; ++n) {
    if (n > 0) log_mag += log_r - 0.5 * std::log(static_cast<double>(n));
    w[n] = std::polar(std::exp(log_mag), n * phase);
  }
  return w;
}

struct BranchValue {
  Complex a;     // <beta|v>
  Complex d_x1;  // d<beta|v>/dX1
  Complex d_x2;  // d<beta|v>/dX2
};

BranchValue eval_branch(Complex beta, const std::vector<Complex>& w, const FockVector& v) {
  Complex a{0.0, 0.0};
  Complex deriv{0.0, 0.0};  // e^{-|beta|^2/2} S'(beta*)
  const std::size_t n_terms = v.size();
  for (std::size_t n = 0; n < n_terms; ++n) a += v[n] * w[n];
  for (std::size_t m = 0; m + 1 < n_terms; ++m) {
    deriv += v[m + 1] * std::sqrt(static_cast<double>(m + 1)) * w[m];
  }
  return {a, -beta.real() * a + deriv, -beta.imag() * a - kI * deriv};
}

// sum_n c[n] * ph[n] in plain real arithmetic (the hot loop of sampling).
Complex dot_phase(const Complex* c, const Complex* ph, std::size_t n_terms) {
  double re = 0.0;
  double im = 0.0;
  for (std::size_t n = 0; n < n_terms; ++n) {
    const double cr = c[n].real(), ci = c[n].imag();
    const double pr = ph[n].real(), pi = ph[n].imag();
    re += cr * pr - ci * pi;
    im += cr * pi + ci * pr;
  }
  return {re, im};
}

}  // namespace

GaussLegendreRule gauss_legendre(int n) {
  if (n < 1) throw ConfigurationError("gauss_legendre: need at least one node");
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

PhaseSpaceGrid build_grid_for_truncation(int n_max, const GridOptions& opts) {
  if (opts.n_r < 16) throw ConfigurationError("build_grid: n_r must be at least 16");
  if (opts.n_theta < 32) throw ConfigurationError("build_grid: n_theta must be at least 32");
  const double rule_r_max = std::sqrt(static_cast<double>(n_max)) + 4.0;
  const double r_max = opts.r_max.value_or(rule_r_max);
  if (!(r_max > 0.0)) throw ConfigurationError("build_grid: r_max must be positive");

  PhaseSpaceGrid g;
  g.n_r = opts.n_r;
  g.n_theta = opts.n_theta;
  g.r_max = r_max;
  const GaussLegendreRule rule = gauss_legendre(opts.n_r);
  g.r_nodes.resize(opts.n_r);
  g.r_weights.resize(opts.n_r);
  for (int i = 0; i < opts.n_r; ++i) {
    g.r_nodes[i] = 0.5 * r_max * (rule.nodes[i] + 1.0);
    g.r_weights[i] = 0.5 * r_max * rule.weights[i];
  }
  g.theta_weight = 2.0 * kPi / opts.n_theta;
  g.theta_nodes.resize(opts.n_theta);
  for (int j = 0; j < opts.n_theta; ++j) g.theta_nodes[j] = j * g.theta_weight;
  return g;
}

PhaseSpaceGrid build_grid(const ModelConfig& cfg, const GridOptions& opts) {
  cfg.validate();
  return build_grid_for_truncation(resolve_truncation(cfg), opts);
}

Complex coherent_overlap(Complex beta, const FockVector& v) {
  const auto w = coherent_basis(beta, v.n_max());
  Complex a{0.0, 0.0};
  for (std::size_t n = 0; n < v.size(); ++n) a += v[n] * w[n];
  return a;
}

HusimiPoint husimi_point(Complex beta, const JointStateBranches& s) {
  const auto w = coherent_basis(beta, s.n_max());
  const BranchValue u = eval_branch(beta, w, s.upper);
  const BranchValue l = eval_branch(beta, w, s.lower);
  HusimiPoint p;
  p.q = (std::norm(u.a) + std::norm(l.a)) / kPi;
  p.grad.d_x1 = 2.0 / kPi * (std::conj(u.a) * u.d_x1 + std::conj(l.a) * l.d_x1).real();
  p.grad.d_x2 = 2.0 / kPi * (std::conj(u.a) * u.d_x2 + std::conj(l.a) * l.d_x2).real();
  return p;
}

double husimi_q(Complex beta, const JointStateBranches& s) {
  const auto w = coherent_basis(beta, s.n_max());
  Complex u{0.0, 0.0};
  Complex l{0.0, 0.0};
  for (std::size_t n = 0; n < w.size(); ++n) {
    u += s.upper[n] * w[n];
    l += s.lower[n] * w[n];
  }
  return (std::norm(u) + std::norm(l)) / kPi;
}

HusimiGradient husimi_gradient(Complex beta, const JointStateBranches& s) {
  return husimi_point(beta, s).grad;
}

QField sample_qfield(const JointStateBranches& s, const PhaseSpaceGrid& g) {
  if (s.upper.size() != s.lower.size() || s.upper.size() == 0) {
    throw InvalidArgumentError("sample_qfield: malformed state branches");
  }
  const int n_max = s.n_max();
  const std::size_t n_terms = s.upper.size();

  // phase[j * n_terms + n] = e^{-i n Theta_j}
  std::vector<Complex> phase(static_cast<std::size_t>(g.n_theta) * n_terms);
  for (int j = 0; j < g.n_theta; ++j) {
    for (std::size_t n = 0; n < n_terms; ++n) {
      phase[j * n_terms + n] = std::polar(1.0, -static_cast<double>(n) * g.theta_nodes[j]);
    }
  }

  QField qf;
  qf.t_scaled = s.t_scaled;
  qf.state = s;
  qf.q.resize(g.size());
  qf.grad_x1.resize(g.size());
  qf.grad_x2.resize(g.size());

  std::vector<double> rho(n_terms);
  std::vector<Complex> cu(n_terms), cl(n_terms), du(n_terms), dl(n_terms);
  for (int i = 0; i < g.n_r; ++i) {
    const double r = g.r_nodes[i];
    // Radial part of <beta|n>: r^n e^{-r^2/2} / sqrt(n!).
    const double log_r = std::log(r);
    double log_mag = -0.5 * r * r;
    for (int n = 0; n <= n_max; ++n) {
      if (n > 0) log_mag += log_r - 0.5 * std::log(static_cast<double>(n));
      rho[n] = std::exp(log_mag);
      cu[n] = s.upper[n] * rho[n];
      cl[n] = s.lower[n] * rho[n];
    }
    // Derivative of the polynomial part: sum_m v[m+1] sqrt(m+1) <beta|m>.
    for (int m = 0; m < n_max; ++m) {
      const double f = std::sqrt(static_cast<double>(m + 1)) * rho[m];
      du[m] = s.upper[m + 1] * f;
      dl[m] = s.lower[m + 1] * f;
    }
    du[n_max] = 0.0;
    dl[n_max] = 0.0;

    for (int j = 0; j < g.n_theta; ++j) {
      const Complex* ph = &phase[j * n_terms];
      Complex au = dot_phase(cu.data(), ph, n_terms);
      Complex al = dot_phase(cl.data(), ph, n_terms);
      Complex su = dot_phase(du.data(), ph, n_terms);
      Complex sl = dot_phase(dl.data(), ph, n_terms);
      const double x1 = r * std::cos(g.theta_nodes[j]);
      const double x2 = r * std::sin(g.theta_nodes[j]);
      const Complex au1 = -x1 * au + su;
      const Complex au2 = -x2 * au - kI * su;
      const Complex al1 = -x1 * al + sl;
      const Complex al2 = -x2 * al - kI * sl;
      const std::size_t k = g.index(i, j);
      qf.q[k] = (std::norm(au) + std::norm(al)) / kPi;
      qf.grad_x1[k] = 2.0 / kPi * (std::conj(au) * au1 + std::conj(al) * al1).real();
      qf.grad_x2[k] = 2.0 / kPi * (std::conj(au) * au2 + std::conj(al) * al2).real();
      qf.max_q = std::max(qf.max_q, qf.q[k]);
    }
  }

  qf.norm = integrate(g, qf.q);
  const double dev = std::fabs(qf.norm - 1.0);
  if (dev > 1e-6) {
    std::ostringstream msg;
    msg << "sample_qfield: Husimi quadrature integrates to " << qf.norm << " at T = "
        << s.t_scaled << " (r_max = " << g.r_max << ", n_r = " << g.n_r
        << ", n_theta = " << g.n_theta
        << "); increase r_max or n_r, or raise the Fock truncation";
    throw GridCoverageError(msg.str());
  }
  qf.norm_flagged = dev > 1e-8;
  return qf;
}

double integrate(const PhaseSpaceGrid& g, std::span<const double> f) {
  if (f.size() != g.size()) {
    throw InvalidArgumentError("integrate: value array does not match the grid");
  }
  detail::CompensatedSum sum;
  for (int i = 0; i < g.n_r; ++i) {
    const double w = g.r_nodes[i] * g.r_weights[i] * g.theta_weight;
    for (int j = 0; j < g.n_theta; ++j) sum.add(f[g.index(i, j)] * w);
  }
  return sum.value();
}

std::vector<double> radial_integrate(const PhaseSpaceGrid& g, std::span<const double> f) {
  if (f.size() != g.size()) {
    throw InvalidArgumentError("radial_integrate: value array does not match the grid");
  }
  std::vector<double> out(g.n_theta);
  for (int j = 0; j < g.n_theta; ++j) {
    detail::CompensatedSum sum;
    for (int i = 0; i < g.n_r; ++i) sum.add(f[g.index(i, j)] * g.r_nodes[i] * g.r_weights[i]);
    out[j] = sum.value();
  }
  return out;
}

}  // namespace jcinfo
