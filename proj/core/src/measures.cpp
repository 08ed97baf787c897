#include "jcinfo/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "jcinfo/errors.hpp"
#include "summation.hpp"

namespace jcinfo {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLogFloor = 1e-300;
constexpr double kGuard = 1e-12;

// -Q ln Q with 0 ln 0 = 0.
std::vector<double> entropy_density(const QField& qf) {
  std::vector<double> out(qf.q.size());
  for (std::size_t k = 0; k < qf.q.size(); ++k) {
    const double q = qf.q[k];
    out[k] = q > 0.0 ? -q * std::log(std::max(q, kLogFloor)) : 0.0;
  }
  return out;
}

// Q * Gamma written as (sigma1^2 g1^2 + sigma2^2 g2^2) / Q, cut below the guard.
std::vector<double> fisher_density(const QField& qf, const VariancePair& vp) {
  std::vector<double> out(qf.q.size(), 0.0);
  const double cut = kGuard * qf.max_q;
  for (std::size_t k = 0; k < qf.q.size(); ++k) {
    const double q = qf.q[k];
    if (q < cut || q <= 0.0) continue;
    const double g1 = qf.grad_x1[k];
    const double g2 = qf.grad_x2[k];
    out[k] = (vp.var_x1 * g1 * g1 + vp.var_x2 * g2 * g2) / q;
  }
  return out;
}

void check_field(const QField& qf, const PhaseSpaceGrid& g, const char* who) {
  if (qf.q.size() != g.size() || qf.grad_x1.size() != g.size() || qf.grad_x2.size() != g.size()) {
    throw InvalidArgumentError(std::string(who) + ": Husimi field does not match the grid");
  }
}

// Q and its gradient at arbitrary Cartesian points. Each branch amplitude is
// e^{-|beta|^2/2} P(beta*) with P(z) = sum_n v[n] z^n / sqrt(n!); P and P'
// come from one Horner pass. Terms stay far from overflow for |beta| up to
// the grid radius of any supported truncation.
class CartesianHusimi {
 public:
  explicit CartesianHusimi(const JointStateBranches& s) {
    const std::size_t n = s.upper.size();
    up_re_.resize(n);
    up_im_.resize(n);
    lo_re_.resize(n);
    lo_im_.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double inv = std::exp(-0.5 * std::lgamma(k + 1.0));
      up_re_[k] = s.upper[k].real() * inv;
      up_im_[k] = s.upper[k].imag() * inv;
      lo_re_[k] = s.lower[k].real() * inv;
      lo_im_[k] = s.lower[k].imag() * inv;
    }
  }

  HusimiPoint operator()(double x1, double x2) const {
    const double zr = x1;
    const double zi = -x2;
    const double env = std::exp(-0.5 * (x1 * x1 + x2 * x2));
    Complex pu, dpu, pl, dpl;
    horner(up_re_, up_im_, zr, zi, pu, dpu);
    horner(lo_re_, lo_im_, zr, zi, pl, dpl);
    const Complex au = env * pu, su = env * dpu;
    const Complex al = env * pl, sl = env * dpl;
    const Complex au1 = -x1 * au + su, au2 = -x2 * au - Complex{0.0, 1.0} * su;
    const Complex al1 = -x1 * al + sl, al2 = -x2 * al - Complex{0.0, 1.0} * sl;
    HusimiPoint p;
    p.q = (std::norm(au) + std::norm(al)) / kPi;
    p.grad.d_x1 = 2.0 / kPi * (au.real() * au1.real() + au.imag() * au1.imag() +
                               al.real() * al1.real() + al.imag() * al1.imag());
    p.grad.d_x2 = 2.0 / kPi * (au.real() * au2.real() + au.imag() * au2.imag() +
                               al.real() * al2.real() + al.imag() * al2.imag());
    return p;
  }

 private:
  static void horner(const std::vector<double>& cr, const std::vector<double>& ci, double zr,
                     double zi, Complex& value, Complex& deriv) {
    double pr = 0.0, pi = 0.0, dr = 0.0, di = 0.0;
    for (std::size_t k = cr.size(); k-- > 0;) {
      // d = d * z + p;  p = p * z + c_k
      const double ndr = dr * zr - di * zi + pr;
      const double ndi = dr * zi + di * zr + pi;
      const double npr = pr * zr - pi * zi + cr[k];
      const double npi = pr * zi + pi * zr + ci[k];
      dr = ndr;
      di = ndi;
      pr = npr;
      pi = npi;
    }
    value = {pr, pi};
    deriv = {dr, di};
  }

  std::vector<double> up_re_, up_im_, lo_re_, lo_im_;
};

// Marginal densities and their derivatives on a uniform axis, both axes at once.
struct Marginals {
  std::vector<double> x;
  double h = 0.0;
  std::vector<double> f1, df1;  // along X1 (integrated over X2)
  std::vector<double> f2, df2;  // along X2 (integrated over X1)
};

Marginals build_marginals(const QField& qf, const PhaseSpaceGrid& g, const MarginalOptions& opts) {
  if (opts.points < 16) throw ConfigurationError("marginal resampling needs at least 16 points");
  const int m = opts.points;
  const double r = g.r_max;
  Marginals out;
  out.h = 2.0 * r / (m - 1);
  out.x.resize(m);
  for (int i = 0; i < m; ++i) out.x[i] = -r + i * out.h;
  out.f1.assign(m, 0.0);
  out.df1.assign(m, 0.0);
  out.f2.assign(m, 0.0);
  out.df2.assign(m, 0.0);
  const CartesianHusimi husimi(qf.state);
  // Trapezoid rule; the end columns carry weight h/2 but Q is negligible there.
  for (int i = 0; i < m; ++i) {
    const double wi = (i == 0 || i == m - 1) ? 0.5 : 1.0;
    for (int k = 0; k < m; ++k) {
      const double wk = (k == 0 || k == m - 1) ? 0.5 : 1.0;
      const HusimiPoint p = husimi(out.x[i], out.x[k]);
      out.f1[i] += wk * p.q;
      out.df1[i] += wk * p.grad.d_x1;
      out.f2[k] += wi * p.q;
      out.df2[k] += wi * p.grad.d_x2;
    }
  }
  for (int i = 0; i < m; ++i) {
    out.f1[i] *= out.h;
    out.df1[i] *= out.h;
    out.f2[i] *= out.h;
    out.df2[i] *= out.h;
  }
  return out;
}

MarginalCr marginal_from(const std::vector<double>& x, double h, const std::vector<double>& f,
                         const std::vector<double>& df) {
  const std::size_t m = x.size();
  const double f_max = *std::max_element(f.begin(), f.end());
  detail::CompensatedSum z, s1, s2, fi;
  for (std::size_t i = 0; i < m; ++i) {
    const double w = (i == 0 || i + 1 == m) ? 0.5 * h : h;
    z.add(w * f[i]);
    s1.add(w * f[i] * x[i]);
    if (f[i] > kGuard * f_max && f[i] > 0.0) fi.add(w * df[i] * df[i] / f[i]);
  }
  const double norm = z.value();
  const double mean = s1.value() / norm;
  for (std::size_t i = 0; i < m; ++i) {
    const double w = (i == 0 || i + 1 == m) ? 0.5 * h : h;
    s2.add(w * f[i] * (x[i] - mean) * (x[i] - mean));
  }
  MarginalCr out;
  out.variance = s2.value() / norm;
  out.fisher = fi.value() / norm;
  out.product = out.variance * out.fisher;
  return out;
}

}  // namespace

double wehrl_lieb_bound() { return 1.0 + std::log(kPi); }

double wehrl_entropy(const QField& qf, const PhaseSpaceGrid& g) {
  check_field(qf, g, "wehrl_entropy");
  return integrate(g, entropy_density(qf));
}

std::vector<double> wehrl_pd(const QField& qf, const PhaseSpaceGrid& g) {
  check_field(qf, g, "wehrl_pd");
  return radial_integrate(g, entropy_density(qf));
}

VariancePair marginal_stats(const QField& qf, const PhaseSpaceGrid& g) {
  check_field(qf, g, "marginal_stats");
  std::vector<double> f1(g.size()), f2(g.size());
  for (int i = 0; i < g.n_r; ++i) {
    for (int j = 0; j < g.n_theta; ++j) {
      const std::size_t k = g.index(i, j);
      f1[k] = g.r_nodes[i] * std::cos(g.theta_nodes[j]) * qf.q[k];
      f2[k] = g.r_nodes[i] * std::sin(g.theta_nodes[j]) * qf.q[k];
    }
  }
  const double norm = qf.norm;
  VariancePair vp;
  vp.mean_x1 = integrate(g, f1) / norm;
  vp.mean_x2 = integrate(g, f2) / norm;
  for (int i = 0; i < g.n_r; ++i) {
    for (int j = 0; j < g.n_theta; ++j) {
      const std::size_t k = g.index(i, j);
      const double d1 = g.r_nodes[i] * std::cos(g.theta_nodes[j]) - vp.mean_x1;
      const double d2 = g.r_nodes[i] * std::sin(g.theta_nodes[j]) - vp.mean_x2;
      f1[k] = d1 * d1 * qf.q[k];
      f2[k] = d2 * d2 * qf.q[k];
    }
  }
  vp.var_x1 = integrate(g, f1) / norm;
  vp.var_x2 = integrate(g, f2) / norm;
  return vp;
}

std::vector<double> fisher_gamma(const QField& qf, const VariancePair& vp) {
  std::vector<double> gamma = fisher_density(qf, vp);
  for (std::size_t k = 0; k < gamma.size(); ++k) {
    if (gamma[k] != 0.0) gamma[k] /= qf.q[k];
  }
  return gamma;
}

double fisher_information(const QField& qf, const PhaseSpaceGrid& g) {
  const VariancePair vp = marginal_stats(qf, g);
  return integrate(g, fisher_density(qf, vp));
}

std::vector<double> fisher_pd(const QField& qf, const PhaseSpaceGrid& g) {
  const VariancePair vp = marginal_stats(qf, g);
  return radial_integrate(g, fisher_density(qf, vp));
}

double initial_fisher_pd_closed_form(double alpha_mag, double theta) {
  if (!(alpha_mag >= 0.0)) {
    throw InvalidParameterError("initial_fisher_pd_closed_form: alpha_mag must be nonnegative");
  }
  const double a2 = alpha_mag * alpha_mag;
  const double x = alpha_mag * std::cos(theta);
  const double f1 = a2 - x * x + 0.5;
  const double f2 = a2 - x * x + 1.0;
  // e^{x^2 - a^2} e^{-x^2} folded into e^{-a^2} so neither factor overflows.
  const double first = std::exp(x * x - a2) * x * std::sqrt(kPi) * (1.0 + std::erf(x)) * f1;
  const double second = std::exp(-a2) * f2;
  return (first + second) / (2.0 * kPi);
}

InitialIdentityReport initial_identities(double alpha_mag, const GridOptions& opts) {
  ModelConfig cfg;
  cfg.alpha_mag = alpha_mag;
  const PhaseSpaceGrid g = build_grid(cfg, opts);
  const QField qf = sample_qfield(evolve_closed_form(cfg, 0.0), g);

  InitialIdentityReport rep;
  rep.alpha_mag = alpha_mag;
  rep.i_f = fisher_information(qf, g);
  rep.s_w = wehrl_entropy(qf, g);
  rep.scalar_residual = rep.i_f - (rep.s_w + 1.0 - std::log(kPi));

  const std::vector<double> s_theta = wehrl_pd(qf, g);
  const std::vector<double> i_theta = fisher_pd(qf, g);
  const double a2 = alpha_mag * alpha_mag;
  for (int j = 0; j < g.n_theta; ++j) {
    const double theta = g.theta_nodes[j];
    const double x = alpha_mag * std::cos(theta);
    const double bracket =
        std::exp(-a2) + x * std::sqrt(kPi) * (1.0 + std::erf(x)) * std::exp(x * x - a2);
    const double rhs = s_theta[j] - std::log(kPi) / (2.0 * kPi) * bracket;
    rep.phase_residual_max = std::max(rep.phase_residual_max, std::fabs(i_theta[j] - rhs));
    rep.closed_form_deviation =
        std::max(rep.closed_form_deviation,
                 std::fabs(i_theta[j] - initial_fisher_pd_closed_form(alpha_mag, theta)));
  }
  rep.difference_at_theta0 = rep.i_f - i_theta[0] - (1.0 - std::log(kPi));
  return rep;
}

double beta_moments(const QField& qf, const PhaseSpaceGrid& g, int s) {
  if (s != 1 && s != 2) throw InvalidArgumentError("beta_moments: order must be 1 or 2");
  check_field(qf, g, "beta_moments");
  std::vector<double> f(g.size());
  for (int i = 0; i < g.n_r; ++i) {
    const double rs = s == 1 ? g.r_nodes[i] : g.r_nodes[i] * g.r_nodes[i];
    for (int j = 0; j < g.n_theta; ++j) f[g.index(i, j)] = rs * qf.q[g.index(i, j)];
  }
  return integrate(g, f) / qf.norm;
}

double cr_product(const QField& qf, const PhaseSpaceGrid& g) {
  const double m1 = beta_moments(qf, g, 1);
  const double m2 = beta_moments(qf, g, 2);
  return fisher_information(qf, g) * (m2 - m1 * m1);
}

MarginalCr marginal_cr_check(const QField& qf, const PhaseSpaceGrid& g, int axis,
                             const MarginalOptions& opts) {
  if (axis != 1 && axis != 2) throw InvalidArgumentError("marginal_cr_check: axis must be 1 or 2");
  const auto [x1, x2] = marginal_cr_both(qf, g, opts);
  return axis == 1 ? x1 : x2;
}

std::pair<MarginalCr, MarginalCr> marginal_cr_both(const QField& qf, const PhaseSpaceGrid& g,
                                                   const MarginalOptions& opts) {
  const Marginals mg = build_marginals(qf, g, opts);
  return {marginal_from(mg.x, mg.h, mg.f1, mg.df1), marginal_from(mg.x, mg.h, mg.f2, mg.df2)};
}

MeasureRecord compute_record(const QField& qf, const PhaseSpaceGrid& g, bool with_marginals) {
  check_field(qf, g, "compute_record");
  MeasureRecord rec;
  rec.t_scaled = qf.t_scaled;

  const std::vector<double> ent = entropy_density(qf);
  rec.s_w = integrate(g, ent);
  rec.s_theta = radial_integrate(g, ent);

  rec.variances = marginal_stats(qf, g);
  const std::vector<double> fis = fisher_density(qf, rec.variances);
  rec.i_f = integrate(g, fis);
  rec.i_theta = radial_integrate(g, fis);

  const double m1 = beta_moments(qf, g, 1);
  const double m2 = beta_moments(qf, g, 2);
  rec.delta_sq = m2 - m1 * m1;
  rec.cr_product = rec.i_f * rec.delta_sq;

  if (with_marginals) {
    auto [x1, x2] = marginal_cr_both(qf, g);
    rec.marginal_x1 = x1;
    rec.marginal_x2 = x2;
  }
  return rec;
}

std::vector<std::string> audit_record(const MeasureRecord& rec, const PhaseSpaceGrid& g) {
  std::vector<std::string> issues;
  auto fail = [&](const std::string& what, double value) {
    std::ostringstream os;
    os.precision(17);
    os << what << " (value " << value << ", T = " << rec.t_scaled << ")";
    issues.push_back(os.str());
  };
  const double scalars[] = {rec.s_w, rec.i_f, rec.delta_sq, rec.cr_product,
                            rec.variances.var_x1, rec.variances.var_x2,
                            rec.variances.mean_x1, rec.variances.mean_x2};
  for (double v : scalars) {
    if (!std::isfinite(v)) fail("non-finite quantifier", v);
  }
  if (rec.s_w < wehrl_lieb_bound() - 1e-6) fail("Wehrl entropy below 1 + ln pi", rec.s_w);
  if (rec.i_f < 0.0) fail("negative Fisher information", rec.i_f);
  if (!(rec.variances.var_x1 > 0.0) || !(rec.variances.var_x2 > 0.0)) {
    fail("nonpositive quadrature variance", std::min(rec.variances.var_x1, rec.variances.var_x2));
  }
  if (static_cast<int>(rec.s_theta.size()) == g.n_theta) {
    detail::CompensatedSum s;
    for (double v : rec.s_theta) s.add(v * g.theta_weight);
    if (std::fabs(s.value() - rec.s_w) > 1e-8) fail("Wehrl phase density does not integrate to S_W", s.value());
  }
  if (static_cast<int>(rec.i_theta.size()) == g.n_theta) {
    detail::CompensatedSum s;
    for (double v : rec.i_theta) s.add(v * g.theta_weight);
    if (std::fabs(s.value() - rec.i_f) > 1e-8) fail("Fisher phase density does not integrate to I_F", s.value());
  }
  for (const auto* mc : {&rec.marginal_x1, &rec.marginal_x2}) {
    if (*mc && (*mc)->product < 1.0 - 1e-3) fail("marginal Cramer-Rao product below 1", (*mc)->product);
  }
  return issues;
}

}  // namespace jcinfo
