#include "jcinfo/model.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/special_functions/gamma.hpp>
#include <gtest/gtest.h>

#include "jcinfo/errors.hpp"

namespace jcinfo {
namespace {

constexpr double kPi = std::numbers::pi;

ModelConfig with_alpha(double alpha) {
  ModelConfig cfg;
  cfg.alpha_mag = alpha;
  return cfg;
}

// Poisson(mean) mass strictly above n is the regularized lower incomplete
// gamma P(n + 1, mean); independent of the summation in the library.
double poisson_tail_oracle(double alpha, int n) {
  if (alpha == 0.0) return 0.0;
  return boost::math::gamma_p(n + 1.0, alpha * alpha);
}

TEST(CoherentAmplitudes, VacuumIsGroundState) {
  const FockVector v = coherent_amplitudes(0.0, 0.0, 5);
  ASSERT_EQ(v.size(), 6u);
  EXPECT_EQ(v[0], Complex(1.0, 0.0));
  for (int n = 1; n <= 5; ++n) EXPECT_EQ(v[n], Complex(0.0, 0.0));
}

TEST(CoherentAmplitudes, PoissonWeightsForUnitAlpha) {
  const FockVector v = coherent_amplitudes(1.0, 0.0, 30);
  double factorial = 1.0;
  for (int n = 0; n <= 30; ++n) {
    if (n > 0) factorial *= n;
    EXPECT_NEAR(std::norm(v[n]), std::exp(-1.0) / factorial, 1e-16) << "n = " << n;
  }
}

TEST(CoherentAmplitudes, AutoTruncationCapturesTheNorm) {
  const int n_max = choose_truncation(3.0, 1e-12);
  const FockVector v = coherent_amplitudes(3.0, 0.0, n_max);
  EXPECT_NEAR(v.norm_sq(), 1.0, 1e-12);
}

TEST(CoherentAmplitudes, PhaseRotatesEachLevel) {
  const FockVector a = coherent_amplitudes(2.0, 0.0, 20);
  const FockVector b = coherent_amplitudes(2.0, 0.8, 20);
  for (int n = 0; n <= 20; ++n) {
    EXPECT_NEAR(std::abs(b[n] - a[n] * std::polar(1.0, 0.8 * n)), 0.0, 1e-15);
  }
}

TEST(CoherentAmplitudes, LargeLevelsStayFinite) {
  const FockVector v = coherent_amplitudes(3.0, 0.0, 400);
  for (const auto& a : v.amps) EXPECT_TRUE(std::isfinite(std::abs(a)));
  EXPECT_NEAR(v.norm_sq(), 1.0, 1e-14);
}

TEST(CoherentAmplitudes, RejectsNegativeAlpha) {
  EXPECT_THROW(coherent_amplitudes(-0.1, 0.0, 5), InvalidParameterError);
}

TEST(ChooseTruncation, VacuumUsesTheFloor) { EXPECT_EQ(choose_truncation(0.0, 1e-12), 16); }

TEST(ChooseTruncation, MatchesIncompleteGammaTail) {
  for (double alpha : {1.0, 2.0, 3.0, 4.5}) {
    const int n = choose_truncation(alpha, 1e-12);
    const int tail_level = n - 1;  // one level reserved for the lower branch
    if (n > 16) {
      EXPECT_LT(poisson_tail_oracle(alpha, tail_level), 1e-12) << alpha;
      EXPECT_GE(poisson_tail_oracle(alpha, tail_level - 1), 1e-12) << alpha;
    } else {
      EXPECT_LT(poisson_tail_oracle(alpha, tail_level), 1e-12) << alpha;
    }
  }
}

TEST(ChooseTruncation, AlphaThreeCoversSeveralSigma) {
  const int n = choose_truncation(3.0, 1e-12);
  EXPECT_GE(n, 9 + 5 * 3);
  EXPECT_LT(poisson_tail_oracle(3.0, n - 1), 1e-12);
}

TEST(ChooseTruncation, PoissonTailAgreesWithOracle) {
  for (double alpha : {0.5, 1.0, 3.0}) {
    for (int n : {0, 3, 10, 25}) {
      const double want = poisson_tail_oracle(alpha, n);
      EXPECT_NEAR(poisson_tail(alpha, n), want, 1e-14 + 1e-10 * want) << alpha << " " << n;
    }
  }
}

TEST(ChooseTruncation, RejectsBadTolerance) {
  EXPECT_THROW(choose_truncation(1.0, 0.0), InvalidParameterError);
  EXPECT_THROW(choose_truncation(1.0, 1.0), InvalidParameterError);
}

TEST(ModelConfigTest, Validation) {
  ModelConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.alpha_mag = -1.0;
  EXPECT_THROW(cfg.validate(), InvalidParameterError);
  cfg = ModelConfig{};
  cfg.n_max = 0;
  EXPECT_THROW(cfg.validate(), InvalidParameterError);
  cfg = ModelConfig{};
  cfg.tail_tol = 1.5;
  EXPECT_THROW(cfg.validate(), InvalidParameterError);
  cfg = ModelConfig{};
  cfg.lambda = 0.0;
  EXPECT_THROW(cfg.validate(), InvalidParameterError);
}

TEST(EvolveClosedForm, IdentityAtZero) {
  const ModelConfig cfg = with_alpha(1.0);
  const auto s = evolve_closed_form(cfg, 0.0);
  const auto c = coherent_amplitudes(1.0, 0.0, resolve_truncation(cfg));
  for (std::size_t n = 0; n < c.size(); ++n) {
    EXPECT_EQ(s.upper[n], c[n]);
    EXPECT_EQ(s.lower[n], Complex(0.0, 0.0));
  }
}

TEST(EvolveClosedForm, ExactRevivalAtTwoPi) {
  const ModelConfig cfg = with_alpha(1.0);
  const auto a = evolve_closed_form(cfg, 0.0);
  const auto b = evolve_closed_form(cfg, 2.0 * kPi);
  for (std::size_t n = 0; n < a.upper.size(); ++n) {
    EXPECT_NEAR(std::abs(a.upper[n] - b.upper[n]), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(a.lower[n] - b.lower[n]), 0.0, 1e-14);
  }
}

TEST(EvolveClosedForm, FieldIsMinusAlphaAtPi) {
  const ModelConfig cfg = with_alpha(1.0);
  const auto s = evolve_closed_form(cfg, kPi);
  const auto c = coherent_amplitudes(1.0, 0.0, resolve_truncation(cfg));
  for (std::size_t n = 0; n < c.size(); ++n) {
    const double sign = (n % 2 == 0) ? -1.0 : 1.0;  // (-1)^{n+1}
    EXPECT_NEAR(std::abs(s.upper[n] - sign * c[n]), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(s.lower[n]), 0.0, 1e-14);
  }
}

TEST(EvolveClosedForm, BranchFormulas) {
  const ModelConfig cfg = with_alpha(2.0);
  const double t = 0.37;
  const auto s = evolve_closed_form(cfg, t);
  const auto c = coherent_amplitudes(2.0, 0.0, resolve_truncation(cfg));
  EXPECT_EQ(s.lower[0], Complex(0.0, 0.0));
  for (std::size_t m = 1; m < c.size(); ++m) {
    const Complex want = Complex(0.0, 1.0) * c[m - 1] * std::sin(m * t);
    EXPECT_NEAR(std::abs(s.lower[m] - want), 0.0, 1e-15);
  }
}

// Property sweeps over random (alpha, T).
TEST(EvolveClosedForm, NormConservationPeriodicityReversal) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> alpha_dist(0.0, 4.0);
  std::uniform_real_distribution<double> time_dist(-20.0, 20.0);
  for (int trial = 0; trial < 200; ++trial) {
    const ModelConfig cfg = with_alpha(alpha_dist(rng));
    const double t = time_dist(rng);
    const auto s = evolve_closed_form(cfg, t);
    EXPECT_NEAR(s.norm_sq(), 1.0, 1e-10);
    const auto p = evolve_closed_form(cfg, t + 2.0 * kPi);
    const auto r = evolve_closed_form(cfg, -t);
    for (std::size_t n = 0; n < s.upper.size(); ++n) {
      EXPECT_NEAR(std::abs(p.upper[n] - s.upper[n]), 0.0, 1e-12);
      EXPECT_NEAR(std::abs(p.lower[n] - s.lower[n]), 0.0, 1e-12);
      EXPECT_EQ(r.upper[n], s.upper[n]);
      EXPECT_EQ(r.lower[n], -s.lower[n]);
    }
  }
}

TEST(EvolveClosedForm, DisentangledAtMultiplesOfPi) {
  for (double alpha : {1.0, 2.0, 3.0}) {
    for (int k = 1; k <= 3; ++k) {
      EXPECT_LT(evolve_closed_form(with_alpha(alpha), k * kPi).lower.norm_sq(), 1e-20);
    }
  }
}

TEST(EvolveBruteForce, IdentityAtZero) {
  ModelConfig cfg = with_alpha(1.0);
  cfg.n_max = resolve_truncation(cfg);
  EXPECT_NEAR(state_fidelity(evolve_closed_form(cfg, 0.0), evolve_brute_force(cfg, 0.0)), 1.0,
              1e-13);
}

TEST(EvolveBruteForce, AgreesWithClosedForm) {
  for (auto [alpha, t] : {std::pair{1.0, 1.3}, std::pair{2.0, kPi / 2}}) {
    ModelConfig cfg = with_alpha(alpha);
    cfg.n_max = resolve_truncation(cfg);
    EXPECT_GE(state_fidelity(evolve_closed_form(cfg, t), evolve_brute_force(cfg, t)), 1.0 - 1e-10);
  }
}

TEST(EvolveBruteForce, OracleAgreementOnFullGrid) {
  for (double alpha : {1.0, 2.0, 3.0}) {
    ModelConfig cfg = with_alpha(alpha);
    cfg.n_max = resolve_truncation(cfg);
    for (int k = 0; k <= 62; ++k) {
      const double t = 0.1 * k;
      EXPECT_GE(state_fidelity(evolve_closed_form(cfg, t), evolve_brute_force(cfg, t)),
                1.0 - 1e-10)
          << "alpha " << alpha << " T " << t;
    }
  }
}

TEST(EvolveBruteForce, RequiresExplicitTruncation) {
  EXPECT_THROW(evolve_brute_force(with_alpha(1.0), 0.5), InvalidParameterError);
}

TEST(EvolveBruteForce, RejectsTooSmallTruncation) {
  ModelConfig cfg = with_alpha(3.0);
  cfg.n_max = 8;
  EXPECT_THROW(evolve_brute_force(cfg, 0.5), TruncationError);
}

TEST(StateFidelity, SelfAndRevival) {
  const ModelConfig cfg = with_alpha(2.0);
  const auto s = evolve_closed_form(cfg, 0.9);
  EXPECT_NEAR(state_fidelity(s, s), 1.0, 1e-12);
  EXPECT_NEAR(state_fidelity(evolve_closed_form(cfg, 0.0), evolve_closed_form(cfg, 2.0 * kPi)), 1.0,
              1e-12);
}

TEST(StateFidelity, CoherentOverlap) {
  // Same truncation for both so the vectors line up; summation oracle of
  // |<1|3>|^2 = exp(-|1 - 3|^2).
  ModelConfig a = with_alpha(1.0);
  ModelConfig b = with_alpha(3.0);
  a.n_max = b.n_max = resolve_truncation(b);
  const double f = state_fidelity(evolve_closed_form(a, 0.0), evolve_closed_form(b, 0.0));
  EXPECT_NEAR(f, std::exp(-4.0), 1e-13);
}

TEST(StateFidelity, RejectsMismatchedLengths) {
  ModelConfig a = with_alpha(1.0);
  a.n_max = 10;
  ModelConfig b = with_alpha(1.0);
  b.n_max = 12;
  EXPECT_THROW(state_fidelity(evolve_closed_form(a, 0.0), evolve_closed_form(b, 0.0)),
               InvalidArgumentError);
}

}  // namespace
}  // namespace jcinfo
