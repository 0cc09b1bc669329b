#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "oracles.hpp"
#include "strichartz/paraboloid.hpp"

namespace pb = strichartz::paraboloid;
using oracle::pi;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

// ---------------------------------------------------------------------------
// c_d(m)

TEST(Cdm, LowOrderValues) {
  for (int d = 1; d <= 20; ++d) {
    EXPECT_NEAR(pb::cdm_sum({d}, 0), 1.0 + 2.0 / d, 1e-13) << d;
    EXPECT_NEAR(pb::cdm_sum({d}, 1), 1.0, 1e-13) << d;
    EXPECT_NEAR(pb::cdm_sum({d}, 2), pb::cdm_closed2({d}), 1e-13) << d;
  }
}

TEST(Cdm, JacobiRouteAgrees) {
  for (int d = 3; d <= 10; ++d) {
    for (int m = 0; m <= 30; ++m) EXPECT_LT(rel(pb::cdm_jacobi({d}, m), pb::cdm_sum({d}, m)), 1e-10) << d << " " << m;
  }
}

TEST(Cdm, JacobiRouteAgainstExplicitJacobiSum) {
  for (int d = 3; d <= 10; ++d) {
    const double y = (d - 2.0) / (d + 2.0);
    const double x = (d * d + 4.0) / (d * d - 4.0);
    for (int m = 0; m <= 20; ++m) {
      const double expect = (1.0 + 2.0 / d) * std::pow(y, m) * oracle::jacobi_explicit(m, 0.0, 0.5 * d - 1.0, x);
      EXPECT_LT(rel(pb::cdm_jacobi({d}, m), expect), 1e-10);
    }
  }
}

TEST(Cdm, CentralBinomialFormInTwoDimensions) {
  for (int m = 0; m <= 30; ++m) {
    const double expect = 2.0 * std::exp(std::lgamma(2.0 * m + 1.0) - 2.0 * std::lgamma(m + 1.0) - m * std::log(4.0));
    EXPECT_LT(rel(pb::cdm_central_binomial(m), expect), 1e-12);
    EXPECT_LT(rel(pb::cdm_sum({2}, m), expect), 1e-10);
  }
}

TEST(Cdm, TrigonometricIntegralInOneDimension) {
  for (int m = 0; m <= 30; ++m) {
    const auto r = pb::c1m_integral(m);
    EXPECT_TRUE(r.converged);
    EXPECT_LT(rel(r.value, pb::cdm_sum({1}, m)), 1e-10) << m;
  }
  // 3/(2 pi) times the integral at m = 1 is 1; the bare integral is 2 pi / 3.
  EXPECT_NEAR(pb::c1m_integral(1).value, 1.0, 1e-12);
  EXPECT_NEAR(pb::c1m_integral(2).value, 19.0 / 27.0, 1e-12);
}

TEST(Cdm, DecreasingInM) {
  for (int d = 1; d <= 20; ++d) {
    for (int m = 2; m <= 30; ++m) EXPECT_LT(pb::cdm_sum({d}, m + 1), pb::cdm_sum({d}, m)) << d << " " << m;
  }
}

TEST(JacobiRatio, BelowThreshold) {
  for (int d = 3; d <= 12; ++d) {
    const double bound = (d + 2.0) / (d - 2.0);
    for (int m = 0; m <= 30; ++m) EXPECT_LT(pb::jacobi_ratio_rm({d}, m), bound) << d << " " << m;
  }
}

TEST(JacobiRatio, MatchesQuotientOfExplicitSums) {
  for (int d = 3; d <= 10; ++d) {
    const double x = (d * d + 4.0) / (d * d - 4.0);
    for (int m = 0; m <= 20; ++m) {
      const double expect =
          oracle::jacobi_explicit(m + 1, 0.0, 0.5 * d - 1.0, x) / oracle::jacobi_explicit(m, 0.0, 0.5 * d - 1.0, x);
      EXPECT_LT(rel(pb::jacobi_ratio_rm({d}, m), expect), 1e-10);
    }
  }
  EXPECT_THROW(pb::jacobi_ratio_rm({2}, 3), std::domain_error);
}

// ---------------------------------------------------------------------------
// Constants

TEST(Constants, TwoDimensionalValues) {
  EXPECT_NEAR(pb::spectral_gap_paraboloid({2}).value, 0.125, 1e-15);
  EXPECT_NEAR(pb::two_peak_paraboloid({2}).value, 1.0 - std::sqrt(0.5), 1e-15);
  EXPECT_EQ(pb::spectral_gap_paraboloid({2}).provenance, pb::Provenance::closed_form);
}

TEST(Constants, GapBelowTwoPeakWithConsistentMargin) {
  for (int d = 1; d <= 200; ++d) {
    const double sg = pb::spectral_gap_paraboloid({d}).value;
    const double tp = pb::two_peak_paraboloid({d}).value;
    const pb::VanishingCheck v = pb::check_tp_vanishing({d});
    EXPECT_TRUE(v.holds) << d;
    EXPECT_LT(sg, tp) << d;
    // C_TP - C_SG = 2^{2/(d+2)} (d/(d+2))^{d^2/(2d+4)} margin.
    const double scale = std::pow(2.0, 2.0 / (d + 2.0)) * std::pow(d / (d + 2.0), d * d / (2.0 * d + 4.0));
    EXPECT_NEAR(tp - sg, scale * v.margin, 1e-14);
  }
}

TEST(Constants, SpectralGapIsMinimalHessianQuotient) {
  for (int d = 1; d <= 12; ++d) {
    double best = 1e300;
    int argbest = -1;
    for (int m = 2; m <= 25; ++m) {
      pb::RadialHermiteCoeffs f;
      f.a.assign(m + 1, 0.0);
      f.a[m] = 1.0;
      const double q = pb::deficit_hessian_paraboloid({d}, f).quotient;
      if (q < best) {
        best = q;
        argbest = m;
      }
    }
    EXPECT_EQ(argbest, 2) << d;
    EXPECT_LT(rel(best, pb::spectral_gap_paraboloid({d}).value), 1e-12) << d;
  }
}

TEST(Constants, HessianRejectsTangentDirections) {
  EXPECT_THROW(pb::deficit_hessian_paraboloid({2}, {{1.0, 0.0, 1.0}}), std::invalid_argument);
  EXPECT_THROW(pb::deficit_hessian_paraboloid({2}, {{0.0, 0.0}}), std::invalid_argument);
}

// ---------------------------------------------------------------------------
// Gaussians

TEST(Gaussians, OverlapMatchesRadialQuadrature) {
  for (int d = 1; d <= 4; ++d) {
    for (double mu : {0.1, 0.8, 3.0}) {
      EXPECT_LT(rel(pb::gaussian_overlap({d}, 1.3, mu), oracle::overlap_quadrature(d, 1.3, mu)), 1e-10);
    }
  }
}

TEST(Gaussians, NormOfTwoPeakFamily) {
  for (int d = 1; d <= 3; ++d) {
    for (double lambda : {1e-3, 0.2, 1.0}) {
      const auto f = pb::GaussianSuperposition::two_peak(lambda);
      EXPECT_NEAR(pb::norm_sq({d}, f), pb::two_peak_norm_sq({d}, lambda), 1e-14);
    }
  }
}

TEST(Gaussians, PropagatorSolvesSchrodinger) {
  // i u_t = -Delta u in the convention where G_lambda^ has the phase e^{-4 pi^2 i t |xi|^2}.
  for (int d = 1; d <= 3; ++d) {
    const double lambda = 0.9;
    const double t = 0.07;
    const double r = 0.6;
    const double h = 1e-4;
    const auto u = [&](double tt, double rr) { return pb::propagate_gaussian({d}, lambda, tt, rr); };
    const pb::cplx ut = (u(t + h, r) - u(t - h, r)) / (2.0 * h);
    const pb::cplx urr = (u(t, r + h) - 2.0 * u(t, r) + u(t, r - h)) / (h * h);
    const pb::cplx ur = (u(t, r + h) - u(t, r - h)) / (2.0 * h);
    const pb::cplx lap = urr + (d - 1.0) / r * ur;
    EXPECT_LT(std::abs(ut - pb::cplx{0.0, 1.0} * lap), 1e-5 * std::abs(ut)) << d;
    EXPECT_LT(std::abs(u(t, r) - oracle::schrodinger_gaussian(d, lambda, t, r)), 1e-14);
  }
}

TEST(Gaussians, QNormOfSingleGaussianIsScaleFree) {
  for (int d = 1; d <= 2; ++d) {
    for (double lambda : {0.05, 1.0, 20.0}) {
      const pb::QNorm q = pb::qnorm_superposition({d}, {{{1.0, lambda}}});
      EXPECT_LT(rel(q.value, pb::qnorm_gaussian({d})), 1e-9) << d << " " << lambda;
    }
  }
}

TEST(Gaussians, QNormClosedFormMatchesSpaceTimeQuadrature) {
  const std::vector<oracle::Term> terms{{1.0, 1.0}, {0.6, 0.45}};
  const pb::GaussianSuperposition f{{{1.0, 1.0}, {0.6, 0.45}}};
  for (int d = 1; d <= 2; ++d) {
    const double expect = oracle::spacetime_qnorm(d, terms);
    const pb::QNorm q = pb::qnorm_superposition({d}, f);
    EXPECT_LT(rel(q.value, expect), 1e-6) << d;
    EXPECT_LT(q.error, 1e-8 * q.value);
  }
}

TEST(Gaussians, QNormRequiresKnownExponent) {
  EXPECT_THROW(pb::qnorm_superposition({3}, {{{1.0, 1.0}}}), std::domain_error);
  EXPECT_THROW(pb::qnorm_superposition({2}, {}), std::invalid_argument);
  EXPECT_THROW(pb::qnorm_superposition({2}, {{{1.0, -1.0}}}), std::invalid_argument);
}

TEST(Gaussians, SharpConstantAttainedByGaussian) {
  for (int d = 1; d <= 2; ++d) {
    const pb::Deficit def = pb::deficit({d}, {{{1.0, 1.0}}});
    EXPECT_NEAR(def.value, 0.0, 1e-10) << d;
  }
}

// ---------------------------------------------------------------------------
// Optimal mu and distance

TEST(OptimalMu, AgreesWithBrent) {
  for (int d = 1; d <= 4; ++d) {
    for (double lambda : {0.3, 1e-2, 1e-4}) {
      const pb::OptimalMu m = pb::optimal_mu({d}, lambda);
      const double expect = oracle::optimal_mu_brent(d, lambda, m.lo, m.hi);
      EXPECT_NEAR(m.mu_star, expect, 1e-7) << d << " " << lambda;
      EXPECT_GE(m.mu_star, std::sqrt(lambda));
      EXPECT_LE(m.mu_star, 1.0);
    }
  }
}

TEST(OptimalMu, ApproachesOneFromBelow) {
  // mu* = 1 - (2 lambda)^{d/2} + O(lambda^{d/2 + 1}).
  for (int d = 1; d <= 3; ++d) {
    const double lambda = 1e-4;
    const double mu = pb::optimal_mu({d}, lambda).mu_star;
    EXPECT_LT(mu, 1.0);
    EXPECT_NEAR(mu, 1.0 - std::pow(2.0 * lambda, 0.5 * d), 50.0 * std::pow(lambda, 0.5 * d + 1.0)) << d;
  }
}

TEST(Distance, ZeroOnTheManifold) {
  for (int d = 1; d <= 3; ++d) {
    const pb::GaussianDistance g = pb::dist_to_gaussians({d}, {{{2.0, 0.7}}});
    EXPECT_NEAR(g.dist_sq, 0.0, 1e-10);
    EXPECT_NEAR(g.mu_star, 0.7, 1e-6);
  }
}

TEST(Distance, MatchesDenseScan) {
  const std::vector<oracle::Term> terms{{1.0, 1.0}, {0.5, 0.1}};
  const pb::GaussianSuperposition f{{{1.0, 1.0}, {0.5, 0.1}}};
  for (int d = 1; d <= 3; ++d) {
    const pb::GaussianDistance g = pb::dist_to_gaussians({d}, f);
    const double m = oracle::m_gaussian_scan(d, terms, std::log(0.1) - 3.0, 3.0, 200000);
    EXPECT_NEAR(g.m_value, m, 1e-9) << d;
    EXPECT_GT(g.dist_sq, 0.0);
  }
}

TEST(Distance, SymmetricPairUsesHalfInterval) {
  const pb::GaussianDistance g = pb::dist_to_gaussians({2}, pb::GaussianSuperposition::two_peak(1e-2));
  EXPECT_NEAR(g.log_mu_lo, 0.5 * std::log(1e-2), 1e-15);
  const std::vector<oracle::Term> terms{{1.0, 1.0}, {1.0, 1e-2}};
  EXPECT_NEAR(g.m_value, oracle::m_gaussian_scan(2, terms, std::log(1e-2) - 3.0, 3.0, 200000), 1e-9);
}

// ---------------------------------------------------------------------------
// Two-peak quotient

TEST(TwoPeak, ApproachesTwoPeakConstantInTwoDimensions) {
  const double limit = pb::two_peak_paraboloid({2}).value;
  double previous = 0.0;
  for (double lambda : {1e-1, 1e-2, 1e-3, 1e-4}) {
    const pb::TwoPeakPoint p = pb::two_peak_quotient_paraboloid({2}, lambda);
    EXPECT_GT(p.quotient, previous);
    EXPECT_LT(p.quotient, limit);
    EXPECT_LT(p.error_estimate, 1e-8);
    previous = p.quotient;
  }
  EXPECT_LT(rel(pb::two_peak_quotient_paraboloid({2}, 1e-3).quotient, limit), 0.1);
}

TEST(TwoPeak, OneDimensionalTrend) {
  const double limit = pb::two_peak_paraboloid({1}).value;
  const double a = pb::two_peak_quotient_paraboloid({1}, 1e-2).quotient;
  const double b = pb::two_peak_quotient_paraboloid({1}, 1e-4).quotient;
  EXPECT_LT(a, b);
  EXPECT_LT(b, limit);
  EXPECT_LT(rel(b, limit), 0.02);
}

TEST(TwoPeak, Errors) {
  EXPECT_THROW(pb::two_peak_quotient_paraboloid({2}, 1.0), pb::OnManifold);
  EXPECT_THROW(pb::two_peak_quotient_paraboloid({3}, 0.1), std::domain_error);
  EXPECT_THROW(pb::two_peak_quotient_paraboloid({2}, -0.1), std::domain_error);
  EXPECT_THROW(pb::optimal_mu({2}, 1.5), std::domain_error);
}
