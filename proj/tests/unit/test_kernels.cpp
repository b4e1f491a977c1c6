#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <random>

#include "gpb/errors.h"
#include "gpb/kernels.h"
#include "gpb/quadrature.h"
#include "gpb/specialfn.h"

namespace {

std::vector<gpb::ProcessSpec> all_specs() {
  return {gpb::Fbm{0.3},          gpb::Fbm{0.7},          gpb::Bfbm{0.6, 1.4}, gpb::Bfbm{0.3, 0.5},
          gpb::Sfbm{0.3},         gpb::Sfbm{0.75},        gpb::LeiNualartX{0.5}, gpb::LeiNualartX{1.0},
          gpb::LeiNualartX{1.6},  gpb::TimeChangedX{0.5, 0.8}, gpb::TimeChangedX{0.6, 1.4},
          gpb::Gprocess{0.7, 1.0}};
}

TEST(Kernels, FbmBasics) {
  EXPECT_NEAR(gpb::cov_fbm(0.3, 0.4, 0.4), std::pow(0.4, 0.6), 1e-15);
  EXPECT_NEAR(gpb::cov_fbm(0.5, 0.3, 0.8), 0.3, 1e-15);
  EXPECT_NEAR(gpb::cov_fbm(0.5, 0.9, 0.2), 0.2, 1e-15);
}

TEST(Kernels, BfbmReductionsAndDiagonal) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double t = u(gen), s = u(gen);
    EXPECT_NEAR(gpb::cov_bfbm(0.35, 1.0, t, s), gpb::cov_fbm(0.35, t, s), 1e-14);
    EXPECT_NEAR(gpb::cov_sfbm(0.5, t, s), gpb::cov_fbm(0.5, t, s), 1e-14);
  }
  EXPECT_NEAR(gpb::cov_bfbm(0.6, 1.4, 0.7, 0.7), std::pow(0.7, 2 * 0.6 * 1.4), 1e-14);
  EXPECT_THROW(gpb::validate(gpb::Bfbm{0.9, 1.5}), gpb::DomainError);
}

TEST(Kernels, BfbmPlusSignIsTheDecompositionSum) {
  // a^2 R_fBm(HK) + b^2 R_X^{H,K} with a, b written out directly.
  const double H = 0.6, K = 1.4, t = 1.0, s = 0.5;
  const double a2 = std::pow(2.0, 1.0 - K);
  const double b2 = K * (K - 1.0) / (std::pow(2.0, K) * std::tgamma(2.0 - K));
  const double u = std::pow(t, 2 * H), v = std::pow(s, 2 * H);
  const double xk = std::tgamma(2.0 - K) / (K * (K - 1.0)) * (std::pow(u + v, K) - std::pow(u, K) - std::pow(v, K));
  const double rhs = a2 * gpb::cov_fbm(H * K, t, s) + b2 * xk;
  EXPECT_NEAR(gpb::cov_bfbm(H, K, t, s), rhs, 1e-14);
}

TEST(Kernels, SfbmValues) {
  EXPECT_NEAR(gpb::cov_sfbm(0.3, 0.6, 0.6), (2.0 - std::pow(2.0, -0.4)) * std::pow(0.6, 0.6), 1e-14);
  EXPECT_EQ(gpb::cov_sfbm(0.3, 0.0, 0.6), 0.0);
  EXPECT_EQ(gpb::cov_sfbm(0.3, 0.6, 0.0), 0.0);
}

TEST(Kernels, XClosedFormAgainstSpectralIntegral) {
  for (double K : {0.2, 0.5, 0.999, 1.0, 1.001, 1.5, 1.8}) {
    for (auto [u, v] : {std::pair{1.0, 1.0}, std::pair{0.25, 0.75}, std::pair{0.01, 0.6}, std::pair{2.0, 0.5}}) {
      const double q = gpb::quad_improper([K, u, v](double th) {
                         return -std::expm1(-th * u) * -std::expm1(-th * v) * std::pow(th, -1.0 - K);
                       }).value;
      EXPECT_NEAR(gpb::cov_leinualartX(K, u, v), q, 1e-8 * std::max(1.0, q)) << K << " " << u << " " << v;
    }
  }
}

TEST(Kernels, XVarianceIsCKScaled) {
  for (double K : {0.3, 1.0, 1.6}) {
    EXPECT_NEAR(gpb::cov_leinualartX(K, 1.0, 1.0), gpb::eval_CK(K), 1e-13);
    EXPECT_NEAR(gpb::cov_leinualartX(K, 0.4, 0.4), gpb::eval_CK(K) * std::pow(0.4, K), 1e-13);
    EXPECT_EQ(gpb::cov_leinualartX(K, 0.0, 0.7), 0.0);
  }
  EXPECT_NEAR(gpb::cov_leinualartX(1.0, 1.0, 1.0), 2.0 * std::numbers::ln2, 1e-14);
}

TEST(Kernels, TimeChangedX) {
  EXPECT_EQ(gpb::cov_timechangedX(0.6, 0.8, 0.0, 0.5), 0.0);
  EXPECT_NEAR(gpb::cov_timechangedX(0.5, 0.8, 0.3, 0.9), gpb::cov_leinualartX(0.8, 0.3, 0.9), 1e-15);
  EXPECT_NEAR(gpb::cov_timechangedX(0.6, 1.4, 0.3, 0.9),
              gpb::cov_leinualartX(1.4, std::pow(0.3, 1.2), std::pow(0.9, 1.2)), 1e-15);
}

TEST(Kernels, YProcess) {
  EXPECT_NEAR(gpb::cov_Yprocess(1.0, 1.0, 1.0), 0.5, 1e-15);
  EXPECT_NEAR(gpb::cov_Yprocess(1.5, 1.0, 1.0), 1.2533141, 1e-7);
  const double q = gpb::quad_improper([](double th) { return std::exp(-2.0 * th) * std::pow(th, -0.5); }).value;
  EXPECT_NEAR(gpb::cov_Yprocess(1.5, 1.0, 1.0), q, 1e-9);
  EXPECT_THROW(gpb::cov_Yprocess(1.0, 0.0, 0.0), gpb::DomainError);
}

TEST(Kernels, SymmetryOnRandomPairs) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto& spec : all_specs()) {
    for (int i = 0; i < 50; ++i) {
      const double t = u(gen), s = u(gen);
      EXPECT_EQ(gpb::kernel(spec, t, s), gpb::kernel(spec, s, t)) << gpb::family_name(spec);
    }
  }
}

TEST(Kernels, SelfSimilarity) {
  const double c = 0.37, t = 0.8, s = 0.45;
  EXPECT_NEAR(gpb::cov_fbm(0.3, c * t, c * s), std::pow(c, 0.6) * gpb::cov_fbm(0.3, t, s), 1e-14);
  EXPECT_NEAR(gpb::cov_bfbm(0.6, 1.4, c * t, c * s), std::pow(c, 1.68) * gpb::cov_bfbm(0.6, 1.4, t, s), 1e-14);
  EXPECT_NEAR(gpb::cov_sfbm(0.3, c * t, c * s), std::pow(c, 0.6) * gpb::cov_sfbm(0.3, t, s), 1e-14);
  EXPECT_NEAR(gpb::cov_leinualartX(0.7, c * t, c * s), std::pow(c, 0.7) * gpb::cov_leinualartX(0.7, t, s), 1e-14);
}

TEST(Kernels, CovarianceMatricesArePsd) {
  const gpb::Grid grid(8);
  for (const auto& spec : all_specs()) {
    const gpb::Matrix c = gpb::build_covariance_matrix(spec, grid);
    ASSERT_EQ(c.rows(), 257);
    EXPECT_TRUE(c.isApprox(c.transpose(), 0.0)) << gpb::family_name(spec);
    Eigen::SelfAdjointEigenSolver<gpb::Matrix> es(c, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    EXPECT_GE(ev.minCoeff(), -1e-10 * ev.maxCoeff()) << gpb::family_name(spec);
    for (int i = 0; i < c.rows(); ++i) EXPECT_GE(c(i, i), 0.0);
  }
}

TEST(Kernels, MatrixMatchesPointwiseKernel) {
  const gpb::Grid grid(5);
  const auto pts = grid.points();
  for (const auto& spec : all_specs()) {
    const gpb::Matrix c = gpb::build_covariance_matrix(spec, grid);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      for (std::size_t j = 0; j < pts.size(); ++j) {
        ASSERT_EQ(c(i, j), gpb::kernel(spec, pts[i], pts[j]));
      }
    }
  }
}

TEST(Kernels, BrownianMinMatrix) {
  const gpb::Matrix c = gpb::build_covariance_matrix(gpb::Fbm{0.5}, std::vector<double>{0.25, 0.5, 0.75, 1.0});
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) EXPECT_NEAR(c(i, j), 0.25 * (std::min(i, j) + 1), 1e-15);
  }
}

TEST(Kernels, BfbmDiagonalOnGrid) {
  const gpb::Grid grid(6);
  const gpb::Matrix c = gpb::build_covariance_matrix(gpb::Bfbm{0.6, 1.4}, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    EXPECT_NEAR(c(i, i), std::pow(grid.at(i), 1.68), 1e-14);
  }
}

TEST(Kernels, CorrelationHasUnitDiagonal) {
  const gpb::Matrix c = gpb::build_covariance_matrix(gpb::Sfbm{0.3}, gpb::Grid(4));
  const gpb::Matrix r = gpb::correlation(c);
  EXPECT_EQ(r(0, 0), 0.0);
  for (int i = 1; i < r.rows(); ++i) EXPECT_NEAR(r(i, i), 1.0, 1e-15);
  EXPECT_LE(r.cwiseAbs().maxCoeff(), 1.0 + 1e-15);
}

TEST(Kernels, GProcess) {
  EXPECT_EQ(gpb::cov_G(0.7, 1.0, 0.0, 0.0), 0.0);
  EXPECT_THROW(gpb::cov_G(0.9, 0.1, 0.5, 0.5), gpb::UnsupportedRegion);
  const gpb::GKernel g(0.7, 1.0);
  EXPECT_NEAR(g.alpha(), 0.4, 1e-15);
  for (auto [t, s] : {std::pair{0.3, 0.8}, std::pair{1.0, 1.0}}) {
    const double ref = g.kappa() * gpb::cov_fbm(0.2, t, s) + g.lambda() * gpb::cov_leinualartX(1.8, t, s);
    EXPECT_NEAR(g(t, s), ref, 1e-13 * std::abs(ref));
    EXPECT_EQ(g(t, s), gpb::cov_G(0.7, 1.0, t, s));
  }
}

// Values computed once with mpmath (tanh-sinh, 20 digits) directly in the
// (u, v) coordinates, split along the diagonal.
struct HeatCase {
  double H, gamma, t, s, value;
};

TEST(Heat, MatchesTwoDimensionalReference) {
  for (const HeatCase& c : {HeatCase{0.7, 1.0, 1.0, 1.0, 7.55602321151351}, HeatCase{0.7, 1.0, 1.0, 0.5, 2.61293316329921},
                           HeatCase{0.7, 1.0, 0.25, 0.75, 1.57931455329378},
                           HeatCase{0.8, 0.5, 0.5, 0.5, 1.12507171467784}}) {
    EXPECT_NEAR(gpb::heat_double_integral(c.H, c.gamma, c.t, c.s), c.value, 1e-7 * c.value)
        << c.H << " " << c.gamma << " " << c.t << " " << c.s;
  }
}

TEST(Heat, NestedQuadratureAgreesLoosely) {
  // Away from the diagonal corner the plain iterated rule converges.
  const double H = 0.7, g = 1.0, t = 1.0, s = 0.5;
  gpb::QuadratureSettings loose;
  loose.abs_tol = 1e-7;
  loose.rel_tol = 1e-7;
  const auto r = gpb::integrate_2d(
      [=](double u, double v) {
        const double d = std::abs(u - v), w = t + s - u - v;
        if (d == 0.0 || w <= 0.0) return 0.0;
        return std::pow(d, 2 * H - 2) * std::pow(w, -g);
      },
      0.0, t, [](double) { return 0.0; }, [=](double) { return s; }, [](double u) { return u; }, loose);
  EXPECT_NEAR(gpb::heat_double_integral(H, g, t, s), r.value, 1e-5 * r.value);
}

TEST(Heat, SymmetryAndScaling) {
  const double H = 0.7, g = 1.0;
  EXPECT_NEAR(gpb::heat_double_integral(H, g, 0.3, 0.9), gpb::heat_double_integral(H, g, 0.9, 0.3), 1e-12);
  const double c = 0.5;
  const double base = gpb::heat_double_integral(H, g, 0.6, 0.9);
  EXPECT_NEAR(gpb::heat_double_integral(H, g, c * 0.6, c * 0.9), std::pow(c, 2 * H - g) * base, 1e-9 * base);
}

TEST(Heat, DomainChecks) {
  EXPECT_THROW(gpb::heat_double_integral(0.4, 0.5, 1, 1), gpb::DomainError);
  EXPECT_THROW(gpb::heat_double_integral(0.7, 1.5, 1, 1), gpb::DomainError);
  EXPECT_THROW(gpb::heat_double_integral(0.7, 1.0, 0, 1), gpb::DomainError);
}

TEST(Heat, SpatialConstant) {
  // radial integral int_0^inf r^{beta-1} e^{-r^2/2} dr = 2^{beta/2-1} Gamma(beta/2)
  for (auto [d, beta] : {std::pair{3, 1.0}, std::pair{3, 1.5}, std::pair{1, 0.5}}) {
    const double sphere = 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
    const double radial = std::pow(2.0, beta / 2.0 - 1.0) * std::tgamma(beta / 2.0);
    const double ref = std::pow(2.0 * std::numbers::pi, -d) / (1.0 - beta / 2.0) * sphere * radial;
    EXPECT_NEAR(gpb::heat_constant_D(d, beta), ref, 1e-9 * ref);
  }
  EXPECT_THROW(gpb::heat_constant_D(1, 1.0), gpb::DomainError);
}

TEST(Heat, CovarianceSymmetric) {
  EXPECT_NEAR(gpb::cov_heat_numeric(0.7, 1.0, 0.25, 0.75), gpb::cov_heat_numeric(0.7, 1.0, 0.75, 0.25), 1e-12);
}

TEST(Process, CriticalExponents) {
  EXPECT_DOUBLE_EQ(gpb::critical_exponent(gpb::Fbm{0.5}), 0.5);
  EXPECT_NEAR(gpb::critical_exponent(gpb::Bfbm{0.6, 1.4}), 0.84, 1e-15);
  EXPECT_DOUBLE_EQ(gpb::critical_exponent(gpb::Sfbm{0.3}), 0.3);
  EXPECT_NEAR(gpb::critical_exponent(gpb::TimeChangedX{0.5, 0.8}), 0.4, 1e-15);
  EXPECT_NEAR(gpb::critical_exponent(gpb::Gprocess{0.7, 1.0}), 0.2, 1e-15);
  EXPECT_NEAR(gpb::critical_exponent(gpb::LeiNualartX{0.8}), 0.4, 1e-15);
}

TEST(Process, ValidationAndJson) {
  EXPECT_THROW(gpb::validate(gpb::Fbm{1.0}), gpb::DomainError);
  EXPECT_THROW(gpb::validate(gpb::Gprocess{0.4, 0.2}), gpb::DomainError);
  EXPECT_THROW(gpb::validate(gpb::Gprocess{0.7, 1.5}), gpb::DomainError);
  EXPECT_THROW(gpb::validate(gpb::LeiNualartX{2.0}), gpb::DomainError);
  for (const auto& spec : all_specs()) {
    const auto back = gpb::process_from_json(gpb::to_json(spec));
    EXPECT_EQ(gpb::to_json(back), gpb::to_json(spec));
  }
  EXPECT_THROW(gpb::make_process("nope", 0.5, 1, 1), gpb::DomainError);
}

}  // namespace
