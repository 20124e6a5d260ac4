#include "queuetail/bounds_jsq.hpp"
#include "queuetail/errors.hpp"
#include "queuetail/exact.hpp"
#include "queuetail/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace queuetail;
using namespace queuetail::jsq;

TEST(ThetaN, Values) {
    EXPECT_NEAR(theta_n(0.5), 1.3862943611198906, 1e-15);
    const double t = theta_n(1e-10);
    EXPECT_GT(t, 1.0);
    EXPECT_LT(t, 1.0 + 1e-9);
    EXPECT_NEAR(theta_n(1e-12), 1.0 + 5e-13, 1e-15);
    EXPECT_NEAR(theta_n(0.2), 1.1157177565710488, 1e-14);
    EXPECT_THROW(theta_n(0.0), ValidationError);
    EXPECT_THROW(theta_n(1.0), ValidationError);
    EXPECT_THROW(theta_n(-0.1), ValidationError);
    EXPECT_EQ(jsq_ld_rate(0.3), theta_n(0.3));
}

TEST(ThetaN, StrictlyBetweenOneAndInverseLoad) {
    SplitMix64 rng(2024);
    for (int i = 0; i < 10000; ++i) {
        const double u = rng.uniform();
        const double eps = std::clamp(std::pow(10.0, -9.0 * u), 1e-9, 1.0 - 1e-9);
        const double t = theta_n(eps);
        ASSERT_GT(t, 1.0) << eps;
        ASSERT_LT(t, 1.0 / (1.0 - eps)) << eps;
    }
}

TEST(ThetaN, Increasing) {
    double prev = 1.0;
    for (double eps = 1e-6; eps < 0.999; eps *= 1.05) {
        const double t = theta_n(eps);
        ASSERT_GT(t, prev);
        prev = t;
    }
}

TEST(Ssc, Examples) {
    EXPECT_TRUE(ssc_condition(JsqSystem(1, 1.0, 3e-4)));
    EXPECT_FALSE(ssc_condition(JsqSystem(4, 1.0, 0.1)));
    EXPECT_FALSE(ssc_condition(JsqSystem(1, 1.0, 0.999)));
    EXPECT_FALSE(ssc_condition(JsqSystem(1, 1.0, 0.6)));
}

TEST(Constants, Kappa2Composition) {
    EXPECT_DOUBLE_EQ(JsqConstants::kappa2(), 4.0 * std::numbers::e * 128.0 * 128.0 * 96.0);
    EXPECT_NEAR(JsqConstants::kappa2(), 1.7102e7, 1e3);
}

TEST(TailUpper, Coefficients) {
    const JsqSystem sys(1, 1.0, 3e-4);
    const auto b = jsq_tail_upper(sys);
    const double ssc = 3e-4 * std::log(1.0 / 3e-4);
    EXPECT_NEAR(ssc, 2.433e-3, 1e-6);
    EXPECT_DOUBLE_EQ(b.c1, 2.0 * std::numbers::e * (1.0 + JsqConstants::kappa2() * ssc));
    EXPECT_EQ(b.c0, 0.0);
    EXPECT_EQ(b.r2, 0.0);
    EXPECT_EQ(b.r1, theta_n(3e-4));
    EXPECT_DOUBLE_EQ(b.x_min, 1.0 - 3e-4);
    EXPECT_TRUE(b.conditions_met);
    EXPECT_EQ(b.side, BoundSide::Upper);
    EXPECT_GE(b.eval(20.0), exact::mm1_scaled_tail(3e-4, 20.0));
}

TEST(TailUpper, FlaggedWhenSscFails) {
    const auto b = jsq_tail_upper(JsqSystem(4, 1.0, 0.1));
    EXPECT_FALSE(b.conditions_met);
    EXPECT_TRUE(std::isfinite(b.eval(5.0)));
}

TEST(TailLower, Prefactor) {
    const auto b = jsq_tail_lower(JsqSystem(3, 1.0, 0.5));
    EXPECT_DOUBLE_EQ(b.c0, 0.5);
    EXPECT_NEAR(b.eval(1.0), 0.125, 1e-15);
    EXPECT_TRUE(b.conditions_met);
    EXPECT_EQ(b.side, BoundSide::Lower);
}

TEST(TailLower, BelowMm1Tail) {
    const JsqSystem sys(1, 1.0, 0.2);
    const auto b = jsq_tail_lower(sys);
    for (double x = 0.1; x <= 10.0 + 1e-9; x += 0.1) {
        EXPECT_LE(b.eval(x), exact::mm1_scaled_tail(0.2, x) * (1 + 1e-12)) << x;
    }
}

TEST(Sandwich, SingleServerGrid) {
    const double eps = 3e-4;
    const JsqSystem sys(1, 1.0, eps);
    ASSERT_TRUE(ssc_condition(sys));
    const auto lo = jsq_tail_lower(sys);
    const auto hi = jsq_tail_upper(sys);
    for (int i = 1; i <= 200; ++i) {
        const double x = (1.0 - eps) + (50.0 - (1.0 - eps)) * i / 200.0;
        const double p = exact::mm1_scaled_tail(eps, x);
        EXPECT_LE(lo.eval(x), p * (1 + 1e-12)) << x;
        EXPECT_LE(p, hi.eval(x)) << x;
    }
}

TEST(Sandwich, Mm1DecayRateIsThetaN) {
    const double eps = 3e-4;
    const double x = 1e3;
    // log P(eps q > x) = (floor(x / eps) + 1) log(1 - eps)
    const double rate = -static_cast<double>(lattice_floor(x, eps) + 1) * std::log1p(-eps) / x;
    EXPECT_NEAR(rate, theta_n(eps), 1e-6);
    EXPECT_NEAR(-std::log(exact::mm1_scaled_tail(eps, 5.0)) / 5.0, theta_n(eps), 1e-4);
}

TEST(LimitMgf, ClosedForm) {
    EXPECT_EQ(jsq_limit_mgf(0.0), 1.0);
    EXPECT_EQ(jsq_limit_mgf(0.5), 2.0);
    EXPECT_EQ(jsq_limit_mgf(-1.0), 0.5);
    for (double t = -5.0; t < 0.99; t += 0.01) {
        EXPECT_NEAR(jsq_limit_mgf(t) * (1.0 - t), 1.0, 1e-14);
    }
    EXPECT_THROW(jsq_limit_mgf(1.0), DomainError);
}

TEST(Gamma, RootAtThetaN) {
    for (double eps : {0.01, 0.2, 0.5, 0.9}) {
        const JsqSystem sys(5, 1.3, eps);
        const double t = theta_n(eps);
        EXPECT_NEAR(jsq_gamma(sys, t), 0.0, 1e-13);
        EXPECT_GT(jsq_gamma(sys, t * 0.99), 0.0);
        EXPECT_LT(jsq_gamma(sys, t * 1.01), 0.0);
        EXPECT_NEAR(jsq_gamma(sys, 0.0), 5 * 1.3 * eps, 1e-14);
    }
}

TEST(MgfIdentity, SingleServerNegativeTheta) {
    // M/M/1: E[e^{s q}] = eps / (1 - (1-eps) e^s); beta = mu P(q=0) e^0 = mu eps
    const double eps = 0.3;
    const JsqSystem sys(1, 1.0, eps);
    for (double theta : {-2.0, -0.5, -0.1}) {
        const double s = eps * theta;
        SimEstimate lhs{eps / (1.0 - (1.0 - eps) * std::exp(s)), 0, 0, 0, 0};
        SimEstimate beta{eps, 0, 0, 0, 0};
        EXPECT_LT(jsq_mgf_identity_residual(sys, theta, lhs, beta), 1e-10);
    }
    SimEstimate one{1.0, 0, 0, 0, 0};
    EXPECT_THROW(jsq_mgf_identity_residual(sys, theta_n(eps) + 0.1, one, one), DomainError);
}

TEST(MgfIdentity, ZeroTheta) {
    const JsqSystem sys(3, 2.0, 0.25);
    SimEstimate lhs{1.0, 0, 0, 0, 0};
    SimEstimate beta{3 * 2.0 * 0.25, 0, 0, 0, 0};
    EXPECT_NEAR(jsq_mgf_identity_residual(sys, 0.0, lhs, beta), 0.0, 1e-15);
}
