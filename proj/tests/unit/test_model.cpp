#include "queuetail/errors.hpp"
#include "queuetail/model.hpp"
#include "queuetail/pmf_io.hpp"
#include "queuetail/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

using namespace queuetail;

namespace {

DiffMoments brute_force(const BoundedPmf& a, const BoundedPmf& s) {
    double m1 = 0.0, m3 = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < s.size(); ++j) {
            const double d = static_cast<double>(a.values()[i] - s.values()[j]);
            const double p = a.probs()[i] * s.probs()[j];
            m1 += p * d;
            m3 += p * d * d * d;
        }
    }
    DiffMoments m;
    m.mean_diff = m1;
    m.var_sum = a.variance() + s.variance();
    m.e3 = std::max(0.0, m3);
    m.a_max = std::max(a.max_value(), s.max_value());
    return m;
}

BoundedPmf random_pmf(SplitMix64& rng, int support) {
    std::vector<std::int64_t> values;
    std::vector<double> weights;
    std::int64_t v = 0;
    double total = 0.0;
    for (int i = 0; i < support; ++i) {
        v += 1 + static_cast<std::int64_t>(rng.uniform() * 3);
        values.push_back(v);
        weights.push_back(rng.uniform() + 0.01);
        total += weights.back();
    }
    double acc = 0.0;
    for (int i = 0; i + 1 < support; ++i) {
        weights[i] /= total;
        acc += weights[i];
    }
    weights.back() = 1.0 - acc;
    return BoundedPmf(values, weights);
}

}  // namespace

TEST(BoundedPmf, RejectsInvalidInput) {
    EXPECT_THROW(BoundedPmf({}, {}), ValidationError);
    EXPECT_THROW(BoundedPmf({0, 1}, {1.0}), ValidationError);
    EXPECT_THROW(BoundedPmf({-1, 1}, {0.5, 0.5}), ValidationError);
    EXPECT_THROW(BoundedPmf({1, 1}, {0.5, 0.5}), ValidationError);
    EXPECT_THROW(BoundedPmf({2, 1}, {0.5, 0.5}), ValidationError);
    EXPECT_THROW(BoundedPmf({0, 1}, {1.5, -0.5}), ValidationError);
    EXPECT_THROW(BoundedPmf({0, 1}, {0.5, 0.5 + 1e-9}), ValidationError);
    EXPECT_THROW(BoundedPmf({0}, {std::nan("")}), ValidationError);
    EXPECT_NO_THROW(BoundedPmf({0, 1}, {0.5, 0.5 + 1e-13}));
}

TEST(BoundedPmf, Moments) {
    const auto b = BoundedPmf::bernoulli(0.4);
    EXPECT_DOUBLE_EQ(b.mean(), 0.4);
    EXPECT_NEAR(b.variance(), 0.24, 1e-15);
    EXPECT_EQ(b.max_value(), 1);
    EXPECT_DOUBLE_EQ(b.prob_of(1), 0.4);
    EXPECT_EQ(b.prob_of(7), 0.0);
    EXPECT_EQ(BoundedPmf::point_mass(3).variance(), 0.0);
}

TEST(DiffMoments, BernoulliPair) {
    const auto m = diff_moments(BoundedPmf::bernoulli(0.4), BoundedPmf::bernoulli(0.5));
    EXPECT_NEAR(m.mean_diff, -0.1, 1e-15);
    EXPECT_NEAR(m.var_sum, 0.49, 1e-15);
    EXPECT_EQ(m.e3, 0.0);
    EXPECT_EQ(m.a_max, 1);
}

TEST(DiffMoments, PointMasses) {
    const auto m = diff_moments(BoundedPmf::point_mass(1), BoundedPmf::point_mass(1));
    EXPECT_EQ(m.mean_diff, 0.0);
    EXPECT_EQ(m.var_sum, 0.0);
    EXPECT_EQ(m.e3, 0.0);
}

TEST(DiffMoments, TwoPointAgainstConstant) {
    const auto m = diff_moments(BoundedPmf({0, 3}, {0.5, 0.5}), BoundedPmf::point_mass(2));
    EXPECT_NEAR(m.mean_diff, -0.5, 1e-15);
    EXPECT_NEAR(m.var_sum, 2.25, 1e-15);
    EXPECT_EQ(m.e3, 0.0);
    EXPECT_EQ(m.a_max, 3);
}

TEST(DiffMoments, MatchesEnumeration) {
    SplitMix64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const auto a = random_pmf(rng, 1 + static_cast<int>(rng.uniform() * 64));
        const auto s = random_pmf(rng, 1 + static_cast<int>(rng.uniform() * 64));
        const auto got = diff_moments(a, s);
        const auto want = brute_force(a, s);
        const double scale = std::pow(static_cast<double>(want.a_max), 3);
        EXPECT_NEAR(got.mean_diff, want.mean_diff, 1e-12 * want.a_max);
        EXPECT_NEAR(got.var_sum, want.var_sum, 1e-11 * want.a_max * want.a_max);
        EXPECT_NEAR(got.e3, want.e3, 1e-11 * scale);
        EXPECT_EQ(got.a_max, want.a_max);
        EXPECT_GE(got.var_sum, 0.0);
        EXPECT_GE(got.e3, 0.0);
    }
}

TEST(Systems, Validation) {
    EXPECT_THROW(JsqSystem(0, 1.0, 0.2), ValidationError);
    EXPECT_THROW(JsqSystem(2, 0.0, 0.2), ValidationError);
    EXPECT_THROW(JsqSystem(2, 1.0, 0.0), ValidationError);
    EXPECT_THROW(JsqSystem(2, 1.0, 1.0), ValidationError);
    EXPECT_THROW(MmnSystem(3, 1.0, 1.5), ValidationError);
    EXPECT_THROW(SsqSystem(BoundedPmf::bernoulli(0.5), BoundedPmf::bernoulli(0.5)), ValidationError);

    const JsqSystem j(4, 2.0, 0.25);
    EXPECT_DOUBLE_EQ(j.lambda(), 6.0);
    const SsqSystem s(BoundedPmf::bernoulli(0.4), BoundedPmf::bernoulli(0.5));
    EXPECT_NEAR(s.eps(), 0.2, 1e-15);
    const MmnSystem m(100, 1.0, 0.1);
    EXPECT_NEAR(m.eta(), 1.0 / std::sqrt(90.0), 1e-15);
    EXPECT_NEAR(m.zeta(), 10.0 / std::sqrt(90.0), 1e-15);
}

TEST(HtScaling, EpsOfMonotone) {
    const HtScaling s(2.0, 0.7);
    EXPECT_THROW(s.eps_of(1), ValidationError);
    double prev = 1.0;
    for (std::int64_t n = 3; n < 100000; n = n * 3 / 2 + 1) {
        const double e = s.eps_of(n);
        EXPECT_LT(e, prev);
        EXPECT_GT(e, 0.0);
        prev = e;
    }
    EXPECT_THROW(HtScaling(0.0, 0.5), ValidationError);
    EXPECT_THROW(HtScaling(1.0, -0.5), ValidationError);
}

TEST(Regime, Classification) {
    EXPECT_EQ(classify_regime(0.5), Regime::HalfinWhitt);
    EXPECT_EQ(classify_regime(1.5), Regime::SuperSlowdown);
    EXPECT_EQ(classify_regime(0.3), Regime::SubHalfinWhitt);
    EXPECT_EQ(classify_regime(0.7), Regime::SuperHalfinWhitt);
    EXPECT_EQ(classify_regime(1.0), Regime::NonDegenerateSlowdown);
    EXPECT_EQ(classify_regime(std::nextafter(0.5, 1.0)), Regime::SuperHalfinWhitt);
    EXPECT_THROW(classify_regime(0.0), ValidationError);
    EXPECT_THROW(classify_regime(-1.0), ValidationError);
    EXPECT_EQ(to_string(Regime::HalfinWhitt), "HW");
}

TEST(TailBound, EvalNeverNegativeOrNan) {
    SplitMix64 rng(3);
    for (int i = 0; i < 2000; ++i) {
        TailBound b;
        b.c0 = rng.uniform() * 10;
        b.c1 = rng.uniform() * 1e8;
        b.r1 = rng.uniform() * 4 - 1;
        b.r2 = rng.uniform();
        const double x = rng.uniform() * 1000;
        const double v = b.eval(x);
        EXPECT_FALSE(std::isnan(v));
        EXPECT_GE(v, 0.0);
    }
    TailBound big;
    big.c0 = 1.0;
    big.r1 = -10.0;
    EXPECT_EQ(big.eval(1000.0), std::numeric_limits<double>::infinity());
}

TEST(TailBound, DecreasingPastPeak) {
    TailBound b;
    b.c1 = 3.0;
    b.r1 = 0.8;
    double prev = b.eval(1.0 / b.r1);
    for (double x = 1.0 / b.r1 + 0.1; x < 60.0; x += 0.1) {
        const double v = b.eval(x);
        EXPECT_LT(v, prev);
        prev = v;
    }
}

TEST(TailBound, Window) {
    TailBound b;
    b.x_min = 1.0;
    EXPECT_FALSE(b.in_window(1.0));
    EXPECT_TRUE(b.in_window(1.0 + 1e-12));
    b.x_min_inclusive = true;
    EXPECT_TRUE(b.in_window(1.0));
    b.conditions_met = false;
    EXPECT_FALSE(b.applies_at(2.0));
}

TEST(Lattice, SnapsNearIntegers) {
    EXPECT_EQ(lattice_floor(0.6, 0.2), 3);
    EXPECT_EQ(lattice_ceil(0.6, 0.2), 3);
    EXPECT_EQ(lattice_floor(1.0, 0.1), 10);
    EXPECT_EQ(lattice_floor(0.7, 0.2), 3);
    EXPECT_EQ(lattice_ceil(0.7, 0.2), 4);
    for (int k = 1; k < 500; ++k) {
        EXPECT_EQ(lattice_floor(k * 0.1, 0.1), k);
        EXPECT_EQ(lattice_ceil(k * 0.1, 0.1), k);
    }
}

TEST(PmfIo, RoundTripAndStrictKeys) {
    const auto p = parse_pmf_json(R"({"values":[0,1,2],"probs":[0.2,0.5,0.3]})");
    EXPECT_EQ(p.size(), 3u);
    EXPECT_NEAR(p.mean(), 1.1, 1e-15);
    const auto q = parse_pmf_json(pmf_to_json(p));
    for (std::size_t i = 0; i < p.size(); ++i) {
        EXPECT_EQ(q.values()[i], p.values()[i]);
        EXPECT_EQ(q.probs()[i], p.probs()[i]);
    }
    EXPECT_THROW(parse_pmf_json(R"({"values":[0,1],"probs":[0.5,0.5],"x":1})"), ValidationError);
    EXPECT_THROW(parse_pmf_json(R"({"values":[0,1]})"), ValidationError);
    EXPECT_THROW(parse_pmf_json(R"({"values":[0,1.5],"probs":[0.5,0.5]})"), ValidationError);
    EXPECT_THROW(parse_pmf_json(R"({"values":[0,1],"probs":[0.5,0.6]})"), ValidationError);
    EXPECT_THROW(parse_pmf_json("[1,2]"), ValidationError);
    EXPECT_THROW(parse_pmf_json("{"), ValidationError);
    EXPECT_THROW(load_pmf_file("/nonexistent/pmf.json"), ValidationError);
}

TEST(Rng, KnownSequence) {
    // reference outputs of SplitMix64 seeded with 0
    SplitMix64 r(0);
    EXPECT_EQ(r.next(), 0xE220A8397B1DCDAFULL);
    EXPECT_EQ(r.next(), 0x6E789E6AA1B965F4ULL);
    EXPECT_EQ(r.next(), 0x06C45D188009454FULL);
    EXPECT_NE(replication_seed(42, 0), replication_seed(42, 1));
    EXPECT_NE(replication_seed(42, 0), replication_seed(43, 0));
    SplitMix64 u(5);
    for (int i = 0; i < 10000; ++i) {
        const double x = u.uniform();
        ASSERT_GE(x, 0.0);
        ASSERT_LT(x, 1.0);
    }
}
