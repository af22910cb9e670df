#include "lorentz/fixtures.hpp"
#include "lorentz/interp.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

using namespace lorentz;

namespace {

const double inf = std::numeric_limits<double>::infinity();

LorentzParams lp(double p, double u) { return {Exponent(p), Exponent(u)}; }

InterpPair l1_linf(std::size_t n) { return {lp(1, 1), lp(inf, inf), n}; }

Vec random_vector(std::mt19937_64& eng, std::size_t n)
{
    std::normal_distribution<double> g;
    Vec                              x(n);
    for (double& v : x) v = g(eng);
    if (uniform01(eng) < 0.3) {
        for (std::size_t i = 0; i < n; ++i) x[i] *= std::pow(double(i + 1), -0.5 - uniform01(eng));
    }
    return x;
}

// Splittings x_0 = |x| * (a/g, b/g, c/g) over a grid of fractions, all signs absorbed.
double brute_force_k(const Vec& x, double t, const InterpPair& pair, int g)
{
    double best = inf;
    Vec    x0(x.size()), x1(x.size());
    const auto n = x.size();
    std::vector<int> idx(n, 0);
    while (true) {
        for (std::size_t i = 0; i < n; ++i) {
            x0[i] = std::fabs(x[i]) * idx[i] / g;
            x1[i] = std::fabs(x[i]) - x0[i];
        }
        best = std::min(best, lorentz_norm(x0, pair.space0) + t * lorentz_norm(x1, pair.space1));
        std::size_t i = 0;
        while (i < n && ++idx[i] > g) idx[i++] = 0;
        if (i == n) break;
    }
    return best;
}

} // namespace

TEST(KFunctionalL1Linf, Examples)
{
    const Vec x{1, 1};
    for (double t : {2.0, 3.0, 100.0}) EXPECT_EQ(k_functional_l1_linf(x, t), 2.0);
    EXPECT_EQ(k_functional_l1_linf(x, 1.0), 1.0);
    EXPECT_EQ(k_functional_l1_linf(x, 1.5), 1.5);
    EXPECT_NEAR(k_functional_l1_linf(Vec{-3, 1, 2}, 2.25), 5.25, 1e-15);
    EXPECT_NEAR(k_functional_l1_linf(Vec{-3, 1, 2}, 0.5), 1.5, 1e-15);
    EXPECT_THROW(k_functional_l1_linf(x, 0.0), std::invalid_argument);
}

TEST(KFunctionalL1Linf, MatchesBruteForceOverSplittings)
{
    EXPECT_NEAR(brute_force_k({1, 1}, 1.5, l1_linf(2), 400), 1.5, 1e-12);
    auto eng = make_engine(41, 0);
    for (int r = 0; r < 20; ++r) {
        const Vec x = random_vector(eng, 3);
        for (double t : {0.3, 1.0, 1.7, 2.5, 4.0}) {
            const double bf = brute_force_k(x, t, l1_linf(3), 60);
            const double cf = k_functional_l1_linf(x, t);
            EXPECT_LE(cf, bf + 1e-12);
            EXPECT_GE(cf, bf - 0.05 * std::fabs(x[0]) - 0.05 * rearrange(x)[0] * t) << t;
        }
    }
}

TEST(KFunctionalNumeric, MatchesClosedFormOnL1Linf)
{
    auto eng = make_engine(42, 0);
    for (std::size_t n : {1, 2, 5, 17, 32}) {
        for (int r = 0; r < 5; ++r) {
            const Vec x = random_vector(eng, n);
            for (double t : {0.01, 0.5, 1.0, 2.3, 7.9, 31.5, 100.0}) {
                const KResult k = k_functional_numeric(x, t, l1_linf(n));
                EXPECT_FALSE(k.heuristic);
                EXPECT_NEAR(k.value, k_functional_l1_linf(x, t), 1e-6) << n << " " << t;
            }
        }
    }
}

TEST(KFunctionalNumeric, BruteForceOnOtherPairs)
{
    auto eng = make_engine(43, 0);
    for (const InterpPair& pair : {InterpPair{lp(2, 2), lp(inf, inf), 3}, InterpPair{lp(2, 1), lp(1, 1), 3}}) {
        for (int r = 0; r < 5; ++r) {
            const Vec x = random_vector(eng, 3);
            for (double t : {0.2, 1.0, 3.0}) {
                const double v = k_functional_numeric(x, t, pair).value;
                EXPECT_LE(v, brute_force_k(x, t, pair, 40) * (1 + 1e-12));
            }
        }
    }
}

TEST(KFunctionalNumeric, OneSidedBoundsAndShape)
{
    auto eng = make_engine(44, 0);
    for (const InterpPair& base : {InterpPair{lp(2, 2), lp(inf, inf), 1}, InterpPair{lp(2, 1), lp(1, 1), 1},
                                   InterpPair{lp(4, 2), lp(inf, 2), 1}}) {
        for (int r = 0; r < 6; ++r) {
            InterpPair pair = base;
            pair.n          = 2 + uniform_below(eng, 20);
            const Vec    x  = random_vector(eng, pair.n);
            const double n0 = lorentz_norm(x, pair.space0), n1 = lorentz_norm(x, pair.space1);
            std::vector<double> ts, ks;
            for (double t = 1e-3; t < 1e3; t *= 1.5) {
                ts.push_back(t);
                ks.push_back(k_functional_numeric(x, t, pair).value);
                EXPECT_LE(ks.back(), std::min(n0, t * n1) * (1 + 1e-12));
            }
            const double tol = 1e-9 * n0;
            for (std::size_t i = 1; i < ts.size(); ++i) {
                EXPECT_GE(ks[i], ks[i - 1] - tol);
                EXPECT_LE(ks[i] / ts[i], ks[i - 1] / ts[i - 1] + tol / ts[i - 1]);
            }
            for (std::size_t i = 1; i + 1 < ts.size(); ++i) {
                const double w = (ts[i] - ts[i - 1]) / (ts[i + 1] - ts[i - 1]);
                EXPECT_GE(ks[i], (1 - w) * ks[i - 1] + w * ks[i + 1] - tol);
            }
        }
    }
}

TEST(KFunctionalNumeric, NonConvexPairFlagged)
{
    const Vec x{1.0, 0.5, 0.2};
    EXPECT_TRUE(k_functional_numeric(x, 1.0, InterpPair{lp(0.5, 0.5), lp(inf, inf), 3}).heuristic);
    EXPECT_TRUE(k_functional_numeric(x, 1.0, InterpPair{lp(2, 0.5), lp(inf, inf), 3}).heuristic);
    EXPECT_FALSE(k_functional_numeric(x, 1.0, InterpPair{lp(2, 1), lp(inf, inf), 3}).heuristic);
    EXPECT_LE(k_functional_numeric(x, 1e-4, InterpPair{lp(0.5, 0.5), lp(inf, inf), 3}).value, 1e-4);
}

TEST(ThetaUNorm, ZeroAndArguments)
{
    EXPECT_EQ(theta_u_norm(Vec(4, 0.0), 0.5, Exponent(2), l1_linf(4)), 0.0);
    EXPECT_THROW(theta_u_norm(Vec{1, 2}, 1.0, Exponent(2), l1_linf(2)), std::invalid_argument);
    EXPECT_THROW(theta_u_norm(Vec{1, 2}, 0.5, Exponent(2), l1_linf(3)), std::invalid_argument);
}

TEST(ThetaUNorm, Homogeneous)
{
    auto eng = make_engine(45, 0);
    for (int r = 0; r < 20; ++r) {
        const std::size_t n = 1 + uniform_below(eng, 40);
        const Vec         x = random_vector(eng, n);
        for (double c : {-3.0, 0.01, 250.0}) {
            Vec y(x);
            for (double& v : y) v *= c;
            for (const Exponent& u : {Exponent(1), Exponent(2), Exponent(inf)}) {
                const double a = theta_u_norm(x, 0.5, u, l1_linf(n));
                EXPECT_NEAR(theta_u_norm(y, 0.5, u, l1_linf(n)), std::fabs(c) * a, 1e-12 * std::fabs(c) * a);
            }
        }
    }
}

TEST(ThetaUNorm, TriangleOnSamples)
{
    auto   eng   = make_engine(46, 0);
    double worst = 0.0;
    for (int r = 0; r < 200; ++r) {
        const std::size_t n = 2 + uniform_below(eng, 30);
        const Vec         x = random_vector(eng, n), y = random_vector(eng, n);
        Vec               s(x);
        for (std::size_t i = 0; i < n; ++i) s[i] += y[i];
        for (const Exponent& u : {Exponent(1), Exponent(3)}) {
            const double lhs = theta_u_norm(s, 0.4, u, l1_linf(n));
            const double rhs = theta_u_norm(x, 0.4, u, l1_linf(n)) + theta_u_norm(y, 0.4, u, l1_linf(n));
            worst            = std::max(worst, lhs / rhs);
        }
    }
    EXPECT_LE(worst, 1.0 + 1e-9);
}

TEST(ThetaUNorm, ReiterationBands)
{
    auto eng = make_engine(47, 0);
    for (const auto& b : fixtures::reiteration_bands) {
        const double        theta = 1.0 - 1.0 / b.p;
        const LorentzParams y     = lp(b.p, b.u);
        for (int r = 0; r < 150; ++r) {
            const std::size_t n     = 1 + uniform_below(eng, 64);
            const Vec         x     = random_vector(eng, n);
            const double      ratio = theta_u_norm(x, theta, Exponent(b.u), l1_linf(n)) / lorentz_norm(x, y);
            EXPECT_GE(ratio, b.lo) << y.to_string() << " n=" << n;
            EXPECT_LE(ratio, b.hi) << y.to_string() << " n=" << n;
        }
    }
}

TEST(InterpolationCheck, DegeneratePairPasses)
{
    const InterpolationCase c{lp(2, 2), lp(2, 2), lp(2, 2), lp(2, 2), 0.5, 2};
    const auto              r = interpolation_entropy_check(c, 2, 2);
    EXPECT_EQ(r.verdict, Verdict::pass);
    EXPECT_LE(r.c_lower, r.c_upper);
    EXPECT_EQ(r.threshold, 16.0);
}

TEST(InterpolationCheck, L1LinfPairNotFailing)
{
    const InterpolationCase c{lp(1, 1), lp(1, 1), lp(inf, inf), lp(2, 2), 0.5, 2};
    const auto              r = interpolation_entropy_check(c, 2, 2);
    EXPECT_NE(r.verdict, Verdict::fail);
    EXPECT_GT(r.c_upper, 0.0);
    EXPECT_STREQ(to_string(r.verdict), r.verdict == Verdict::pass ? "pass" : "inconclusive");
}

TEST(InterpolationCheck, VerdictLogic)
{
    const InterpolationCase c{lp(1, 1), lp(1, 1), lp(inf, inf), lp(2, 2), 0.5, 2};
    EXPECT_EQ(interpolation_entropy_check(c, 1, 1, 1e-6).verdict, Verdict::fail);
    EXPECT_THROW(interpolation_entropy_check({lp(1, 1), lp(1, 1), lp(1, 1), lp(1, 1), 0.5, 4}, 1, 1), std::invalid_argument);
}
