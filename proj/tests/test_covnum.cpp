#include "lorentz/covnum.hpp"
#include "lorentz/entropy.hpp"
#include "lorentz/volume.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <set>

using namespace lorentz;

namespace {

const double inf = std::numeric_limits<double>::infinity();

LorentzParams lp(double p, double u) { return {Exponent(p), Exponent(u)}; }

EmbeddingSpec spec(double p, double u, double q, double v, std::size_t n) { return {lp(p, u), lp(q, v), n}; }

std::size_t max_pairwise_intersection(const SetFamily& f)
{
    std::size_t worst = 0;
    for (std::size_t i = 0; i < f.sets.size(); ++i) {
        const std::set<std::uint32_t> a(f.sets[i].begin(), f.sets[i].end());
        for (std::size_t j = i + 1; j < f.sets.size(); ++j) {
            std::size_t c = 0;
            for (auto x : f.sets[j]) c += a.count(x);
            worst = std::max(worst, c);
        }
    }
    return worst;
}

double pairwise_min(const std::vector<Vec>& pts, const LorentzParams& y)
{
    double best = inf;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            Vec d(pts[i]);
            for (std::size_t c = 0; c < d.size(); ++c) d[c] -= pts[j][c];
            best = std::min(best, lorentz_norm(d, y));
        }
    }
    return best;
}

// Points of B_X in the plane: a fine interior grid plus the boundary along rays.
std::vector<Vec> planar_ball_points(const LorentzParams& x)
{
    std::vector<Vec> pts;
    constexpr int    g = 40;
    for (int a = -g; a <= g; ++a) {
        for (int b = -g; b <= g; ++b) {
            Vec v{double(a) / g, double(b) / g};
            if (lorentz_norm(v, x) <= 1.0) pts.push_back(v);
        }
    }
    for (int t = 0; t < 720; ++t) {
        const double ang = 2.0 * M_PI * t / 720.0;
        Vec          v{std::cos(ang), std::sin(ang)};
        const double r = lorentz_norm(v, x);
        pts.push_back({v[0] / r, v[1] / r});
    }
    return pts;
}

// Covering radius of B_X by Y-balls centred at the given points, over the sample.
double covering_radius(const std::vector<Vec>& sample, const std::vector<Vec>& centres, const LorentzParams& y)
{
    double worst = 0.0;
    for (const Vec& p : sample) {
        double best = inf;
        for (const Vec& c : centres) best = std::min(best, lorentz_norm(Vec{p[0] - c[0], p[1] - c[1]}, y));
        worst = std::max(worst, best);
    }
    return worst;
}

} // namespace

TEST(CombinatorialFamily, SixtyFourByFour)
{
    const SetFamily f = combinatorial_family(64, 4, 1);
    EXPECT_GE(f.sets.size(), 16u);
    EXPECT_LE(max_pairwise_intersection(f), 1u);
    const auto chk = verify_set_family(f);
    EXPECT_TRUE(chk.size_ok && chk.cardinality_ok && chk.intersection_ok);
}

TEST(CombinatorialFamily, Singletons)
{
    const SetFamily f = combinatorial_family(9, 1, 0, 9);
    ASSERT_EQ(f.sets.size(), 9u);
    EXPECT_EQ(max_pairwise_intersection(f), 0u);
    EXPECT_EQ(combinatorial_required(64, 1), 4u);
    EXPECT_THROW(combinatorial_family(9, 1, 0, 10), std::runtime_error);
}

TEST(CombinatorialFamily, ClausesHoldAcrossSizes)
{
    for (std::size_t n : {8, 20, 64, 200, 1000}) {
        for (std::size_t s = 1; 4 * s <= n && s <= 12; ++s) {
            if (combinatorial_required(n, s) > 100'000) continue;
            const SetFamily f = combinatorial_family(n, s, 7);
            EXPECT_GE(f.sets.size(), combinatorial_required(n, s));
            const double bound = std::ceil(std::pow(double(n) / (4.0 * s), s / 2.0));
            EXPECT_GE(double(f.sets.size()), bound);
            for (const auto& t : f.sets) {
                ASSERT_EQ(t.size(), s);
                EXPECT_EQ(std::set<std::uint32_t>(t.begin(), t.end()).size(), s);
                for (auto i : t) EXPECT_LT(i, n);
            }
            if (f.sets.size() <= 3000) {
                EXPECT_LT(2 * max_pairwise_intersection(f), s) << n << " " << s;
            }
            EXPECT_TRUE(verify_set_family(f).intersection_ok) << f.construction;
        }
    }
}

TEST(CombinatorialFamily, TargetSizeHonoured)
{
    const SetFamily f = combinatorial_family(200, 5, 3, 400);
    EXPECT_EQ(f.sets.size(), 400u);
    EXPECT_EQ(combinatorial_family(200, 5, 3, 300).sets.size(), 317u);
    EXPECT_LT(2 * max_pairwise_intersection(f), 5u);
}

TEST(VerifySetFamily, DetectsViolations)
{
    SetFamily bad{{{0, 1, 2, 3}, {0, 1, 4, 5}}, 4, 8, "manual"};
    auto      chk = verify_set_family(bad);
    EXPECT_FALSE(chk.intersection_ok);
    EXPECT_EQ(chk.max_intersection, 2u);
    bad.sets[1] = {0, 1, 8, 9};
    EXPECT_FALSE(verify_set_family(bad).cardinality_ok);
    bad.sets[1] = {0, 4, 4, 5};
    EXPECT_FALSE(verify_set_family(bad).cardinality_ok);
}

TEST(IndicatorFamily, UnitNormsAndMeasuredSeparation)
{
    for (const auto& sp : {spec(1, 1, inf, 1, 200), spec(inf, 1, inf, 2, 300), spec(2, 1, 2, 2, 150)}) {
        for (std::size_t k : {6, 8, 12}) {
            const PointFamily f = indicator_family(sp, k, 1);
            for (const Vec& x : f.points) EXPECT_NEAR(lorentz_norm(x, sp.source), 1.0, 1e-12);
            EXPECT_EQ(f.source_norm_bound, 1.0);
            if (f.points.size() <= 2000) {
                EXPECT_NEAR(pairwise_min(f.points, sp.target), f.separation, 1e-12);
            }
            // any two sets differ on at least s/2 + 1 points each side
            const std::size_t s = static_cast<std::size_t>(std::ceil(ell(k, sp.n)));
            const double      c = 1.0 / fundamental_phi(sp.source, s).exact;
            EXPECT_GE(f.separation, c * fundamental_phi(sp.target, s).exact * (1 - 1e-12));
        }
    }
    EXPECT_THROW(indicator_family(spec(1, 1, inf, 1, 200), 3), std::invalid_argument);
}

TEST(IndicatorFamily, LargerThanTwoToKMinusOneForLongBlocks)
{
    std::size_t covered = 0;
    for (std::size_t n : {256, 1024, 4096}) {
        for (auto k = static_cast<std::size_t>(std::ceil(std::log1p(double(n)))); k <= n; k += 1 + k / 2) {
            const std::size_t s = static_cast<std::size_t>(std::ceil(ell(k, n)));
            if (s > n || 4 * s > n) continue;
            if (double(k) > 0.5 * s * std::log(double(n) / (4.0 * s)) / std::log(2.0)) continue;
            if (k > 14) continue;
            ++covered;
            EXPECT_GT(indicator_family(spec(1, 1, inf, 1, n), k).points.size(), std::size_t{1} << (k - 1)) << n << " " << k;
        }
    }
    EXPECT_GT(covered, 0u);
}

TEST(DyadicFamily, LevelsNormsAndSeparation)
{
    const EmbeddingSpec sp = spec(2, 2, 2, 1, 1000);
    const auto          d  = dyadic_family(sp, 2, 3);
    const auto          d5 = dyadic_family(sp, 5, 3);
    ASSERT_TRUE(d5.has_value());
    EXPECT_EQ(d5->mu, 2u);
    EXPECT_EQ(d5->family.points.size(), 17u);
    ASSERT_TRUE(d.has_value());
    EXPECT_EQ(d->nu, 3u); // 12 * 4^3 <= 1000 < 12 * 4^4
    EXPECT_EQ(d->mu, 1u); // k = 4^1 / 2
    EXPECT_EQ(d->family.points.size(), 3u);
    double top = 0.0;
    for (const Vec& x : d->family.points) top = std::max(top, lorentz_norm(x, sp.source));
    EXPECT_NEAR(top, 1.0, 1e-12);
    EXPECT_NEAR(pairwise_min(d->family.points, sp.target), d->family.separation, 1e-12);
    EXPECT_GT(d->family.separation, 0.0);

    EXPECT_FALSE(dyadic_family(spec(2, 2, 2, 1, 40), 2).has_value());
    EXPECT_THROW(dyadic_family(spec(2, 2, 1, 1, 1000), 2), std::invalid_argument);
}

TEST(DyadicFamily, BlockNormClosedFormWithinBand)
{
    // ||sum_l a_l 1_{E_l}||_{p,u} against (sum_l (a_l |E_l|^{1/p})^u)^{1/u} for disjoint dyadic blocks
    auto   eng = make_engine(31, 0);
    double lo = inf, hi = 0.0;
    for (int t = 0; t < 200; ++t) {
        const double        p = 2.0, u = t % 2 ? 1.0 : 4.0;
        const LorentzParams x = lp(p, u);
        Vec                 v;
        double              closed = 0.0;
        for (int l = 0; l < 6; ++l) {
            const double a    = std::pow(4.0, -l / p) * (0.5 + uniform01(eng));
            const auto   size = std::size_t{1} << (2 * l);
            v.insert(v.end(), size, a);
            closed += std::pow(a * std::pow(double(size), 1.0 / p), u);
        }
        const double r = lorentz_norm(v, x) / std::pow(closed, 1.0 / u);
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    EXPECT_GT(lo, 0.25);
    EXPECT_LT(hi, 4.0);
}

TEST(CoveringUpper, CubeRadiusShrinksWithK)
{
    const EmbeddingSpec sp = spec(inf, inf, inf, inf, 2);
    double              prev = inf;
    for (std::size_t k = 1; k <= 14; ++k) {
        const auto c = covering_upper(sp, k);
        ASSERT_TRUE(c.has_value());
        EXPECT_LE(c->radius, prev);
        EXPECT_LE(c->count, std::size_t{1} << (c->k_used - 1));
        EXPECT_NEAR(c->radius, c->delta / 2.0, 1e-12);
        prev = c->radius;
    }
    EXPECT_LT(prev, 0.02);
    EXPECT_GE(covering_upper(sp, 1)->radius, 1.0);
}

TEST(CoveringUpper, MonotoneAndGuarded)
{
    for (const auto& sp : {spec(1, 1, inf, inf, 3), spec(2, 1, 2, 2, 3), spec(inf, 2, inf, 1, 2)}) {
        double prev = inf;
        for (std::size_t k = 1; k <= 10; ++k) {
            const double r = covering_upper(sp, k)->radius;
            EXPECT_LE(r, prev) << sp.to_string() << " k=" << k;
            prev = r;
        }
    }
    CoveringOptions tight;
    tight.max_points = 100;
    EXPECT_FALSE(covering_upper(spec(2, 2, 2, 2, 4), 12, tight).has_value());
}

TEST(PackingLower, AntipodalPair)
{
    const PackingResult r = packing_lower(spec(1, 1, inf, inf, 2), 1);
    EXPECT_EQ(r.c_target, 1.0);
    EXPECT_NEAR(r.separation, 2.0, 1e-9);
    EXPECT_NEAR(r.bound, 1.0, 1e-9);
    EXPECT_EQ(r.points.size(), 2u);
}

TEST(PackingLower, QuasiNormTargetInflatesConstant)
{
    const EmbeddingSpec sp = spec(1, 1, 0.5, 0.5, 3);
    const PackingResult r  = packing_lower(sp, 3);
    const double        c  = quasi_constant_estimate(sp.target, 3, 20000, 0).c_quasi;
    EXPECT_NEAR(r.c_target, 1.1 * c, 1e-12);
    EXPECT_NEAR(r.bound, r.separation / (2.0 * r.c_target), 1e-15);
}

TEST(PackingLower, PointsCertified)
{
    const EmbeddingSpec sp = spec(2, 1, 2, 2, 3);
    for (std::size_t k : {2, 4, 6}) {
        const PackingResult r = packing_lower(sp, k);
        ASSERT_EQ(r.points.size(), (std::size_t{1} << (k - 1)) + 1);
        for (const Vec& x : r.points) EXPECT_LE(lorentz_norm(x, sp.source), 1.0);
        EXPECT_NEAR(pairwise_min(r.points, sp.target), r.separation, 1e-12);
    }
    EXPECT_THROW(packing_lower(sp, 0), std::invalid_argument);
}

TEST(Bracket, PackingBelowCoveringSmallN)
{
    for (const auto& proto : {spec(1, 1, inf, inf, 1), spec(2, 1, 2, 2, 1), spec(inf, 2, 1, 1, 1), spec(2, 2, 2, 2, 1)}) {
        for (std::size_t n = 2; n <= 4; ++n) {
            EmbeddingSpec sp = proto;
            sp.n             = n;
            for (std::size_t k = 1; k <= 2 * n; ++k) {
                const PackingResult p = packing_lower(sp, k);
                const auto          c = covering_upper(sp, k);
                ASSERT_TRUE(c.has_value());
                EXPECT_LE(p.bound, c->radius) << sp.to_string() << " k=" << k;
            }
        }
    }
}

TEST(Bracket, PackingAtLeastHalfVolumeBound)
{
    for (double p : {1.0, 2.0, inf}) {
        for (std::size_t n = 2; n <= 4; ++n) {
            const EmbeddingSpec sp = spec(p, p, p, p, n);
            for (std::size_t k = 1; k <= 2 * n; ++k) {
                EXPECT_GE(packing_lower(sp, k).bound, 0.5 * entropy_vol_lower(k, n, 1.0)) << sp.to_string() << " k=" << k;
            }
        }
    }
}

// Exhaustive search over centre configurations in the plane: one centre, and
// antipodal pairs on a fine grid. Both give covering radii that upper-bound
// e_1 and e_2 up to the sampling of the ball.
TEST(Bracket, PlanarBruteForceBetweenBounds)
{
    for (const auto& sp : {spec(1, 1, inf, inf, 2), spec(2, 2, 2, 2, 2), spec(2, 1, 2, 2, 2)}) {
        const auto sample = planar_ball_points(sp.source);
        const double e1   = covering_radius(sample, {{0.0, 0.0}}, sp.target);
        double       e2   = inf;
        constexpr int g   = 30;
        for (int a = 0; a <= g; ++a) {
            for (int b = -g; b <= g; ++b) {
                const Vec c{double(a) / g, double(b) / g};
                e2 = std::min(e2, covering_radius(sample, {c, {-c[0], -c[1]}}, sp.target));
            }
        }
        EXPECT_NEAR(e1, embedding_norm_numeric(sp).value, 0.01 * e1) << sp.to_string();
        const double est[] = {e1, e2};
        for (std::size_t k = 1; k <= 2; ++k) {
            EXPECT_LE(packing_lower(sp, k).bound, est[k - 1] * 1.01) << sp.to_string() << " k=" << k;
            EXPECT_LE(est[k - 1], covering_upper(sp, k)->radius * 1.01) << sp.to_string() << " k=" << k;
        }
    }
}
