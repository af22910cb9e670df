#ifndef LORENTZ_INTERP_HPP
#define LORENTZ_INTERP_HPP

#include "covnum.hpp"
#include "seqcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace lorentz {

/// A compatible couple (X_0, X_1) of Lorentz spaces on R^n.
struct InterpPair
{
    LorentzParams space0;
    LorentzParams space1;
    std::size_t   n = 1;

    /// True for the couple (l_1, l_inf), which has a closed-form K-functional.
    bool is_l1_linf() const
    {
        return space0.p == Exponent(1.0) && space0.u == Exponent(1.0) && space1.p.is_infinite() &&
               space1.u.is_infinite();
    }
};

/// K(t, x; l_1, l_inf) = sum_{i <= floor t} x*_i + (t - floor t) x*_{floor t + 1}, and ||x||_1 for t >= n.
inline double k_functional_l1_linf(std::span<const double> x, double t)
{
    if (!(t > 0.0)) throw std::invalid_argument("k_functional_l1_linf: t must be > 0");
    const Vec         r = rearrange(x);
    const std::size_t n = r.size();
    CompensatedSum    acc;
    if (t >= static_cast<double>(n)) {
        for (double v : r) acc.add(v);
        return acc.value();
    }
    const auto whole = static_cast<std::size_t>(std::floor(t));
    for (std::size_t i = 0; i < whole; ++i) acc.add(r[i]);
    acc.add((t - static_cast<double>(whole)) * r[whole]);
    return acc.value();
}

struct KResult
{
    double value     = 0.0;
    bool   heuristic = false; ///< an exponent below 1 makes the problem non-convex
    bool   converged = true;
};

namespace detail {

class KObjective
{
public:
    KObjective(const InterpPair& pair, double t) : k0_(pair.space0, pair.n), k1_(pair.space1, pair.n), t_(t), buf_(pair.n)
    {
    }

    // x0 is split off from a (both non-negative, x0 <= a)
    double operator()(const Vec& a, const Vec& x0)
    {
        const double n0 = norm(k0_, x0);
        for (std::size_t i = 0; i < a.size(); ++i) buf_[i] = a[i] - x0[i];
        return n0 + t_ * sorted_norm(k1_);
    }

private:
    double norm(const NormKernel& k, const Vec& v)
    {
        std::copy(v.begin(), v.end(), buf_.begin());
        return sorted_norm(k);
    }

    double sorted_norm(const NormKernel& k)
    {
        for (double& v : buf_) v = std::max(v, 0.0);
        std::sort(buf_.begin(), buf_.end(), std::greater<>());
        return k(buf_);
    }

    NormKernel k0_, k1_;
    double     t_;
    Vec        buf_;
};

} // namespace detail

///
/// K(t, x) = inf ||x_0||_{X_0} + t ||x - x_0||_{X_1} over splittings with
/// 0 <= x_0,i <= |x_i| (same signs as x; no loss for lattice norms).
///
/// The search starts from the best of the one-sided splittings, the
/// truncations x_0 = (|x| - lambda)_+ at every breakpoint lambda in {|x_i|}
/// and the head splittings x_0 = |x| on the j largest entries; a coordinate
/// pattern search with shrinking steps then refines it. The result is the
/// value of an explicit splitting, hence an upper bound for K. With an
/// exponent below 1 the problem is not convex and the result is flagged.
///
inline KResult k_functional_numeric(std::span<const double> x, double t, const InterpPair& pair,
                                    std::size_t max_sweeps = 2000)
{
    if (!(t > 0.0)) throw std::invalid_argument("k_functional_numeric: t must be > 0");
    if (x.size() != pair.n) throw std::invalid_argument("k_functional_numeric: length does not match the pair");
    const Vec         a = rearrange(x);
    const std::size_t n = a.size();
    KResult           out;
    for (const auto* lp : {&pair.space0, &pair.space1}) {
        const double pp = lp->p.is_finite() ? lp->p.value() : std::numeric_limits<double>::infinity();
        const double uu = lp->u.is_finite() ? lp->u.value() : std::numeric_limits<double>::infinity();
        if (pp < 1.0 || uu < 1.0) out.heuristic = true;
    }
    if (a[0] == 0.0) return out;

    detail::KObjective f(pair, t);
    Vec                best(n, 0.0), trial(n);
    double             fbest = f(a, best);
    auto               offer = [&](const Vec& x0) {
        const double v = f(a, x0);
        if (v < fbest) {
            fbest = v;
            best  = x0;
        }
    };
    offer(a);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) trial[i] = std::max(a[i] - a[j], 0.0);
        offer(trial);
        for (std::size_t i = 0; i < n; ++i) trial[i] = i <= j ? a[i] : 0.0;
        offer(trial);
    }

    double      h     = 0.25 * a[0];
    const double h_min = 1e-13 * a[0];
    std::size_t sweeps = 0;
    while (h > h_min && sweeps < max_sweeps) {
        ++sweeps;
        bool moved = false;
        for (std::size_t i = 0; i < n; ++i) {
            for (double dir : {1.0, -1.0}) {
                const double old = best[i];
                const double nv  = std::clamp(old + dir * h, 0.0, a[i]);
                if (nv == old) continue;
                best[i]        = nv;
                const double v = f(a, best);
                if (v < fbest) {
                    fbest = v;
                    moved = true;
                    break;
                }
                best[i] = old;
            }
        }
        if (!moved) h *= 0.5;
    }
    out.value     = fbest;
    out.converged = h <= h_min;
    return out;
}

/// K(t, x) through the closed form for (l_1, l_inf) and the numeric search otherwise.
inline KResult k_functional(std::span<const double> x, double t, const InterpPair& pair)
{
    if (pair.is_l1_linf()) return KResult{k_functional_l1_linf(x, t), false, true};
    return k_functional_numeric(x, t, pair);
}

struct LogGrid
{
    double      t_min  = 0.0; ///< 0 selects 1/(4n)
    double      t_max  = 0.0; ///< 0 selects 4n
    std::size_t points        = 512; ///< on the initial window; widening keeps the spacing
    std::size_t max_widenings = 32;
};

///
/// ||x||_{theta,u} = ( int_0^inf (t^{-theta} K(t,x))^u dt/t )^{1/u}, by the
/// trapezoid rule in log t; u = inf takes the maximum over the grid.
///
/// The default window [1/(4n), 4n] does not depend on x, so the result is
/// exactly homogeneous. The mass outside the window is estimated from the
/// asymptotics K(t) ~ t K(t_min)/t_min below and K(t) ~ K(t_max) above and
/// added to the quadrature; while it exceeds 1% of the total the window is
/// widened by 4 on each side at constant spacing, and after max_widenings
/// attempts the computation fails.
///
inline double theta_u_norm(std::span<const double> x, double theta, const Exponent& u, const InterpPair& pair,
                           const LogGrid& grid = {})
{
    if (!(theta > 0.0 && theta < 1.0)) throw std::invalid_argument("theta_u_norm: need 0 < theta < 1");
    if (x.size() != pair.n) throw std::invalid_argument("theta_u_norm: length does not match the pair");
    if (grid.points < 2) throw std::invalid_argument("theta_u_norm: grid needs >= 2 points");
    require_sequence(x);
    if (std::all_of(x.begin(), x.end(), [](double v) { return v == 0.0; })) return 0.0;
    const double nd    = static_cast<double>(pair.n);
    double       t_min = grid.t_min > 0.0 ? grid.t_min : 1.0 / (4.0 * nd);
    const double t_max = grid.t_max > 0.0 ? grid.t_max : 4.0 * nd;

    const double ds = (std::log(t_max) - std::log(t_min)) / static_cast<double>(grid.points - 1);
    for (std::size_t attempt = 0; attempt <= grid.max_widenings; ++attempt) {
        const double      lo     = std::log(t_min);
        const std::size_t points = grid.points + 2 * attempt * static_cast<std::size_t>(std::ceil(std::log(4.0) / ds));
        Vec               g(points);
        for (std::size_t i = 0; i < points; ++i) {
            const double s = lo + ds * static_cast<double>(i);
            const double t = std::exp(s);
            g[i]           = std::exp(-theta * s) * k_functional(x, t, pair).value;
        }
        if (u.is_infinite()) {
            const double m = *std::max_element(g.begin(), g.end());
            // the maximum must sit strictly inside the window
            if (g.front() < m && g.back() < m) return m;
        } else {
            const double   uu = u.value();
            CompensatedSum acc;
            for (std::size_t i = 0; i < points; ++i) {
                const double w = (i == 0 || i + 1 == points) ? 0.5 : 1.0;
                acc.add(w * std::pow(g[i], uu));
            }
            const double body = acc.value() * ds;
            // closed-form tails of the two asymptotic regimes
            const double tail = std::pow(g.front(), uu) / ((1.0 - theta) * uu) + std::pow(g.back(), uu) / (theta * uu);
            if (tail <= 0.01 * (body + tail)) return std::pow(body + tail, 1.0 / uu);
        }
        t_min /= 4.0;
    }
    throw std::runtime_error("theta_u_norm: boundary mass above 1% after widening; use a wider grid");
}

enum class Verdict { pass, fail, inconclusive };

inline const char* to_string(Verdict v)
{
    switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

/// id: X -> Y_0, X -> Y_1 and X -> Y_theta, where Y_theta stands for the
/// interpolation space (Y_0, Y_1)_{theta, .}.
struct InterpolationCase
{
    LorentzParams source;
    LorentzParams target0;
    LorentzParams target1;
    LorentzParams target_theta;
    double        theta = 0.5;
    std::size_t   n     = 2;
};

struct InterpolationReport
{
    double  c_lower   = 0.0; ///< lower(e_{k0+k1-1}(X->Y_theta)) / (upper_0^{1-theta} upper_1^theta)
    double  c_upper   = 0.0; ///< upper(e_{k0+k1-1}(X->Y_theta)) / (lower_0^{1-theta} lower_1^theta)
    double  threshold = 0.0;
    Verdict verdict   = Verdict::inconclusive;
};

///
/// Consistency of e_{k0+k1-1}(X -> Y_theta) <= C e_{k0}(X -> Y_0)^{1-theta}
/// e_{k1}(X -> Y_1)^theta on certified brackets. Passes when even the
/// pessimistic ratio c_upper is at most the threshold, fails when the
/// optimistic ratio c_lower exceeds it, and is inconclusive otherwise.
///
inline InterpolationReport interpolation_entropy_check(const InterpolationCase& c, std::size_t k0, std::size_t k1,
                                                       double threshold = 16.0, const PackingOptions& popts = {})
{
    if (c.n > 3) throw std::invalid_argument("interpolation_entropy_check: n must be <= 3");
    if (!(c.theta > 0.0 && c.theta < 1.0)) throw std::invalid_argument("interpolation_entropy_check: need 0 < theta < 1");
    if (k0 < 1 || k1 < 1) throw std::invalid_argument("interpolation_entropy_check: need k0, k1 >= 1");
    auto bracket = [&](const LorentzParams& target, std::size_t k) {
        const EmbeddingSpec spec{c.source, target, c.n};
        const auto          up = covering_upper(spec, k);
        if (!up) throw std::runtime_error("interpolation_entropy_check: covering not available");
        return std::pair<double, double>{packing_lower(spec, k, popts).bound, up->radius};
    };
    const auto [lo0, up0] = bracket(c.target0, k0);
    const auto [lo1, up1] = bracket(c.target1, k1);
    const auto [lot, upt] = bracket(c.target_theta, k0 + k1 - 1);
    InterpolationReport r;
    r.threshold = threshold;
    r.c_lower   = lot / (std::pow(up0, 1.0 - c.theta) * std::pow(up1, c.theta));
    const double den = std::pow(lo0, 1.0 - c.theta) * std::pow(lo1, c.theta);
    r.c_upper   = den > 0.0 ? upt / den : std::numeric_limits<double>::infinity();
    r.verdict   = r.c_upper <= threshold ? Verdict::pass : r.c_lower > threshold ? Verdict::fail : Verdict::inconclusive;
    return r;
}

} // namespace lorentz

#endif
