#ifndef LORENTZ_MONOTONE_SEARCH_HPP
#define LORENTZ_MONOTONE_SEARCH_HPP

#include "seqcore.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace lorentz {

struct SearchOptions
{
    std::size_t   starts   = 16;    ///< total starts; analytic candidates first, random ones fill up
    std::size_t   max_iter = 10000; ///< sweeps per start
    double        tol      = 1e-9;  ///< relative objective change per sweep
    std::uint64_t seed     = 0;
};

struct SearchResult
{
    double      value      = 0.0;
    Vec         witness;          ///< non-increasing, unit source norm
    std::size_t iterations = 0;   ///< sweeps used by the start that produced `value`
    bool        converged  = false;
    std::size_t best_start = 0;
};

namespace detail {

inline Vec random_monotone_start(std::size_t n, std::uint64_t seed, std::uint64_t stream)
{
    auto eng = make_engine(seed, stream);
    Vec  x(n);
    switch (uniform_below(eng, 3)) {
    case 0:
        for (double& v : x) v = uniform01(eng);
        break;
    case 1: {
        const double a = 2.5 * uniform01(eng);
        for (std::size_t i = 0; i < n; ++i) x[i] = std::pow(static_cast<double>(i + 1), -a) * (0.5 + uniform01(eng));
        break;
    }
    default: {
        const std::size_t m = 1 + uniform_below(eng, n);
        for (std::size_t i = 0; i < n; ++i) x[i] = (i < m ? 1.0 : 0.0) + 0.05 * uniform01(eng);
        break;
    }
    }
    std::sort(x.begin(), x.end(), std::greater<>());
    return x;
}

// Clamp negative level increments to zero (and the last entry at zero), which
// keeps the vector non-negative and non-increasing.
inline void project_monotone(Vec& x)
{
    double floor = 0.0;
    for (std::size_t i = x.size(); i-- > 0;) {
        x[i]  = std::max(x[i], floor);
        floor = x[i];
    }
}

} // namespace detail

///
/// Maximizes objective(x) / ||x||_source over the cone of non-negative,
/// non-increasing vectors of length n.
///
/// The objective must be positively homogeneous of degree one and is only
/// ever called on non-increasing, non-negative vectors. The search is a
/// compass search on the level increments c_j = x_j - x_{j+1}: a move on
/// c_j shifts the whole prefix x_1..x_j, so flat blocks stay movable. After
/// every accepted move the iterate is rescaled to unit source norm.
///
/// The returned value is attained by the returned witness, hence it is a
/// certified lower bound on the supremum; no global optimality is claimed.
///
template <class Objective>
SearchResult maximize_on_monotone_ball(const LorentzParams& source, std::size_t n, Objective&& objective,
                                       const std::vector<Vec>& analytic, const SearchOptions& opts = {})
{
    if (n < 1) throw std::invalid_argument("monotone search: n must be >= 1");
    if (!(opts.tol > 0.0)) throw std::invalid_argument("monotone search: tol must be > 0");

    const NormKernel src(source, n);
    const double     step_floor = std::sqrt(opts.tol);

    std::vector<Vec> starts;
    for (const Vec& a : analytic) {
        if (a.size() != n) throw std::invalid_argument("monotone search: start has wrong length");
        Vec x(a.size());
        std::transform(a.begin(), a.end(), x.begin(), [](double v) { return std::fabs(v); });
        std::sort(x.begin(), x.end(), std::greater<>());
        starts.push_back(std::move(x));
    }
    for (std::size_t r = 0; starts.size() < opts.starts; ++r) {
        starts.push_back(detail::random_monotone_start(n, opts.seed, r));
    }

    SearchResult best;
    best.value = -1.0;
    Vec trial(n);

    for (std::size_t si = 0; si < starts.size(); ++si) {
        Vec          x  = starts[si];
        const double s0 = src(x);
        if (!(s0 > 0.0)) continue;
        for (double& v : x) v /= s0;
        double f = objective(std::span<const double>(x));

        Vec         h(n, 0.25);
        Vec         x_before = x;
        std::size_t iter      = 0;
        bool        converged = false;
        while (iter < opts.max_iter) {
            ++iter;
            const double f_before = f;
            for (std::size_t j = 0; j < n; ++j) {
                const double cj      = x[j] - (j + 1 < n ? x[j + 1] : 0.0);
                bool         success = false;
                for (int dir : {+1, -1}) {
                    double delta = h[j] * x[0];
                    if (dir < 0) delta = -std::min(delta, cj);
                    if (delta == 0.0) continue;
                    // shift the prefix in place; the saved copy restores it exactly
                    std::copy(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(j + 1), trial.begin());
                    for (std::size_t i = 0; i <= j; ++i) x[i] += delta;
                    const double s = src(x);
                    const double r = s > 0.0 ? objective(std::span<const double>(x)) / s : -1.0;
                    if (r > f) {
                        for (double& v : x) v /= s;
                        f       = r;
                        success = true;
                        break;
                    }
                    std::copy(trial.begin(), trial.begin() + static_cast<std::ptrdiff_t>(j + 1), x.begin());
                }
                h[j] = success ? std::min(2.0 * h[j], 1.0) : 0.5 * h[j];
            }
            // pattern move along the net displacement of this sweep
            if (f > f_before) {
                for (std::size_t i = 0; i < n; ++i) trial[i] = 2.0 * x[i] - x_before[i];
                detail::project_monotone(trial);
                const double s = src(trial);
                if (s > 0.0) {
                    const double r = objective(std::span<const double>(trial)) / s;
                    if (r > f) {
                        for (std::size_t i = 0; i < n; ++i) x[i] = trial[i] / s;
                        f = r;
                    }
                }
            }
            std::copy(x.begin(), x.end(), x_before.begin());
            // drop a start that trails the incumbent by more than 64 sweeps of its current gain
            if (best.value > f && f + 64.0 * (f - f_before) < best.value) break;
            const double hmax = *std::max_element(h.begin(), h.end());
            if (f - f_before <= opts.tol * f && hmax < step_floor) {
                converged = true;
                break;
            }
        }
        // re-evaluate on the stored witness so that value and witness agree exactly
        const double sw = src(x);
        const double fw = objective(std::span<const double>(x)) / sw;
        if (fw > best.value) {
            best.value      = fw;
            best.witness    = x;
            best.iterations = iter;
            best.converged  = converged;
            best.best_start = si;
        }
    }
    if (best.value < 0.0) throw std::runtime_error("monotone search: no feasible start");
    return best;
}

} // namespace lorentz

#endif
