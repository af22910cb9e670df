#ifndef LORENTZ_SEQCORE_HPP
#define LORENTZ_SEQCORE_HPP

///
/// \file seqcore.hpp
///
/// Rearrangements, Lorentz quasi-norms, fundamental functions, harmonic and
/// tail sums, quasi-norm constants.
///
/// Conventions used throughout the library:
///   - natural logarithms; a bare "log n" in an asymptotic envelope is
///     evaluated as ln(n + 1) so that it never vanishes at n = 1;
///   - 1/inf = 0, and u = inf is always a max-reduction;
///   - power sums are accumulated in ascending index order with compensated
///     summation, so every result is reproducible bit for bit.
///

#include "exponent.hpp"
#include "random.hpp"
#include "summation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace lorentz {

using Vec = std::vector<double>;

/// Throws unless x is non-empty with finite entries.
inline void require_sequence(std::span<const double> x, const char* what = "sequence")
{
    if (x.empty()) {
        throw std::invalid_argument(std::string(what) + " must have length >= 1");
    }
    for (double v : x) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument(std::string(what) + " has a non-finite entry");
        }
    }
}

/// Non-increasing rearrangement x*: absolute values sorted in non-increasing order.
inline Vec rearrange(std::span<const double> x)
{
    require_sequence(x);
    Vec r(x.size());
    std::transform(x.begin(), x.end(), r.begin(), [](double v) { return std::fabs(v); });
    std::sort(r.begin(), r.end(), std::greater<>());
    return r;
}

///
/// Evaluates ||.||_{p,u} on vectors that are already non-negative and
/// non-increasing. The index weights are computed once for length n, which is
/// what the optimizers and the Monte Carlo volume code need in their inner
/// loops.
///
class NormKernel
{
public:
    NormKernel(const LorentzParams& lp, std::size_t n) : lp_(lp), weights_(n)
    {
        const double inv_p = lp.p.reciprocal();
        if (lp.u.is_infinite()) {
            sup_ = true;
            for (std::size_t i = 0; i < n; ++i) {
                weights_[i] = inv_p == 0.0 ? 1.0 : std::pow(static_cast<double>(i + 1), inv_p);
            }
            return;
        }
        u_ = lp.u.value();
        // exponent of the index weight i^{u/p - 1}
        const double e = u_ * inv_p - 1.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double k = static_cast<double>(i + 1);
            weights_[i]    = e == 0.0 ? 1.0 : e == -1.0 ? 1.0 / k : std::pow(k, e);
        }
        power_ = u_ == 1.0 ? Power::one : u_ == 2.0 ? Power::two : Power::general;
    }

    const LorentzParams& params() const noexcept { return lp_; }
    std::size_t          size() const noexcept { return weights_.size(); }

    /// Weight of index i (1-based): i^{u/p-1} for u < inf, i^{1/p} for u = inf.
    double weight(std::size_t i) const { return weights_.at(i - 1); }

    /// xs must be non-negative, non-increasing, and no longer than size().
    double operator()(std::span<const double> xs) const
    {
        if (xs.size() > weights_.size()) {
            throw std::invalid_argument("NormKernel: vector longer than kernel");
        }
        if (xs.empty() || xs[0] == 0.0) {
            return 0.0;
        }
        if (sup_) {
            double m = 0.0;
            for (std::size_t i = 0; i < xs.size(); ++i) {
                m = std::max(m, weights_[i] * xs[i]);
            }
            return m;
        }
        // scale by the largest entry so that large u cannot overflow
        const double   top = xs[0];
        const double   inv = 1.0 / top;
        CompensatedSum acc;
        switch (power_) {
        case Power::one:
            for (std::size_t i = 0; i < xs.size(); ++i) acc.add(weights_[i] * (xs[i] * inv));
            return top * acc.value();
        case Power::two:
            for (std::size_t i = 0; i < xs.size(); ++i) {
                const double r = xs[i] * inv;
                acc.add(weights_[i] * r * r);
            }
            return top * std::sqrt(acc.value());
        case Power::general:
            for (std::size_t i = 0; i < xs.size(); ++i) {
                if (xs[i] == 0.0) break;
                acc.add(weights_[i] * std::pow(xs[i] * inv, u_));
            }
            return top * std::pow(acc.value(), 1.0 / u_);
        }
        return 0.0;
    }

private:
    enum class Power { one, two, general };

    LorentzParams lp_;
    Vec           weights_;
    double        u_     = 0.0;
    Power         power_ = Power::general;
    bool          sup_   = false;
};

/// ||x||_{p,u} = || i^{1/p - 1/u} x*_i ||_u.
inline double lorentz_norm(std::span<const double> x, const LorentzParams& lp)
{
    const Vec r = rearrange(x);
    return NormKernel(lp, r.size())(r);
}

/// H_n = sum_{k=1}^n 1/k, ascending.
inline double harmonic(std::size_t n)
{
    if (n < 1) throw std::invalid_argument("harmonic: n must be >= 1");
    CompensatedSum acc;
    for (std::size_t k = 1; k <= n; ++k) acc.add(1.0 / static_cast<double>(k));
    return acc.value();
}

struct FundamentalValue
{
    double exact; ///< ||1_n||_{p,u}
    double proxy; ///< n^{1/p} (p < inf) or ln(n+1)^{1/u} (p = inf)
};

inline FundamentalValue fundamental_phi(const LorentzParams& lp, std::size_t n)
{
    if (n < 1) throw std::invalid_argument("fundamental_phi: n must be >= 1");
    const Vec    ones(n, 1.0);
    const double exact = NormKernel(lp, n)(ones);
    const double nd    = static_cast<double>(n);
    const double proxy = lp.p.is_finite() ? std::pow(nd, lp.p.reciprocal())
                                          : std::pow(std::log1p(nd), lp.u.reciprocal());
    return {exact, proxy};
}

/// Decay profile of x*_i on the unit ball, without the implicit constant:
/// i^{-1/p} for p < inf, ln(i+1)^{-1/u} for p = inf.
inline double xstar_envelope(const LorentzParams& lp, std::size_t i)
{
    if (i < 1) throw std::invalid_argument("xstar_envelope: i must be >= 1");
    const double id = static_cast<double>(i);
    if (lp.p.is_finite()) return std::pow(id, -lp.p.reciprocal());
    return std::pow(std::log1p(id), -lp.u.reciprocal());
}

enum class TailVariant { power, log };

struct TailSum
{
    double value;
    bool   empty; ///< s == n: the sum has no terms and value is 0
};

///   power: sum_{i=s+1}^n (i-s)^{-1} i^{-lambda}        (lambda > 0)
///   log:   sum_{i=s+1}^n (i-s)^{-1} (ln i)^{-lambda}   (lambda > 1)
inline TailSum tail_sum(std::size_t n, std::size_t s, double lambda, TailVariant variant)
{
    if (s < 1 || s > n) throw std::invalid_argument("tail_sum: need 1 <= s <= n");
    if (variant == TailVariant::power && !(lambda > 0.0)) {
        throw std::invalid_argument("tail_sum: power variant needs lambda > 0");
    }
    if (variant == TailVariant::log && !(lambda > 1.0)) {
        throw std::invalid_argument("tail_sum: log variant needs lambda > 1");
    }
    if (s == n) return {0.0, true};
    CompensatedSum acc;
    for (std::size_t i = s + 1; i <= n; ++i) {
        const double id   = static_cast<double>(i);
        const double head = 1.0 / static_cast<double>(i - s);
        acc.add(variant == TailVariant::power ? head * std::pow(id, -lambda)
                                              : head * std::pow(std::log(id), -lambda));
    }
    return {acc.value(), false};
}

/// Envelope for tail_sum: s^{-lambda} ln(s+1), resp. ln(s+1)^{1-lambda}.
inline double tail_bound(std::size_t s, double lambda, TailVariant variant)
{
    if (s < 1) throw std::invalid_argument("tail_bound: s must be >= 1");
    const double sd = static_cast<double>(s);
    return variant == TailVariant::power ? std::pow(sd, -lambda) * std::log1p(sd)
                                         : std::pow(std::log1p(sd), 1.0 - lambda);
}

/// Exponent r of the r-norm equivalent to a quasi-norm with constant C = 2^{1/r - 1}.
inline double aoki_rolewicz_p(double c_quasi)
{
    if (!(c_quasi >= 1.0)) throw std::invalid_argument("aoki_rolewicz_p: constant must be >= 1");
    return 1.0 / (1.0 + std::log2(c_quasi));
}

struct QuasiConstants
{
    double c_quasi; ///< measured C >= 1
    double p_ar;    ///< 1 / (1 + log2 C)
};

namespace detail {

// 75% i.i.d. Gaussian vectors, 25% sparse spikes (a signed unit vector or a
// scaled indicator of a random support).
inline void draw_quasi_sample(std::mt19937_64& eng, Vec& x)
{
    const std::size_t n = x.size();
    if (uniform01(eng) < 0.25) {
        std::fill(x.begin(), x.end(), 0.0);
        const double scale = 0.25 + 1.75 * uniform01(eng);
        if (uniform01(eng) < 0.5) {
            x[uniform_below(eng, n)] = uniform01(eng) < 0.5 ? scale : -scale;
        } else {
            // m draws with repetition, so the support has at most m entries
            const std::size_t m = 1 + uniform_below(eng, n);
            for (std::size_t j = 0; j < m; ++j) {
                x[uniform_below(eng, n)] = scale;
            }
        }
        return;
    }
    std::normal_distribution<double> gauss;
    for (double& v : x) v = gauss(eng);
}

// Equal scaled indicators of two disjoint supports of the same size; these
// attain the constant of every symmetric quasi-norm whose worst case is
// ||1_{2m}|| / (2 ||1_m||). Needs n >= 2.
inline void draw_disjoint_pair(std::mt19937_64& eng, Vec& x, Vec& y, std::vector<std::size_t>& perm)
{
    const std::size_t n = x.size();
    const std::size_t m = 1 + uniform_below(eng, n / 2);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t i = 0; i < 2 * m; ++i) std::swap(perm[i], perm[i + uniform_below(eng, n - i)]);
    const double scale = 0.25 + 1.75 * uniform01(eng);
    std::fill(x.begin(), x.end(), 0.0);
    std::fill(y.begin(), y.end(), 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        x[perm[i]]     = scale;
        y[perm[m + i]] = scale;
    }
}

} // namespace detail

/// Largest observed ||x+y|| / (||x|| + ||y||) over `trials` sampled pairs,
/// clamped below at 1. One pair in eight is a disjoint indicator pair, the
/// rest are drawn independently. Deterministic in `seed`.
inline QuasiConstants quasi_constant_estimate(const LorentzParams& lp, std::size_t n, std::size_t trials,
                                              std::uint64_t seed)
{
    if (n < 1) throw std::invalid_argument("quasi_constant_estimate: n must be >= 1");
    if (trials < 1) throw std::invalid_argument("quasi_constant_estimate: trials must be >= 1");
    constexpr std::size_t block = 1024;
    const NormKernel      kernel(lp, n);
    Vec                   x(n), y(n), sum(n), buf(n);
    std::vector<std::size_t> perm(n);
    auto                  norm = [&](const Vec& v) {
        std::transform(v.begin(), v.end(), buf.begin(), [](double a) { return std::fabs(a); });
        std::sort(buf.begin(), buf.end(), std::greater<>());
        return kernel(buf);
    };
    double best = 1.0;
    for (std::size_t start = 0; start < trials; start += block) {
        auto eng = make_engine(seed, start / block);
        for (std::size_t t = start; t < std::min(trials, start + block); ++t) {
            if (n >= 2 && uniform01(eng) < 0.125) {
                detail::draw_disjoint_pair(eng, x, y, perm);
            } else {
                detail::draw_quasi_sample(eng, x);
                detail::draw_quasi_sample(eng, y);
            }
            const double denom = norm(x) + norm(y);
            if (denom == 0.0) continue;
            for (std::size_t i = 0; i < n; ++i) sum[i] = x[i] + y[i];
            best = std::max(best, norm(sum) / denom);
        }
    }
    return {best, aoki_rolewicz_p(best)};
}

} // namespace lorentz

#endif
