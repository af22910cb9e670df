#ifndef LORENTZ_VOLUME_HPP
#define LORENTZ_VOLUME_HPP

#include "parallel.hpp"
#include "random.hpp"
#include "seqcore.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace lorentz {

struct McEstimate
{
    double        mean      = 0.0;
    double        std_error = 0.0; ///< sqrt(phat (1 - phat) / samples) * enclosure volume
    std::uint64_t samples   = 0;
    std::uint64_t seed      = 0;
    std::uint64_t hits      = 0;
    Exponent      enclosure = Exponent::infinity(); ///< r of the l_r ball sampled from; inf is the cube
};

/// vol(B_p^n) = 2^n Gamma(1+1/p)^n / Gamma(1+n/p), through lgamma.
inline double lp_ball_volume_exact(double p, std::size_t n)
{
    if (!(p > 0.0) || !std::isfinite(p)) throw std::invalid_argument("lp_ball_volume_exact: need 0 < p < inf");
    if (n < 1) throw std::invalid_argument("lp_ball_volume_exact: n must be >= 1");
    const double nd = static_cast<double>(n);
    return std::exp(nd * (std::log(2.0) + std::lgamma(1.0 + 1.0 / p)) - std::lgamma(1.0 + nd / p));
}

/// Exact volume where one is available: l_p balls (p = u) and the cube.
inline std::optional<double> lorentz_ball_volume_exact(const LorentzParams& lp, std::size_t n)
{
    if (!lp.is_lebesgue()) return std::nullopt;
    if (lp.p.is_infinite()) return std::exp2(static_cast<double>(n));
    return lp_ball_volume_exact(lp.p.value(), n);
}

/// Exponent r of the l_r ball the samples are drawn from: the cube (r = inf)
/// in general, since x*_1 <= ||x||, and r = (p+1)/2 for l_p with p < 1,
/// where B_p lies inside B_r but fills a vanishing part of the cube.
inline Exponent enclosure_for(const LorentzParams& lp)
{
    if (lp.is_lebesgue() && lp.p.is_finite() && lp.p.value() < 1.0) return Exponent((lp.p.value() + 1.0) / 2.0);
    return Exponent::infinity();
}

namespace detail {

inline double enclosure_volume(const Exponent& r, std::size_t n)
{
    return r.is_infinite() ? std::exp2(static_cast<double>(n)) : lp_ball_volume_exact(r.value(), n);
}

// Absolute values of a uniform point of B_r^n: g_i / (sum g^r + E)^{1/r} with
// g_i^r ~ Gamma(1/r) and E ~ Exp(1).
inline void draw_lr_ball_abs(std::mt19937_64& eng, double r, Vec& x)
{
    std::gamma_distribution<double> gamma(1.0 / r, 1.0);
    double                          total = 0.0;
    for (double& v : x) {
        const double g = gamma(eng);
        total += g;
        v = std::pow(g, 1.0 / r);
    }
    total += -std::log1p(-uniform01(eng));
    const double scale = std::pow(total, -1.0 / r);
    for (double& v : x) v *= scale;
}

} // namespace detail

inline constexpr std::uint64_t mc_shard_size = 65536;

///
/// Hit-or-miss estimate of vol(B_{p,u}^n).
///
/// Samples are drawn uniformly from the enclosure chosen by enclosure_for()
/// in shards of mc_shard_size; shard j uses engine stream j, and the integer
/// hit counts are summed, so the estimate is the same for any thread count.
///
inline McEstimate lorentz_ball_volume_mc(const LorentzParams& lp, std::size_t n, std::uint64_t samples,
                                         std::uint64_t seed)
{
    if (n < 1) throw std::invalid_argument("lorentz_ball_volume_mc: n must be >= 1");
    if (samples < 1) throw std::invalid_argument("lorentz_ball_volume_mc: samples must be >= 1");
    const Exponent                enc    = enclosure_for(lp);
    const NormKernel              kernel(lp, n);
    const std::uint64_t           shards = (samples + mc_shard_size - 1) / mc_shard_size;
    std::vector<std::uint64_t>    hits(shards, 0);
    parallel_for(shards, [&](std::size_t j) {
        auto                eng = make_engine(seed, j);
        Vec                 x(n);
        const std::uint64_t lo = j * mc_shard_size, hi = std::min(samples, lo + mc_shard_size);
        std::uint64_t       h  = 0;
        for (std::uint64_t t = lo; t < hi; ++t) {
            if (enc.is_infinite()) {
                for (double& v : x) v = std::fabs(uniform_symmetric(eng));
            } else {
                detail::draw_lr_ball_abs(eng, enc.value(), x);
            }
            std::sort(x.begin(), x.end(), std::greater<>());
            if (kernel(x) <= 1.0) ++h;
        }
        hits[j] = h;
    });
    std::uint64_t total = 0;
    for (auto h : hits) total += h;
    const double vol_enc = detail::enclosure_volume(enc, n);
    const double phat    = static_cast<double>(total) / static_cast<double>(samples);
    McEstimate   est;
    est.mean      = vol_enc * phat;
    est.std_error = vol_enc * std::sqrt(phat * (1.0 - phat) / static_cast<double>(samples));
    est.samples   = samples;
    est.seed      = seed;
    est.hits      = total;
    est.enclosure = enc;
    return est;
}

/// Shape of vol(B_{p,u}^n)^{1/n}: n^{-1/p}, resp. ln(n+1)^{-1/u} for p = inf.
inline double volume_envelope(const LorentzParams& lp, std::size_t n)
{
    if (n < 1) throw std::invalid_argument("volume_envelope: n must be >= 1");
    const double nd = static_cast<double>(n);
    return lp.p.is_finite() ? std::pow(nd, -lp.p.reciprocal()) : std::pow(std::log1p(nd), -lp.u.reciprocal());
}

enum class RvMethod { mc, exact_when_available };

struct RvValue
{
    double value     = 0.0;
    double std_error = 0.0; ///< 0 when both volumes are exact
    bool   exact     = false;
};

struct VolumeValue
{
    double value     = 0.0;
    double std_error = 0.0;
    bool   exact     = false;
};

inline VolumeValue ball_volume(const LorentzParams& lp, std::size_t n, RvMethod method, std::uint64_t samples,
                               std::uint64_t seed)
{
    if (method == RvMethod::exact_when_available) {
        if (auto v = lorentz_ball_volume_exact(lp, n)) return {*v, 0.0, true};
    }
    const McEstimate est = lorentz_ball_volume_mc(lp, n, samples, seed);
    if (est.hits == 0) {
        throw std::runtime_error("volume: zero hits for l" + lp.to_string() + " n=" + std::to_string(n) +
                                 ", insufficient samples");
    }
    return {est.mean, est.std_error, false};
}

/// rv(A, B) = (vol B_A / vol B_B)^{1/n}, with delta-method error for Monte
/// Carlo volumes. The two estimates use independent seeds.
inline RvValue rv(const LorentzParams& a, const LorentzParams& b, std::size_t n, RvMethod method,
                  std::uint64_t samples = 1'000'000, std::uint64_t seed = 0)
{
    if (n < 1) throw std::invalid_argument("rv: n must be >= 1");
    if (a == b) return {1.0, 0.0, true};
    const VolumeValue va = ball_volume(a, n, method, samples, seed);
    const VolumeValue vb = ball_volume(b, n, method, samples, splitmix64(seed));
    const double      nd = static_cast<double>(n);
    const double      r  = std::exp((std::log(va.value) - std::log(vb.value)) / nd);
    const double      rel = std::hypot(va.std_error / va.value, vb.std_error / vb.value) / nd;
    return {r, r * rel, va.exact && vb.exact};
}

/// 2^{-(k-1)/n} rv: lower bound for e_k(id: A -> B) when rv = rv(A, B).
inline double entropy_vol_lower(std::size_t k, std::size_t n, double rv_value)
{
    if (k < 1 || n < 1) throw std::invalid_argument("entropy_vol_lower: need k, n >= 1");
    if (!(rv_value > 0.0)) throw std::invalid_argument("entropy_vol_lower: rv must be > 0");
    return std::exp2(-static_cast<double>(k - 1) / static_cast<double>(n)) * rv_value;
}

struct PhiVolume
{
    double phi_inverse;    ///< 1 / phi(n), exact
    double volume_root;    ///< vol(B)^{1/n}
    double volume_root_se; ///< delta-method error of volume_root
};

inline PhiVolume phi_vs_volume(const LorentzParams& lp, std::size_t n, std::uint64_t samples = 1'000'000,
                               std::uint64_t seed = 0)
{
    const VolumeValue v    = ball_volume(lp, n, RvMethod::mc, samples, seed);
    const double      nd   = static_cast<double>(n);
    const double      root = std::pow(v.value, 1.0 / nd);
    return {1.0 / fundamental_phi(lp, n).exact, root, root * v.std_error / (nd * v.value)};
}

} // namespace lorentz

#endif
