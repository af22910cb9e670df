#ifndef LORENTZ_ENTROPY_HPP
#define LORENTZ_ENTROPY_HPP

#include "embedding.hpp"
#include "seqcore.hpp"
#include "sparse.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

namespace lorentz {

/// Certified bound pair for one entropy number.
struct EntropyBracket
{
    double      lower = 0.0;
    double      upper = 0.0;
    std::string lower_method;
    std::string upper_method;
    std::size_t k = 1;
    std::size_t n = 1;
};

/// l(k, n) = k / ln(n/k + 1).
inline double ell(std::size_t k, std::size_t n)
{
    if (k < 1 || n < 1) throw std::invalid_argument("ell: need k, n >= 1");
    const double kd = static_cast<double>(k);
    return kd / std::log1p(static_cast<double>(n) / kd);
}

/// small-k for k <= ln(n+1), mid-k up to k = n, large-k beyond.
inline Regime regime_of(std::size_t k, std::size_t n)
{
    const double kd = static_cast<double>(k);
    if (kd <= std::log1p(static_cast<double>(n))) return Regime::small_k;
    return k <= n ? Regime::mid_k : Regime::large_k;
}

namespace detail {

inline void check_kn(std::size_t k, std::size_t n, const char* who)
{
    if (k < 1 || n < 1) throw std::invalid_argument(std::string(who) + ": need k, n >= 1");
}

inline double decay(std::size_t k, std::size_t n) { return std::exp2(-static_cast<double>(k) / static_cast<double>(n)); }

} // namespace detail

/// Classical e_k(id: l_p^n -> l_r^n) shape, evaluated on the branch for `regime`.
/// Branches that do not exist for the pair collapse onto the single formula.
inline double envelope_lp_branch(const Exponent& p, const Exponent& r, std::size_t n, std::size_t k, Regime regime)
{
    detail::check_kn(k, n, "envelope_lp");
    const double nd   = static_cast<double>(n);
    const double expo = p.reciprocal() - r.reciprocal();
    const double tail = detail::decay(k, n) * std::pow(nd, -expo);
    if (!(p < r)) return tail;
    switch (regime) {
    case Regime::small_k: return 1.0;
    case Regime::mid_k: {
        const double kd = static_cast<double>(k);
        return std::pow(std::log1p(nd / kd) / kd, expo);
    }
    case Regime::large_k: return tail;
    }
    return tail;
}

inline EnvelopeValue envelope_lp(const Exponent& p, const Exponent& r, std::size_t n, std::size_t k)
{
    const Regime reg = regime_of(k, n);
    const CaseTag tag = p < r ? CaseTag::classical_le : CaseTag::classical_ge;
    return EnvelopeValue{envelope_lp_branch(p, r, n, k, reg), tag, reg, k, static_cast<double>(n)};
}

/// e_k(id: l_{p,u}^n -> l_{q,v}^n) shape on the branch for `regime`, whatever
/// regime k actually falls in. The junction checks compare two branches at
/// the same k.
inline double envelope_lorentz_branch(const EmbeddingSpec& spec, std::size_t k, Regime regime)
{
    spec.validate();
    detail::check_kn(k, spec.n, "envelope_lorentz");
    const std::size_t n     = spec.n;
    const double      nd    = static_cast<double>(n);
    const double      logn  = std::log1p(nd);
    const double      inv_p = spec.source.p.reciprocal();
    const double      inv_q = spec.target.p.reciprocal();
    const double      inv_u = spec.source.u.reciprocal();
    const double      inv_v = spec.target.u.reciprocal();
    const double      d     = detail::decay(k, n);
    switch (classify(spec)) {
    case CaseTag::zero: return envelope_lp_branch(spec.source.p, spec.target.p, n, k, regime);
    case CaseTag::I: return d * std::pow(nd, inv_q) * std::pow(logn, -inv_u);
    case CaseTag::II: {
        if (regime == Regime::small_k) return 1.0;
        if (regime == Regime::large_k) return d * std::pow(nd, -inv_p) * std::pow(logn, inv_v);
        const double l = ell(k, n);
        return std::pow(l, -inv_p) * std::pow(std::log1p(l), inv_v);
    }
    case CaseTag::III_1: return d;
    case CaseTag::III_2:
        if (regime == Regime::large_k) return d;
        return std::pow(std::log1p(nd / static_cast<double>(k)), inv_v - inv_u);
    case CaseTag::IV_1: return d * std::pow(logn, inv_v - inv_u);
    case CaseTag::IV_2: {
        if (regime == Regime::small_k) return 1.0;
        if (regime == Regime::large_k) return d * std::pow(logn, inv_v - inv_u);
        return std::pow(std::log1p(ell(k, n)), inv_v - inv_u);
    }
    default: break;
    }
    throw std::logic_error("envelope_lorentz: unreachable case");
}

inline EnvelopeValue envelope_lorentz(const EmbeddingSpec& spec, std::size_t k)
{
    const Regime reg = regime_of(k, spec.n);
    return EnvelopeValue{envelope_lorentz_branch(spec, k, reg), classify(spec), reg, k, static_cast<double>(spec.n)};
}

/// e_k through the truncation functional: u_sup envelope at s = s_of_k(n, k).
/// Only for k < n/2 and the cells where the truncation envelope exists.
inline std::optional<EnvelopeValue> envelope_via_en(const EmbeddingSpec& spec, std::size_t k)
{
    spec.validate();
    detail::check_kn(k, spec.n, "envelope_via_en");
    if (2 * k >= spec.n) return std::nullopt;
    const std::size_t s = s_of_k(spec.n, k);
    const auto        v = detail::truncation_envelope(spec, s);
    if (!v) return std::nullopt;
    return EnvelopeValue{*v, classify(spec), regime_of(k, spec.n), k, static_cast<double>(spec.n)};
}

/// 4^{1/p} 2^{-(k-1)/n}: upper bound for e_k(id: X -> X), X an n-dimensional p-Banach space.
inline double upper_identity(double p_ar, std::size_t n, std::size_t k)
{
    if (!(p_ar > 0.0 && p_ar <= 1.0)) throw std::invalid_argument("upper_identity: need 0 < p <= 1");
    detail::check_kn(k, n, "upper_identity");
    return std::pow(4.0, 1.0 / p_ar) * std::exp2(-static_cast<double>(k - 1) / static_cast<double>(n));
}

/// 2^{-k/n} phi_Y(n) / phi_X(n) with exact fundamental functions, for k >= n.
inline double large_k_envelope(const EmbeddingSpec& spec, std::size_t k)
{
    spec.validate();
    if (k < spec.n) throw std::invalid_argument("large_k_envelope: need k >= n");
    return detail::decay(k, spec.n) * fundamental_phi(spec.target, spec.n).exact /
           fundamental_phi(spec.source, spec.n).exact;
}

} // namespace lorentz

#endif
