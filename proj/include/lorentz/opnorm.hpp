#ifndef LORENTZ_OPNORM_HPP
#define LORENTZ_OPNORM_HPP

#include "embedding.hpp"
#include "monotone_search.hpp"
#include "seqcore.hpp"

#include <cmath>
#include <optional>
#include <vector>

namespace lorentz {

enum class NormKind { exact, numeric, envelope };

inline const char* to_string(NormKind k)
{
    switch (k) {
    case NormKind::exact: return "exact";
    case NormKind::numeric: return "numeric";
    case NormKind::envelope: return "envelope";
    }
    return "?";
}

struct NormResult
{
    double             value = 0.0;
    NormKind           kind  = NormKind::numeric;
    std::optional<Vec> witness;
    std::size_t        iterations = 0;
    bool               converged  = true;
};

/// Closed forms for ||id: l_{p,u}^n -> l_{q,v}^n||:
///   p = q, u > v:      H_n^{1/v - 1/u}, attained at (k^{-1/p})_k;
///   source = target:   1, attained at e_1.
/// Any other cell has no closed form here and yields nullopt.
inline std::optional<NormResult> embedding_norm_exact(const EmbeddingSpec& spec)
{
    spec.validate();
    const std::size_t n = spec.n;
    if (spec.source == spec.target) {
        Vec e1(n, 0.0);
        e1[0] = 1.0;
        return NormResult{1.0, NormKind::exact, std::move(e1), 0, true};
    }
    if (spec.source.p == spec.target.p && spec.source.u > spec.target.u) {
        const double expo  = spec.target.u.reciprocal() - spec.source.u.reciprocal();
        const double value = std::pow(harmonic(n), expo);
        Vec          w(n);
        for (std::size_t k = 0; k < n; ++k) w[k] = std::pow(static_cast<double>(k + 1), -spec.source.p.reciprocal());
        const double s = NormKernel(spec.source, n)(w);
        for (double& v : w) v /= s;
        return NormResult{value, NormKind::exact, std::move(w), 0, true};
    }
    return std::nullopt;
}

/// e_1, s^{-1/p} 1_s for s = 1, 2, 4, ..., n, and (k^{-1/p})_k.
inline std::vector<Vec> opnorm_analytic_starts(const LorentzParams& source, std::size_t n)
{
    std::vector<Vec> out;
    const double     inv_p = source.p.reciprocal();
    for (std::size_t s = 1;; s *= 2) {
        const std::size_t m = std::min(s, n);
        Vec               x(n, 0.0);
        std::fill(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(m), std::pow(static_cast<double>(m), -inv_p));
        out.push_back(std::move(x));
        if (m == n) break;
    }
    Vec decay(n);
    for (std::size_t k = 0; k < n; ++k) decay[k] = std::pow(static_cast<double>(k + 1), -inv_p);
    out.push_back(std::move(decay));
    return out;
}

/// sup_{||x||_{p,u} <= 1} ||x||_{q,v} by multi-start search on the monotone
/// cone. The value is attained by the witness and therefore a certified lower
/// bound on the operator norm.
inline NormResult embedding_norm_numeric(const EmbeddingSpec& spec, const SearchOptions& opts = {})
{
    spec.validate();
    const NormKernel tgt(spec.target, spec.n);
    auto             r = maximize_on_monotone_ball(
        spec.source, spec.n, [&](std::span<const double> x) { return tgt(x); },
        opnorm_analytic_starts(spec.source, spec.n), opts);
    return NormResult{r.value, NormKind::numeric, std::move(r.witness), r.iterations, r.converged};
}

/// Order of growth of the operator norm in n, dispatched on (p, q, u, v).
inline EnvelopeValue embedding_norm_envelope(const LorentzParams& source, const LorentzParams& target, double n)
{
    if (!(n >= 1.0)) throw std::invalid_argument("embedding_norm_envelope: n must be >= 1");
    const double inv_p = source.p.reciprocal(), inv_q = target.p.reciprocal();
    const double inv_u = source.u.reciprocal(), inv_v = target.u.reciprocal();
    const double logn  = std::log1p(n);
    double       value = 1.0;
    if (source.p != target.p) {
        if (source.p.is_finite() && target.p.is_finite()) {
            value = std::pow(n, std::max(0.0, inv_q - inv_p));
        } else if (source.p.is_infinite()) {
            value = std::pow(n, inv_q) * std::pow(logn, -inv_u);
        } else {
            value = 1.0;
        }
    } else {
        value = std::pow(logn, std::max(0.0, inv_v - inv_u));
    }
    return EnvelopeValue{value, classify(source, target), Regime::small_k, 1, n};
}

inline EnvelopeValue embedding_norm_envelope(const EmbeddingSpec& spec)
{
    spec.validate();
    return embedding_norm_envelope(spec.source, spec.target, static_cast<double>(spec.n));
}

} // namespace lorentz

#endif
