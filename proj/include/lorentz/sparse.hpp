#ifndef LORENTZ_SPARSE_HPP
#define LORENTZ_SPARSE_HPP

#include "embedding.hpp"
#include "monotone_search.hpp"
#include "opnorm.hpp"
#include "seqcore.hpp"

#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace lorentz {

/// Error of best s-term approximation in the target quasi-norm: the norm of
/// (x*_{s+1}, ..., x*_n). Keeping the s largest entries is optimal for any
/// symmetric lattice norm.
inline double sigma_s(std::span<const double> x, std::size_t s, const LorentzParams& target)
{
    if (s > x.size()) throw std::invalid_argument("sigma_s: s exceeds the vector length");
    const Vec r = rearrange(x);
    if (s == r.size()) return 0.0;
    const std::span<const double> tail(r.data() + s, r.size() - s);
    return NormKernel(target, tail.size())(tail);
}

/// u(x, Y, s): target norm of x* capped at the level x*_s.
inline double trunc_u(std::span<const double> x, std::size_t s, const LorentzParams& target)
{
    if (s < 1 || s > x.size()) throw std::invalid_argument("trunc_u: need 1 <= s <= n");
    Vec r = rearrange(x);
    std::fill(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(s), r[s - 1]);
    return NormKernel(target, r.size())(r);
}

enum class SupMethod { envelope, numeric };

struct SupResult
{
    double             value = 0.0;
    SupMethod          method = SupMethod::numeric;
    std::optional<Vec> witness;
    std::size_t        iterations = 0;
    bool               converged  = true;
};

/// Starts for the truncation and sparse suprema: the opnorm candidates plus
/// s^{-1/p} 1_s and s^{-1/p} 1_s + sum_{i>s} i^{-1/p} e_i.
inline std::vector<Vec> sparse_analytic_starts(const LorentzParams& source, std::size_t n, std::size_t s)
{
    std::vector<Vec> out   = opnorm_analytic_starts(source, n);
    const double     inv_p = source.p.reciprocal();
    const double     top   = std::pow(static_cast<double>(s), -inv_p);
    Vec              flat(n, 0.0), tail(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (i < s) {
            flat[i] = top;
            tail[i] = top;
        } else {
            tail[i] = std::pow(static_cast<double>(i + 1), -inv_p);
        }
    }
    out.push_back(std::move(flat));
    out.push_back(std::move(tail));
    return out;
}

namespace detail {

inline void check_sparse_args(const EmbeddingSpec& spec, std::size_t s, const char* who)
{
    spec.validate();
    if (s < 1 || s > spec.n) throw std::invalid_argument(std::string(who) + ": need 1 <= s <= n");
}

// Shape of the truncation supremum, or nullopt outside cells II, III.2, IV.2.
inline std::optional<double> truncation_envelope(const EmbeddingSpec& spec, std::size_t s)
{
    const double sd    = static_cast<double>(s);
    const double nd    = static_cast<double>(spec.n);
    const double inv_u = spec.source.u.reciprocal(), inv_v = spec.target.u.reciprocal();
    switch (classify(spec)) {
    case CaseTag::II: return std::pow(sd, -spec.source.p.reciprocal()) * std::pow(std::log1p(sd), inv_v);
    case CaseTag::III_2: return std::pow(std::log1p(nd / sd), inv_v - inv_u);
    case CaseTag::IV_2: return std::pow(std::log1p(sd), inv_v - inv_u);
    default: return std::nullopt;
    }
}

inline std::optional<SupResult> sparse_envelope(const EmbeddingSpec& spec, std::size_t s, const char* who)
{
    if (static_cast<double>(s) >= static_cast<double>(spec.n) / std::log(3.0)) {
        throw std::invalid_argument(std::string(who) + ": envelope needs s < n / ln 3");
    }
    const auto v = truncation_envelope(spec, s);
    if (!v) return std::nullopt;
    return SupResult{*v, SupMethod::envelope, std::nullopt, 0, true};
}

} // namespace detail

/// sup of trunc_u(x, s) over the source unit ball. The envelope exists for
/// cells II, III.2 and IV.2 only; the numeric value is a certified lower bound.
inline std::optional<SupResult> u_sup(const EmbeddingSpec& spec, std::size_t s, SupMethod method,
                                      const SearchOptions& opts = {})
{
    detail::check_sparse_args(spec, s, "u_sup");
    if (method == SupMethod::envelope) return detail::sparse_envelope(spec, s, "u_sup");
    const NormKernel tgt(spec.target, spec.n);
    Vec              buf(spec.n);
    auto             objective = [&](std::span<const double> x) {
        std::copy(x.begin(), x.end(), buf.begin());
        std::fill(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(s), x[s - 1]);
        return tgt(buf);
    };
    auto r = maximize_on_monotone_ball(spec.source, spec.n, objective, sparse_analytic_starts(spec.source, spec.n, s),
                                       opts);
    return SupResult{r.value, SupMethod::numeric, std::move(r.witness), r.iterations, r.converged};
}

/// sup of sigma_s over the source unit ball; same envelope as u_sup.
inline std::optional<SupResult> sigma_sup(const EmbeddingSpec& spec, std::size_t s, SupMethod method,
                                          const SearchOptions& opts = {})
{
    spec.validate();
    if (s >= spec.n) return SupResult{0.0, method, std::nullopt, 0, true};
    detail::check_sparse_args(spec, s, "sigma_sup");
    if (method == SupMethod::envelope) return detail::sparse_envelope(spec, s, "sigma_sup");
    const NormKernel tgt(spec.target, spec.n - s);
    auto             objective = [&](std::span<const double> x) { return tgt(x.subspan(s)); };
    auto r = maximize_on_monotone_ball(spec.source, spec.n, objective, sparse_analytic_starts(spec.source, spec.n, s),
                                       opts);
    return SupResult{r.value, SupMethod::numeric, std::move(r.witness), r.iterations, r.converged};
}

/// Shape of the s-term approximation bound for the cells where one is known:
///   q = inf, p < inf:     s^{-1/p} ln(s+1)^{1/v}
///   p = q = inf, u < v:   ln(s+1)^{1/v-1/u}
///   p = q < inf, v < u:   (ln(n/s) + 1)^{1/v-1/u}
inline std::optional<double> sterm_bound(const EmbeddingSpec& spec, std::size_t s)
{
    detail::check_sparse_args(spec, s, "sterm_bound");
    const Exponent& p     = spec.source.p;
    const Exponent& q     = spec.target.p;
    const double    sd    = static_cast<double>(s);
    const double    inv_u = spec.source.u.reciprocal(), inv_v = spec.target.u.reciprocal();
    if (q.is_infinite() && p.is_finite()) return std::pow(sd, -p.reciprocal()) * std::pow(std::log1p(sd), inv_v);
    if (q.is_infinite() && p.is_infinite() && spec.source.u < spec.target.u) {
        return std::pow(std::log1p(sd), inv_v - inv_u);
    }
    if (p == q && p.is_finite() && spec.target.u < spec.source.u) {
        return std::pow(std::log(static_cast<double>(spec.n) / sd) + 1.0, inv_v - inv_u);
    }
    return std::nullopt;
}

/// The integer s with k/ln(n/k+1) < s <= 1 + k/ln(n/k+1).
inline std::size_t s_of_k(std::size_t n, std::size_t k)
{
    if (n < 1 || k < 1) throw std::invalid_argument("s_of_k: need n, k >= 1");
    const double kd = static_cast<double>(k);
    return static_cast<std::size_t>(std::floor(kd / std::log1p(static_cast<double>(n) / kd))) + 1;
}

} // namespace lorentz

#endif
