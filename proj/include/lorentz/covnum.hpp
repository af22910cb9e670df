#ifndef LORENTZ_COVNUM_HPP
#define LORENTZ_COVNUM_HPP

///
/// \file covnum.hpp
///
/// Certified bounds on e_k(id: X -> Y) for tiny n, and the separated families
/// used in lower-bound constructions.
///
/// Upper bounds come from box covers of B_X on a shifted cubic lattice; lower
/// bounds from explicit point sets in B_X whose pairwise Y-distances are
/// computed exactly.
///

#include "embedding.hpp"
#include "entropy.hpp"
#include "opnorm.hpp"
#include "random.hpp"
#include "seqcore.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lorentz {

// ---------------------------------------------------------------------------
// set families

/// Subsets of {0, ..., n-1}, each sorted, all of size s.
struct SetFamily
{
    std::vector<std::vector<std::uint32_t>> sets;
    std::size_t                             s = 0;
    std::size_t                             n = 0;
    std::string                             construction;
};

/// ceil((n / 4s)^{s/2}), saturated at 2^62.
inline std::uint64_t combinatorial_required(std::size_t n, std::size_t s)
{
    if (s < 1 || s > n) throw std::invalid_argument("combinatorial_required: need 1 <= s <= n");
    const double lg = 0.5 * static_cast<double>(s) * std::log2(static_cast<double>(n) / (4.0 * static_cast<double>(s)));
    if (lg >= 62.0) return std::uint64_t{1} << 62;
    const double v = std::exp2(lg);
    // guard against 16.000000000000004 turning into 17
    const double r = std::round(v);
    if (std::fabs(v - r) <= 1e-9 * r) return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(r));
    return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(v)));
}

namespace detail {

inline bool is_prime(std::uint64_t q)
{
    if (q < 2) return false;
    for (std::uint64_t d = 2; d * d <= q; ++d) {
        if (q % d == 0) return false;
    }
    return true;
}

// Graphs of polynomials of degree < d over GF(q), evaluated at 0..s-1.
// Two distinct polynomials agree on at most d-1 points.
inline std::optional<SetFamily> reed_solomon_family(std::size_t n, std::size_t s, std::uint64_t m)
{
    std::uint64_t q = n / s;
    while (q >= 2 && !is_prime(q)) --q;
    if (q < 2 || q < s) return std::nullopt;
    const std::size_t d = (s + 1) / 2;
    // q^d >= m ?
    long double cap = 1.0L;
    for (std::size_t i = 0; i < d; ++i) cap *= static_cast<long double>(q);
    if (cap < static_cast<long double>(m)) return std::nullopt;

    SetFamily fam;
    fam.s            = s;
    fam.n            = n;
    fam.construction = "reed-solomon q=" + std::to_string(q) + " d=" + std::to_string(d);
    fam.sets.reserve(m);
    std::vector<std::uint64_t> coef(d, 0);
    for (std::uint64_t j = 0; j < m; ++j) {
        std::uint64_t c = j;
        for (std::size_t i = 0; i < d; ++i) {
            coef[i] = c % q;
            c /= q;
        }
        std::vector<std::uint32_t> set(s);
        for (std::uint64_t x = 0; x < s; ++x) {
            std::uint64_t y = 0; // Horner
            for (std::size_t i = d; i-- > 0;) y = (y * x + coef[i]) % q;
            set[x] = static_cast<std::uint32_t>(x * q + y);
        }
        fam.sets.push_back(std::move(set));
    }
    return fam;
}

inline std::size_t intersection_size(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b)
{
    std::size_t i = 0, j = 0, c = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j]) {
            ++i;
        } else if (b[j] < a[i]) {
            ++j;
        } else {
            ++c;
            ++i;
            ++j;
        }
    }
    return c;
}

inline bool admissible(const std::vector<std::vector<std::uint32_t>>& accepted, const std::vector<std::uint32_t>& t,
                       std::size_t s)
{
    for (const auto& a : accepted) {
        if (2 * intersection_size(a, t) >= s) return false;
    }
    return true;
}

inline std::optional<SetFamily> sampled_family(std::size_t n, std::size_t s, std::uint64_t m, std::uint64_t seed)
{
    SetFamily fam;
    fam.s            = s;
    fam.n            = n;
    fam.construction = "rejection-sampling";
    auto                       eng = make_engine(seed, 0);
    std::vector<std::uint32_t> pool(n);
    const std::uint64_t        cap = 200 * m;
    for (std::uint64_t attempt = 0; attempt < cap && fam.sets.size() < m; ++attempt) {
        std::iota(pool.begin(), pool.end(), 0u);
        for (std::size_t i = 0; i < s; ++i) std::swap(pool[i], pool[i + uniform_below(eng, n - i)]);
        std::vector<std::uint32_t> t(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(s));
        std::sort(t.begin(), t.end());
        if (admissible(fam.sets, t, s)) fam.sets.push_back(std::move(t));
    }
    if (fam.sets.size() < m) return std::nullopt;
    return fam;
}

inline std::optional<SetFamily> exhaustive_family(std::size_t n, std::size_t s, std::uint64_t m)
{
    SetFamily fam;
    fam.s            = s;
    fam.n            = n;
    fam.construction = "exhaustive-greedy";
    std::vector<std::uint32_t> t(s);
    std::iota(t.begin(), t.end(), 0u);
    while (fam.sets.size() < m) {
        if (admissible(fam.sets, t, s)) fam.sets.push_back(t);
        // next combination in lexicographic order
        std::size_t i = s;
        while (i > 0 && t[i - 1] == n - s + i - 1) --i;
        if (i == 0) break;
        ++t[i - 1];
        for (std::size_t j = i; j < s; ++j) t[j] = t[j - 1] + 1;
    }
    if (fam.sets.size() < m) return std::nullopt;
    return fam;
}

// Exactly m s-subsets of {0..n-1} with pairwise intersections < s/2.
inline SetFamily separated_family(std::size_t n, std::size_t s, std::uint64_t m, std::uint64_t seed)
{
    if (s < 1 || s > n) throw std::invalid_argument("combinatorial_family: need 1 <= s <= n");
    if (s == 1) {
        if (m > n) throw std::runtime_error("combinatorial_family: more than n singletons requested");
        SetFamily fam{{}, 1, n, "singletons"};
        for (std::uint32_t i = 0; i < m; ++i) fam.sets.push_back({i});
        return fam;
    }
    if (auto f = reed_solomon_family(n, s, m)) return std::move(*f);
    if (m <= 20'000) {
        if (auto f = sampled_family(n, s, m, seed)) return std::move(*f);
    }
    if (n <= 20) {
        if (auto f = exhaustive_family(n, s, m)) return std::move(*f);
    }
    throw std::runtime_error("combinatorial_family: could not reach M=" + std::to_string(m) + " for n=" +
                             std::to_string(n) + " s=" + std::to_string(s));
}

} // namespace detail

///
/// s-subsets of {0..n-1} with pairwise intersections < s/2, at least
/// ceil((n/4s)^{s/2}) of them (or target_m if larger).
///
/// Reed-Solomon graphs are used when a prime q with s <= q <= n/s gives
/// enough of them; otherwise rejection sampling with greedy acceptance
/// (200 M attempts), then an exhaustive lexicographic greedy for n <= 20.
/// Exactly max(required, target_m) sets are returned.
///
inline SetFamily combinatorial_family(std::size_t n, std::size_t s, std::uint64_t seed,
                                      std::optional<std::uint64_t> target_m = std::nullopt)
{
    const std::uint64_t m = std::max(combinatorial_required(n, s), target_m.value_or(0));
    return detail::separated_family(n, s, m, seed);
}

struct SetFamilyCheck
{
    bool        size_ok         = false; ///< M >= ceil((n/4s)^{s/2})
    bool        cardinality_ok  = false; ///< |T_i| = s, entries distinct and < n
    bool        intersection_ok = false; ///< |T_i cap T_j| < s/2 for i != j
    std::size_t max_intersection = 0;    ///< exact when computed pairwise, else a certified bound
};

///
/// Checks the three clauses exactly. Intersections are checked pairwise for
/// small families; for large ones, via the equivalent statement that no two
/// sets share a ceil(s/2)-subset, by sorting packed subset keys in
/// hash-partitioned passes.
///
inline SetFamilyCheck verify_set_family(const SetFamily& fam)
{
    SetFamilyCheck    out;
    const std::size_t s = fam.s, n = fam.n;
    const std::size_t m = fam.sets.size();
    out.size_ok         = s >= 1 && s <= n && m >= combinatorial_required(n, s);
    out.cardinality_ok  = true;
    for (const auto& t : fam.sets) {
        if (t.size() != s) out.cardinality_ok = false;
        for (std::size_t i = 0; i < t.size(); ++i) {
            if (t[i] >= n || (i > 0 && t[i] <= t[i - 1])) out.cardinality_ok = false;
        }
    }
    if (!out.cardinality_ok) return out;

    if (m <= 4096) {
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = i + 1; j < m; ++j) {
                out.max_intersection = std::max(out.max_intersection, detail::intersection_size(fam.sets[i], fam.sets[j]));
            }
        }
        out.intersection_ok = 2 * out.max_intersection < s;
        return out;
    }

    const std::size_t t = (s + 1) / 2;
    unsigned          bits = 1;
    while ((std::size_t{1} << bits) < n) ++bits;
    if (bits * t > 64) throw std::invalid_argument("verify_set_family: subset keys do not fit in 64 bits");
    std::uint64_t subsets = 1;
    for (std::size_t i = 0; i < t; ++i) subsets = subsets * (s - i) / (i + 1);
    const std::uint64_t total  = subsets * m;
    const std::uint64_t passes = std::max<std::uint64_t>(1, total / 8'000'000 + 1);

    std::vector<std::uint64_t> keys;
    std::vector<std::size_t>   idx(t);
    bool                       clash = false;
    for (std::uint64_t pass = 0; pass < passes && !clash; ++pass) {
        keys.clear();
        for (const auto& set : fam.sets) {
            std::iota(idx.begin(), idx.end(), 0);
            while (true) {
                std::uint64_t key = 0;
                for (std::size_t i = 0; i < t; ++i) key = (key << bits) | set[idx[i]];
                if (splitmix64(key) % passes == pass) keys.push_back(key);
                std::size_t i = t;
                while (i > 0 && idx[i - 1] == s - t + i - 1) --i;
                if (i == 0) break;
                ++idx[i - 1];
                for (std::size_t j = i; j < t; ++j) idx[j] = idx[j - 1] + 1;
            }
        }
        std::sort(keys.begin(), keys.end());
        clash = std::adjacent_find(keys.begin(), keys.end()) != keys.end();
    }
    out.intersection_ok  = !clash;
    out.max_intersection = clash ? t : t - 1;
    return out;
}

// ---------------------------------------------------------------------------
// point families

struct PointFamily
{
    std::vector<Vec> points;
    double           separation        = 0.0; ///< min pairwise target distance
    double           source_norm_bound = 0.0; ///< max source norm
};

/// Unordered-pair minimum of ||a - b|| under `kernel`.
inline double min_pairwise_distance(const std::vector<Vec>& pts, const NormKernel& kernel)
{
    double      best = std::numeric_limits<double>::infinity();
    const auto  n    = kernel.size();
    Vec         buf(n);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            for (std::size_t c = 0; c < n; ++c) buf[c] = std::fabs(pts[i][c] - pts[j][c]);
            std::sort(buf.begin(), buf.end(), std::greater<>());
            best = std::min(best, kernel(buf));
        }
    }
    return best;
}

inline double max_norm(const std::vector<Vec>& pts, const LorentzParams& lp)
{
    double m = 0.0;
    for (const Vec& x : pts) m = std::max(m, lorentz_norm(x, lp));
    return m;
}

///
/// Normalized indicators 1_T / ||1_T||_X of a combinatorial family with
/// s = ceil(l(k, n)). Two indicators whose sets meet in j points differ by
/// +-c on 2(s-j) coordinates, so the separation is phi_Y(2(s - j_max)) / phi_X(s).
///
inline PointFamily indicator_family(const EmbeddingSpec& spec, std::size_t k, std::uint64_t seed = 0,
                                    std::optional<std::uint64_t> target_m = std::nullopt)
{
    spec.validate();
    const std::size_t n = spec.n;
    if (static_cast<double>(k) < std::log1p(static_cast<double>(n)) || k > n) {
        throw std::invalid_argument("indicator_family: need ln(n+1) <= k <= n");
    }
    const std::size_t s   = std::min(n, static_cast<std::size_t>(std::ceil(ell(k, n))));
    const SetFamily   fam = combinatorial_family(n, s, seed, target_m);
    const auto        chk = verify_set_family(fam);
    if (!chk.intersection_ok) throw std::logic_error("indicator_family: family fails the intersection clause");
    const double c = 1.0 / fundamental_phi(spec.source, s).exact;
    PointFamily  out;
    out.points.reserve(fam.sets.size());
    for (const auto& t : fam.sets) {
        Vec x(n, 0.0);
        for (auto i : t) x[i] = c;
        out.points.push_back(std::move(x));
    }
    out.separation        = c * fundamental_phi(spec.target, 2 * (s - chk.max_intersection)).exact;
    out.source_norm_bound = 1.0;
    return out;
}

struct DyadicFamily
{
    PointFamily family;
    std::size_t nu = 0; ///< largest level with 12 * 4^nu <= n
    std::size_t mu = 0; ///< smallest level >= 1 with k <= 4^mu / 2
};

///
/// Multi-level vectors x^j = sum_{mu <= l <= nu} 4^{-l/p} 1_{T_j^l}. Level l
/// lives on its own block of 9 * 4^l coordinates; the T_j^l are the sets of a
/// combinatorial family of 4^l-subsets of that block. The x^j are rescaled
/// into the source unit ball and the separation is measured in the target.
/// Needs p = q; returns nullopt when mu > nu.
///
inline std::optional<DyadicFamily> dyadic_family(const EmbeddingSpec& spec, std::size_t k, std::uint64_t seed = 0)
{
    spec.validate();
    if (spec.source.p != spec.target.p) throw std::invalid_argument("dyadic_family: needs p = q");
    if (k < 1 || k > 20) throw std::invalid_argument("dyadic_family: need 1 <= k <= 20");
    const std::size_t n = spec.n;
    std::size_t       nu = 0;
    while (12 * (std::size_t{1} << (2 * (nu + 1))) <= n) ++nu;
    std::size_t mu = 1;
    while (2 * k > (std::size_t{1} << (2 * mu))) ++mu;
    if (nu < 1 || mu > nu) return std::nullopt;

    const std::uint64_t m     = (std::uint64_t{1} << (k - 1)) + 1;
    const double        inv_p = spec.source.p.reciprocal();
    std::vector<Vec>    pts(m, Vec(n, 0.0));
    std::size_t         offset = 0;
    for (std::size_t l = 1; l <= nu; ++l) {
        const std::size_t block = 9 * (std::size_t{1} << (2 * l));
        if (l >= mu) {
            const std::size_t size = std::size_t{1} << (2 * l);
            const SetFamily   fam  = detail::separated_family(block, size, m, splitmix64(seed + l));
            const double      h    = std::pow(4.0, -static_cast<double>(l) * inv_p);
            for (std::uint64_t j = 0; j < m; ++j) {
                for (auto i : fam.sets[j]) pts[j][offset + i] = h;
            }
        }
        offset += block;
    }
    const double top = max_norm(pts, spec.source);
    for (Vec& x : pts) {
        for (double& v : x) v /= top;
    }
    DyadicFamily out;
    out.nu                       = nu;
    out.mu                       = mu;
    out.family.points            = std::move(pts);
    out.family.source_norm_bound = 1.0;
    out.family.separation        = min_pairwise_distance(out.family.points, NormKernel(spec.target, n));
    return out;
}

// ---------------------------------------------------------------------------
// covering upper bound

struct CoveringOptions
{
    double      delta      = 0.5;  ///< first mesh tried
    std::size_t max_points = 100'000'000;
    std::size_t bisections = 40;
};

struct CoveringResult
{
    double      radius = 0.0;
    double      delta  = 0.0; ///< mesh of the lattice that certified `radius`
    std::size_t count  = 0;   ///< boxes used
    double      shift  = 0.0; ///< lattice offset, in units of delta
    std::size_t k_used = 0;   ///< the radius is certified for 2^{k_used - 1} balls, k_used <= k
    std::string method;
};

///
/// Number of cells z + [-delta/2, delta/2]^n, z in delta (Z + shift)^n, that
/// meet B_X, or max_count + 1 once that many were found.
///
/// A cell meets B_X iff its coordinatewise smallest point (each |z_i| pulled
/// toward 0 by delta/2) lies in B_X, since ||.||_X is monotone in |x_i|.
///
inline std::size_t count_cover_cells(const LorentzParams& source, std::size_t n, double delta, double shift,
                                     std::size_t max_count)
{
    const NormKernel kernel(source, n);
    const double     half = 0.5 * delta;
    const long long  hi   = static_cast<long long>(std::floor((1.0 + half) / delta - shift)) + 1;
    const long long  lo   = -static_cast<long long>(std::floor((1.0 + half) / delta + shift)) - 1;
    std::vector<long long> c(n, lo);
    Vec                    y(n);
    std::size_t            count = 0;
    while (true) {
        for (std::size_t i = 0; i < n; ++i) {
            const double z = delta * (static_cast<double>(c[i]) + shift);
            y[i]           = std::max(0.0, std::fabs(z) - half);
        }
        std::sort(y.begin(), y.end(), std::greater<>());
        if (kernel(y) <= 1.0 + 1e-12) {
            if (++count > max_count) return count;
        }
        std::size_t i = 0;
        while (i < n && c[i] == hi) c[i++] = lo;
        if (i == n) break;
        ++c[i];
    }
    return count;
}

///
/// Certified upper bound for e_k(id: X -> Y) from box covers.
///
/// Each kept cell is a translate of (delta/2) B_inf, which lies in a
/// translate of (delta/2) phi_Y(n) B_Y because ||id: l_inf -> Y|| = phi_Y(n)
/// for a lattice norm; no quasi-triangle constant enters. The mesh is
/// bisected for the smallest delta whose cover needs at most 2^{j-1} cells,
/// for j = 1..k, with lattice shifts 0 and 1/2, and the best radius over j
/// is kept so that the bound is monotone in k. Returns nullopt if a lattice
/// would exceed opts.max_points points.
///
inline std::optional<CoveringResult> covering_upper(const EmbeddingSpec& spec, std::size_t k,
                                                    const CoveringOptions& opts = {})
{
    spec.validate();
    if (k < 1 || k > 40) throw std::invalid_argument("covering_upper: need 1 <= k <= 40");
    if (!(opts.delta > 0.0)) throw std::invalid_argument("covering_upper: delta must be > 0");
    const std::size_t n     = spec.n;
    const double      phi_y = fundamental_phi(spec.target, n).exact;
    auto              lattice_points = [&](double delta) {
        return std::pow(std::floor(2.0 * (1.0 + 0.5 * delta) / delta) + 3.0, static_cast<double>(n));
    };

    std::optional<CoveringResult> best;
    for (std::size_t j = 1; j <= k; ++j) {
        const std::size_t budget = std::size_t{1} << (j - 1);
        for (double shift : {0.0, 0.5}) {
            // width-2 cells: one (shift 0) or 2^n (shift 1/2) of them cover the cube
            if (shift != 0.0 && n < 64 && budget < (std::size_t{1} << n)) continue;
            auto ok = [&](double delta) {
                return lattice_points(delta) <= static_cast<double>(opts.max_points) &&
                       count_cover_cells(spec.source, n, delta, shift, budget) <= budget;
            };
            double hi = 2.0 * (1.0 + 1e-9);
            if (!ok(hi)) continue;
            double lo = std::min(opts.delta, 0.5 * hi);
            while (lo > 1e-6 && ok(lo)) {
                hi = lo;
                lo *= 0.5;
            }
            for (std::size_t it = 0; it < opts.bisections; ++it) {
                const double mid = std::sqrt(lo * hi);
                (ok(mid) ? hi : lo) = mid;
            }
            const double radius = 0.5 * hi * phi_y;
            if (!best || radius < best->radius) {
                best = CoveringResult{radius, hi, count_cover_cells(spec.source, n, hi, shift, budget), shift, j,
                                      "box-cover"};
            }
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// packing lower bound

struct PackingOptions
{
    std::size_t   candidates   = 20000; ///< random pool size for the farthest-point pass (capped at 2e5)
    std::uint64_t seed         = 0;
    std::size_t   quasi_trials = 20000; ///< samples for the target constant when Y is not a norm
    std::size_t   refine_steps = 400;   ///< local improvement sweeps on the best configuration
};

struct PackingResult
{
    double           bound      = 0.0; ///< separation / (2 C_Y); 0 if no configuration was found
    double           separation = 0.0;
    double           c_target   = 1.0; ///< 1 for norms, else 1.1 x measured constant
    std::vector<Vec> points;
    std::string      method;
    std::string      diagnostic;
};

namespace detail {

class PackingWorkspace
{
public:
    PackingWorkspace(const EmbeddingSpec& spec) : src_(spec.source, spec.n), tgt_(spec.target, spec.n), buf_(spec.n)
    {
    }

    double source_norm(const Vec& x) { return norm(src_, x); }

    double distance(const Vec& a, const Vec& b)
    {
        for (std::size_t i = 0; i < a.size(); ++i) buf_[i] = std::fabs(a[i] - b[i]);
        std::sort(buf_.begin(), buf_.end(), std::greater<>());
        return tgt_(buf_);
    }

private:
    double norm(const NormKernel& k, const Vec& x)
    {
        for (std::size_t i = 0; i < x.size(); ++i) buf_[i] = std::fabs(x[i]);
        std::sort(buf_.begin(), buf_.end(), std::greater<>());
        return k(buf_);
    }

    NormKernel src_, tgt_;
    Vec        buf_;
};

// Farthest-point selection of m points from pool; returns indices.
inline std::vector<std::size_t> farthest_points(const std::vector<Vec>& pool, std::size_t m, PackingWorkspace& ws)
{
    std::vector<std::size_t> chosen;
    if (pool.empty()) return chosen;
    std::vector<double> dist(pool.size(), std::numeric_limits<double>::infinity());
    std::size_t         next = 0;
    while (chosen.size() < std::min(m, pool.size())) {
        chosen.push_back(next);
        double far = -1.0;
        for (std::size_t i = 0; i < pool.size(); ++i) {
            dist[i] = std::min(dist[i], ws.distance(pool[i], pool[next]));
            if (dist[i] > far) {
                far  = dist[i];
                next = i;
            }
        }
        if (far <= 0.0) break;
    }
    return chosen;
}

inline double min_distance(const std::vector<Vec>& pts, PackingWorkspace& ws)
{
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) best = std::min(best, ws.distance(pts[i], pts[j]));
    }
    return best;
}

// Lattice vectors B c + offset (c integer) with ||.||_X <= radius, with their norms.
// Lattice points of X-norm <= radius, or nullopt when the coefficient box
// holds more than max_box points.
inline std::optional<std::vector<std::pair<double, Vec>>> lattice_points_within(const Eigen::MatrixXd& basis,
                                                                                const Eigen::VectorXd& offset,
                                                                                double radius, PackingWorkspace& ws,
                                                                                double max_box = 4194304.0)
{
    const std::size_t     n   = static_cast<std::size_t>(basis.rows());
    const Eigen::MatrixXd inv = basis.inverse();
    // ||y||_inf <= ||y||_X, so |c_i| <= sum_j |inv_ij| (radius + |offset_j|)
    std::vector<long long> bound(n);
    for (std::size_t i = 0; i < n; ++i) {
        double b = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            b += std::fabs(inv(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))) *
                 (radius + std::fabs(offset(static_cast<Eigen::Index>(j))));
        }
        bound[i] = static_cast<long long>(std::ceil(b));
    }
    double box = 1.0;
    for (auto b : bound) box *= 2.0 * static_cast<double>(b) + 1.0;
    if (box > max_box) return std::nullopt;
    std::vector<std::pair<double, Vec>> out;
    std::vector<long long>              c(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = -bound[i];
    Vec x(n);
    while (true) {
        bool in_cube = true;
        for (std::size_t i = 0; i < n; ++i) {
            double v = offset(static_cast<Eigen::Index>(i));
            for (std::size_t j = 0; j < n; ++j) {
                v += basis(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * static_cast<double>(c[j]);
            }
            x[i] = v;
            if (std::fabs(v) > radius) in_cube = false;
        }
        if (in_cube) {
            const double r = ws.source_norm(x);
            if (r <= radius) out.emplace_back(r, x);
        }
        std::size_t i = 0;
        while (i < n && c[i] == bound[i]) {
            c[i] = -bound[i];
            ++i;
        }
        if (i == n) break;
        ++c[i];
    }
    return out;
}

inline std::vector<Eigen::MatrixXd> packing_bases(std::size_t n, std::uint64_t seed)
{
    std::vector<Eigen::MatrixXd> out;
    out.push_back(Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)));
    if (n >= 2) {
        // checkerboard lattice D_n: e_1 + e_2, e_i - e_{i-1}
        Eigen::MatrixXd d = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        d(0, 0) = 1.0;
        d(1, 0) = 1.0;
        for (std::size_t i = 1; i < n; ++i) {
            d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i))     = 1.0;
            d(static_cast<Eigen::Index>(i - 1), static_cast<Eigen::Index>(i)) = -1.0;
        }
        out.push_back(d);
    }
    if (n == 2) {
        Eigen::MatrixXd h(2, 2);
        h << 1.0, 0.5, 0.0, std::sqrt(3.0) / 2.0;
        out.push_back(h);
        Eigen::MatrixXd h2(2, 2);
        h2 << std::sqrt(3.0) / 2.0, 0.0, 0.5, 1.0;
        out.push_back(h2);
    }
    if (n == 3) {
        Eigen::MatrixXd bcc(3, 3);
        bcc << 1.0, 0.0, 0.5, 0.0, 1.0, 0.5, 0.0, 0.0, 0.5;
        out.push_back(bcc);
    }
    auto eng = make_engine(seed, 0x1a77);
    std::normal_distribution<double> gauss;
    for (int r = 0; r < 24; ++r) {
        Eigen::MatrixXd b(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        for (Eigen::Index i = 0; i < b.rows(); ++i) {
            for (Eigen::Index j = 0; j < b.cols(); ++j) b(i, j) = gauss(eng);
        }
        if (std::fabs(b.determinant()) < 1e-3) continue;
        out.push_back(b / std::pow(std::fabs(b.determinant()), 1.0 / static_cast<double>(n)));
    }
    return out;
}

// Scales the lattice so that exactly the m X-shortest points (plus ties) land
// in B_X, then thins them to m points by farthest-point selection.
inline std::vector<Vec> best_lattice_subset(const Eigen::MatrixXd& basis, const Eigen::VectorXd& offset, std::size_t m,
                                            PackingWorkspace& ws)
{
    const double nd = static_cast<double>(basis.rows());
    // radius at which a cross-polytope-sized ball would hold about m points
    double radius = std::pow(static_cast<double>(m) * std::fabs(basis.determinant()) * std::tgamma(nd + 1.0), 1.0 / nd) / 2.0;
    std::vector<std::pair<double, Vec>> pts;
    for (int grow = 0; grow < 40; ++grow) {
        auto found = lattice_points_within(basis, offset, radius, ws);
        if (!found) return {};
        pts = std::move(*found);
        if (pts.size() >= m) break;
        radius *= 1.25;
    }
    if (pts.size() < m) return {};
    std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    const double r_m = pts[m - 1].first;
    if (!(r_m > 0.0)) return {};
    std::vector<Vec> kept;
    for (const auto& [r, x] : pts) {
        if (r > r_m) break;
        Vec y(x);
        for (double& v : y) v /= r_m;
        kept.push_back(std::move(y));
    }
    if (kept.size() > m) {
        const auto       idx = farthest_points(kept, m, ws);
        std::vector<Vec> sub;
        for (auto i : idx) sub.push_back(kept[i]);
        kept = std::move(sub);
    }
    return kept;
}

inline Vec random_ball_point(std::mt19937_64& eng, std::size_t n, PackingWorkspace& ws, bool boundary)
{
    std::normal_distribution<double> gauss;
    Vec                              x(n);
    double                           nx = 0.0;
    while (!(nx > 0.0)) {
        for (double& v : x) v = gauss(eng);
        nx = ws.source_norm(x);
    }
    const double r = boundary ? 1.0 : std::pow(uniform01(eng), 1.0 / static_cast<double>(n));
    for (double& v : x) v *= r / nx;
    return x;
}

// Pull points back inside B_X after rounding; radial scaling keeps direction.
inline void clamp_into_ball(Vec& x, PackingWorkspace& ws)
{
    const double nx = ws.source_norm(x);
    if (nx > 1.0) {
        for (double& v : x) v /= nx;
        // a second pass absorbs the rounding of the division
        while (ws.source_norm(x) > 1.0) {
            for (double& v : x) v *= 1.0 - 1e-15;
        }
    }
}

// Moves one endpoint of a closest pair away from the other and keeps the move
// if the global minimum distance does not drop. Returns the final minimum.
inline double refine_packing(std::vector<Vec>& pts, std::size_t steps, std::mt19937_64& eng, PackingWorkspace& ws)
{
    const std::size_t m = pts.size();
    if (m < 2) return std::numeric_limits<double>::infinity();
    std::vector<double> nearest(m, std::numeric_limits<double>::infinity());
    std::vector<std::size_t> partner(m, 0);
    auto recompute = [&](std::size_t i) {
        nearest[i] = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < m; ++j) {
            if (j == i) continue;
            const double d = ws.distance(pts[i], pts[j]);
            if (d < nearest[i]) {
                nearest[i] = d;
                partner[i] = j;
            }
        }
    };
    for (std::size_t i = 0; i < m; ++i) recompute(i);
    double step = 0.25 * *std::min_element(nearest.begin(), nearest.end());
    for (std::size_t it = 0; it < steps && step > 1e-9; ++it) {
        const auto   worst = static_cast<std::size_t>(std::min_element(nearest.begin(), nearest.end()) - nearest.begin());
        const double cur   = nearest[worst];
        bool         improved = false;
        for (std::size_t who : {worst, partner[worst]}) {
            const std::size_t other = who == worst ? partner[worst] : worst;
            for (int attempt = 0; attempt < 4 && !improved; ++attempt) {
                Vec trial = pts[who];
                for (std::size_t c = 0; c < trial.size(); ++c) {
                    const double away = trial[c] - pts[other][c];
                    trial[c] += step * (away / std::max(cur, 1e-300) + 0.3 * uniform_symmetric(eng));
                }
                clamp_into_ball(trial, ws);
                double mind = std::numeric_limits<double>::infinity();
                for (std::size_t j = 0; j < m && mind > cur; ++j) {
                    if (j != who) mind = std::min(mind, ws.distance(trial, pts[j]));
                }
                if (mind > cur) {
                    pts[who] = trial;
                    for (std::size_t j = 0; j < m; ++j) recompute(j);
                    improved = true;
                }
            }
            if (improved) break;
        }
        if (!improved) step *= 0.5;
    }
    return *std::min_element(nearest.begin(), nearest.end());
}

} // namespace detail

///
/// Certified lower bound for e_k(id: X -> Y): if M = 2^{k-1} + 1 points of
/// B_X are pairwise Y-separated by delta, any cover by 2^{k-1} balls puts two
/// of them in one ball, so e_k >= delta / (2 C_Y).
///
/// Configurations tried: antipodal pairs, lattice packings (cubic,
/// checkerboard, hexagonal or body-centred, random bases; several offsets)
/// at the largest admissible scale, and farthest-point selection from a pool
/// of ball points; the best one is then locally improved. Every point is
/// re-checked for membership and the separation is recomputed over all pairs.
///
inline PackingResult packing_lower(const EmbeddingSpec& spec, std::size_t k, const PackingOptions& opts = {})
{
    spec.validate();
    if (k < 1 || k > 16) throw std::invalid_argument("packing_lower: need 1 <= k <= 16");
    const std::size_t n = spec.n;
    const std::size_t m = (std::size_t{1} << (k - 1)) + 1;
    detail::PackingWorkspace ws(spec);

    PackingResult out;
    out.c_target = spec.target.is_norm()
                       ? 1.0
                       : 1.1 * quasi_constant_estimate(spec.target, n, opts.quasi_trials, opts.seed).c_quasi;

    std::vector<Vec> best_pts;
    double           best_sep = 0.0;
    std::string      best_method;
    auto             consider = [&](std::vector<Vec> pts, const std::string& method) {
        if (pts.size() < m) return;
        pts.resize(m);
        for (Vec& x : pts) detail::clamp_into_ball(x, ws);
        const double sep = detail::min_distance(pts, ws);
        if (sep > best_sep) {
            best_sep    = sep;
            best_pts    = std::move(pts);
            best_method = method;
        }
    };

    if (m == 2) {
        // +-w for the best unit vector w found by the operator-norm search
        const auto r = embedding_norm_numeric(spec, SearchOptions{4, 2000, 1e-9, opts.seed});
        Vec        w = *r.witness;
        Vec        neg(w);
        for (double& v : neg) v = -v;
        consider({w, neg}, "antipodal");
    }

    auto eng = make_engine(opts.seed, 0x9ac4);
    for (const auto& basis : detail::packing_bases(n, opts.seed)) {
        for (int o = 0; o < 4; ++o) {
            Eigen::VectorXd offset = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
            if (o == 1) offset.setConstant(0.5);
            if (o >= 2) {
                for (Eigen::Index i = 0; i < offset.size(); ++i) offset(i) = uniform01(eng);
            }
            consider(detail::best_lattice_subset(basis, basis * offset, m, ws), "lattice");
        }
    }

    {
        std::vector<Vec> pool;
        const std::size_t size = std::min<std::size_t>(std::max(opts.candidates, 4 * m), 200'000);
        for (std::size_t i = 0; i < n; ++i) {
            for (double sgn : {1.0, -1.0}) {
                Vec e(n, 0.0);
                e[i] = sgn;
                pool.push_back(std::move(e));
            }
        }
        while (pool.size() < size) pool.push_back(detail::random_ball_point(eng, n, ws, pool.size() % 2 == 0));
        const auto       idx = detail::farthest_points(pool, m, ws);
        std::vector<Vec> pts;
        for (auto i : idx) pts.push_back(pool[i]);
        consider(std::move(pts), "farthest-point");
    }

    if (best_pts.empty()) {
        out.diagnostic = "no configuration of " + std::to_string(m) + " points found";
        return out;
    }
    if (opts.refine_steps > 0 && m > 2) {
        std::vector<Vec> refined = best_pts;
        detail::refine_packing(refined, opts.refine_steps, eng, ws);
        const std::string method = best_method + "+refined";
        consider(std::move(refined), method);
    }
    // final certificate: membership and all pairwise distances, recomputed
    for (const Vec& x : best_pts) {
        if (ws.source_norm(x) > 1.0) throw std::logic_error("packing_lower: point outside the source ball");
    }
    out.separation = detail::min_distance(best_pts, ws);
    out.bound      = out.separation / (2.0 * out.c_target);
    out.points     = std::move(best_pts);
    out.method     = best_method;
    return out;
}

} // namespace lorentz

#endif
