#ifndef LORENTZ_VERIFY_HPP
#define LORENTZ_VERIFY_HPP

///
/// \file verify.hpp
///
/// The acceptance suites, one per numbered criterion. Reports carry measured
/// constants and counts only (never timings), so that two runs with the same
/// seed print the same bytes.
///

#include "covnum.hpp"
#include "entropy.hpp"
#include "fixtures.hpp"
#include "interp.hpp"
#include "opnorm.hpp"
#include "seqcore.hpp"
#include "sparse.hpp"
#include "volume.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace lorentz {

struct Measured
{
    std::string name;
    double      value = 0.0;
};

struct CriterionReport
{
    int                      id = 0;
    std::string              title;
    bool                     passed   = true;
    std::size_t              checks   = 0;
    std::size_t              failures = 0;
    std::vector<Measured>    measured;
    std::vector<std::string> notes; ///< the first few failed checks

    CriterionReport(int id_, std::string title_) : id(id_), title(std::move(title_)) {}

    void check(bool ok, const std::string& what)
    {
        ++checks;
        if (ok) return;
        passed = false;
        if (++failures <= 5) notes.push_back(what);
    }

    void record(std::string name, double value) { measured.push_back({std::move(name), value}); }
};

struct VerifyOptions
{
    std::uint64_t seed = 42;
};

inline constexpr int criterion_count = 10; ///< criterion 11 compares two runs of the CLI

namespace detail {

inline LorentzParams lp(double p, double u) { return {Exponent(p), Exponent(u)}; }

inline constexpr double inf = std::numeric_limits<double>::infinity();

inline std::string fmt(double v)
{
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

// Test vectors: Gaussian, small integers (ties and zeros), signed power laws
// in random order, and sparse spikes.
inline Vec random_test_vector(std::mt19937_64& eng, std::size_t n)
{
    Vec x(n, 0.0);
    switch (uniform_below(eng, 4)) {
    case 0: {
        std::normal_distribution<double> g;
        for (double& v : x) v = g(eng);
        break;
    }
    case 1:
        for (double& v : x) v = static_cast<double>(uniform_below(eng, 7)) - 3.0;
        break;
    case 2: {
        const double a = 2.0 * uniform01(eng) + 0.05;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = std::pow(static_cast<double>(i + 1), -a) * (uniform01(eng) < 0.5 ? -1.0 : 1.0);
        }
        std::shuffle(x.begin(), x.end(), eng);
        break;
    }
    default: {
        const std::size_t m = 1 + uniform_below(eng, std::max<std::size_t>(1, n / 4));
        for (std::size_t j = 0; j < m; ++j) x[uniform_below(eng, n)] = uniform_symmetric(eng);
        break;
    }
    }
    return x;
}

struct Cell
{
    const char*   name;
    EmbeddingSpec spec;
};

// One representative embedding per case cell, all targets normed.
inline std::vector<Cell> case_cells(std::size_t n)
{
    return {
        {"0", {lp(1, 2), lp(2, 1), n}},         {"I", {lp(inf, 2), lp(1, 1), n}},
        {"II", {lp(1, 1), lp(inf, 1), n}},      {"III.1", {lp(2, 1), lp(2, 2), n}},
        {"III.2", {lp(2, 2), lp(2, 1), n}},     {"IV.1", {lp(inf, 2), lp(inf, 1), n}},
        {"IV.2", {lp(inf, 1), lp(inf, 2), n}},
    };
}

} // namespace detail

/// 1. Exact operator norm for p = q, u > v against H_n^{1/v - 1/u}.
inline CriterionReport verify_exact_opnorm(const VerifyOptions&)
{
    CriterionReport rep{1, "exact operator norm"};
    double          worst = 0.0;
    for (double p : {0.5, 1.0, 2.0, detail::inf}) {
        for (auto [u, v] : {std::pair{2.0, 1.0}, std::pair{detail::inf, 1.0}, std::pair{detail::inf, 2.0}}) {
            for (std::size_t n = 1; n <= 100; ++n) {
                const EmbeddingSpec spec{detail::lp(p, u), detail::lp(p, v), n};
                const double        want = std::pow(harmonic(n), 1.0 / v - (std::isinf(u) ? 0.0 : 1.0 / u));
                const double        got  = embedding_norm_numeric(spec).value;
                const double        rel  = std::fabs(got - want) / want;
                worst                    = std::max(worst, rel);
                rep.check(rel <= 1e-6, spec.to_string() + " rel=" + detail::fmt(rel));
            }
        }
    }
    rep.record("worst_relative_error", worst);
    return rep;
}

/// 2. sigma_s(x) in l_inf equals x*_{s+1}.
inline CriterionReport verify_sigma_identity(const VerifyOptions& o)
{
    CriterionReport     rep{2, "sigma_s identity"};
    auto                eng = make_engine(o.seed, 2);
    const LorentzParams linf{Exponent::infinity(), Exponent::infinity()};
    for (int t = 0; t < 10'000; ++t) {
        const std::size_t n = 1 + uniform_below(eng, 128);
        const Vec         x = detail::random_test_vector(eng, n);
        const std::size_t s = uniform_below(eng, n);
        const double      want = rearrange(x)[s];
        rep.check(sigma_s(x, s, linf) == want, "n=" + std::to_string(n) + " s=" + std::to_string(s));
    }
    return rep;
}

/// 3. sigma_s <= trunc_u(., s) and trunc_u(., 2s) <= 2 C_Y sigma_s.
inline CriterionReport verify_sigma_u(const VerifyOptions& o)
{
    CriterionReport rep{3, "sigma <= u and doubling"};
    using detail::inf;
    using detail::lp;
    const std::vector<LorentzParams> targets{lp(2, 1), lp(2, 2), lp(2, inf), lp(4, 2), lp(1, 2),
                                             lp(0.5, 1), lp(0.5, 0.5), lp(inf, 1), lp(inf, 2)};
    std::uint64_t                    stream = 3;
    for (const auto& y : targets) {
        const double c_y   = quasi_constant_estimate(y, 128, 10'000, o.seed).c_quasi;
        auto         eng   = make_engine(o.seed, stream++);
        double       worst = 0.0;
        for (int t = 0; t < 10'000; ++t) {
            const std::size_t n = 3 + uniform_below(eng, 126);
            const Vec         x = detail::random_test_vector(eng, n);
            const std::size_t s = 1 + uniform_below(eng, (n - 1) / 2);
            const double      sig = sigma_s(x, s, y);
            const std::string at  = "Y=" + y.to_string() + " n=" + std::to_string(n) + " s=" + std::to_string(s);
            rep.check(sig <= trunc_u(x, s, y), "sigma > u at " + at);
            const double u2 = trunc_u(x, 2 * s, y);
            // one part in 1e12 absorbs rounding when the sampled constant is attained exactly
            rep.check(u2 <= 2.0 * c_y * sig * (1.0 + 1e-12), "doubling at " + at);
            if (sig > 0.0) worst = std::max(worst, u2 / sig);
        }
        rep.record("C_Y" + y.to_string(), c_y);
        rep.record("max_u2s_over_sigma" + y.to_string(), worst);
    }
    return rep;
}

/// 4. Monte Carlo volumes against the Gamma formula, and the volume band.
inline CriterionReport verify_volume(const VerifyOptions& o)
{
    CriterionReport        rep{4, "volume"};
    constexpr std::uint64_t samples = 1'000'000;
    double                 worst_z  = 0.0;
    for (double p : {0.5, 1.0, 2.0, 4.0}) {
        for (std::size_t n = 2; n <= 8; ++n) {
            const McEstimate est   = lorentz_ball_volume_mc(detail::lp(p, p), n, samples, o.seed);
            const double     exact = lp_ball_volume_exact(p, n);
            const double     dev   = std::fabs(est.mean - exact);
            rep.check(dev <= 3.0 * est.std_error + 1e-12 * exact,
                      "l_" + detail::fmt(p) + " n=" + std::to_string(n) + " mc=" + detail::fmt(est.mean));
            if (est.std_error > 0.0) worst_z = std::max(worst_z, dev / est.std_error);
        }
    }
    rep.record("worst_z", worst_z);
    for (const auto& cell : fixtures::volume_band_cells) {
        const LorentzParams b = detail::lp(cell.p, cell.u);
        double              lo = detail::inf, hi = 0.0;
        for (std::size_t n = 2; n <= 10; ++n) {
            const McEstimate est = lorentz_ball_volume_mc(b, n, samples, o.seed);
            rep.check(est.hits > 0, "no hits for " + b.to_string() + " n=" + std::to_string(n));
            if (est.hits == 0) continue;
            const double v = std::pow(est.mean, 1.0 / static_cast<double>(n)) / volume_envelope(b, n);
            lo             = std::min(lo, v);
            hi             = std::max(hi, v);
        }
        rep.check(hi <= 4.0 * lo, "band of " + b.to_string() + " is " + detail::fmt(hi / lo));
        rep.record("band" + b.to_string(), hi / lo);
    }
    return rep;
}

/// 5. vol <= pack <= cover on every case cell, and one constant per cell
/// relating the bracket to the envelope.
inline CriterionReport verify_bracket_sandwich(const VerifyOptions& o)
{
    CriterionReport rep{5, "bracket sandwich"};
    for (const auto& proto : detail::case_cells(2)) {
        double c_cell = 1.0;
        for (std::size_t n = 2; n <= 3; ++n) {
            const EmbeddingSpec spec{proto.spec.source, proto.spec.target, n};
            const RvValue       r = rv(spec.source, spec.target, n, RvMethod::exact_when_available, 1'000'000, o.seed);
            for (std::size_t k = 1; k <= 3 * n; ++k) {
                const std::string at   = std::string(proto.name) + " n=" + std::to_string(n) + " k=" + std::to_string(k);
                const double      vol  = entropy_vol_lower(k, n, r.value);
                const double      vtol = r.std_error > 0.0 ? 3.0 * entropy_vol_lower(k, n, r.std_error) : 0.0;
                const auto        pack = packing_lower(spec, k, PackingOptions{20000, o.seed});
                const auto        cov  = covering_upper(spec, k);
                rep.check(cov.has_value(), "no covering at " + at);
                if (!cov) continue;
                rep.check(vol - vtol <= pack.bound,
                          "vol " + detail::fmt(vol) + " > pack " + detail::fmt(pack.bound) + " at " + at);
                rep.check(pack.bound <= cov->radius, "pack > cover at " + at);
                const double env   = envelope_lorentz(spec, k).value;
                const double lower = std::max(vol - vtol, pack.bound);
                c_cell             = std::max({c_cell, env / lower, cov->radius / env});
            }
        }
        rep.check(c_cell <= 64.0, std::string("C of cell ") + proto.name + " is " + detail::fmt(c_cell));
        rep.record(std::string("C_") + proto.name, c_cell);
    }
    return rep;
}

/// 6. Adjacent branches of the envelope at the regime boundaries.
inline CriterionReport verify_junctions(const VerifyOptions&)
{
    CriterionReport rep{6, "envelope junctions"};
    double          worst = 1.0;
    for (std::size_t n : {16, 256, 4096}) {
        for (const auto& cell : detail::case_cells(n)) {
            const auto k_small = static_cast<std::size_t>(std::ceil(std::log1p(static_cast<double>(n))));
            const std::pair<std::size_t, std::pair<Regime, Regime>> joints[] = {
                {k_small, {Regime::small_k, Regime::mid_k}}, {n, {Regime::mid_k, Regime::large_k}}};
            for (const auto& [k, regs] : joints) {
                const double a = envelope_lorentz_branch(cell.spec, k, regs.first);
                const double b = envelope_lorentz_branch(cell.spec, k, regs.second);
                const double f = std::max(a / b, b / a);
                worst          = std::max(worst, f);
                rep.check(f <= 8.0, std::string(cell.name) + " n=" + std::to_string(n) + " k=" + std::to_string(k) +
                                        " jump " + detail::fmt(f));
            }
        }
    }
    rep.record("worst_jump", worst);
    return rep;
}

/// 7. The truncation route against the direct envelope.
inline CriterionReport verify_en_reduction(const VerifyOptions&)
{
    CriterionReport rep{7, "EN reduction"};
    double          lo = detail::inf, hi = 0.0;
    for (std::size_t n : {64, 512}) {
        for (const auto& cell : detail::case_cells(n)) {
            const auto k0 = static_cast<std::size_t>(std::ceil(std::log(static_cast<double>(n))));
            for (std::size_t k = k0; k <= n / 2 - 1; ++k) {
                const auto via = envelope_via_en(cell.spec, k);
                if (!via) continue;
                const double r = via->value / envelope_lorentz(cell.spec, k).value;
                lo             = std::min(lo, r);
                hi             = std::max(hi, r);
                rep.check(r >= 0.125 && r <= 8.0, std::string(cell.name) + " n=" + std::to_string(n) +
                                                      " k=" + std::to_string(k) + " ratio " + detail::fmt(r));
            }
        }
    }
    rep.record("min_ratio", lo);
    rep.record("max_ratio", hi);
    return rep;
}

/// 8. Set families with bounded pairwise intersections.
inline CriterionReport verify_combinatorial(const VerifyOptions& o)
{
    CriterionReport rep{8, "combinatorial family"};
    for (auto [n, s] : {std::pair<std::size_t, std::size_t>{64, 4}, {256, 6}, {1024, 8}}) {
        const SetFamily      fam = combinatorial_family(n, s, o.seed);
        const SetFamilyCheck chk = verify_set_family(fam);
        const std::string    at  = "n=" + std::to_string(n) + " s=" + std::to_string(s);
        rep.check(chk.size_ok, "too few sets at " + at);
        rep.check(chk.cardinality_ok, "bad set sizes at " + at);
        rep.check(chk.intersection_ok, "intersection too large at " + at);
        rep.record("M_" + at, static_cast<double>(fam.sets.size()));
        rep.record("required_" + at, static_cast<double>(combinatorial_required(n, s)));
        rep.record("max_intersection_" + at, static_cast<double>(chk.max_intersection));
    }
    return rep;
}

/// 9. Numeric K-functional against the closed form, and the reiteration band.
inline CriterionReport verify_k_functional(const VerifyOptions& o)
{
    CriterionReport rep{9, "K-functional"};
    const LorentzParams l1 = detail::lp(1, 1), linf{Exponent::infinity(), Exponent::infinity()};
    auto                eng   = make_engine(o.seed, 9);
    double              worst = 0.0;
    for (int t = 0; t < 1000; ++t) {
        const std::size_t n = 1 + uniform_below(eng, 32);
        const Vec         x = detail::random_test_vector(eng, n);
        const double      s = std::exp(std::log(4.0 * static_cast<double>(n)) * (2.0 * uniform01(eng) - 1.0));
        const double      want = k_functional_l1_linf(x, s);
        const double      got  = k_functional_numeric(x, s, InterpPair{l1, linf, n}).value;
        const double      err  = std::fabs(got - want) / std::max(want, 1e-300);
        worst                  = std::max(worst, want > 0.0 ? err : std::fabs(got));
        rep.check(want > 0.0 ? err <= 1e-6 : got == 0.0, "n=" + std::to_string(n) + " t=" + detail::fmt(s));
    }
    rep.record("worst_relative_error", worst);
    std::uint64_t stream = 90;
    for (const auto& band : fixtures::reiteration_bands) {
        const LorentzParams target = detail::lp(band.p, band.u);
        auto                e2     = make_engine(o.seed, stream++);
        double              lo = detail::inf, hi = 0.0;
        for (int t = 0; t < 1000; ++t) {
            const std::size_t n = 1 + uniform_below(e2, 64);
            const Vec         x = detail::random_test_vector(e2, n);
            const double      d = lorentz_norm(x, target);
            if (d == 0.0) continue;
            const double r = theta_u_norm(x, 1.0 - 1.0 / band.p, target.u, InterpPair{l1, linf, n}) / d;
            lo             = std::min(lo, r);
            hi             = std::max(hi, r);
        }
        rep.check(lo >= band.lo && hi <= band.hi, "reiteration band " + target.to_string() + " [" + detail::fmt(lo) +
                                                      ", " + detail::fmt(hi) + "]");
        rep.record("reiteration_min" + target.to_string(), lo);
        rep.record("reiteration_max" + target.to_string(), hi);
    }
    return rep;
}

/// 10. Tail sums against their envelopes. The sum grows with n and the
/// envelope does not, so a geometric n-grid ending at 4096 reaches the
/// largest ratio.
inline CriterionReport verify_tail_sums(const VerifyOptions&)
{
    CriterionReport rep{10, "tail sums"};
    for (const auto& [variant, lambdas, bound] :
         {std::tuple{TailVariant::power, std::array{0.5, 1.0, 2.0}, fixtures::tail_power_constant},
          std::tuple{TailVariant::log, std::array{1.5, 2.0, 3.0}, fixtures::tail_log_constant}}) {
        double worst = 0.0;
        for (double lambda : lambdas) {
            for (std::size_t s = 2; s <= 64; ++s) {
                std::vector<std::size_t> ns;
                for (std::size_t n = 2 * s; n < 4096; n = std::max(n + 1, n + n / 16)) ns.push_back(n);
                ns.push_back(4096);
                const double env = tail_bound(s, lambda, variant);
                for (std::size_t n : ns) {
                    const double r = tail_sum(n, s, lambda, variant).value / env;
                    worst          = std::max(worst, r);
                    rep.check(r <= bound, std::string(variant == TailVariant::power ? "power" : "log") +
                                              " s=" + std::to_string(s) + " n=" + std::to_string(n) +
                                              " lambda=" + detail::fmt(lambda) + " ratio " + detail::fmt(r));
                }
            }
        }
        rep.record(variant == TailVariant::power ? "max_ratio_power" : "max_ratio_log", worst);
    }
    return rep;
}

inline CriterionReport verify_criterion(int id, const VerifyOptions& o = {})
{
    switch (id) {
    case 1: return verify_exact_opnorm(o);
    case 2: return verify_sigma_identity(o);
    case 3: return verify_sigma_u(o);
    case 4: return verify_volume(o);
    case 5: return verify_bracket_sandwich(o);
    case 6: return verify_junctions(o);
    case 7: return verify_en_reduction(o);
    case 8: return verify_combinatorial(o);
    case 9: return verify_k_functional(o);
    case 10: return verify_tail_sums(o);
    default: throw std::invalid_argument("verify: no criterion " + std::to_string(id));
    }
}

/// "all", a criterion number, or one of the names opnorm, sigma, sigma-u,
/// volume, bracket, junction, en, family, kfunc, tail.
inline std::vector<int> suite_members(const std::string& suite)
{
    static const std::pair<const char*, int> names[] = {
        {"opnorm", 1}, {"sigma", 2},  {"sigma-u", 3}, {"volume", 4}, {"bracket", 5},
        {"junction", 6}, {"en", 7}, {"family", 8},    {"kfunc", 9},  {"tail", 10},
    };
    if (suite == "all") {
        std::vector<int> all(criterion_count);
        std::iota(all.begin(), all.end(), 1);
        return all;
    }
    for (const auto& [name, id] : names) {
        if (suite == name) return {id};
    }
    int        id  = 0;
    const auto res = std::from_chars(suite.data(), suite.data() + suite.size(), id);
    if (res.ec == std::errc{} && res.ptr == suite.data() + suite.size() && id >= 1 && id <= criterion_count) {
        return {id};
    }
    throw std::invalid_argument("verify: unknown suite '" + suite + "'");
}

} // namespace lorentz

#endif
