#ifndef LORENTZ_FIXTURES_HPP
#define LORENTZ_FIXTURES_HPP

///
/// \file fixtures.hpp
///
/// Measured constants. Each was computed once with the stated procedure and
/// frozen; bands are rounded outward. They are empirical, not sharp.
///

#include <array>
#include <limits>

namespace lorentz::fixtures {

inline constexpr double inf = std::numeric_limits<double>::infinity();

struct ParamCell
{
    double p;
    double u;
};

struct Band
{
    double p;
    double u;
    double lo;
    double hi;
};

/// sup over the unit ball of x*_i / xstar_envelope(i) for i <= 256, that is
/// max_i 1 / (phi(i) xstar_envelope(i)), rounded up in the 4th decimal.
inline constexpr std::array<Band, 7> xstar_constants{{
    {2, 1, 0.0, 1.0},
    {2, 2, 0.0, 1.0},
    {2, inf, 0.0, 1.0},
    {1, 2, 0.0, 1.4115},
    {0.5, 1, 0.0, 1.9923},
    {inf, 1, 0.0, 0.9061},
    {inf, 2, 0.0, 0.9519},
}};

struct OrderingCell
{
    double p;
    double u;
    double v;
    double c; ///< sup ||x||_{p,v} / ||x||_{p,u} at n = 256
};

/// Ordering constants for u <= v from the monotone search at n = 256.
inline constexpr std::array<OrderingCell, 6> ordering_constants{{
    {2, 1, 2, 1.0}, {2, 2, inf, 1.0}, {2, 1, inf, 1.0}, {1, 0.5, 1, 1.0}, {inf, 1, 2, 1.0}, {4, 2, 4, 1.0},
}};

struct SpecBand
{
    double p, u, q, v;
    double lo, hi;
};

/// embedding_norm_numeric / embedding_norm_envelope over n = 4, 8, ..., 256.
inline constexpr std::array<SpecBand, 8> opnorm_bands{{
    {2, 1, 1, 1, 0.518, 0.726},
    {1, 2, 2, 1, 1.181, 1.294},
    {inf, 2, 2, 2, 0.870, 0.962},
    {1, 1, inf, 2, 0.990, 1.010},
    {2, 2, 2, 1, 1.040, 1.150},
    {2, 1, 2, 2, 0.990, 1.010},
    {inf, 1, inf, 2, 0.990, 1.010},
    {inf, 2, inf, 1, 1.040, 1.150},
}};

struct SupCell
{
    double p, u, q, v;
    double lo, hi;   ///< u_sup numeric / envelope
    double doubling; ///< min u_sup(2s) / u_sup(s), numeric
    double sterm;    ///< max sigma_sup / sterm_bound, numeric, n <= 1024 and s <= n/2
};

/// Truncation suprema over n in {64, 128, 256}, s in {2, 4, 8, 16, 32}; the
/// sterm column over n in {64, ..., 1024} with s = 1, 2, 4, 7, 11, ... up to n/2.
inline constexpr std::array<SupCell, 3> sup_cells{{
    {1, 1, inf, 1, 1.149, 1.380, 0.578, 0.729},
    {2, 2, 2, 1, 1.107, 1.872, 0.946, 1.117},
    {inf, 1, inf, 2, 0.847, 0.938, 0.840, 0.877},
}};

/// Volume band cells: (p, u) with enough hit-or-miss hits at n <= 10 and 1e6 samples.
inline constexpr std::array<ParamCell, 8> volume_band_cells{{
    {2, 1}, {2, inf}, {1, 2}, {1, inf}, {4, 2}, {inf, 1}, {inf, 2}, {2, 2},
}};

/// theta_u_norm / ||x||_{p,u} for the couple (l_1, l_inf), theta = 1 - 1/p;
/// min and max over 10^4 test vectors (seed 7, n <= 64), widened by about 1%.
inline constexpr std::array<Band, 4> reiteration_bands{{
    {2, 1, 2.20, 4.05},
    {2, 2, 1.40, 1.78},
    {2, inf, 0.98, 1.83},
    {4, 2, 1.23, 1.71},
}};

/// Largest tail_sum / tail_bound on s in [2, 64], n in [2s, 4096].
inline constexpr double tail_power_constant = 2.50;
inline constexpr double tail_log_constant   = 2.42;

} // namespace lorentz::fixtures

#endif
