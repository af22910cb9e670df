#ifndef LORENTZ_EXPONENT_HPP
#define LORENTZ_EXPONENT_HPP

#include <charconv>
#include <cmath>
#include <cstdio>
#include <compare>
#include <limits>
#include <stdexcept>
#include <string>

namespace lorentz {

///
/// Positive extended real used for the exponents p, u of a Lorentz quasi-norm.
///
/// Infinity is a separate state, not a large double: comparisons and the
/// convention 1/inf = 0 go through `is_infinite()`.
///
class Exponent
{
public:
    static constexpr Exponent infinity() noexcept { return Exponent{}; }

    // +inf maps onto the infinite state; everything else must be finite and > 0.
    explicit Exponent(double v) : value_(v), infinite_(false)
    {
        if (v == std::numeric_limits<double>::infinity()) {
            value_    = 0.0;
            infinite_ = true;
            return;
        }
        if (!std::isfinite(v) || v <= 0.0) {
            throw std::invalid_argument("exponent must be positive (got " + std::to_string(v) + ")");
        }
    }

    constexpr bool is_infinite() const noexcept { return infinite_; }
    constexpr bool is_finite() const noexcept { return !infinite_; }

    double value() const
    {
        if (infinite_) {
            throw std::logic_error("value() called on an infinite exponent");
        }
        return value_;
    }

    /// 1/e with 1/inf = 0.
    constexpr double reciprocal() const noexcept { return infinite_ ? 0.0 : 1.0 / value_; }

    friend constexpr bool operator==(const Exponent& a, const Exponent& b) noexcept
    {
        return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
    }

    friend constexpr std::weak_ordering operator<=>(const Exponent& a, const Exponent& b) noexcept
    {
        if (a.infinite_ || b.infinite_) {
            return a.infinite_ == b.infinite_ ? std::weak_ordering::equivalent
                   : a.infinite_              ? std::weak_ordering::greater
                                              : std::weak_ordering::less;
        }
        if (a.value_ < b.value_) return std::weak_ordering::less;
        if (a.value_ > b.value_) return std::weak_ordering::greater;
        return std::weak_ordering::equivalent;
    }

    std::string to_string() const
    {
        if (infinite_) return "inf";
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", value_);
        return buf;
    }

private:
    constexpr Exponent() noexcept : value_(0.0), infinite_(true) {}

    double value_;
    bool   infinite_;
};

inline Exponent operator""_ex(long double v) { return Exponent(static_cast<double>(v)); }
inline Exponent operator""_ex(unsigned long long v) { return Exponent(static_cast<double>(v)); }

/// The pair (p, u) of a Lorentz quasi-norm ||.||_{p,u}.
struct LorentzParams
{
    Exponent p;
    Exponent u;

    /// p == u, i.e. the plain l_p quasi-norm.
    bool is_lebesgue() const noexcept { return p == u; }

    /// True when ||.||_{p,u} satisfies the triangle inequality as written:
    /// 1 <= u <= p (the weights i^{u/p-1} are non-increasing), or p = u = inf.
    bool is_norm() const noexcept
    {
        if (u.is_infinite()) return p.is_infinite();
        return u.value() >= 1.0 && u <= p;
    }

    friend bool operator==(const LorentzParams&, const LorentzParams&) = default;

    std::string to_string() const { return "(" + p.to_string() + "," + u.to_string() + ")"; }
};

/// Parses "inf" / "infinity" or a positive decimal number.
inline Exponent parse_exponent(const std::string& token)
{
    if (token == "inf" || token == "infinity" || token == "Inf") {
        return Exponent::infinity();
    }
    double      v     = 0.0;
    const char* first = token.data();
    const char* last  = first + token.size();
    auto [ptr, ec]    = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) {
        throw std::invalid_argument("cannot parse exponent '" + token + "'");
    }
    if (std::isinf(v)) {
        throw std::invalid_argument("use the literal 'inf' for an infinite exponent");
    }
    return Exponent(v);
}

} // namespace lorentz

#endif
