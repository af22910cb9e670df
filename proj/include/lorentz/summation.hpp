#ifndef LORENTZ_SUMMATION_HPP
#define LORENTZ_SUMMATION_HPP

#include <cmath>

namespace lorentz {

// Compensated summation: each rounding error is recovered exactly by two-sum
// and accumulated separately. Terms are added in call order, so a
// fixed loop order gives bit-identical results run to run.
class CompensatedSum
{
public:
    void add(double term) noexcept
    {
        // Knuth's branch-free two-sum: t + e == sum_ + term exactly
        const double t  = sum_ + term;
        const double bp = t - sum_;
        comp_ += (sum_ - (t - bp)) + (term - bp);
        sum_ = t;
    }

    CompensatedSum& operator+=(double term) noexcept
    {
        add(term);
        return *this;
    }

    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_  = 0.0;
    double comp_ = 0.0;
};

} // namespace lorentz

#endif
