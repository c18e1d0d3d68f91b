#ifndef GG1_SUMMATION_HPP
#define GG1_SUMMATION_HPP

#include <cmath>

namespace gg1 {

/// Neumaier-compensated running sum.
template <typename Scalar = double>
class CompensatedSum {
public:
    CompensatedSum& operator+=(Scalar x) {
        const Scalar t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            compensation_ += (sum_ - t) + x;
        else
            compensation_ += (x - t) + sum_;
        sum_ = t;
        return *this;
    }

    CompensatedSum& operator+=(const CompensatedSum& other) {
        *this += other.sum_;
        *this += other.compensation_;
        return *this;
    }

    Scalar value() const { return sum_ + compensation_; }

private:
    Scalar sum_ = 0;
    Scalar compensation_ = 0;
};

}  // namespace gg1

#endif  // GG1_SUMMATION_HPP
