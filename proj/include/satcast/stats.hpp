#pragma once

#include <cmath>
#include <cstdint>

namespace satcast {

// Welford running moments plus min/max/last. Population standard deviation,
// so a single observation yields sd 0 rather than NaN.
class RunningStat {
public:
    void add(double x) {
        ++n_;
        const double delta = x - mean_;
        mean_ += delta / static_cast<double>(n_);
        m2_ += delta * (x - mean_);
        if (n_ == 1 || x < min_) min_ = x;
        if (n_ == 1 || x > max_) max_ = x;
        last_ = x;
    }

    uint64_t count() const { return n_; }
    bool empty() const { return n_ == 0; }
    double mean() const { return n_ ? mean_ : 0.0; }
    double sd() const { return n_ ? std::sqrt(m2_ / static_cast<double>(n_)) : 0.0; }
    double min() const { return n_ ? min_ : 0.0; }
    double max() const { return n_ ? max_ : 0.0; }
    double last() const { return n_ ? last_ : 0.0; }

private:
    uint64_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
    double min_ = 0.0;
    double max_ = 0.0;
    double last_ = 0.0;
};

}  // namespace satcast
