#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace sl2lab {

// Neumaier compensated summation.
class KahanSum {
  public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline double compensated_mean(std::span<const double> xs) {
    KahanSum s;
    for (double x : xs) s.add(x);
    return s.value() / static_cast<double>(xs.size());
}

inline double sample_variance(std::span<const double> xs) {
    if (xs.size() < 2) return 0.0;
    const double mu = compensated_mean(xs);
    KahanSum s;
    for (double x : xs) {
        const double d = x - mu;
        s.add(d * d);
    }
    return s.value() / static_cast<double>(xs.size() - 1);
}

// Standard error of the mean via batch means over contiguous batches.
inline double batch_se(std::span<const double> xs, int n_batches = 100) {
    const std::size_t n = xs.size();
    if (n < 2) return 0.0;
    const int b = std::min<std::size_t>(n_batches, n);
    std::vector<double> means(b);
    for (int k = 0; k < b; ++k) {
        const std::size_t lo = n * k / b, hi = n * (k + 1) / b;
        means[k] = compensated_mean(xs.subspan(lo, hi - lo));
    }
    return std::sqrt(sample_variance(means) / b);
}

inline double normal_cdf(double x, double sigma) {
    if (sigma <= 0.0) return x < 0.0 ? 0.0 : 1.0;
    return 0.5 * std::erfc(-x / (sigma * 1.4142135623730951));
}

// One-sample two-sided Kolmogorov-Smirnov statistic against a CDF.
inline double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        d = std::max(d, std::max(f - static_cast<double>(i) / n,
                                 static_cast<double>(i + 1) / n - f));
    }
    return d;
}

// Least-squares slope of y against 0,1,...,n-1.
inline double ls_slope(std::span<const double> y) {
    const std::size_t n = y.size();
    if (n < 2) return 0.0;
    const double xbar = 0.5 * static_cast<double>(n - 1);
    double sxy = 0.0, sxx = 0.0;
    KahanSum sy;
    for (double v : y) sy.add(v);
    const double ybar = sy.value() / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = static_cast<double>(i) - xbar;
        sxy += dx * (y[i] - ybar);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

}  // namespace sl2lab
