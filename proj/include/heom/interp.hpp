#ifndef HEOM_INTERP_HPP
#define HEOM_INTERP_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace heom {

/// Monotone cubic interpolation (Fritsch-Carlson limited slopes). Shape
/// preserving, so sharp peaks do not overshoot.
class MonotoneCubic {
  public:
    MonotoneCubic() = default;

    MonotoneCubic(std::vector<double> x, std::vector<double> y)
        : x_(std::move(x)), y_(std::move(y)) {
        const std::size_t n = x_.size();
        if (n < 2 || y_.size() != n)
            throw std::invalid_argument("interpolation needs >= 2 points");
        for (std::size_t i = 1; i < n; ++i)
            if (!(x_[i] > x_[i - 1]))
                throw std::invalid_argument("grid must be strictly increasing");
        slopes_.resize(n);
        std::vector<double> d(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i)
            d[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
        slopes_[0] = d[0];
        slopes_[n - 1] = d[n - 2];
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (d[i - 1] * d[i] <= 0.0) {
                slopes_[i] = 0.0;
            } else {
                const double w1 = 2.0 * (x_[i + 1] - x_[i]) + (x_[i] - x_[i - 1]);
                const double w2 = (x_[i + 1] - x_[i]) + 2.0 * (x_[i] - x_[i - 1]);
                slopes_[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
            }
        }
        // clamp endpoint slopes to keep monotonicity on the end panels
        for (std::size_t i : {std::size_t{0}, n - 1}) {
            const double di = d[std::min(i, n - 2)];
            if (slopes_[i] * di <= 0.0)
                slopes_[i] = 0.0;
            else if (std::abs(slopes_[i]) > 3.0 * std::abs(di))
                slopes_[i] = 3.0 * di;
        }
    }

    double x_min() const { return x_.front(); }
    double x_max() const { return x_.back(); }

    bool contains(double x) const { return x >= x_.front() && x <= x_.back(); }

    double operator()(double x) const {
        if (!contains(x))
            throw std::out_of_range("interpolation query outside grid: x = " +
                                    std::to_string(x));
        const std::size_t i = segment(x);
        const double h = x_[i + 1] - x_[i];
        const double t = (x - x_[i]) / h;
        const double t2 = t * t, t3 = t2 * t;
        const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
        const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
        return h00 * y_[i] + h10 * h * slopes_[i] + h01 * y_[i + 1] +
               h11 * h * slopes_[i + 1];
    }

    double derivative(double x) const {
        if (!contains(x))
            throw std::out_of_range("interpolation query outside grid: x = " +
                                    std::to_string(x));
        const std::size_t i = segment(x);
        const double h = x_[i + 1] - x_[i];
        const double t = (x - x_[i]) / h;
        const double t2 = t * t;
        const double dh00 = (6 * t2 - 6 * t) / h, dh10 = 3 * t2 - 4 * t + 1;
        const double dh01 = (-6 * t2 + 6 * t) / h, dh11 = 3 * t2 - 2 * t;
        return dh00 * y_[i] + dh10 * slopes_[i] + dh01 * y_[i + 1] +
               dh11 * slopes_[i + 1];
    }

    const std::vector<double>& grid() const { return x_; }
    const std::vector<double>& values() const { return y_; }

  private:
    std::size_t segment(double x) const {
        auto it = std::upper_bound(x_.begin(), x_.end(), x);
        std::size_t i = static_cast<std::size_t>(it - x_.begin());
        if (i > 0) --i;
        return std::min(i, x_.size() - 2);
    }

    std::vector<double> x_, y_;
    std::vector<double> slopes_;
};

}  // namespace heom

#endif  // HEOM_INTERP_HPP
