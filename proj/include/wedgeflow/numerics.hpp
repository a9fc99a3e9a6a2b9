#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "wedgeflow/errors.hpp"

namespace wedgeflow {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double a) const { return {a * x, a * y}; }
    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double norm2() const { return x * x + y * y; }
    double norm() const { return std::sqrt(norm2()); }
    /// Counterclockwise rotation by `angle`.
    Vec2 rotated(double angle) const {
        const double c = std::cos(angle), s = std::sin(angle);
        return {c * x - s * y, s * x + c * y};
    }
};

inline Vec2 operator*(double a, Vec2 v) { return v * a; }

namespace num {

/// Bisection on a bracketing interval [lo, hi] with f(lo), f(hi) of opposite
/// sign. Returns the midpoint of the final interval.
template <class F>
double bisect(F&& f, double lo, double hi, double xtol, int max_iter = 200) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (flo * fhi > 0.0)
        throw NoRootError("bisect: interval does not bracket a sign change");
    for (int i = 0; i < max_iter && hi - lo > xtol; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if (flo * fm <= 0.0) {
            hi = mid;
            fhi = fm;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    return 0.5 * (lo + hi);
}

/// Bracketed root find: bisection until the interval is small, then a few
/// safeguarded secant steps that are rejected whenever they leave the
/// bracket. Converges to |dx| < xtol.
template <class F>
double find_root(F&& f, double lo, double hi, double xtol, int max_iter = 200) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (flo * fhi > 0.0)
        throw NoRootError("find_root: interval does not bracket a sign change");
    double x = 0.5 * (lo + hi);
    for (int i = 0; i < max_iter; ++i) {
        if (hi - lo <= xtol) break;
        // secant through the bracket endpoints, safeguarded by bisection
        double xs = (fhi != flo) ? (lo * fhi - hi * flo) / (fhi - flo) : 0.5 * (lo + hi);
        const double margin = 0.01 * (hi - lo);
        if (!(xs > lo + margin && xs < hi - margin)) xs = 0.5 * (lo + hi);
        const double fs = f(xs);
        if (fs == 0.0) return xs;
        if (flo * fs <= 0.0) {
            hi = xs;
            fhi = fs;
        } else {
            lo = xs;
            flo = fs;
        }
        x = 0.5 * (lo + hi);
    }
    return x;
}

/// Scan [lo, hi] with n uniform samples and return the first sub-interval
/// with a sign change, or false.
template <class F>
bool scan_bracket(F&& f, double lo, double hi, int n, double& blo, double& bhi) {
    double xp = lo;
    double fp = f(xp);
    for (int i = 1; i <= n; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / n;
        const double fx = f(x);
        if (fp == 0.0 || fp * fx <= 0.0) {
            blo = xp;
            bhi = x;
            return true;
        }
        xp = x;
        fp = fx;
    }
    return false;
}

/// Golden-section maximization of a unimodal function on [lo, hi].
template <class F>
double golden_max(F&& f, double lo, double hi, double xtol) {
    constexpr double invphi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > xtol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

/// Base-2 van der Corput radical inverse of n, in [0, 1).
inline double van_der_corput(std::uint64_t n) {
    double result = 0.0;
    double base = 0.5;
    while (n != 0) {
        if (n & 1u) result += base;
        n >>= 1u;
        base *= 0.5;
    }
    return result;
}

} // namespace num

/// Piecewise-linear table x -> y, monotone in x. Evaluates by interpolation
/// and extends the end segments beyond the tabulated range.
class LinearTable {
public:
    LinearTable() = default;
    LinearTable(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
        if (x_.size() != y_.size() || x_.size() < 2)
            throw std::invalid_argument("LinearTable: need at least two matched samples");
        for (std::size_t i = 1; i < x_.size(); ++i)
            if (!(x_[i] > x_[i - 1]))
                throw std::invalid_argument("LinearTable: x must be strictly increasing");
    }

    double operator()(double x) const {
        const std::size_t i = segment(x);
        const double t = (x - x_[i]) / (x_[i + 1] - x_[i]);
        return y_[i] + t * (y_[i + 1] - y_[i]);
    }

    double slope(double x) const {
        const std::size_t i = segment(x);
        return (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
    }

    /// Total variation of the segment slopes.
    double slope_total_variation() const {
        double tv = 0.0;
        double prev = (y_[1] - y_[0]) / (x_[1] - x_[0]);
        for (std::size_t i = 1; i + 1 < x_.size(); ++i) {
            const double s = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
            tv += std::abs(s - prev);
            prev = s;
        }
        return tv;
    }

    double last_slope() const {
        const std::size_t n = x_.size();
        return (y_[n - 1] - y_[n - 2]) / (x_[n - 1] - x_[n - 2]);
    }

    const std::vector<double>& xs() const { return x_; }
    const std::vector<double>& ys() const { return y_; }

private:
    std::size_t segment(double x) const {
        if (x <= x_.front()) return 0;
        if (x >= x_[x_.size() - 2]) return x_.size() - 2;
        const auto it = std::upper_bound(x_.begin(), x_.end(), x);
        return static_cast<std::size_t>(it - x_.begin()) - 1;
    }

    std::vector<double> x_;
    std::vector<double> y_;
};

} // namespace wedgeflow
