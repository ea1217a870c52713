#pragma once

// Closed-interval arithmetic over double endpoints with outward rounding.
// Results always enclose the exact real-arithmetic image of the operands;
// operations that happen to be exact in double stay exact (no gratuitous
// widening). The empty interval is an explicit sentinel state, so lo <= hi
// holds for every non-empty interval.

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace symprune {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ZeroWidthDim : Error {
    using Error::Error;
};

struct DivisionByZeroSpan : Error {
    using Error::Error;
};

namespace detail {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kMaxDouble = std::numeric_limits<double>::max();

inline double next_up(double x) { return std::nextafter(x, kInf); }
inline double next_down(double x) { return std::nextafter(x, -kInf); }

// Rounded addition. The TwoSum error term tells the sign of the rounding
// error exactly, so the result is the tightest double bound in the requested
// direction. Exact sums pass through unchanged.
inline double add_round(double a, double b, bool up) {
    double s = a + b;
    if (std::isinf(s)) {
        if (std::isfinite(a) && std::isfinite(b)) {
            // Overflowed: pull back when the infinity points the wrong way.
            if (up && s < 0) return -kMaxDouble;
            if (!up && s > 0) return kMaxDouble;
        }
        return s;
    }
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);
    if (up) {
        if (err > 0) s = next_up(s);
    } else {
        if (err < 0) s = next_down(s);
    }
    return s;
}

inline double sub_round(double a, double b, bool up) { return add_round(a, -b, up); }

// Rounded multiplication; fma recovers the exact rounding error. In the
// subnormal range the fma trick can itself round, so widen unconditionally
// there.
inline double mul_round(double a, double b, bool up) {
    if (a == 0.0 || b == 0.0) return 0.0;
    double p = a * b;
    if (std::isinf(p)) {
        if (std::isfinite(a) && std::isfinite(b)) {
            if (up && p < 0) return -kMaxDouble;
            if (!up && p > 0) return kMaxDouble;
        }
        return p;
    }
    if (std::abs(p) < std::numeric_limits<double>::min() * 4) {
        return up ? next_up(p) : next_down(p);
    }
    double err = std::fma(a, b, -p);
    if (up) {
        if (err > 0) p = next_up(p);
    } else {
        if (err < 0) p = next_down(p);
    }
    return p;
}

// Rounded division; requires b != 0. fma gives the sign of (q*b - a), from
// which the direction of the true quotient relative to q follows.
inline double div_round(double a, double b, bool up) {
    assert(b != 0.0);
    if (a == 0.0) return 0.0;
    if (std::isinf(b)) return std::isinf(a) ? (up ? kInf : -kInf) : 0.0;
    double q = a / b;
    if (std::isinf(q)) {
        if (std::isfinite(a)) {
            if (up && q < 0) return -kMaxDouble;
            if (!up && q > 0) return kMaxDouble;
        }
        return q;
    }
    if (std::abs(q) < std::numeric_limits<double>::min() * 4 ||
        std::abs(a) > kMaxDouble / 4) {
        return up ? next_up(q) : next_down(q);
    }
    double r = std::fma(q, b, -a);       // exact residual q*b - a
    double diff = (b > 0) ? -r : r;      // sign of (a/b - q)
    if (up) {
        if (diff > 0) q = next_up(q);
    } else {
        if (diff < 0) q = next_down(q);
    }
    return q;
}

// |x|^k with all intermediate products rounded in one direction.
inline double pow_mag(double mag, int k, bool up) {
    assert(mag >= 0.0 && k >= 0);
    if (k == 0) return 1.0;
    double r = mag;
    for (int i = 1; i < k; ++i) r = mul_round(r, mag, up);
    return r;
}

// Directed x^k for signed x. For negative bases with odd k the magnitude
// direction flips.
inline double pow_round(double x, int k, bool up) {
    if (k == 0) return 1.0;
    bool negative = (x < 0.0) && (k % 2 == 1);
    double mag = std::abs(x);
    double r = pow_mag(mag, k, negative ? !up : up);
    return negative ? -r : r;
}

// Largest double r >= 0 with r^k <= y (y >= 0), and smallest with r^k >= y.
inline double kth_root_down(double y, int k) {
    assert(y >= 0.0 && k >= 1);
    if (k == 1 || y == 0.0) return y;
    if (std::isinf(y)) return kInf;
    double r = std::pow(y, 1.0 / k);
    while (r > 0 && pow_mag(r, k, false) > y) r = next_down(r);
    return r;
}

inline double kth_root_up(double y, int k) {
    assert(y >= 0.0 && k >= 1);
    if (k == 1 || y == 0.0) return y;
    if (std::isinf(y)) return kInf;
    double r = std::pow(y, 1.0 / k);
    while (pow_mag(r, k, true) < y) r = next_up(r);
    return r;
}

}  // namespace detail

class Interval {
public:
    Interval() : lo_(0.0), hi_(0.0), empty_(false) {}
    Interval(double lo, double hi) : lo_(lo), hi_(hi), empty_(false) {
        assert(!(lo > hi) && "interval endpoints out of order");
        assert(!std::isnan(lo) && !std::isnan(hi));
    }

    static Interval empty() {
        Interval iv;
        iv.empty_ = true;
        iv.lo_ = 1.0;
        iv.hi_ = -1.0;  // unobservable; accessors assert non-empty
        return iv;
    }

    static Interval whole() { return Interval(-detail::kInf, detail::kInf); }

    bool is_empty() const { return empty_; }

    double lo() const {
        assert(!empty_);
        return lo_;
    }
    double hi() const {
        assert(!empty_);
        return hi_;
    }

    double width() const {
        assert(!empty_);
        return hi_ - lo_;
    }

    double mid() const {
        assert(!empty_);
        return lo_ + (hi_ - lo_) / 2.0;
    }

    bool is_degenerate() const { return !empty_ && lo_ == hi_; }

    bool contains(double x) const { return !empty_ && lo_ <= x && x <= hi_; }

    bool contains(const Interval& other) const {
        if (other.empty_) return true;
        return !empty_ && lo_ <= other.lo_ && other.hi_ <= hi_;
    }

    bool contains_zero() const { return contains(0.0); }

    friend bool operator==(const Interval& a, const Interval& b) {
        if (a.empty_ || b.empty_) return a.empty_ && b.empty_;
        return a.lo_ == b.lo_ && a.hi_ == b.hi_;
    }

private:
    double lo_, hi_;
    bool empty_;
};

inline Interval operator-(const Interval& a) {
    if (a.is_empty()) return Interval::empty();
    return Interval(-a.hi(), -a.lo());
}

inline Interval operator+(const Interval& a, const Interval& b) {
    assert(!a.is_empty() && !b.is_empty());
    return Interval(detail::add_round(a.lo(), b.lo(), false),
                    detail::add_round(a.hi(), b.hi(), true));
}

inline Interval operator-(const Interval& a, const Interval& b) {
    assert(!a.is_empty() && !b.is_empty());
    return Interval(detail::sub_round(a.lo(), b.hi(), false),
                    detail::sub_round(a.hi(), b.lo(), true));
}

inline Interval operator*(const Interval& a, const Interval& b) {
    assert(!a.is_empty() && !b.is_empty());
    using detail::mul_round;
    const double al = a.lo(), ah = a.hi(), bl = b.lo(), bh = b.hi();
    if ((al == 0.0 && ah == 0.0) || (bl == 0.0 && bh == 0.0)) return Interval(0.0, 0.0);
    double lo, hi;
    if (al >= 0.0) {                       // a >= 0
        if (bl >= 0.0) {
            lo = mul_round(al, bl, false);
            hi = mul_round(ah, bh, true);
        } else if (bh <= 0.0) {
            lo = mul_round(ah, bl, false);
            hi = mul_round(al, bh, true);
        } else {
            lo = mul_round(ah, bl, false);
            hi = mul_round(ah, bh, true);
        }
    } else if (ah <= 0.0) {                // a <= 0
        if (bl >= 0.0) {
            lo = mul_round(al, bh, false);
            hi = mul_round(ah, bl, true);
        } else if (bh <= 0.0) {
            lo = mul_round(ah, bh, false);
            hi = mul_round(al, bl, true);
        } else {
            lo = mul_round(al, bh, false);
            hi = mul_round(al, bl, true);
        }
    } else {                               // a straddles 0
        if (bl >= 0.0) {
            lo = mul_round(al, bh, false);
            hi = mul_round(ah, bh, true);
        } else if (bh <= 0.0) {
            lo = mul_round(ah, bl, false);
            hi = mul_round(al, bl, true);
        } else {
            lo = std::min(mul_round(al, bh, false), mul_round(ah, bl, false));
            hi = std::max(mul_round(al, bl, true), mul_round(ah, bh, true));
        }
    }
    return Interval(lo, hi);
}

// Division requires a divisor that does not contain zero.
inline Interval operator/(const Interval& a, const Interval& b) {
    assert(!a.is_empty() && !b.is_empty());
    if (b.contains_zero()) throw DivisionByZeroSpan("divisor interval contains zero");
    using detail::div_round;
    const double al = a.lo(), ah = a.hi(), bl = b.lo(), bh = b.hi();
    double lo, hi;
    if (bl > 0.0) {
        lo = div_round(al, al >= 0.0 ? bh : bl, false);
        hi = div_round(ah, ah >= 0.0 ? bl : bh, true);
    } else {
        lo = div_round(ah, ah >= 0.0 ? bh : bl, false);
        hi = div_round(al, al >= 0.0 ? bl : bh, true);
    }
    return Interval(lo, hi);
}

inline Interval pow(const Interval& a, int k) {
    assert(!a.is_empty() && k >= 0);
    using detail::pow_round;
    if (k == 0) return Interval(1.0, 1.0);
    if (k % 2 == 1) {
        return Interval(pow_round(a.lo(), k, false), pow_round(a.hi(), k, true));
    }
    const double ml = std::abs(a.lo()), mh = std::abs(a.hi());
    if (a.contains_zero()) {
        return Interval(0.0, detail::pow_mag(std::max(ml, mh), k, true));
    }
    return Interval(detail::pow_mag(std::min(ml, mh), k, false),
                    detail::pow_mag(std::max(ml, mh), k, true));
}

inline Interval intersect(const Interval& a, const Interval& b) {
    if (a.is_empty() || b.is_empty()) return Interval::empty();
    const double lo = std::max(a.lo(), b.lo());
    const double hi = std::min(a.hi(), b.hi());
    if (lo > hi) return Interval::empty();
    return Interval(lo, hi);
}

inline Interval hull(const Interval& a, const Interval& b) {
    if (a.is_empty()) return b;
    if (b.is_empty()) return a;
    return Interval(std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi()));
}

// Enclosure of the nonnegative k-th roots of y ∩ [0, inf); empty when y < 0.
inline Interval nonneg_root(const Interval& y, int k) {
    assert(!y.is_empty() && k >= 1);
    if (y.hi() < 0.0) return Interval::empty();
    const double lo = std::max(y.lo(), 0.0);
    return Interval(detail::kth_root_down(lo, k), detail::kth_root_up(y.hi(), k));
}

// Enclosure of the (unique real) k-th roots for odd k; monotone over all of R.
inline Interval odd_root(const Interval& y, int k) {
    assert(!y.is_empty() && k >= 1 && k % 2 == 1);
    const auto signed_root_down = [k](double v) {
        return v >= 0.0 ? detail::kth_root_down(v, k) : -detail::kth_root_up(-v, k);
    };
    const auto signed_root_up = [k](double v) {
        return v >= 0.0 ? detail::kth_root_up(v, k) : -detail::kth_root_down(-v, k);
    };
    return Interval(signed_root_down(y.lo()), signed_root_up(y.hi()));
}

class Box {
public:
    Box() = default;
    explicit Box(std::vector<Interval> dims) : dims_(std::move(dims)) {}
    Box(std::size_t n, const Interval& iv) : dims_(n, iv) {}

    std::size_t size() const { return dims_.size(); }

    const Interval& operator[](std::size_t i) const { return dims_[i]; }
    Interval& operator[](std::size_t i) { return dims_[i]; }

    const std::vector<Interval>& dims() const { return dims_; }

    double width(std::size_t i) const { return dims_[i].width(); }

    double max_width() const {
        double w = 0.0;
        for (const auto& d : dims_) w = std::max(w, d.width());
        return w;
    }

    std::size_t widest_dim() const {
        std::size_t best = 0;
        double w = -1.0;
        for (std::size_t i = 0; i < dims_.size(); ++i) {
            if (dims_[i].width() > w) {
                w = dims_[i].width();
                best = i;
            }
        }
        return best;
    }

    double volume() const {
        double v = 1.0;
        for (const auto& d : dims_) v *= d.width();
        return v;
    }

    std::vector<double> center() const {
        std::vector<double> c(dims_.size());
        for (std::size_t i = 0; i < dims_.size(); ++i) c[i] = dims_[i].mid();
        return c;
    }

    bool contains(const std::vector<double>& x) const {
        if (x.size() != dims_.size()) return false;
        for (std::size_t i = 0; i < dims_.size(); ++i) {
            if (!dims_[i].contains(x[i])) return false;
        }
        return true;
    }

    friend bool operator==(const Box& a, const Box& b) { return a.dims_ == b.dims_; }

private:
    std::vector<Interval> dims_;
};

// Splits dimension `dim` at its midpoint; the two children share the split
// wall and their union is exactly the input.
inline std::pair<Box, Box> bisect(const Box& b, std::size_t dim) {
    assert(dim < b.size());
    if (b[dim].width() <= 0.0) {
        throw ZeroWidthDim("cannot bisect degenerate dimension " + std::to_string(dim));
    }
    const double m = b[dim].mid();
    Box left = b, right = b;
    left[dim] = Interval(b[dim].lo(), m);
    right[dim] = Interval(m, b[dim].hi());
    return {std::move(left), std::move(right)};
}

}  // namespace symprune
