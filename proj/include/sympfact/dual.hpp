#ifndef SYMPFACT_DUAL_HPP
#define SYMPFACT_DUAL_HPP

// Forward-mode dual scalars: value + nilpotent derivative part (eps^2 = 0).
//
// One pass per independent variable yields an exact partial derivative of any
// composition of ring operations and unit inverses. Used over the Gaussian
// rationals for the exact Jacobian of the last-row map.

#include <stdexcept>

namespace sympfact {

template <typename R>
class Dual {
public:
    Dual() : v_(R::zero()), d_(R::zero()) {}
    Dual(R v) : v_(std::move(v)), d_(R::zero()) {}
    Dual(R v, R d) : v_(std::move(v)), d_(std::move(d)) {}

    static Dual zero() { return Dual(R::zero()); }
    static Dual one() { return Dual(R::one()); }

    const R& value() const { return v_; }
    const R& deriv() const { return d_; }

    bool is_zero() const { return v_.is_zero() && d_.is_zero(); }
    bool is_one() const { return v_.is_one() && d_.is_zero(); }
    bool is_unit() const { return v_.is_unit(); }

    // (v + d eps)^{-1} = v^{-1} - v^{-1} d v^{-1} eps
    Dual inv() const {
        R vi = v_.inv();
        return Dual(vi, -(vi * d_ * vi));
    }

    Dual operator-() const { return Dual(-v_, -d_); }
    Dual& operator+=(const Dual& o) { v_ += o.v_; d_ += o.d_; return *this; }
    Dual& operator-=(const Dual& o) { v_ -= o.v_; d_ -= o.d_; return *this; }
    Dual& operator*=(const Dual& o) {
        d_ = v_ * o.d_ + d_ * o.v_;
        v_ = v_ * o.v_;
        return *this;
    }

    friend Dual operator+(Dual a, const Dual& b) { return a += b; }
    friend Dual operator-(Dual a, const Dual& b) { return a -= b; }
    friend Dual operator*(Dual a, const Dual& b) { return a *= b; }
    friend bool operator==(const Dual& a, const Dual& b) {
        return a.v_ == b.v_ && a.d_ == b.d_;
    }
    friend bool operator!=(const Dual& a, const Dual& b) { return !(a == b); }

private:
    R v_;
    R d_;
};

} // namespace sympfact

#endif // SYMPFACT_DUAL_HPP
