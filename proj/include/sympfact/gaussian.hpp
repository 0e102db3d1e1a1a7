#ifndef SYMPFACT_GAUSSIAN_HPP
#define SYMPFACT_GAUSSIAN_HPP

// Gaussian rationals Q(i): exact model of the complex coefficient field.
//
// Field operations are closed; the multiplicative inverse exists iff the value
// is nonzero and is computed via the conjugate over the (rational) norm.

#include "sympfact/rational.hpp"

#include <complex>
#include <stdexcept>
#include <string>
#include <utility>

namespace sympfact {

class Gaussian {
public:
    Gaussian() = default;
    Gaussian(long n) : re_(n) {}
    Gaussian(Rational re) : re_(std::move(re)) {}
    Gaussian(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {}

    static Gaussian zero() { return Gaussian(); }
    static Gaussian one() { return Gaussian(1); }
    static Gaussian i() { return Gaussian(Rational(0), Rational(1)); }

    const Rational& re() const { return re_; }
    const Rational& im() const { return im_; }

    bool is_zero() const { return re_.is_zero() && im_.is_zero(); }
    bool is_one() const { return re_.is_one() && im_.is_zero(); }
    bool is_unit() const { return !is_zero(); }
    bool is_real() const { return im_.is_zero(); }

    Gaussian conj() const { return Gaussian(re_, -im_); }
    Rational norm() const { return re_ * re_ + im_ * im_; }

    Gaussian inv() const {
        if (is_zero()) throw std::domain_error("Gaussian: inverse of zero");
        Rational n = norm();
        return Gaussian(re_ / n, -(im_ / n));
    }

    Gaussian operator-() const { return Gaussian(-re_, -im_); }
    Gaussian& operator+=(const Gaussian& o) { re_ += o.re_; im_ += o.im_; return *this; }
    Gaussian& operator-=(const Gaussian& o) { re_ -= o.re_; im_ -= o.im_; return *this; }
    Gaussian& operator*=(const Gaussian& o) {
        Rational r = re_ * o.re_ - im_ * o.im_;
        Rational i = re_ * o.im_ + im_ * o.re_;
        re_ = std::move(r);
        im_ = std::move(i);
        return *this;
    }
    Gaussian& operator/=(const Gaussian& o) { return *this *= o.inv(); }

    friend Gaussian operator+(Gaussian a, const Gaussian& b) { return a += b; }
    friend Gaussian operator-(Gaussian a, const Gaussian& b) { return a -= b; }
    friend Gaussian operator*(Gaussian a, const Gaussian& b) { return a *= b; }
    friend Gaussian operator/(Gaussian a, const Gaussian& b) { return a /= b; }
    friend bool operator==(const Gaussian& a, const Gaussian& b) {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }
    friend bool operator!=(const Gaussian& a, const Gaussian& b) { return !(a == b); }

    // Canonical print per the scalar grammar: "re", or "re+imi" / "re-imi" with
    // the magnitude-one imaginary part shortened to "i". No whitespace.
    std::string str() const {
        if (im_.is_zero()) return re_.str();
        std::string s = re_.str();
        Rational a = im_;
        if (a.sign() < 0) {
            s += '-';
            a = -a;
        } else {
            s += '+';
        }
        if (!a.is_one()) s += a.str();
        s += 'i';
        return s;
    }

    std::complex<double> to_complex() const {
        return {re_.to_double(), im_.to_double()};
    }

private:
    Rational re_;
    Rational im_;
};

} // namespace sympfact

#endif // SYMPFACT_GAUSSIAN_HPP
