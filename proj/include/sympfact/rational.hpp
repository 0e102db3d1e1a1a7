#ifndef SYMPFACT_RATIONAL_HPP
#define SYMPFACT_RATIONAL_HPP

// Arbitrary-precision rational numbers.
//
// Thin wrapper around GMP's mpq_class pinning the invariants the rest of the
// library relies on: gcd(|num|, den) = 1 and den > 0 (canonical form), exact
// equality, and a canonical decimal-free print format "n" or "n/d".

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace sympfact {

class Rational {
public:
    Rational() : v_(0) {}
    Rational(long n) : v_(static_cast<signed long>(n)) {}
    Rational(long n, long d) {
        if (d == 0) throw std::domain_error("Rational: zero denominator");
        v_ = mpq_class(n, d);
        v_.canonicalize();
    }
    explicit Rational(const mpq_class& q) : v_(q) { v_.canonicalize(); }

    static Rational zero() { return Rational(0); }
    static Rational one() { return Rational(1); }

    bool is_zero() const { return sgn(v_) == 0; }
    bool is_one() const { return v_ == 1; }
    bool is_unit() const { return !is_zero(); }
    int sign() const { return sgn(v_); }

    Rational inv() const {
        if (is_zero()) throw std::domain_error("Rational: inverse of zero");
        return Rational(1 / v_);
    }

    const mpz_class& num() const { return v_.get_num(); }
    const mpz_class& den() const { return v_.get_den(); }
    const mpq_class& raw() const { return v_; }

    Rational operator-() const { return Rational(mpq_class(-v_)); }
    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) throw std::domain_error("Rational: division by zero");
        v_ /= o.v_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }

    // Canonical print: "n" when den = 1, else "n/d"; no whitespace.
    std::string str() const { return v_.get_str(); }

    double to_double() const { return v_.get_d(); }

private:
    mpq_class v_;
};

} // namespace sympfact

#endif // SYMPFACT_RATIONAL_HPP
