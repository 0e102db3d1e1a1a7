#ifndef SYMPFACT_SCALAR_IO_HPP
#define SYMPFACT_SCALAR_IO_HPP

#include <cctype>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "sympfact/gaussian.hpp"
#include "sympfact/multipoly.hpp"
#include "sympfact/rational.hpp"

namespace sympfact {

// Scalar grammar. All printers emit whitespace-free canonical text that this
// parser accepts; the parser additionally tolerates whitespace between tokens.
//
//   rational := "-"? digits ("/" digits)?          denominator must be positive
//   gaussian := rational (("+" | "-") rational? "i")?
//   poly     := term (("+" | "-") term)*           no leading sign
//   term     := gaussian ("*" monomial)? | monomial
//   monomial := var ("^" digits)? ("*" var ("^" digits)?)*
//   var      := "x" digits                         index is 1-based

class ParseError : public std::runtime_error {
  public:
    ParseError(const std::string& message, std::size_t position)
        : std::runtime_error(message + " at position " + std::to_string(position)),
          position_(position) {}
    std::size_t position() const { return position_; }

  private:
    std::size_t position_;
};

class TextCursor {
  public:
    explicit TextCursor(std::string_view text) : text_(text) {}

    std::size_t pos() const { return pos_; }
    void seek(std::size_t p) { pos_ = p; }

    void skip_ws() {
        while (pos_ < text_.size() &&
               std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    bool done() const { return pos_ >= text_.size(); }
    char peek() const { return done() ? '\0' : text_[pos_]; }
    void advance() { ++pos_; }

    bool consume(char c) {
        if (peek() != c) return false;
        ++pos_;
        return true;
    }

    // Longest run of decimal digits; empty when none follow.
    std::string digits() {
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               std::isdigit(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
        return std::string(text_.substr(start, pos_ - start));
    }

  private:
    std::string_view text_;
    std::size_t pos_ = 0;
};

inline Rational parse_rational(TextCursor& cur) {
    cur.skip_ws();
    bool neg = cur.consume('-');
    std::string num = cur.digits();
    if (num.empty()) throw ParseError("expected digits", cur.pos());
    mpq_class value;
    if (cur.consume('/')) {
        std::string den = cur.digits();
        if (den.empty()) throw ParseError("expected denominator digits", cur.pos());
        mpz_class d(den);
        if (d == 0) throw ParseError("zero denominator", cur.pos());
        value = mpq_class(mpz_class(num), d);
        value.canonicalize();
    } else {
        value = mpq_class(mpz_class(num));
    }
    Rational r(value);
    return neg ? -r : r;
}

// Consumes "<sign> rational? i" when present; otherwise restores the cursor
// and returns the real part alone. The restore is what lets a polynomial
// parser reuse the trailing sign as a term separator.
inline Gaussian parse_gaussian(TextCursor& cur) {
    Rational re = parse_rational(cur);
    std::size_t save = cur.pos();
    cur.skip_ws();
    char sign = cur.peek();
    if (sign != '+' && sign != '-') {
        cur.seek(save);
        return Gaussian(re);
    }
    cur.advance();
    cur.skip_ws();
    if (cur.consume('i')) {
        Rational im = Rational(1);
        return Gaussian(re, sign == '-' ? -im : im);
    }
    try {
        Rational mag = parse_rational(cur);
        cur.skip_ws();
        if (!cur.consume('i')) {
            cur.seek(save);
            return Gaussian(re);
        }
        return Gaussian(re, sign == '-' ? -mag : mag);
    } catch (const ParseError&) {
        cur.seek(save);
        return Gaussian(re);
    }
}

namespace detail {

inline unsigned long parse_index(TextCursor& cur, const char* what) {
    std::string digs = cur.digits();
    if (digs.empty())
        throw ParseError(std::string("expected ") + what, cur.pos());
    unsigned long v = 0;
    try {
        v = std::stoul(digs);
    } catch (const std::exception&) {
        throw ParseError(std::string(what) + " out of range", cur.pos());
    }
    return v;
}

inline Exponents parse_monomial(TextCursor& cur) {
    Exponents exps;
    for (;;) {
        cur.skip_ws();
        if (!cur.consume('x'))
            throw ParseError("expected variable", cur.pos());
        unsigned long idx = parse_index(cur, "variable index");
        if (idx == 0) throw ParseError("variable index must be positive", cur.pos());
        unsigned long exp = 1;
        if (cur.consume('^')) {
            exp = parse_index(cur, "exponent");
            if (exp == 0) throw ParseError("exponent must be positive", cur.pos());
        }
        if (exps.size() < idx) exps.resize(idx, 0);
        exps[idx - 1] += static_cast<unsigned>(exp);
        std::size_t save = cur.pos();
        cur.skip_ws();
        if (cur.consume('*')) {
            cur.skip_ws();
            if (cur.peek() == 'x') continue;
        }
        cur.seek(save);
        return exps;
    }
}

inline MultiPoly monomial_poly(const Exponents& exps) {
    MultiPoly m = MultiPoly::one();
    for (std::size_t v = 0; v < exps.size(); ++v)
        for (unsigned k = 0; k < exps[v]; ++k) m = m * MultiPoly::variable(v + 1);
    return m;
}

inline MultiPoly parse_term(TextCursor& cur) {
    cur.skip_ws();
    if (cur.peek() == 'x') return monomial_poly(parse_monomial(cur));
    Gaussian coeff = parse_gaussian(cur);
    std::size_t save = cur.pos();
    cur.skip_ws();
    if (cur.consume('*')) {
        cur.skip_ws();
        if (cur.peek() != 'x')
            throw ParseError("expected variable after '*'", cur.pos());
        return MultiPoly::constant(coeff) * monomial_poly(parse_monomial(cur));
    }
    cur.seek(save);
    return MultiPoly::constant(coeff);
}

} // namespace detail

inline MultiPoly parse_poly(TextCursor& cur) {
    MultiPoly p = detail::parse_term(cur);
    for (;;) {
        std::size_t save = cur.pos();
        cur.skip_ws();
        if (cur.consume('+')) {
            p = p + detail::parse_term(cur);
        } else if (cur.consume('-')) {
            p = p - detail::parse_term(cur);
        } else {
            cur.seek(save);
            return p;
        }
    }
}

template <class R>
R parse_scalar_text(TextCursor& cur);

template <>
inline Rational parse_scalar_text<Rational>(TextCursor& cur) {
    return parse_rational(cur);
}
template <>
inline Gaussian parse_scalar_text<Gaussian>(TextCursor& cur) {
    return parse_gaussian(cur);
}
template <>
inline MultiPoly parse_scalar_text<MultiPoly>(TextCursor& cur) {
    return parse_poly(cur);
}

// Parses a whole token; trailing non-space characters are an error.
template <class R>
R parse_scalar(const std::string& text) {
    TextCursor cur(text);
    R value = parse_scalar_text<R>(cur);
    cur.skip_ws();
    if (!cur.done())
        throw ParseError("unexpected trailing characters", cur.pos());
    return value;
}

template <class R>
std::string print_scalar(const R& value) {
    return value.str();
}

} // namespace sympfact

#endif // SYMPFACT_SCALAR_IO_HPP
