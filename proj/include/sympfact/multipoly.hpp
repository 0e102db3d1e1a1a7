#ifndef SYMPFACT_MULTIPOLY_HPP
#define SYMPFACT_MULTIPOLY_HPP

// Multivariate polynomials over the Gaussian rationals.
//
// Terms live in a map keyed by exponent vectors under the graded lexicographic
// order (total degree first, then lex), so iteration order is the canonical
// print order and equality is map equality. Invariants: no zero coefficients
// are stored and exponent vectors carry no trailing zeros. Variables are x1,
// x2, ... (1-based indices). Division exists only for unit (nonzero constant)
// polynomials; the library confines all other division to constants by design.

#include "sympfact/gaussian.hpp"

#include <cstddef>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace sympfact {

using Exponents = std::vector<unsigned>;

struct GradedLexGreater {
    bool operator()(const Exponents& a, const Exponents& b) const {
        unsigned long da = 0, db = 0;
        for (unsigned e : a) da += e;
        for (unsigned e : b) db += e;
        if (da != db) return da > db;
        std::size_t m = a.size() > b.size() ? a.size() : b.size();
        for (std::size_t i = 0; i < m; ++i) {
            unsigned ea = i < a.size() ? a[i] : 0;
            unsigned eb = i < b.size() ? b[i] : 0;
            if (ea != eb) return ea > eb;
        }
        return false;
    }
};

class MultiPoly {
public:
    using TermMap = std::map<Exponents, Gaussian, GradedLexGreater>;

    MultiPoly() = default;
    MultiPoly(long n) { if (n != 0) terms_[{}] = Gaussian(n); }
    MultiPoly(const Gaussian& c) { if (!c.is_zero()) terms_[{}] = c; }

    static MultiPoly zero() { return MultiPoly(); }
    static MultiPoly one() { return MultiPoly(1); }
    static MultiPoly constant(const Gaussian& c) { return MultiPoly(c); }

    // x<idx>, 1-based.
    static MultiPoly variable(std::size_t idx) {
        if (idx == 0) throw std::invalid_argument("MultiPoly: variable index is 1-based");
        MultiPoly p;
        Exponents e(idx, 0);
        e[idx - 1] = 1;
        p.terms_[std::move(e)] = Gaussian::one();
        return p;
    }

    const TermMap& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }
    bool is_one() const {
        return terms_.size() == 1 && terms_.begin()->first.empty() &&
               terms_.begin()->second.is_one();
    }
    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
    }
    bool is_unit() const { return is_constant() && !is_zero(); }

    Gaussian constant_term() const {
        auto it = terms_.find(Exponents{});
        return it == terms_.end() ? Gaussian::zero() : it->second;
    }

    MultiPoly inv() const {
        if (!is_unit()) throw std::domain_error("MultiPoly: inverse of a non-unit");
        return MultiPoly(constant_term().inv());
    }

    std::size_t max_var() const {
        std::size_t m = 0;
        for (const auto& [e, c] : terms_)
            if (e.size() > m) m = e.size();
        return m;
    }

    std::set<std::size_t> vars_used() const {
        std::set<std::size_t> s;
        for (const auto& [e, c] : terms_)
            for (std::size_t i = 0; i < e.size(); ++i)
                if (e[i] > 0) s.insert(i + 1);
        return s;
    }

    unsigned degree() const {
        unsigned d = 0;
        for (const auto& [e, c] : terms_) {
            unsigned t = 0;
            for (unsigned x : e) t += x;
            if (t > d) d = t;
        }
        return d;
    }

    unsigned degree_in(std::size_t idx) const {
        unsigned d = 0;
        for (const auto& [e, c] : terms_)
            if (idx - 1 < e.size() && e[idx - 1] > d) d = e[idx - 1];
        return d;
    }

    MultiPoly operator-() const {
        MultiPoly r;
        for (const auto& [e, c] : terms_) r.terms_[e] = -c;
        return r;
    }

    MultiPoly& operator+=(const MultiPoly& o) {
        for (const auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }
    MultiPoly& operator-=(const MultiPoly& o) {
        for (const auto& [e, c] : o.terms_) add_term(e, -c);
        return *this;
    }
    MultiPoly& operator*=(const MultiPoly& o) {
        *this = *this * o;
        return *this;
    }

    friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
    friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
    friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
        MultiPoly r;
        for (const auto& [ea, ca] : a.terms_) {
            for (const auto& [eb, cb] : b.terms_) {
                Gaussian c = ca * cb;
                if (c.is_zero()) continue;
                r.add_term(mul_exp(ea, eb), c);
            }
        }
        return r;
    }
    friend bool operator==(const MultiPoly& a, const MultiPoly& b) {
        return a.terms_ == b.terms_;
    }
    friend bool operator!=(const MultiPoly& a, const MultiPoly& b) { return !(a == b); }

    // point[i] is the value of x(i+1); every used variable must be covered.
    Gaussian eval(const std::vector<Gaussian>& point) const {
        Gaussian acc;
        for (const auto& [e, c] : terms_) {
            if (e.size() > point.size())
                throw std::invalid_argument("MultiPoly: evaluation point too short");
            Gaussian t = c;
            for (std::size_t i = 0; i < e.size(); ++i)
                for (unsigned k = 0; k < e[i]; ++k) t *= point[i];
            acc += t;
        }
        return acc;
    }

    MultiPoly derivative(std::size_t idx) const {
        if (idx == 0) throw std::invalid_argument("MultiPoly: variable index is 1-based");
        MultiPoly r;
        for (const auto& [e, c] : terms_) {
            if (idx - 1 >= e.size() || e[idx - 1] == 0) continue;
            Exponents d = e;
            unsigned k = d[idx - 1];
            d[idx - 1] -= 1;
            while (!d.empty() && d.back() == 0) d.pop_back();
            r.add_term(d, c * Gaussian(static_cast<long>(k)));
        }
        return r;
    }

    // Canonical print, whitespace-free, graded-lex term order. A coefficient
    // whose leading sign would collide with the term separator is negated and
    // joined with "-" instead, which round-trips under the scalar grammar.
    std::string str() const {
        if (terms_.empty()) return "0";
        std::string s;
        bool first = true;
        for (const auto& [e, c] : terms_) {
            Gaussian cc = c;
            if (first) {
                first = false;
            } else {
                bool negatable = cc.re().sign() < 0 ||
                                 (cc.re().is_zero() && cc.im().sign() < 0);
                if (negatable) {
                    s += '-';
                    cc = -cc;
                } else {
                    s += '+';
                }
            }
            bool has_mono = !e.empty();
            if (!has_mono) {
                s += cc.str();
            } else if (cc.is_one()) {
                s += mono_str(e);
            } else {
                s += cc.str();
                s += '*';
                s += mono_str(e);
            }
        }
        return s;
    }

private:
    TermMap terms_;

    void add_term(const Exponents& e, const Gaussian& c) {
        if (c.is_zero()) return;
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            terms_.emplace(e, c);
        } else {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    static Exponents mul_exp(const Exponents& a, const Exponents& b) {
        Exponents r(a.size() > b.size() ? a : b);
        const Exponents& s = a.size() > b.size() ? b : a;
        for (std::size_t i = 0; i < s.size(); ++i) r[i] += s[i];
        return r;
    }

    static std::string mono_str(const Exponents& e) {
        std::string s;
        bool first = true;
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            if (!first) s += '*';
            first = false;
            s += 'x';
            s += std::to_string(i + 1);
            if (e[i] > 1) {
                s += '^';
                s += std::to_string(e[i]);
            }
        }
        return s;
    }
};

} // namespace sympfact

#endif // SYMPFACT_MULTIPOLY_HPP
