#ifndef SYMPFACT_BOUNDS_HPP
#define SYMPFACT_BOUNDS_HPP

// Factor-count bound arithmetic for unitriangular symplectic products over a
// parameter space of dimension d. A transparent rule engine: every result
// carries the list of rules applied, since the bounds combine heterogeneous
// sources (constant-matrix lower bounds, stability-theoretic upper bounds).

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sympfact {

struct BoundInput {
    std::size_t n = 0;
    std::size_t d = 0;
    std::optional<std::size_t> known_ktilde;
    std::optional<std::size_t> known_kcont2;
};

struct BoundResult {
    std::size_t lower = 0;
    std::optional<std::size_t> upper;
    std::vector<std::string> derivation;
};

// Upper bound from the dimension recursion: one level is split off at cost
// k_cont(n,d) + 3 and k_cont(n,d) <= k_cont(2,d), so
// k(n,d) <= (n-1) (k_cont(2,d) + 3).
inline std::size_t k_recursion_upper(std::size_t k_cont_2, std::size_t n) {
    if (n < 2) throw std::invalid_argument("k_recursion_upper: need n >= 2");
    if (k_cont_2 < 1) throw std::invalid_argument("k_recursion_upper: need k_cont_2 >= 1");
    return (n - 1) * (k_cont_2 + 3);
}

// Upper bound after stabilization: in any larger size the count is at most
// seven times the skew-form count of the base size.
inline std::size_t k_stabilization_upper(std::size_t ktilde_n) {
    if (ktilde_n < 1) throw std::invalid_argument("k_stabilization_upper: need ktilde >= 1");
    return 7 * ktilde_n;
}

inline BoundResult k_bounds(const BoundInput& in) {
    if (in.n < 2) throw std::invalid_argument("k_bounds: need n >= 2");
    if (in.d < 1) throw std::invalid_argument("k_bounds: need d >= 1");
    if (in.known_ktilde && *in.known_ktilde < 1)
        throw std::invalid_argument("k_bounds: supplied ktilde must be >= 1");
    if (in.known_kcont2 && *in.known_kcont2 < 1)
        throw std::invalid_argument("k_bounds: supplied kcont2 must be >= 1");

    BoundResult out;
    const bool small = in.n <= 3;
    out.lower = small ? 5 : 6;
    out.derivation.push_back(
        small ? "rule lower-small: n <= 3, constant targets already need 5 factors, lower = 5"
              : "rule lower-large: n >= 4, constant targets already need 6 factors, lower = 6");

    std::optional<std::size_t> ktilde;
    if (in.known_ktilde) {
        ktilde = *in.known_ktilde;
        out.derivation.push_back("rule ktilde-supplied: using provided ktilde = " +
                                 std::to_string(*ktilde));
    } else if (in.d == 1) {
        ktilde = 4;
        out.derivation.push_back("rule ktilde-builtin: d = 1 has ktilde = 4");
    } else if (in.d == 2) {
        ktilde = 5;
        out.derivation.push_back("rule ktilde-builtin: d = 2 has ktilde <= 5, using 5");
    }

    if (ktilde) {
        const std::size_t mult = small ? 4 : 7;
        out.upper = mult * *ktilde;
        out.derivation.push_back(
            "rule multiplier-" + std::string(small ? "small" : "large") + ": n " +
            (small ? "<= 3" : ">= 4") + ", upper = " + std::to_string(mult) +
            " * ktilde = " + std::to_string(*out.upper));
    } else {
        out.derivation.push_back(
            "rule upper-unavailable: no built-in ktilde for d >= 3; supply --ktilde");
    }

    if (in.known_kcont2) {
        std::size_t rec = k_recursion_upper(*in.known_kcont2, in.n);
        out.derivation.push_back("rule recursion: upper <= (n-1) * (kcont2 + 3) = " +
                                 std::to_string(rec));
        if (!out.upper || rec < *out.upper) {
            out.upper = rec;
            out.derivation.push_back("rule recursion-tighter: upper = " +
                                     std::to_string(rec));
        }
    }

    if (out.upper && *out.upper < out.lower)
        throw std::invalid_argument("k_bounds: inconsistent input, upper " +
                                    std::to_string(*out.upper) + " < lower " +
                                    std::to_string(out.lower));
    return out;
}

} // namespace sympfact

#endif // SYMPFACT_BOUNDS_HPP
