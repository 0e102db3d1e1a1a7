#ifndef SYMPFACT_SYMPLECTIC_HPP
#define SYMPFACT_SYMPLECTIC_HPP

// Symplectic forms, elementary unitriangular-symplectic matrices, standard
// shear factors, alternating chains, and the product / last-row maps.
//
// n is the half dimension; 2n x 2n matrices use the block split (first |
// second) of size n. A is upper unitriangular, Z and G symmetric.
//   M^-(A, Z) = [[A^-T, 0], [Z A^-T, A]]     M^-(G) = [[I, 0], [G, I]]
//   M^+(A, Z) = [[A^-1, Z A^T], [0, A^T]]    M^+(G) = [[I, G], [0, I]]
// Elementary chains alternate signs starting with minus; factor chains
// alternate sides starting with either. An empty chain is the identity.

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "sympfact/matrix.hpp"
#include "sympfact/multipoly.hpp"
#include "sympfact/prng.hpp"

namespace sympfact {

enum class SymplecticForm { Standard, SkewDiagonal };
enum class FactorSign { Minus, Plus };
enum class FactorSide { Lower, Upper };

// L_n: ones on the antidiagonal.
template <class R>
Matrix<R> antidiagonal_identity(std::size_t n) {
    Matrix<R> l(n, n);
    for (std::size_t i = 0; i < n; ++i) l.at(i, n - 1 - i) = R::one();
    return l;
}

// Standard: [[0, I], [-I, 0]]. SkewDiagonal: [[0, L], [-L, 0]].
template <class R>
Matrix<R> omega_matrix(std::size_t n, SymplecticForm form) {
    Matrix<R> w(2 * n, 2 * n);
    Matrix<R> top = form == SymplecticForm::Standard ? Matrix<R>::identity(n)
                                                     : antidiagonal_identity<R>(n);
    set_block(w, 0, n, top);
    set_block(w, n, 0, -top);
    return w;
}

template <class R>
bool is_symplectic(const Matrix<R>& m, SymplecticForm form = SymplecticForm::Standard) {
    if (!m.is_square() || m.rows() % 2 != 0 || m.rows() == 0) return false;
    Matrix<R> w = omega_matrix<R>(m.rows() / 2, form);
    return transpose(m) * w * m == w;
}

// Conjugation by C = diag(I_n, L_n): entry (i, j) moves from (s(i), s(j))
// where s fixes the first block and reverses the second. C is its own
// inverse, so this maps Standard-symplectic to SkewDiagonal-symplectic.
template <class R>
Matrix<R> skew_basis_conjugate(const Matrix<R>& m) {
    if (!m.is_square() || m.rows() % 2 != 0)
        throw std::invalid_argument("skew_basis_conjugate: need even square size");
    const std::size_t n = m.rows() / 2;
    auto s = [n](std::size_t i) { return i < n ? i : 3 * n - 1 - i; };
    Matrix<R> r(2 * n, 2 * n);
    for (std::size_t i = 0; i < 2 * n; ++i)
        for (std::size_t j = 0; j < 2 * n; ++j) r.at(i, j) = m.at(s(i), s(j));
    return r;
}

template <class R>
struct ElementarySymplectic {
    using ring_type = R;

    FactorSign sign = FactorSign::Minus;
    Matrix<R> a;
    Matrix<R> z;

    std::size_t half_dim() const { return a.rows(); }
};

template <class R>
void validate_elementary(const ElementarySymplectic<R>& e) {
    if (!e.a.is_square() || !e.z.is_square() || e.a.rows() != e.z.rows())
        throw std::invalid_argument(
            "elementary factor: A and Z must be square of equal size");
    if (!is_unitriangular(e.a, true))
        throw std::invalid_argument("elementary factor: A must be upper unitriangular");
    if (!is_symmetric(e.z))
        throw std::invalid_argument("elementary factor: Z must be symmetric");
}

template <class R>
Matrix<R> materialize_elementary(const ElementarySymplectic<R>& e) {
    validate_elementary(e);
    const std::size_t n = e.half_dim();
    Matrix<R> ai = invert_triangular(e.a, ShapeTag::UpperUnitriangular);
    Matrix<R> m(2 * n, 2 * n);
    if (e.sign == FactorSign::Minus) {
        Matrix<R> ait = transpose(ai);
        set_block(m, 0, 0, ait);
        set_block(m, n, 0, e.z * ait);
        set_block(m, n, n, e.a);
    } else {
        set_block(m, 0, 0, ai);
        set_block(m, 0, n, e.z * transpose(e.a));
        set_block(m, n, n, transpose(e.a));
    }
    return m;
}

// M^-(A, Z)^-1 = M^-(A^-1, -A^-1 Z A^-T); M^+(A, Z)^-1 = M^+(A^-1, -A Z A^T).
template <class R>
ElementarySymplectic<R> invert_elementary(const ElementarySymplectic<R>& e) {
    Matrix<R> ai = invert_triangular(e.a, ShapeTag::UpperUnitriangular);
    Matrix<R> z = e.sign == FactorSign::Minus ? -(ai * e.z * transpose(ai))
                                              : -(e.a * e.z * transpose(e.a));
    return {e.sign, ai, z};
}

// Omega M^±(A, Z) Omega^-1 = M^∓(A^-1, -Z).
template <class R>
ElementarySymplectic<R> omega_conjugate(const ElementarySymplectic<R>& e) {
    return {e.sign == FactorSign::Minus ? FactorSign::Plus : FactorSign::Minus,
            invert_triangular(e.a, ShapeTag::UpperUnitriangular), -e.z};
}

template <class R>
struct StandardFactor {
    using ring_type = R;

    FactorSide side = FactorSide::Lower;
    Matrix<R> g;
};

template <class R>
void validate_standard(const StandardFactor<R>& f) {
    if (!is_symmetric(f.g))
        throw std::invalid_argument("standard factor: G must be symmetric");
}

template <class R>
Matrix<R> materialize_standard(const StandardFactor<R>& f) {
    validate_standard(f);
    const std::size_t n = f.g.rows();
    Matrix<R> m = Matrix<R>::identity(2 * n);
    if (f.side == FactorSide::Lower)
        set_block(m, n, 0, f.g);
    else
        set_block(m, 0, n, f.g);
    return m;
}

// Omega M^±(G) Omega^-1 = M^∓(-G).
template <class R>
StandardFactor<R> omega_conjugate(const StandardFactor<R>& f) {
    return {f.side == FactorSide::Lower ? FactorSide::Upper : FactorSide::Lower, -f.g};
}

template <class R>
struct ElementaryChain {
    using ring_type = R;

    std::size_t n = 0;
    std::vector<ElementarySymplectic<R>> factors;
};

template <class R>
struct FactorChain {
    using ring_type = R;

    std::size_t n = 0;
    std::vector<StandardFactor<R>> factors;
};

template <class R>
void validate_chain(const ElementaryChain<R>& c) {
    for (std::size_t k = 0; k < c.factors.size(); ++k) {
        const auto& f = c.factors[k];
        validate_elementary(f);
        if (f.half_dim() != c.n)
            throw std::invalid_argument("chain: factor size mismatch");
        FactorSign expect = k % 2 == 0 ? FactorSign::Minus : FactorSign::Plus;
        if (f.sign != expect)
            throw std::invalid_argument("chain: signs must alternate starting with minus");
    }
}

template <class R>
void validate_chain(const FactorChain<R>& c) {
    for (std::size_t k = 0; k < c.factors.size(); ++k) {
        const auto& f = c.factors[k];
        validate_standard(f);
        if (f.g.rows() != c.n)
            throw std::invalid_argument("chain: factor size mismatch");
        if (k > 0 && f.side == c.factors[k - 1].side)
            throw std::invalid_argument("chain: sides must alternate");
    }
}

template <class R>
Matrix<R> psi(const ElementaryChain<R>& c) {
    validate_chain(c);
    Matrix<R> p = Matrix<R>::identity(2 * c.n);
    for (const auto& f : c.factors) p = p * materialize_elementary(f);
    return p;
}

template <class R>
Matrix<R> psi(const FactorChain<R>& c) {
    validate_chain(c);
    Matrix<R> p = Matrix<R>::identity(2 * c.n);
    for (const auto& f : c.factors) p = p * materialize_standard(f);
    return p;
}

// States P^0, ..., P^K of the last-row recursion: P^0 = e_2n and
// P^k = P^{k-1} M_k, kept as split rows (P_f | P_s) so only n x n products
// ever occur. Minus step: P'_f = (P_f + P_s Z) A^-T, P'_s = P_s A.
// Plus step: P'_f = P_f A^-1, P'_s = (P_s + P_f Z) A^T.
template <class R>
std::vector<std::vector<R>> last_row_states(const ElementaryChain<R>& c) {
    validate_chain(c);
    if (c.n == 0) throw std::invalid_argument("last_row_states: n must be positive");
    const std::size_t n = c.n;
    std::vector<R> pf(n, R::zero()), ps(n, R::zero());
    ps[n - 1] = R::one();
    std::vector<std::vector<R>> states;
    auto snapshot = [&]() {
        std::vector<R> row = pf;
        row.insert(row.end(), ps.begin(), ps.end());
        states.push_back(std::move(row));
    };
    snapshot();
    for (const auto& f : c.factors) {
        Matrix<R> ai = invert_triangular(f.a, ShapeTag::UpperUnitriangular);
        if (f.sign == FactorSign::Minus) {
            std::vector<R> t = row_times(ps, f.z);
            for (std::size_t i = 0; i < n; ++i) t[i] += pf[i];
            pf = row_times(t, transpose(ai));
            ps = row_times(ps, f.a);
        } else {
            std::vector<R> t = row_times(pf, f.z);
            for (std::size_t i = 0; i < n; ++i) t[i] += ps[i];
            ps = row_times(t, transpose(f.a));
            pf = row_times(pf, ai);
        }
        snapshot();
    }
    return states;
}

template <class R>
std::vector<R> phi(const ElementaryChain<R>& c) {
    return last_row_states(c).back();
}

template <class R>
std::vector<R> phi(const FactorChain<R>& c) {
    Matrix<R> p = psi(c);
    std::vector<R> row(p.cols(), R::zero());
    for (std::size_t j = 0; j < p.cols(); ++j) row[j] = p.at(p.rows() - 1, j);
    return row;
}

inline Matrix<Gaussian> random_upper_unitriangular(SplitMix64& g, std::size_t n) {
    auto a = Matrix<Gaussian>::identity(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) a.at(i, j) = random_gaussian(g);
    return a;
}

inline Matrix<Gaussian> random_symmetric_matrix(SplitMix64& g, std::size_t n) {
    Matrix<Gaussian> m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            Gaussian v = random_gaussian(g);
            m.at(i, j) = v;
            m.at(j, i) = v;
        }
    return m;
}

inline ElementarySymplectic<Gaussian> random_elementary(SplitMix64& g, std::size_t n,
                                                        FactorSign sign) {
    return {sign, random_upper_unitriangular(g, n), random_symmetric_matrix(g, n)};
}

inline ElementaryChain<Gaussian> random_elementary_chain(SplitMix64& g, std::size_t n,
                                                         std::size_t count) {
    ElementaryChain<Gaussian> c{n, {}};
    for (std::size_t k = 0; k < count; ++k)
        c.factors.push_back(
            random_elementary(g, n, k % 2 == 0 ? FactorSign::Minus : FactorSign::Plus));
    return c;
}

inline FactorChain<Gaussian> random_factor_chain(SplitMix64& g, std::size_t n,
                                                 std::size_t count, FactorSide leading) {
    FactorChain<Gaussian> c{n, {}};
    FactorSide side = leading;
    for (std::size_t k = 0; k < count; ++k) {
        c.factors.push_back({side, random_symmetric_matrix(g, n)});
        side = side == FactorSide::Lower ? FactorSide::Upper : FactorSide::Lower;
    }
    return c;
}

// Sparse polynomial elementary: one linear entry in A and one or two in Z,
// each over a fresh variable drawn from var_counter, plus a few constant
// entries. Sparseness keeps the polynomial factor outputs of downstream
// factorizations small.
inline ElementarySymplectic<MultiPoly> random_sparse_poly_elementary(
    SplitMix64& g, std::size_t n, FactorSign sign, std::size_t& var_counter) {
    std::size_t& v = var_counter;
    auto linear = [&](void) {
        MultiPoly p = MultiPoly::variable(v++);
        if (g.chance(1, 2)) p = p + MultiPoly::constant(random_gaussian(g));
        return p;
    };
    Matrix<MultiPoly> a = Matrix<MultiPoly>::identity(n);
    if (n >= 2) {
        std::size_t i = static_cast<std::size_t>(g.range(0, static_cast<long>(n) - 2));
        std::size_t j =
            static_cast<std::size_t>(g.range(static_cast<long>(i) + 1, static_cast<long>(n) - 1));
        a.at(i, j) = linear();
        std::size_t i2 = static_cast<std::size_t>(g.range(0, static_cast<long>(n) - 2));
        std::size_t j2 =
            static_cast<std::size_t>(g.range(static_cast<long>(i2) + 1, static_cast<long>(n) - 1));
        if (i2 != i || j2 != j) a.at(i2, j2) = MultiPoly::constant(random_gaussian(g));
    }
    Matrix<MultiPoly> z(n, n);
    auto set_sym = [&](std::size_t i, std::size_t j, const MultiPoly& p) {
        z.at(i, j) = p;
        z.at(j, i) = p;
    };
    std::size_t zi = static_cast<std::size_t>(g.range(0, static_cast<long>(n) - 1));
    std::size_t zj = static_cast<std::size_t>(g.range(static_cast<long>(zi), static_cast<long>(n) - 1));
    set_sym(zi, zj, linear());
    if (g.chance(1, 2)) {
        std::size_t wi = static_cast<std::size_t>(g.range(0, static_cast<long>(n) - 1));
        std::size_t wj =
            static_cast<std::size_t>(g.range(static_cast<long>(wi), static_cast<long>(n) - 1));
        if (wi != zi || wj != zj) set_sym(wi, wj, linear());
    }
    std::size_t ci = static_cast<std::size_t>(g.range(0, static_cast<long>(n) - 1));
    std::size_t cj = static_cast<std::size_t>(g.range(static_cast<long>(ci), static_cast<long>(n) - 1));
    if (z.at(ci, cj).is_zero()) set_sym(ci, cj, MultiPoly::constant(random_gaussian(g)));
    return {sign, a, z};
}

inline ElementaryChain<MultiPoly> random_sparse_poly_chain(SplitMix64& g, std::size_t n,
                                                           std::size_t count) {
    ElementaryChain<MultiPoly> c{n, {}};
    std::size_t var_counter = 1;
    for (std::size_t k = 0; k < count; ++k)
        c.factors.push_back(random_sparse_poly_elementary(
            g, n, k % 2 == 0 ? FactorSign::Minus : FactorSign::Plus, var_counter));
    return c;
}

} // namespace sympfact

#endif // SYMPFACT_SYMPLECTIC_HPP
