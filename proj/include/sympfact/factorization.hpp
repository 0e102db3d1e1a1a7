#ifndef SYMPFACT_FACTORIZATION_HPP
#define SYMPFACT_FACTORIZATION_HPP

// Factorization of elementary unitriangular-symplectic matrices into standard
// shear factors, plus the exact small-k search.
//
// The seven-factor pipeline for M^±(A, Z) with spectrum L = diag(l_1..l_n),
// l_i distinct units (default diag(1..n)):
//   M^-(A, Z) = M^-(Z) diag(L, L^-1) diag(L^-1 A^-T, (L^-1 A^-T)^-T)
// and mirrored for M^+ with B = A^-1 in place of A^-T. The constant block
// factors in four shears, the second block is diagonalized as K D K^-1 with
// K unitriangular and factors in four shears through P1 = K K^T and
// P2 = K^-T D K^-1, giving nine shears that merge at two seams to seven.
// Divisions only ever hit units (spectrum gaps and constants), so the whole
// pipeline is polynomial-safe.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sympfact/symplectic.hpp"

namespace sympfact {

template <class R>
struct DiagonalizationResult {
    Matrix<R> k;       // unitriangular, same orientation as the input
    Matrix<R> lambda;  // diagonal of the input
};

// Solves T K = K diag(T) for K unitriangular. The diagonal gaps
// T_jj - T_ii must be units of R; upper fixes the orientation.
template <class R>
DiagonalizationResult<R> diagonalize_triangular(const Matrix<R>& t, bool upper) {
    if (!t.is_square()) throw std::invalid_argument("diagonalize_triangular: not square");
    const std::size_t n = t.rows();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (((upper && j < i) || (!upper && j > i)) && !t.at(i, j).is_zero())
                throw std::invalid_argument(
                    "diagonalize_triangular: matrix is not triangular as claimed");
    std::vector<R> gap_inv(n * n, R::zero());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            R gap = t.at(j, j) - t.at(i, i);
            if (!gap.is_unit())
                throw std::domain_error(
                    "diagonalize_triangular: diagonal entries must have unit gaps");
            gap_inv[i * n + j] = gap.inv();
        }
    Matrix<R> k = Matrix<R>::identity(n);
    if (upper) {
        for (std::size_t d = 1; d < n; ++d) {
            for (std::size_t i = 0; i + d < n; ++i) {
                std::size_t j = i + d;
                R s = R::zero();
                for (std::size_t m = i + 1; m <= j; ++m) s += t.at(i, m) * k.at(m, j);
                k.at(i, j) = s * gap_inv[i * n + j];
            }
        }
    } else {
        for (std::size_t d = 1; d < n; ++d) {
            for (std::size_t j = 0; j + d < n; ++j) {
                std::size_t i = j + d;
                R s = R::zero();
                for (std::size_t m = j; m < i; ++m) s += t.at(i, m) * k.at(m, j);
                k.at(i, j) = s * gap_inv[i * n + j];
            }
        }
    }
    Matrix<R> lambda(n, n);
    for (std::size_t i = 0; i < n; ++i) lambda.at(i, i) = t.at(i, i);
    return {std::move(k), std::move(lambda)};
}

// diag(1, 2, ..., n) as ring constants.
template <class R>
Matrix<R> default_spectrum(std::size_t n) {
    Matrix<R> l(n, n);
    for (std::size_t i = 0; i < n; ++i) l.at(i, i) = R(static_cast<long>(i + 1));
    return l;
}

// Four shears multiplying to diag(L, L^-1); L any diagonal of units.
template <class R>
FactorChain<R> factor_block_diag_constant(const Matrix<R>& lambda, FactorSide leading) {
    if (!is_diagonal(lambda))
        throw std::invalid_argument("factor_block_diag_constant: lambda must be diagonal");
    const std::size_t n = lambda.rows();
    Matrix<R> li = invert_triangular(lambda, ShapeTag::Diagonal);
    Matrix<R> eye = Matrix<R>::identity(n);
    FactorChain<R> c{n, {}};
    if (leading == FactorSide::Lower) {
        c.factors = {{FactorSide::Lower, -li},
                     {FactorSide::Upper, lambda - eye},
                     {FactorSide::Lower, eye},
                     {FactorSide::Upper, li - eye}};
    } else {
        c.factors = {{FactorSide::Upper, lambda - eye},
                     {FactorSide::Lower, eye},
                     {FactorSide::Upper, li - eye},
                     {FactorSide::Lower, -lambda}};
    }
    return c;
}

// Four shears multiplying to diag(P1 P2, P1^-1 P2^-1) for symmetric
// invertible P1, P2. Inverses are passed in so polynomial rings never see a
// general matrix inversion.
template <class R>
FactorChain<R> factor_block_diag_p1p2(const Matrix<R>& p1, const Matrix<R>& p1inv,
                                      const Matrix<R>& p2, const Matrix<R>& p2inv,
                                      FactorSide leading) {
    const std::size_t n = p1.rows();
    auto eye = Matrix<R>::identity(n);
    if (!is_symmetric(p1) || !is_symmetric(p2) || p1 * p1inv != eye || p2 * p2inv != eye)
        throw std::invalid_argument(
            "factor_block_diag_p1p2: need symmetric factors with matching inverses");
    FactorChain<R> c{n, {}};
    if (leading == FactorSide::Upper) {
        c.factors = {{FactorSide::Upper, -p1},
                     {FactorSide::Lower, p1inv - p2},
                     {FactorSide::Upper, p2inv},
                     {FactorSide::Lower, p2 * p1 * p2 - p2}};
    } else {
        c.factors = {{FactorSide::Lower, p1inv * p2inv * p1inv - p1inv},
                     {FactorSide::Upper, p1},
                     {FactorSide::Lower, p2 - p1inv},
                     {FactorSide::Upper, -p2inv}};
    }
    return c;
}

// Collapses adjacent same-side shears additively; the result alternates.
template <class R>
FactorChain<R> merge_adjacent(std::size_t n, const std::vector<StandardFactor<R>>& factors) {
    FactorChain<R> c{n, {}};
    for (const auto& f : factors) {
        if (!c.factors.empty() && c.factors.back().side == f.side)
            c.factors.back().g = c.factors.back().g + f.g;
        else
            c.factors.push_back(f);
    }
    return c;
}

template <class R>
struct SevenFactorResult {
    std::vector<StandardFactor<R>> unmerged;  // nine shears, two mergeable seams
    FactorChain<R> chain;                     // seven alternating shears
};

template <class R>
SevenFactorResult<R> factor_elementary_7(const ElementarySymplectic<R>& e,
                                         const Matrix<R>& lambda) {
    validate_elementary(e);
    const std::size_t n = e.half_dim();
    if (!is_diagonal(lambda) || lambda.rows() != n)
        throw std::invalid_argument("factor_elementary_7: spectrum must be n x n diagonal");
    for (std::size_t i = 0; i < n; ++i)
        if (!lambda.at(i, i).is_unit())
            throw std::invalid_argument("factor_elementary_7: spectrum entries must be units");
    const bool minus = e.sign == FactorSign::Minus;
    Matrix<R> li = invert_triangular(lambda, ShapeTag::Diagonal);
    Matrix<R> ai = invert_triangular(e.a, ShapeTag::UpperUnitriangular);
    Matrix<R> b = minus ? transpose(ai) : ai;
    auto dg = diagonalize_triangular(li * b, !minus);
    Matrix<R> ki = invert_triangular(
        dg.k, minus ? ShapeTag::LowerUnitriangular : ShapeTag::UpperUnitriangular);
    Matrix<R> kt = transpose(dg.k), kit = transpose(ki);
    Matrix<R> p1 = dg.k * kt;
    Matrix<R> p1i = kit * ki;
    Matrix<R> p2 = kit * li * ki;
    Matrix<R> p2i = dg.k * lambda * kt;

    std::vector<StandardFactor<R>> nine;
    nine.push_back({minus ? FactorSide::Lower : FactorSide::Upper, e.z});
    auto diag_part =
        factor_block_diag_constant(lambda, minus ? FactorSide::Lower : FactorSide::Upper);
    auto p1p2_part = factor_block_diag_p1p2(
        p1, p1i, p2, p2i, minus ? FactorSide::Upper : FactorSide::Lower);
    for (auto& f : diag_part.factors) nine.push_back(std::move(f));
    for (auto& f : p1p2_part.factors) nine.push_back(std::move(f));
    FactorChain<R> merged = merge_adjacent(n, nine);
    return {std::move(nine), std::move(merged)};
}

template <class R>
SevenFactorResult<R> factor_elementary_7(const ElementarySymplectic<R>& e) {
    return factor_elementary_7(e, default_spectrum<R>(e.half_dim()));
}

// Recovers (sign, A, Z) from a materialized elementary matrix, if it has
// that shape.
template <class R>
std::optional<ElementarySymplectic<R>> recognize_elementary(const Matrix<R>& m) {
    if (!m.is_square() || m.rows() % 2 != 0 || m.rows() == 0) return std::nullopt;
    const std::size_t n = m.rows() / 2;
    Matrix<R> t11 = get_block(m, 0, 0, n, n);
    Matrix<R> t12 = get_block(m, 0, n, n, n);
    Matrix<R> t21 = get_block(m, n, 0, n, n);
    Matrix<R> t22 = get_block(m, n, n, n, n);
    auto eye = Matrix<R>::identity(n);
    if (is_zero_matrix(t12)) {
        if (!is_unitriangular(t22, true)) return std::nullopt;
        if (transpose(t11) * t22 != eye) return std::nullopt;
        Matrix<R> z = t21 * transpose(t22);
        if (!is_symmetric(z)) return std::nullopt;
        return ElementarySymplectic<R>{FactorSign::Minus, t22, z};
    }
    if (is_zero_matrix(t21)) {
        Matrix<R> a = transpose(t22);
        if (!is_unitriangular(a, true)) return std::nullopt;
        if (t11 * a != eye) return std::nullopt;
        Matrix<R> z =
            t12 * transpose(invert_triangular(a, ShapeTag::UpperUnitriangular));
        if (!is_symmetric(z)) return std::nullopt;
        return ElementarySymplectic<R>{FactorSign::Plus, a, z};
    }
    return std::nullopt;
}

// Symmetric invertible W with A W = W A^T, found from the nullspace of the
// linear condition followed by a bounded deterministic hunt for an invertible
// combination.
inline std::optional<Matrix<Gaussian>> find_commuting_symmetric(const Matrix<Gaussian>& a) {
    const std::size_t n = a.rows();
    if (a == Matrix<Gaussian>::identity(n)) return Matrix<Gaussian>::identity(n);
    std::vector<std::pair<std::size_t, std::size_t>> unk;
    std::vector<std::size_t> pos(n * n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            pos[i * n + j] = pos[j * n + i] = unk.size();
            unk.emplace_back(i, j);
        }
    // A W - W A^T is antisymmetric; its strict upper triangle gives all
    // independent equations.
    Matrix<Gaussian> sys(n * (n - 1) / 2, unk.size());
    std::size_t r = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            for (std::size_t k = 0; k < n; ++k) {
                sys.at(r, pos[k * n + j]) += a.at(i, k);
                sys.at(r, pos[i * n + k]) -= a.at(j, k);
            }
            ++r;
        }
    auto basis = nullspace(sys);
    if (basis.empty()) return std::nullopt;
    auto build = [&](const std::vector<Gaussian>& coords) {
        Matrix<Gaussian> w(n, n);
        for (std::size_t u = 0; u < unk.size(); ++u) {
            w.at(unk[u].first, unk[u].second) = coords[u];
            w.at(unk[u].second, unk[u].first) = coords[u];
        }
        return w;
    };
    auto usable = [&](const Matrix<Gaussian>& w) { return !determinant(w).is_zero(); };
    for (const auto& b : basis) {
        auto w = build(b);
        if (usable(w)) return w;
    }
    for (long c = 1; c <= 24; ++c) {
        std::vector<Gaussian> coords(unk.size(), Gaussian::zero());
        Gaussian weight = Gaussian::one();
        for (const auto& b : basis) {
            for (std::size_t u = 0; u < coords.size(); ++u) coords[u] += weight * b[u];
            weight = weight * Gaussian(c);
        }
        auto w = build(coords);
        if (usable(w)) return w;
    }
    SplitMix64 g(0x57A8B11C0DE5EEDULL);
    for (int attempt = 0; attempt < 100; ++attempt) {
        std::vector<Gaussian> coords(unk.size(), Gaussian::zero());
        for (const auto& b : basis) {
            Gaussian weight = random_nonzero_gaussian(g);
            for (std::size_t u = 0; u < coords.size(); ++u) coords[u] += weight * b[u];
        }
        auto w = build(coords);
        if (usable(w)) return w;
    }
    return std::nullopt;
}

enum class SearchStatus { Found, NotFound, Unsupported };

struct SearchResult {
    SearchStatus status = SearchStatus::NotFound;
    FactorChain<Gaussian> chain;
    std::string note;
};

// Closed-form elimination for k <= 3 against arbitrary symplectic targets,
// and the symmetric-intertwiner construction for k = 4 against elementary
// targets. Larger k has no exact strategy here.
inline SearchResult search_exact(const Matrix<Gaussian>& target, std::size_t k) {
    using M = Matrix<Gaussian>;
    if (!target.is_square() || target.rows() % 2 != 0 || target.rows() == 0)
        return {SearchStatus::Unsupported, {}, "target must be 2n x 2n"};
    const std::size_t n = target.rows() / 2;
    auto finish = [&](FactorChain<Gaussian> c, std::string note) -> SearchResult {
        if (psi(c) != target)
            return {SearchStatus::NotFound, {}, "candidate failed exact reassembly"};
        return {SearchStatus::Found, std::move(c), std::move(note)};
    };
    if (k == 0) {
        if (target == M::identity(2 * n))
            return {SearchStatus::Found, FactorChain<Gaussian>{n, {}}, "identity"};
        return {SearchStatus::NotFound, {}, "only the identity has zero factors"};
    }
    if (!is_symplectic(target))
        return {SearchStatus::NotFound, {}, "target is not symplectic"};
    M t11 = get_block(target, 0, 0, n, n);
    M t12 = get_block(target, 0, n, n, n);
    M t21 = get_block(target, n, 0, n, n);
    M t22 = get_block(target, n, n, n, n);
    auto eye = M::identity(n);
    if (k == 1) {
        if (t11 == eye && t22 == eye) {
            if (is_zero_matrix(t12) && is_symmetric(t21))
                return finish({n, {{FactorSide::Lower, t21}}}, "single lower shear");
            if (is_zero_matrix(t21) && is_symmetric(t12))
                return finish({n, {{FactorSide::Upper, t12}}}, "single upper shear");
        }
        return {SearchStatus::NotFound, {}, "target is not a single shear"};
    }
    if (k == 2) {
        if (t11 == eye && is_symmetric(t12) && is_symmetric(t21) &&
            t22 == t21 * t12 + eye)
            return finish({n, {{FactorSide::Lower, t21}, {FactorSide::Upper, t12}}},
                          "lower-upper");
        if (t22 == eye && is_symmetric(t12) && is_symmetric(t21) &&
            t11 == eye + t12 * t21)
            return finish({n, {{FactorSide::Upper, t12}, {FactorSide::Lower, t21}}},
                          "upper-lower");
        return {SearchStatus::NotFound, {}, "no two-shear pattern matches"};
    }
    if (k == 3) {
        // Lower-leading: target = M^-(G1) M^+(G2) M^-(G3) with G2 = t12,
        // I + G2 G3 = t11, G1 t11 = t21 - G3.
        if (is_symmetric(t12) && !determinant(t11).is_zero()) {
            std::optional<M> g3;
            if (t11 == eye)
                g3 = M(n, n);
            else if (!determinant(t12).is_zero())
                g3 = invert_field(t12) * (t11 - eye);
            if (g3 && is_symmetric(*g3)) {
                M g1 = (t21 - *g3) * invert_field(t11);
                if (is_symmetric(g1)) {
                    auto res = finish({n,
                                       {{FactorSide::Lower, g1},
                                        {FactorSide::Upper, t12},
                                        {FactorSide::Lower, *g3}}},
                                      "lower-upper-lower");
                    if (res.status == SearchStatus::Found) return res;
                }
            }
        }
        // Upper-leading mirror with G2 = t21, I + G2 G3 = t22.
        if (is_symmetric(t21) && !determinant(t22).is_zero()) {
            std::optional<M> g3;
            if (t22 == eye)
                g3 = M(n, n);
            else if (!determinant(t21).is_zero())
                g3 = invert_field(t21) * (t22 - eye);
            if (g3 && is_symmetric(*g3)) {
                M g1 = (t12 - *g3) * invert_field(t22);
                if (is_symmetric(g1)) {
                    auto res = finish({n,
                                       {{FactorSide::Upper, g1},
                                        {FactorSide::Lower, t21},
                                        {FactorSide::Upper, *g3}}},
                                      "upper-lower-upper");
                    if (res.status == SearchStatus::Found) return res;
                }
            }
        }
        return {SearchStatus::NotFound, {}, "no three-shear pattern matches"};
    }
    if (k == 4) {
        auto rec = recognize_elementary(target);
        if (!rec)
            return {SearchStatus::Unsupported, {},
                    "strategy/size combination unsupported: k=4 exact search needs an "
                    "elementary target"};
        // Work in the minus chart; a plus target is omega-conjugated first
        // and the factor sides are swapped (negating each G) afterwards.
        ElementarySymplectic<Gaussian> em =
            rec->sign == FactorSign::Minus ? *rec : omega_conjugate(*rec);
        auto w = find_commuting_symmetric(em.a);
        if (!w)
            return {SearchStatus::NotFound, {},
                    "no invertible symmetric intertwiner for A was found"};
        M wi = invert_field(*w);
        M ait = transpose(invert_triangular(em.a, ShapeTag::UpperUnitriangular));
        M g2 = wi * (em.a - eye);
        std::vector<StandardFactor<Gaussian>> fs = {
            {FactorSide::Lower, em.z + *w},
            {FactorSide::Upper, g2},
            {FactorSide::Lower, -(*w * ait)},
            {FactorSide::Upper, -(transpose(em.a) * g2)}};
        if (rec->sign == FactorSign::Plus) {
            for (auto& f : fs) {
                f.side = f.side == FactorSide::Lower ? FactorSide::Upper : FactorSide::Lower;
                f.g = -f.g;
            }
        }
        return finish({n, std::move(fs)}, "four-shear intertwiner construction");
    }
    return {SearchStatus::Unsupported, {}, "strategy/size combination unsupported"};
}

} // namespace sympfact

#endif // SYMPFACT_FACTORIZATION_HPP
