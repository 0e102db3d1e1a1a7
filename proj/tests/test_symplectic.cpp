#include <catch2/catch_amalgamated.hpp>

#include "sympfact/symplectic.hpp"

using namespace sympfact;

namespace {

Matrix<Gaussian> gmat(const std::vector<std::vector<long>>& rows) {
    Matrix<Gaussian> m(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            m.at(i, j) = Gaussian(rows[i][j]);
    return m;
}

// Cofactor-expansion determinant, valid over any commutative ring.
template <class R>
R ring_det(const Matrix<R>& a) {
    const std::size_t n = a.rows();
    if (n == 0) return R::one();
    if (n == 1) return a.at(0, 0);
    R det = R::zero();
    for (std::size_t col = 0; col < n; ++col) {
        if (a.at(0, col).is_zero()) continue;
        Matrix<R> sub(n - 1, n - 1);
        for (std::size_t i = 1; i < n; ++i) {
            std::size_t jj = 0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == col) continue;
                sub.at(i - 1, jj++) = a.at(i, j);
            }
        }
        R term = a.at(0, col) * ring_det(sub);
        det = col % 2 == 0 ? det + term : det - term;
    }
    return det;
}

// Chain whose every A and Z entry is a distinct fresh variable.
ElementaryChain<MultiPoly> symbolic_chain(std::size_t n, std::size_t count) {
    ElementaryChain<MultiPoly> c{n, {}};
    std::size_t v = 1;
    for (std::size_t k = 0; k < count; ++k) {
        Matrix<MultiPoly> a = Matrix<MultiPoly>::identity(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) a.at(i, j) = MultiPoly::variable(v++);
        Matrix<MultiPoly> z(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) {
                MultiPoly p = MultiPoly::variable(v++);
                z.at(i, j) = p;
                z.at(j, i) = p;
            }
        c.factors.push_back(
            {k % 2 == 0 ? FactorSign::Minus : FactorSign::Plus, std::move(a), std::move(z)});
    }
    return c;
}

template <class R>
std::vector<R> slice(const std::vector<R>& row, std::size_t from, std::size_t len) {
    return std::vector<R>(row.begin() + from, row.begin() + from + len);
}

template <class R>
std::vector<R> add_rows(std::vector<R> a, const std::vector<R>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return a;
}

} // namespace

TEST_CASE("Symplectic forms") {
    CHECK(omega_matrix<Gaussian>(1, SymplecticForm::Standard) == gmat({{0, 1}, {-1, 0}}));
    CHECK(omega_matrix<Gaussian>(2, SymplecticForm::SkewDiagonal) ==
          gmat({{0, 0, 0, 1}, {0, 0, 1, 0}, {0, -1, 0, 0}, {-1, 0, 0, 0}}));
    for (std::size_t n = 1; n <= 3; ++n) {
        auto w = omega_matrix<Gaussian>(n, SymplecticForm::Standard);
        CHECK(w * w == -Matrix<Gaussian>::identity(2 * n));
        CHECK(is_symplectic(w));
        auto wt = omega_matrix<Gaussian>(n, SymplecticForm::SkewDiagonal);
        CHECK(wt * wt == -Matrix<Gaussian>::identity(2 * n));
        CHECK(is_symplectic(wt, SymplecticForm::SkewDiagonal));
    }
    CHECK(is_symplectic(Matrix<Gaussian>::identity(4)));
    CHECK(is_symplectic(gmat({{1, 1}, {0, 1}})));
    CHECK_FALSE(is_symplectic(gmat({{2, 0}, {0, 1}})));
    CHECK_FALSE(is_symplectic(gmat({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}})));
}

TEST_CASE("Basis change C carries the standard form to the skew-diagonal one") {
    for (std::size_t n = 1; n <= 5; ++n) {
        Matrix<Gaussian> c(2 * n, 2 * n);
        set_block(c, 0, 0, Matrix<Gaussian>::identity(n));
        set_block(c, n, n, antidiagonal_identity<Gaussian>(n));
        CHECK(c * c == Matrix<Gaussian>::identity(2 * n));
        CHECK(transpose(c) * omega_matrix<Gaussian>(n, SymplecticForm::Standard) * c ==
              omega_matrix<Gaussian>(n, SymplecticForm::SkewDiagonal));
        SplitMix64 g(derive_seed(0xC0, n));
        Matrix<Gaussian> m(2 * n, 2 * n);
        for (std::size_t i = 0; i < 2 * n; ++i)
            for (std::size_t j = 0; j < 2 * n; ++j) m.at(i, j) = random_gaussian(g);
        CHECK(skew_basis_conjugate(m) == c * m * c);
    }
}

TEST_CASE("Elementary matrices materialize to the stated block forms") {
    ElementarySymplectic<Gaussian> e1{FactorSign::Minus, gmat({{1}}), gmat({{2}})};
    CHECK(materialize_elementary(e1) == gmat({{1, 0}, {2, 1}}));
    ElementarySymplectic<Gaussian> e2{FactorSign::Plus, gmat({{1}}), gmat({{2}})};
    CHECK(materialize_elementary(e2) == gmat({{1, 2}, {0, 1}}));

    ElementarySymplectic<Gaussian> e3{FactorSign::Minus, gmat({{1, 3}, {0, 1}}),
                                      gmat({{1, 2}, {2, 5}})};
    auto m3 = materialize_elementary(e3);
    // [[A^-T, 0], [Z A^-T, A]] with A^-T = [[1, 0], [-3, 1]].
    CHECK(m3 == gmat({{1, 0, 0, 0}, {-3, 1, 0, 0}, {-5, 2, 1, 3}, {-13, 5, 0, 1}}));
    CHECK(is_symplectic(m3));
    ElementarySymplectic<Gaussian> e4{FactorSign::Plus, e3.a, e3.z};
    auto m4 = materialize_elementary(e4);
    // [[A^-1, Z A^T], [0, A^T]] with Z A^T = [[7, 2], [17, 5]].
    CHECK(m4 == gmat({{1, -3, 7, 2}, {0, 1, 17, 5}, {0, 0, 1, 0}, {0, 0, 3, 1}}));
    CHECK(is_symplectic(m4));

    CHECK_THROWS_AS(
        materialize_elementary(ElementarySymplectic<Gaussian>{
            FactorSign::Minus, gmat({{1, 0}, {2, 1}}), gmat({{0, 0}, {0, 0}})}),
        std::invalid_argument);
    CHECK_THROWS_AS(
        materialize_elementary(ElementarySymplectic<Gaussian>{
            FactorSign::Minus, gmat({{1, 1}, {0, 1}}), gmat({{0, 1}, {0, 0}})}),
        std::invalid_argument);
}

TEST_CASE("Random elementary matrices are symplectic and conjugate to one side") {
    SplitMix64 g(0xE1E);
    for (int t = 0; t < 60; ++t) {
        std::size_t n = static_cast<std::size_t>(g.range(1, 4));
        FactorSign sign = g.chance(1, 2) ? FactorSign::Minus : FactorSign::Plus;
        auto e = random_elementary(g, n, sign);
        auto m = materialize_elementary(e);
        CHECK(is_symplectic(m));
        auto conj = skew_basis_conjugate(m);
        CHECK(is_symplectic(conj, SymplecticForm::SkewDiagonal));
        CHECK(is_unitriangular(conj, sign == FactorSign::Plus));
    }
    std::size_t vc = 1;
    auto pe = random_sparse_poly_elementary(g, 3, FactorSign::Minus, vc);
    CHECK(is_symplectic(materialize_elementary(pe)));
}

TEST_CASE("Elementary inverse and omega conjugation") {
    SplitMix64 g(0xABC);
    for (int t = 0; t < 30; ++t) {
        std::size_t n = static_cast<std::size_t>(g.range(1, 4));
        FactorSign sign = g.chance(1, 2) ? FactorSign::Minus : FactorSign::Plus;
        auto e = random_elementary(g, n, sign);
        auto m = materialize_elementary(e);
        auto inv = invert_elementary(e);
        CHECK(inv.sign == sign);
        CHECK(materialize_elementary(inv) * m == Matrix<Gaussian>::identity(2 * n));
        auto w = omega_matrix<Gaussian>(n, SymplecticForm::Standard);
        auto winv = -w;
        auto conj = omega_conjugate(e);
        CHECK(conj.sign != sign);
        CHECK(materialize_elementary(conj) == w * m * winv);
        StandardFactor<Gaussian> f{g.chance(1, 2) ? FactorSide::Lower : FactorSide::Upper,
                                   random_symmetric_matrix(g, n)};
        CHECK(materialize_standard(omega_conjugate(f)) ==
              w * materialize_standard(f) * winv);
    }
}

TEST_CASE("Standard factors merge additively on one side") {
    SplitMix64 g(0x51DE);
    for (int t = 0; t < 20; ++t) {
        std::size_t n = static_cast<std::size_t>(g.range(1, 4));
        auto g1 = random_symmetric_matrix(g, n);
        auto g2 = random_symmetric_matrix(g, n);
        for (FactorSide side : {FactorSide::Lower, FactorSide::Upper}) {
            CHECK(materialize_standard(StandardFactor<Gaussian>{side, g1}) *
                      materialize_standard(StandardFactor<Gaussian>{side, g2}) ==
                  materialize_standard(StandardFactor<Gaussian>{side, g1 + g2}));
        }
    }
}

TEST_CASE("psi of the empty chain is the identity") {
    ElementaryChain<Gaussian> ec{2, {}};
    CHECK(psi(ec) == Matrix<Gaussian>::identity(4));
    FactorChain<Gaussian> fc{3, {}};
    CHECK(psi(fc) == Matrix<Gaussian>::identity(6));
}

TEST_CASE("Chain validation") {
    SplitMix64 g(0xF00);
    auto e1 = random_elementary(g, 2, FactorSign::Plus);
    ElementaryChain<Gaussian> bad{2, {e1}};
    CHECK_THROWS_AS(psi(bad), std::invalid_argument);
    FactorChain<Gaussian> badf{
        2,
        {{FactorSide::Lower, random_symmetric_matrix(g, 2)},
         {FactorSide::Lower, random_symmetric_matrix(g, 2)}}};
    CHECK_THROWS_AS(psi(badf), std::invalid_argument);
    FactorChain<Gaussian> okf{
        2,
        {{FactorSide::Upper, random_symmetric_matrix(g, 2)},
         {FactorSide::Lower, random_symmetric_matrix(g, 2)}}};
    CHECK(is_symplectic(psi(okf)));
}

TEST_CASE("phi equals the last row of psi") {
    SplitMix64 g(0xFEED);
    for (int t = 0; t < 100; ++t) {
        std::size_t n = static_cast<std::size_t>(g.range(1, 4));
        std::size_t count = static_cast<std::size_t>(g.range(0, 5));
        auto c = random_elementary_chain(g, n, count);
        auto p = psi(c);
        auto row = phi(c);
        REQUIRE(row.size() == 2 * n);
        for (std::size_t j = 0; j < 2 * n; ++j) CHECK(row[j] == p.at(2 * n - 1, j));
        CHECK(is_symplectic(p));
    }
}

TEST_CASE("First step of the last-row recursion, symbolically") {
    for (std::size_t n : {2u, 3u}) {
        auto c = symbolic_chain(n, 1);
        auto states = last_row_states(c);
        REQUIRE(states.size() == 2);
        const auto& f = c.factors[0];
        auto ait = transpose(invert_triangular(f.a, ShapeTag::UpperUnitriangular));
        // P^1 = ((Z_1 e_n)^T A_1^-T | e_n^T); (Z_1 e_n)^T is the last row of Z_1.
        std::vector<MultiPoly> zrow(n, MultiPoly::zero());
        for (std::size_t j = 0; j < n; ++j) zrow[j] = f.z.at(n - 1, j);
        auto expect_f = row_times(zrow, ait);
        for (std::size_t j = 0; j < n; ++j) {
            CHECK(states[1][j] == expect_f[j]);
            CHECK(states[1][n + j] ==
                  (j + 1 == n ? MultiPoly::one() : MultiPoly::zero()));
        }
    }
}

TEST_CASE("Interlacing relations between consecutive last-row states") {
    for (std::size_t n : {2u, 3u}) {
        auto c = symbolic_chain(n, n == 2 ? 4 : 3);
        auto states = last_row_states(c);
        for (std::size_t k = 1; k < states.size(); ++k) {
            const auto& f = c.factors[k - 1];
            auto prev_f = slice(states[k - 1], 0, n);
            auto prev_s = slice(states[k - 1], n, n);
            auto cur_f = slice(states[k], 0, n);
            auto cur_s = slice(states[k], n, n);
            auto ai = invert_triangular(f.a, ShapeTag::UpperUnitriangular);
            if (f.sign == FactorSign::Plus) {
                // Even position: P^k_f A_k = P^{k-1}_f and
                // P^k_s A_k^-T = P^{k-1}_s + P^{k-1}_f Z_k.
                CHECK(row_times(cur_f, f.a) == prev_f);
                CHECK(row_times(cur_s, transpose(ai)) ==
                      add_rows(prev_s, row_times(prev_f, f.z)));
            } else {
                // Odd position: P^k_f A_k^T = P^{k-1}_f + P^{k-1}_s Z_k and
                // P^k_s A_k^-1 = P^{k-1}_s.
                CHECK(row_times(cur_f, transpose(f.a)) ==
                      add_rows(prev_f, row_times(prev_s, f.z)));
                CHECK(row_times(cur_s, ai) == prev_s);
            }
        }
    }
}

TEST_CASE("psi has determinant one and is symplectic, symbolically for n=2") {
    auto c = symbolic_chain(2, 3);
    auto p = psi(c);
    CHECK(ring_det(p) == MultiPoly::one());
    auto w = omega_matrix<MultiPoly>(2, SymplecticForm::Standard);
    CHECK(transpose(p) * w * p == w);
}

TEST_CASE("psi has determinant one for random rational-point chains, n=3") {
    SplitMix64 g(0xD37);
    for (int t = 0; t < 25; ++t) {
        auto c = random_elementary_chain(g, 3, static_cast<std::size_t>(g.range(1, 4)));
        auto p = psi(c);
        CHECK(determinant(p) == Gaussian::one());
        CHECK(is_symplectic(p));
    }
}
