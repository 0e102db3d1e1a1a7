#ifndef SYMPFACT_FIBER_HPP
#define SYMPFACT_FIBER_HPP

// Geometry of the last-row map phi on alternating elementary chains:
// singular-set membership, exact Jacobian by dual-number forward mode,
// stratification of nonzero targets, reduction of the 2n fiber equations to
// one multilinear residual equation per stratum, and the shear fields that
// span fiber tangents at smooth points.
//
// Reduction plans eliminate 2n-1 chain coordinates. Substitutions are kept
// in evaluation order; each expression references only free variables and
// variables derived by earlier substitutions, never composed, so the
// expressions stay small. Some levels are recoordinatized: a level may store
// D with A = D^-1 (a_inverse) and may store Zt with Z = S^-1 Zt S^-T where S
// is the stored triangular block (z_tilde). All divisions are by constant
// coordinates of the target, so expressions stay polynomial.

#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sympfact/dual.hpp"
#include "sympfact/gaussian.hpp"
#include "sympfact/matrix.hpp"
#include "sympfact/multipoly.hpp"
#include "sympfact/prng.hpp"
#include "sympfact/symplectic.hpp"

namespace sympfact {

using ChainPoint = ElementaryChain<Gaussian>;

// Membership in the singular set: last column of every Z before the final
// level is zero and every interior A fixes e_n.
template <class R>
bool in_singular_set(const ElementaryChain<R>& c) {
    validate_chain(c);
    const std::size_t K = c.factors.size();
    const std::size_t n = c.n;
    if (K < 2) throw std::invalid_argument("in_singular_set: need K >= 2");
    for (std::size_t k = 0; k + 1 < K; ++k)
        for (std::size_t r = 0; r < n; ++r)
            if (!c.factors[k].z.at(r, n - 1).is_zero()) return false;
    for (std::size_t k = 1; k + 1 < K; ++k)
        for (std::size_t r = 0; r + 1 < n; ++r)
            if (!c.factors[k].a.at(r, n - 1).is_zero()) return false;
    return true;
}

// Direct-chart coordinates: per level, first the strict upper triangle of A
// in row-lex order, then the upper triangle of Z (diagonal included) in
// row-lex order. Ids are global and 1-based, level-major.
inline std::size_t fiber_var_count(std::size_t n, std::size_t K) { return K * n * n; }

namespace fiberdetail {

inline std::size_t a_slot(std::size_t n, std::size_t i, std::size_t j) {
    if (i == 0 || j <= i || j > n) throw std::invalid_argument("a_slot: need 1 <= i < j <= n");
    return (i - 1) * n - i * (i - 1) / 2 + (j - i - 1);
}

inline std::size_t z_slot(std::size_t n, std::size_t i, std::size_t j) {
    if (i > j) std::swap(i, j);
    if (i == 0 || j > n) throw std::invalid_argument("z_slot: need 1 <= i <= j <= n");
    return (i - 1) * (n + 1) - i * (i - 1) / 2 + (j - i);
}

} // namespace fiberdetail

inline std::size_t a_var_id(std::size_t n, std::size_t k, std::size_t i, std::size_t j) {
    return (k - 1) * n * n + fiberdetail::a_slot(n, i, j) + 1;
}

inline std::size_t z_var_id(std::size_t n, std::size_t k, std::size_t i, std::size_t j) {
    return (k - 1) * n * n + n * (n - 1) / 2 + fiberdetail::z_slot(n, i, j) + 1;
}

// Exact Jacobian of phi, 2n x K n^2, columns in global variable order. Each
// column is one dual-number pass; a z variable seeds both mirror entries.
inline Matrix<Gaussian> jacobian_phi(const ElementaryChain<Gaussian>& c) {
    validate_chain(c);
    const std::size_t K = c.factors.size();
    const std::size_t n = c.n;
    if (K == 0 || n == 0) throw std::invalid_argument("jacobian_phi: empty chain");
    using D = Dual<Gaussian>;
    Matrix<Gaussian> jac(2 * n, fiber_var_count(n, K));
    std::size_t col = 0;
    auto lift = [&](std::size_t lvl, bool z_part, std::size_t vi, std::size_t vj) {
        ElementaryChain<D> d{n, {}};
        for (std::size_t k = 0; k < K; ++k) {
            Matrix<D> a(n, n), z(n, n);
            for (std::size_t r = 0; r < n; ++r)
                for (std::size_t s = 0; s < n; ++s) {
                    bool da = !z_part && k + 1 == lvl && r + 1 == vi && s + 1 == vj;
                    a.at(r, s) = D(c.factors[k].a.at(r, s),
                                   da ? Gaussian(1) : Gaussian());
                    bool dz = z_part && k + 1 == lvl &&
                              ((r + 1 == vi && s + 1 == vj) || (r + 1 == vj && s + 1 == vi));
                    z.at(r, s) = D(c.factors[k].z.at(r, s),
                                   dz ? Gaussian(1) : Gaussian());
                }
            d.factors.push_back({c.factors[k].sign, std::move(a), std::move(z)});
        }
        std::vector<D> row = phi(d);
        for (std::size_t r = 0; r < 2 * n; ++r) jac.at(r, col) = row[r].deriv();
        ++col;
    };
    for (std::size_t k = 1; k <= K; ++k) {
        for (std::size_t i = 1; i <= n; ++i)
            for (std::size_t j = i + 1; j <= n; ++j) lift(k, false, i, j);
        for (std::size_t i = 1; i <= n; ++i)
            for (std::size_t j = i; j <= n; ++j) lift(k, true, i, j);
    }
    return jac;
}

enum class KParity { KEven, KOdd };
enum class StratumFamily { G, N, GTilde, NTilde };

struct StratumLabel {
    StratumFamily family = StratumFamily::G;
    std::size_t index = 0;

    friend bool operator==(const StratumLabel& a, const StratumLabel& b) {
        return a.family == b.family && a.index == b.index;
    }
};

inline std::string stratum_name(const StratumLabel& s) {
    switch (s.family) {
        case StratumFamily::G: return "G" + std::to_string(s.index);
        case StratumFamily::N: return "N" + std::to_string(s.index);
        case StratumFamily::GTilde: return "Gt" + std::to_string(s.index);
        case StratumFamily::NTilde: return "Nt" + std::to_string(s.index);
    }
    throw std::logic_error("stratum_name: bad family");
}

inline StratumLabel classify_stratum(const std::vector<Gaussian>& v, KParity parity) {
    if (v.empty() || v.size() % 2 != 0)
        throw std::invalid_argument("classify_stratum: vector length must be 2n");
    const std::size_t n = v.size() / 2;
    auto first_nonzero = [&](std::size_t base) -> std::size_t {
        for (std::size_t j = 1; j <= n; ++j)
            if (!v[base + j - 1].is_zero()) return j;
        return 0;
    };
    auto last_nonzero = [&](std::size_t base) -> std::size_t {
        for (std::size_t j = n; j >= 1; --j)
            if (!v[base + j - 1].is_zero()) return j;
        return 0;
    };
    if (parity == KParity::KEven) {
        if (std::size_t i = first_nonzero(0); i != 0) return {StratumFamily::G, i};
        if (std::size_t j = last_nonzero(n); j != 0) return {StratumFamily::N, n - j};
    } else {
        if (std::size_t i = first_nonzero(n); i != 0) return {StratumFamily::GTilde, i};
        if (std::size_t j = last_nonzero(0); j != 0) return {StratumFamily::NTilde, n - j};
    }
    throw std::invalid_argument("classify_stratum: zero vector");
}

// 1-based target coordinate singled out by the stratum's residual equation.
inline std::size_t pivot_coordinate(const StratumLabel& s, std::size_t n) {
    switch (s.family) {
        case StratumFamily::G: return s.index;
        case StratumFamily::N: return 2 * n - s.index;
        case StratumFamily::GTilde: return n + s.index;
        case StratumFamily::NTilde: return n - s.index;
    }
    throw std::logic_error("pivot_coordinate: bad family");
}

// Per-level storage chart. The stored blocks are S (unitriangular) and T
// (symmetric); the chain level is A = a_inverse ? S^-1 : S and
// Z = z_tilde ? S^-1 T S^-T : T.
struct LevelChart {
    bool a_inverse = false;
    bool z_tilde = false;
};

struct Substitution {
    std::size_t var = 0;
    MultiPoly expr;
};

struct EliminationPlan {
    std::size_t n = 0;
    std::size_t K = 0;
    StratumLabel stratum;
    std::vector<Gaussian> target;
    std::size_t pivot = 0;
    std::vector<LevelChart> charts;
    std::vector<std::string> var_names;
    std::vector<std::size_t> free_vars;
    std::vector<Substitution> subs;
    MultiPoly residual;
    Gaussian residual_constant;
};

// Builds the chain from one full coordinate vector (values[id-1]) under the
// plan's charts. Works over any ring with unit inverses.
template <class R>
ElementaryChain<R> assemble_chain(std::size_t n, std::size_t K,
                                  const std::vector<LevelChart>& charts,
                                  const std::vector<R>& values) {
    ElementaryChain<R> c{n, {}};
    for (std::size_t k = 1; k <= K; ++k) {
        Matrix<R> s = Matrix<R>::identity(n);
        for (std::size_t i = 1; i <= n; ++i)
            for (std::size_t j = i + 1; j <= n; ++j)
                s.at(i - 1, j - 1) = values[a_var_id(n, k, i, j) - 1];
        Matrix<R> t(n, n);
        for (std::size_t i = 1; i <= n; ++i)
            for (std::size_t j = i; j <= n; ++j) {
                t.at(i - 1, j - 1) = values[z_var_id(n, k, i, j) - 1];
                t.at(j - 1, i - 1) = t.at(i - 1, j - 1);
            }
        const LevelChart& ch = charts[k - 1];
        Matrix<R> sinv;
        if (ch.a_inverse || ch.z_tilde)
            sinv = invert_triangular(s, ShapeTag::UpperUnitriangular);
        Matrix<R> a = ch.a_inverse ? sinv : s;
        Matrix<R> z = ch.z_tilde ? sinv * t * transpose(sinv) : t;
        c.factors.push_back(
            {k % 2 == 1 ? FactorSign::Minus : FactorSign::Plus, std::move(a), std::move(z)});
    }
    return c;
}

namespace fiberdetail {

// Symbolic derivation state. Every coordinate stays its own monomial, so
// the chain states are computed once, truncated below the top level (no
// formula references P^K). A derived bitmap rejects any expression that
// references a not-yet-derived eliminated variable.
class PlanBuilder {
  public:
    PlanBuilder(std::size_t n, std::size_t K, const std::vector<Gaussian>& target,
                StratumLabel label)
        : n_(n), K_(K), M_(fiber_var_count(n, K)), target_(target), label_(label) {
        charts_.assign(K_, LevelChart{});
    }

    EliminationPlan run() {
        switch (label_.family) {
            case StratumFamily::G: derive_g(); break;
            case StratumFamily::N: derive_n(); break;
            case StratumFamily::GTilde: derive_gt(); break;
            case StratumFamily::NTilde: derive_nt(); break;
        }
        EliminationPlan plan;
        plan.n = n_;
        plan.K = K_;
        plan.stratum = label_;
        plan.target = target_;
        plan.pivot = pivot_coordinate(label_, n_);
        plan.charts = charts_;
        plan.var_names = names();
        for (std::size_t id = 1; id <= M_; ++id)
            if (!eliminated_[id - 1]) plan.free_vars.push_back(id);
        plan.subs = subs_;
        plan.residual = residual_;
        plan.residual_constant = target_[plan.pivot - 1];
        for (std::size_t v : plan.residual.vars_used())
            if (v > M_ || eliminated_[v - 1])
                throw std::logic_error("fiber reduction: residual not in free variables");
        return plan;
    }

  private:
    std::size_t n_, K_, M_;
    std::vector<Gaussian> target_;
    StratumLabel label_;
    std::vector<LevelChart> charts_;
    std::vector<bool> eliminated_;
    std::vector<bool> derived_;
    std::vector<MultiPoly> val_;
    std::vector<Substitution> subs_;
    std::vector<std::vector<MultiPoly>> states_;
    MultiPoly residual_;

    Gaussian av(std::size_t j) const { return target_[j - 1]; }
    Gaussian bv(std::size_t j) const { return target_[n_ + j - 1]; }

    void init(const std::vector<std::size_t>& elim) {
        eliminated_.assign(M_, false);
        derived_.assign(M_, false);
        for (std::size_t id : elim) eliminated_[id - 1] = true;
        val_.resize(M_);
        for (std::size_t id = 1; id <= M_; ++id) val_[id - 1] = MultiPoly::variable(id);
        std::vector<LevelChart> prefix(charts_.begin(), charts_.end() - 1);
        ElementaryChain<MultiPoly> truncated =
            assemble_chain<MultiPoly>(n_, K_ - 1, prefix, val_);
        states_ = last_row_states(truncated);
    }

    // 1-based component of the state row P^level.
    const MultiPoly& P(std::size_t level, std::size_t comp) const {
        return states_[level][comp - 1];
    }

    // Stored triangular block of a level, from current values.
    Matrix<MultiPoly> stored_s(std::size_t k) const {
        Matrix<MultiPoly> s = Matrix<MultiPoly>::identity(n_);
        for (std::size_t i = 1; i <= n_; ++i)
            for (std::size_t j = i + 1; j <= n_; ++j)
                s.at(i - 1, j - 1) = val_[a_var_id(n_, k, i, j) - 1];
        return s;
    }

    Matrix<MultiPoly> stored_t(std::size_t k) const {
        Matrix<MultiPoly> t(n_, n_);
        for (std::size_t i = 1; i <= n_; ++i)
            for (std::size_t j = i; j <= n_; ++j) {
                t.at(i - 1, j - 1) = val_[z_var_id(n_, k, i, j) - 1];
                t.at(j - 1, i - 1) = t.at(i - 1, j - 1);
            }
        return t;
    }

    void set(std::size_t var, MultiPoly expr) {
        for (std::size_t v : expr.vars_used())
            if (v > M_ || (eliminated_[v - 1] && !derived_[v - 1]))
                throw std::logic_error("fiber reduction: substitution depends on a "
                                       "not-yet-derived variable (cycle)");
        derived_[var - 1] = true;
        subs_.push_back({var, std::move(expr)});
    }

    MultiPoly vref(std::size_t id) const { return val_[id - 1]; }

    // K even, G_i: pivot a_i. Eliminates a[j,i,K-1] (j<i), a[i,j,K] (j>i),
    // z[i,j,K] (all j). Residual P^{K-1}_i.
    void derive_g() {
        const std::size_t i = label_.index;
        const Gaussian piv = av(i).inv();
        std::vector<std::size_t> elim;
        for (std::size_t j = 1; j < i; ++j) elim.push_back(a_var_id(n_, K_ - 1, j, i));
        for (std::size_t j = i + 1; j <= n_; ++j) elim.push_back(a_var_id(n_, K_, i, j));
        for (std::size_t j = 1; j <= n_; ++j) elim.push_back(z_var_id(n_, K_, i, j));
        init(elim);
        Matrix<MultiPoly> zk1 = stored_t(K_ - 1);
        for (std::size_t j = i; j-- > 1;) {
            MultiPoly beta = P(K_ - 2, j);
            for (std::size_t l = 1; l <= n_; ++l)
                beta += P(K_ - 2, n_ + l) * zk1.at(l - 1, j - 1);
            MultiPoly expr = beta;
            for (std::size_t k = j + 1; k <= n_; ++k)
                if (k != i) expr -= P(K_ - 1, k) * vref(a_var_id(n_, K_ - 1, j, k));
            set(a_var_id(n_, K_ - 1, j, i), expr * MultiPoly::constant(piv));
        }
        for (std::size_t j = i + 1; j <= n_; ++j) {
            MultiPoly expr = P(K_ - 1, j) - MultiPoly::constant(av(j));
            for (std::size_t k = i + 1; k < j; ++k)
                expr -= MultiPoly::constant(av(k)) * vref(a_var_id(n_, K_, k, j));
            set(a_var_id(n_, K_, i, j), expr * MultiPoly::constant(piv));
        }
        Matrix<MultiPoly> ak_inv =
            invert_triangular(stored_s(K_), ShapeTag::UpperUnitriangular);
        auto alpha = [&](std::size_t j) {
            MultiPoly r = -P(K_ - 1, n_ + j);
            for (std::size_t l = j; l <= n_; ++l)
                r += MultiPoly::constant(bv(l)) * ak_inv.at(j - 1, l - 1);
            return r;
        };
        for (std::size_t j = 1; j <= n_; ++j) {
            if (j == i) continue;
            MultiPoly expr = alpha(j);
            for (std::size_t l = 1; l <= n_; ++l)
                if (l != i) expr -= P(K_ - 1, l) * vref(z_var_id(n_, K_, l, j));
            set(z_var_id(n_, K_, i, j), expr * MultiPoly::constant(piv));
        }
        MultiPoly expr = alpha(i);
        for (std::size_t l = 1; l <= n_; ++l)
            if (l != i) expr -= P(K_ - 1, l) * vref(z_var_id(n_, K_, i, l));
        set(z_var_id(n_, K_, i, i), expr * MultiPoly::constant(piv));
        residual_ = P(K_ - 1, i);
    }

    // K even, N_i: pivot b_m with m = n-i. Level K-1 stores (D, Zt) with
    // A = D^-1, Z = D^-1 Zt D^-T. Eliminates d[m,j,K-1] (j>m), zt[m,j,K-1]
    // (all j), a[j,m,K] (j<m). Residual P^{K-1}_{n+m}.
    void derive_n() {
        const std::size_t m = n_ - label_.index;
        const Gaussian piv = bv(m).inv();
        charts_[K_ - 2] = {true, true};
        std::vector<std::size_t> elim;
        for (std::size_t j = m + 1; j <= n_; ++j) elim.push_back(a_var_id(n_, K_ - 1, m, j));
        for (std::size_t j = 1; j <= n_; ++j) elim.push_back(z_var_id(n_, K_ - 1, m, j));
        for (std::size_t j = 1; j < m; ++j) elim.push_back(a_var_id(n_, K_, j, m));
        init(elim);
        for (std::size_t j = m + 1; j <= n_; ++j) {
            MultiPoly expr = P(K_ - 2, n_ + j);
            for (std::size_t k = 1; k < j; ++k)
                if (k != m) expr -= vref(a_var_id(n_, K_ - 1, k, j)) * P(K_ - 1, n_ + k);
            set(a_var_id(n_, K_ - 1, m, j), expr * MultiPoly::constant(piv));
        }
        Matrix<MultiPoly> d = stored_s(K_ - 1);
        auto gamma = [&](std::size_t j) {
            MultiPoly r;
            for (std::size_t l = j; l <= n_; ++l) r += P(K_ - 2, l) * d.at(j - 1, l - 1);
            return r;
        };
        for (std::size_t j = 1; j <= n_; ++j) {
            if (j == m) continue;
            MultiPoly expr = gamma(j);
            for (std::size_t l = 1; l <= n_; ++l)
                if (l != m) expr += P(K_ - 1, n_ + l) * vref(z_var_id(n_, K_ - 1, l, j));
            set(z_var_id(n_, K_ - 1, m, j), -expr * MultiPoly::constant(piv));
        }
        MultiPoly expr = gamma(m);
        for (std::size_t l = 1; l <= n_; ++l)
            if (l != m) expr += P(K_ - 1, n_ + l) * vref(z_var_id(n_, K_ - 1, m, l));
        set(z_var_id(n_, K_ - 1, m, m), -expr * MultiPoly::constant(piv));
        for (std::size_t j = 1; j < m; ++j) {
            MultiPoly e2 = MultiPoly::constant(bv(j)) - P(K_ - 1, n_ + j);
            for (std::size_t k = j + 1; k <= n_; ++k)
                if (k != m) e2 -= P(K_ - 1, n_ + k) * vref(a_var_id(n_, K_, j, k));
            set(a_var_id(n_, K_, j, m), e2 * MultiPoly::constant(piv));
        }
        residual_ = P(K_ - 1, n_ + m);
    }

    // K odd, Gt_i: pivot b_i. Levels K and K-1 store D with A = D^-1; Z
    // stays direct. Eliminates d[j,i,K-1] (j<i), d[i,j,K] (j>i), z[i,j,K]
    // (all j). Residual P^{K-1}_{n+i}.
    void derive_gt() {
        const std::size_t i = label_.index;
        const Gaussian piv = bv(i).inv();
        charts_[K_ - 1] = {true, false};
        charts_[K_ - 2] = {true, false};
        std::vector<std::size_t> elim;
        for (std::size_t j = 1; j < i; ++j) elim.push_back(a_var_id(n_, K_ - 1, j, i));
        for (std::size_t j = i + 1; j <= n_; ++j) elim.push_back(a_var_id(n_, K_, i, j));
        for (std::size_t j = 1; j <= n_; ++j) elim.push_back(z_var_id(n_, K_, i, j));
        init(elim);
        Matrix<MultiPoly> zk1 = stored_t(K_ - 1);
        for (std::size_t j = i; j-- > 1;) {
            MultiPoly beta = P(K_ - 2, n_ + j);
            for (std::size_t l = 1; l <= n_; ++l)
                beta += P(K_ - 2, l) * zk1.at(l - 1, j - 1);
            MultiPoly expr = beta;
            for (std::size_t l = j + 1; l <= n_; ++l)
                if (l != i) expr -= P(K_ - 1, n_ + l) * vref(a_var_id(n_, K_ - 1, j, l));
            set(a_var_id(n_, K_ - 1, j, i), expr * MultiPoly::constant(piv));
        }
        for (std::size_t j = i + 1; j <= n_; ++j) {
            MultiPoly expr = P(K_ - 1, n_ + j) - MultiPoly::constant(bv(j));
            for (std::size_t k = i + 1; k < j; ++k)
                expr -= MultiPoly::constant(bv(k)) * vref(a_var_id(n_, K_, k, j));
            set(a_var_id(n_, K_, i, j), expr * MultiPoly::constant(piv));
        }
        Matrix<MultiPoly> ak =
            invert_triangular(stored_s(K_), ShapeTag::UpperUnitriangular);
        auto alpha = [&](std::size_t j) {
            MultiPoly r = -P(K_ - 1, j);
            for (std::size_t k = j; k <= n_; ++k)
                r += MultiPoly::constant(av(k)) * ak.at(j - 1, k - 1);
            return r;
        };
        for (std::size_t j = 1; j <= n_; ++j) {
            if (j == i) continue;
            MultiPoly expr = alpha(j);
            for (std::size_t l = 1; l <= n_; ++l)
                if (l != i) expr -= P(K_ - 1, n_ + l) * vref(z_var_id(n_, K_, l, j));
            set(z_var_id(n_, K_, i, j), expr * MultiPoly::constant(piv));
        }
        MultiPoly expr = alpha(i);
        for (std::size_t l = 1; l <= n_; ++l)
            if (l != i) expr -= P(K_ - 1, n_ + l) * vref(z_var_id(n_, K_, i, l));
        set(z_var_id(n_, K_, i, i), expr * MultiPoly::constant(piv));
        residual_ = P(K_ - 1, n_ + i);
    }

    // K odd, Nt_i: pivot a_m with m = n-i. Level K-1 stores (A, Zt) with
    // Z = A^-1 Zt A^-T. Eliminates a[m,j,K-1] (j>m), zt[m,j,K-1] (all j),
    // a[j,m,K] (j<m). Residual P^{K-1}_m.
    void derive_nt() {
        const std::size_t m = n_ - label_.index;
        const Gaussian piv = av(m).inv();
        charts_[K_ - 2] = {false, true};
        std::vector<std::size_t> elim;
        for (std::size_t j = m + 1; j <= n_; ++j) elim.push_back(a_var_id(n_, K_ - 1, m, j));
        for (std::size_t j = 1; j <= n_; ++j) elim.push_back(z_var_id(n_, K_ - 1, m, j));
        for (std::size_t j = 1; j < m; ++j) elim.push_back(a_var_id(n_, K_, j, m));
        init(elim);
        for (std::size_t j = m + 1; j <= n_; ++j) {
            MultiPoly expr = P(K_ - 2, j);
            for (std::size_t k = 1; k < j; ++k)
                if (k != m) expr -= P(K_ - 1, k) * vref(a_var_id(n_, K_ - 1, k, j));
            set(a_var_id(n_, K_ - 1, m, j), expr * MultiPoly::constant(piv));
        }
        Matrix<MultiPoly> a = stored_s(K_ - 1);
        auto tail = [&](std::size_t j) {
            MultiPoly r;
            for (std::size_t l = j; l <= n_; ++l) r += P(K_ - 2, n_ + l) * a.at(j - 1, l - 1);
            return r;
        };
        for (std::size_t j = 1; j <= n_; ++j) {
            if (j == m) continue;
            MultiPoly expr = tail(j);
            for (std::size_t l = 1; l <= n_; ++l)
                if (l != m) expr += P(K_ - 1, l) * vref(z_var_id(n_, K_ - 1, l, j));
            set(z_var_id(n_, K_ - 1, m, j), -expr * MultiPoly::constant(piv));
        }
        MultiPoly expr = tail(m);
        for (std::size_t l = 1; l <= n_; ++l)
            if (l != m) expr += P(K_ - 1, l) * vref(z_var_id(n_, K_ - 1, m, l));
        set(z_var_id(n_, K_ - 1, m, m), -expr * MultiPoly::constant(piv));
        Matrix<MultiPoly> zk = stored_t(K_);
        for (std::size_t j = 1; j < m; ++j) {
            MultiPoly q = P(K_ - 1, j);
            for (std::size_t l = 1; l <= n_; ++l)
                q += P(K_ - 1, n_ + l) * zk.at(l - 1, j - 1);
            MultiPoly e2 = q - MultiPoly::constant(av(j));
            for (std::size_t k = j + 1; k < m; ++k)
                e2 -= MultiPoly::constant(av(k)) * vref(a_var_id(n_, K_, j, k));
            set(a_var_id(n_, K_, j, m), e2 * MultiPoly::constant(piv));
        }
        residual_ = P(K_ - 1, m);
    }

    std::vector<std::string> names() const {
        std::vector<std::string> out(M_);
        for (std::size_t k = 1; k <= K_; ++k) {
            const LevelChart& ch = charts_[k - 1];
            for (std::size_t i = 1; i <= n_; ++i)
                for (std::size_t j = i + 1; j <= n_; ++j)
                    out[a_var_id(n_, k, i, j) - 1] = entry_name(ch.a_inverse ? "d" : "a", i, j, k);
            for (std::size_t i = 1; i <= n_; ++i)
                for (std::size_t j = i; j <= n_; ++j)
                    out[z_var_id(n_, k, i, j) - 1] = entry_name(ch.z_tilde ? "zt" : "z", i, j, k);
        }
        return out;
    }

    static std::string entry_name(const char* base, std::size_t i, std::size_t j,
                                  std::size_t k) {
        return std::string(base) + "[" + std::to_string(i) + "," + std::to_string(j) +
               "," + std::to_string(k) + "]";
    }
};

} // namespace fiberdetail

inline EliminationPlan reduce_fiber(const std::vector<Gaussian>& target, std::size_t K,
                                    std::size_t n) {
    if (n < 2) throw std::invalid_argument("reduce_fiber: need n >= 2");
    if (K < 3) throw std::invalid_argument("reduce_fiber: need K >= 3");
    if (target.size() != 2 * n)
        throw std::invalid_argument("reduce_fiber: target length must be 2n");
    StratumLabel label =
        classify_stratum(target, K % 2 == 0 ? KParity::KEven : KParity::KOdd);
    return fiberdetail::PlanBuilder(n, K, target, label).run();
}

// Draws a random free-variable assignment and moves one coordinate so the
// residual takes its target value exactly; the residual is linear in each
// variable, so one correction suffices. Returns false if no variable with a
// nonzero partial was found after the given attempts.
inline bool residual_point(const EliminationPlan& plan, SplitMix64& g,
                           std::vector<Gaussian>& values, std::size_t attempts = 40) {
    const std::size_t M = fiber_var_count(plan.n, plan.K);
    auto vars = plan.residual.vars_used();
    for (std::size_t a = 0; a < attempts; ++a) {
        values.assign(M, Gaussian());
        for (std::size_t id : plan.free_vars) values[id - 1] = random_gaussian(g);
        for (std::size_t id : vars) {
            Gaussian slope = plan.residual.derivative(id).eval(values);
            if (slope.is_zero()) continue;
            Gaussian cur = plan.residual.eval(values);
            values[id - 1] += (plan.residual_constant - cur) * slope.inv();
            return true;
        }
    }
    return false;
}

struct ReductionReport {
    std::size_t passes = 0;
    std::size_t failures = 0;
    std::string text;

    bool ok() const { return failures == 0; }
};

// Per trial: sample a residual-enforced point, evaluate the substitutions,
// assemble the chain through the plan's charts, and recompute phi exactly.
// Every coordinate must match the target.
inline ReductionReport verify_reduction(const EliminationPlan& plan, std::size_t trials,
                                        std::uint64_t seed) {
    ReductionReport rep;
    std::ostringstream out;
    for (std::size_t t = 0; t < trials; ++t) {
        SplitMix64 g(derive_seed(seed, t));
        std::vector<Gaussian> values;
        if (!residual_point(plan, g, values)) {
            ++rep.failures;
            out << "TRIAL " << t << " FAIL no smooth residual point found\n";
            continue;
        }
        if (plan.residual.eval(values) != plan.residual_constant) {
            ++rep.failures;
            out << "TRIAL " << t << " FAIL residual enforcement inexact\n";
            continue;
        }
        for (const auto& sub : plan.subs) values[sub.var - 1] = sub.expr.eval(values);
        ElementaryChain<Gaussian> chain =
            assemble_chain<Gaussian>(plan.n, plan.K, plan.charts, values);
        std::vector<Gaussian> image = phi(chain);
        std::size_t bad = 0;
        for (std::size_t j = 0; j < 2 * plan.n; ++j)
            if (image[j] != plan.target[j]) {
                bad = j + 1;
                break;
            }
        if (bad == 0) {
            ++rep.passes;
            out << "TRIAL " << t << " PASS\n";
        } else {
            ++rep.failures;
            out << "TRIAL " << t << " FAIL coordinate " << bad << ": got "
                << image[bad - 1].str() << " want " << plan.target[bad - 1].str() << "\n";
        }
    }
    out << "SUMMARY pass=" << rep.passes << " fail=" << rep.failures << "\n";
    rep.text = out.str();
    return rep;
}

struct ShearField {
    std::size_t i = 0;
    std::size_t j = 0;
};

inline std::vector<ShearField> shear_fields(const EliminationPlan& plan) {
    std::vector<ShearField> out;
    for (std::size_t a = 0; a < plan.free_vars.size(); ++a)
        for (std::size_t b = a + 1; b < plan.free_vars.size(); ++b)
            out.push_back({plan.free_vars[a], plan.free_vars[b]});
    return out;
}

// Degree at most one in every variable.
inline bool check_multilinearity(const MultiPoly& p) {
    for (std::size_t v : p.vars_used())
        if (!p.derivative(v).derivative(v).is_zero()) return false;
    return true;
}

// V_{ij,p}(p) = p_i p_j - p_j p_i must vanish identically for every pair.
inline bool check_tangency(const EliminationPlan& plan) {
    std::map<std::size_t, MultiPoly> parts;
    for (std::size_t id : plan.free_vars) parts[id] = plan.residual.derivative(id);
    for (const auto& f : shear_fields(plan)) {
        MultiPoly lhs = parts[f.i] * parts[f.j] - parts[f.j] * parts[f.i];
        if (!lhs.is_zero()) return false;
    }
    return true;
}

// At sampled smooth fiber points the field values p_i e_j - p_j e_i must
// span the tangent space of {p = c}, of dimension (#free - 1).
inline bool check_spanning(const EliminationPlan& plan, std::size_t samples,
                           std::uint64_t seed) {
    const std::vector<std::size_t>& fv = plan.free_vars;
    const std::size_t m = fv.size();
    std::map<std::size_t, std::size_t> pos;
    for (std::size_t a = 0; a < m; ++a) pos[fv[a]] = a;
    std::vector<MultiPoly> parts(m);
    for (std::size_t a = 0; a < m; ++a) parts[a] = plan.residual.derivative(fv[a]);
    for (std::size_t s = 0; s < samples; ++s) {
        SplitMix64 g(derive_seed(seed, 1000 + s));
        std::vector<Gaussian> values;
        std::vector<Gaussian> grad(m);
        bool smooth = false;
        for (std::size_t attempt = 0; attempt < 40 && !smooth; ++attempt) {
            if (!residual_point(plan, g, values)) return false;
            for (std::size_t a = 0; a < m; ++a) grad[a] = parts[a].eval(values);
            for (std::size_t a = 0; a < m; ++a)
                if (!grad[a].is_zero()) {
                    smooth = true;
                    break;
                }
        }
        if (!smooth) return false;
        auto fields = shear_fields(plan);
        Matrix<Gaussian> rows(fields.size(), m);
        for (std::size_t r = 0; r < fields.size(); ++r) {
            std::size_t a = pos[fields[r].i], b = pos[fields[r].j];
            rows.at(r, b) = grad[a];
            rows.at(r, a) = -grad[b];
        }
        if (exact_rank(rows) != m - 1) return false;
    }
    return true;
}

} // namespace sympfact

#endif // SYMPFACT_FIBER_HPP
