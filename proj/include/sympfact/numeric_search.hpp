#ifndef SYMPFACT_NUMERIC_SEARCH_HPP
#define SYMPFACT_NUMERIC_SEARCH_HPP

// Floating-point multistart search for k-factor shear decompositions.
//
// Unknowns are the upper triangles of the k symmetric complex shear blocks,
// split into real pairs. Each restart runs damped Gauss-Newton with the
// analytic Jacobian assembled from prefix/suffix products: the derivative of
// the chain product with respect to one shear entry is an outer product of a
// prefix column with a suffix row (two of them off the diagonal). Restarts
// alternate the leading side; the reported residual is the entrywise
// max-modulus of (product - target) minimized over restarts. Everything is
// double precision and deterministic for a fixed master seed.

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <vector>

#include "sympfact/gaussian.hpp"
#include "sympfact/matrix.hpp"
#include "sympfact/prng.hpp"
#include "sympfact/symplectic.hpp"

namespace sympfact {

using Cplx = std::complex<double>;

namespace numdetail {

class CMat {
  public:
    CMat() = default;
    CMat(std::size_t r, std::size_t c) : r_(r), c_(c), d_(r * c) {}

    static CMat identity(std::size_t n) {
        CMat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return r_; }
    std::size_t cols() const { return c_; }
    Cplx& at(std::size_t i, std::size_t j) { return d_[i * c_ + j]; }
    const Cplx& at(std::size_t i, std::size_t j) const { return d_[i * c_ + j]; }

    friend CMat operator*(const CMat& a, const CMat& b) {
        CMat r(a.r_, b.c_);
        for (std::size_t i = 0; i < a.r_; ++i)
            for (std::size_t k = 0; k < a.c_; ++k) {
                Cplx v = a.at(i, k);
                if (v == 0.0) continue;
                for (std::size_t j = 0; j < b.c_; ++j) r.at(i, j) += v * b.at(k, j);
            }
        return r;
    }

  private:
    std::size_t r_ = 0, c_ = 0;
    std::vector<Cplx> d_;
};

// Solves the square real system a x = b in place by partial-pivoted
// elimination; returns false on (near-)singularity.
inline bool solve_real(std::vector<double>& a, std::vector<double>& b, std::size_t n) {
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        double best = std::fabs(a[col * n + col]);
        for (std::size_t i = col + 1; i < n; ++i) {
            double v = std::fabs(a[i * n + col]);
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        if (best < 1e-280) return false;
        if (piv != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a[piv * n + j], a[col * n + j]);
            std::swap(b[piv], b[col]);
        }
        double inv = 1.0 / a[col * n + col];
        for (std::size_t i = col + 1; i < n; ++i) {
            double f = a[i * n + col] * inv;
            if (f == 0.0) continue;
            for (std::size_t j = col; j < n; ++j) a[i * n + j] -= f * a[col * n + j];
            b[i] -= f * b[col];
        }
    }
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= a[i * n + j] * b[j];
        b[i] = s / a[i * n + i];
    }
    return true;
}

} // namespace numdetail

struct NumericFactor {
    FactorSide side = FactorSide::Lower;
    std::vector<Cplx> g;  // row-major n x n, symmetric
};

struct NumericSearchResult {
    double residual = std::numeric_limits<double>::infinity();
    FactorSide leading = FactorSide::Lower;
    std::size_t best_restart = 0;
    std::vector<NumericFactor> factors;
};

inline NumericSearchResult search_numeric(const Matrix<Gaussian>& target, std::size_t k,
                                          std::size_t restarts, std::uint64_t seed,
                                          std::size_t max_iters = 60) {
    using numdetail::CMat;
    if (!target.is_square() || target.rows() % 2 != 0 || target.rows() == 0)
        throw std::invalid_argument("search_numeric: target must be 2n x 2n");
    const std::size_t n = target.rows() / 2;
    const std::size_t dim = 2 * n;
    CMat t(dim, dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) t.at(i, j) = target.at(i, j).to_complex();

    const std::size_t per = n * (n + 1) / 2;   // complex unknowns per factor
    const std::size_t mc = k * per;            // complex unknowns total
    const std::size_t mr = 2 * mc;             // real unknowns
    const std::size_t ec = dim * dim;          // complex residual entries
    std::vector<std::pair<std::size_t, std::size_t>> tri;
    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = p; q < n; ++q) tri.emplace_back(p, q);

    NumericSearchResult best;
    if (k == 0 || restarts == 0) {
        double r0 = 0.0;
        auto eye = CMat::identity(dim);
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j)
                r0 = std::max(r0, std::abs(eye.at(i, j) - t.at(i, j)));
        best.residual = r0;
        return best;
    }

    auto side_at = [&](FactorSide lead, std::size_t f) {
        bool lower = (lead == FactorSide::Lower) == (f % 2 == 0);
        return lower ? FactorSide::Lower : FactorSide::Upper;
    };
    auto build_factors = [&](FactorSide lead, const std::vector<double>& x) {
        std::vector<CMat> ms(k);
        for (std::size_t f = 0; f < k; ++f) {
            CMat m = CMat::identity(dim);
            bool lower = side_at(lead, f) == FactorSide::Lower;
            for (std::size_t u = 0; u < per; ++u) {
                std::size_t b = 2 * (f * per + u);
                Cplx v(x[b], x[b + 1]);
                auto [p, q] = tri[u];
                if (lower) {
                    m.at(n + p, q) = v;
                    m.at(n + q, p) = v;
                } else {
                    m.at(p, n + q) = v;
                    m.at(q, n + p) = v;
                }
            }
            ms[f] = std::move(m);
        }
        return ms;
    };
    auto assemble = [&](const std::vector<CMat>& ms, std::vector<CMat>& prefix,
                        std::vector<CMat>& suffix) {
        prefix.assign(k + 1, CMat());
        suffix.assign(k + 1, CMat());
        prefix[0] = CMat::identity(dim);
        for (std::size_t f = 0; f < k; ++f) prefix[f + 1] = prefix[f] * ms[f];
        suffix[k] = CMat::identity(dim);
        for (std::size_t f = k; f-- > 0;) suffix[f] = ms[f] * suffix[f + 1];
    };
    auto residual_of = [&](const CMat& prod, std::vector<Cplx>& res, double& sq,
                           double& mx) {
        res.resize(ec);
        sq = 0.0;
        mx = 0.0;
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j) {
                Cplx d = prod.at(i, j) - t.at(i, j);
                res[i * dim + j] = d;
                sq += std::norm(d);
                mx = std::max(mx, std::abs(d));
            }
    };

    std::vector<Cplx> res, jc;
    std::vector<CMat> prefix, suffix;
    for (std::size_t restart = 0; restart < restarts; ++restart) {
        FactorSide lead = restart % 2 == 0 ? FactorSide::Lower : FactorSide::Upper;
        SplitMix64 rg(derive_seed(seed, restart));
        std::vector<double> x(mr);
        for (auto& v : x)
            v = (static_cast<double>(rg.next() >> 11) / 9007199254740992.0) * 2.4 - 1.2;
        auto ms = build_factors(lead, x);
        assemble(ms, prefix, suffix);
        double sq, mx;
        residual_of(prefix[k], res, sq, mx);
        double mu = 1e-3;
        for (std::size_t iter = 0; iter < max_iters && mx > 1e-14; ++iter) {
            const double sq_before = sq;
            // Complex Jacobian entry (e, u): prefix column x suffix row.
            jc.assign(ec * mc, Cplx(0.0, 0.0));
            for (std::size_t f = 0; f < k; ++f) {
                const CMat& l = prefix[f];
                const CMat& r = suffix[f + 1];
                bool lower = side_at(lead, f) == FactorSide::Lower;
                for (std::size_t u = 0; u < per; ++u) {
                    auto [p, q] = tri[u];
                    std::size_t col = f * per + u;
                    std::size_t a1 = lower ? n + p : p, b1 = lower ? q : n + q;
                    std::size_t a2 = lower ? n + q : q, b2 = lower ? p : n + p;
                    for (std::size_t i = 0; i < dim; ++i)
                        for (std::size_t j = 0; j < dim; ++j) {
                            Cplx v = l.at(i, a1) * r.at(b1, j);
                            if (p != q) v += l.at(i, a2) * r.at(b2, j);
                            jc[(i * dim + j) * mc + col] = v;
                        }
                }
            }
            // Normal equations over reals: A = J^T J + mu I, rhs = -J^T res.
            std::vector<double> a(mr * mr, 0.0), rhs(mr, 0.0);
            for (std::size_t e = 0; e < ec; ++e) {
                const Cplx* row = &jc[e * mc];
                Cplx re = res[e];
                for (std::size_t u = 0; u < mc; ++u) {
                    Cplx ju = row[u];
                    if (ju == 0.0) continue;
                    // Real/imag blocks of the holomorphic derivative.
                    double jr = ju.real(), ji = ju.imag();
                    rhs[2 * u] -= jr * re.real() + ji * re.imag();
                    rhs[2 * u + 1] -= -ji * re.real() + jr * re.imag();
                    for (std::size_t v = u; v < mc; ++v) {
                        Cplx jv = row[v];
                        if (jv == 0.0) continue;
                        double kr = jv.real(), ki = jv.imag();
                        double rr = jr * kr + ji * ki;
                        double ri = -jr * ki + ji * kr;
                        a[(2 * u) * mr + 2 * v] += rr;
                        a[(2 * u) * mr + 2 * v + 1] += ri;
                        a[(2 * u + 1) * mr + 2 * v] += -ri;
                        a[(2 * u + 1) * mr + 2 * v + 1] += rr;
                    }
                }
            }
            for (std::size_t u = 0; u < mr; ++u)
                for (std::size_t v = 0; v < u; ++v) a[u * mr + v] = a[v * mr + u];
            bool stepped = false;
            for (int damp = 0; damp < 8; ++damp) {
                std::vector<double> asys = a;
                std::vector<double> delta = rhs;
                for (std::size_t u = 0; u < mr; ++u) asys[u * mr + u] += mu;
                if (numdetail::solve_real(asys, delta, mr)) {
                    std::vector<double> xt = x;
                    for (std::size_t u = 0; u < mr; ++u) xt[u] += delta[u];
                    auto mst = build_factors(lead, xt);
                    std::vector<CMat> pt, st;
                    assemble(mst, pt, st);
                    double sqt, mxt;
                    std::vector<Cplx> rest;
                    residual_of(pt[k], rest, sqt, mxt);
                    if (sqt < sq) {
                        x = std::move(xt);
                        ms = std::move(mst);
                        prefix = std::move(pt);
                        suffix = std::move(st);
                        res = std::move(rest);
                        sq = sqt;
                        mx = mxt;
                        mu = std::max(mu / 3.0, 1e-12);
                        stepped = true;
                        break;
                    }
                }
                mu *= 4.0;
                if (mu > 1e10) break;
            }
            if (!stepped) break;
            if (sq_before - sq < 1e-13 * (1.0 + sq_before)) break;
        }
        if (mx < best.residual) {
            best.residual = mx;
            best.leading = lead;
            best.best_restart = restart;
            best.factors.clear();
            for (std::size_t f = 0; f < k; ++f) {
                NumericFactor nf;
                nf.side = side_at(lead, f);
                nf.g.assign(n * n, Cplx(0.0, 0.0));
                for (std::size_t u = 0; u < per; ++u) {
                    std::size_t b = 2 * (f * per + u);
                    Cplx v(x[b], x[b + 1]);
                    auto [p, q] = tri[u];
                    nf.g[p * n + q] = v;
                    nf.g[q * n + p] = v;
                }
                best.factors.push_back(std::move(nf));
            }
        }
    }
    return best;
}

} // namespace sympfact

#endif // SYMPFACT_NUMERIC_SEARCH_HPP
