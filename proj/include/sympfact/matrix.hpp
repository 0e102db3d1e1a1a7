#ifndef SYMPFACT_MATRIX_HPP
#define SYMPFACT_MATRIX_HPP

// Dense exact matrices over a coefficient ring.
//
// The ring R must provide zero()/one(), +, -, *, unary -, ==, is_zero(),
// is_unit() and inv() (inverse of units only). Division happens exclusively
// through inv(), so triangular inversion of unitriangular matrices stays
// division-free and polynomial rings are safe there. Rank, determinant,
// nullspace and general inversion perform true Gaussian elimination and are
// restricted to field rings (Gaussian rationals here); polynomial matrices
// must be evaluated at a point first.

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "sympfact/gaussian.hpp"
#include "sympfact/rational.hpp"

namespace sympfact {

enum class ShapeTag { General, UpperUnitriangular, LowerUnitriangular, Symmetric, Diagonal };

template <typename R>
struct is_field_ring {
    static constexpr bool value = false;
};
template <>
struct is_field_ring<Rational> {
    static constexpr bool value = true;
};
template <>
struct is_field_ring<Gaussian> {
    static constexpr bool value = true;
};

template <typename R>
class Matrix {
public:
    using ring_type = R;

    Matrix() : rows_(0), cols_(0) {}
    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, R::zero()) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = R::one();
        return m;
    }

    static Matrix from(const std::vector<std::vector<R>>& rows) {
        if (rows.empty()) return Matrix();
        Matrix m(rows.size(), rows[0].size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != m.cols_)
                throw std::invalid_argument("Matrix::from: ragged rows");
            for (std::size_t j = 0; j < m.cols_; ++j) m.at(i, j) = rows[i][j];
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    R& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const R& at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    bool is_square() const { return rows_ == cols_; }

    Matrix operator-() const {
        Matrix r(rows_, cols_);
        for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] = -data_[k];
        return r;
    }

    friend Matrix operator+(const Matrix& a, const Matrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
            throw std::invalid_argument("Matrix: addition dimension mismatch");
        Matrix r(a.rows_, a.cols_);
        for (std::size_t k = 0; k < a.data_.size(); ++k) r.data_[k] = a.data_[k] + b.data_[k];
        return r;
    }
    friend Matrix operator-(const Matrix& a, const Matrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
            throw std::invalid_argument("Matrix: subtraction dimension mismatch");
        Matrix r(a.rows_, a.cols_);
        for (std::size_t k = 0; k < a.data_.size(); ++k) r.data_[k] = a.data_[k] - b.data_[k];
        return r;
    }
    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_)
            throw std::invalid_argument("Matrix: product dimension mismatch");
        Matrix r(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const R& aik = a.at(i, k);
                if (aik.is_zero()) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) {
                    const R& bkj = b.at(k, j);
                    if (bkj.is_zero()) continue;
                    r.at(i, j) += aik * bkj;
                }
            }
        }
        return r;
    }
    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }
    friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<R> data_;
};

template <typename R>
Matrix<R> transpose(const Matrix<R>& a) {
    Matrix<R> r(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) r.at(j, i) = a.at(i, j);
    return r;
}

template <typename R>
Matrix<R> scale(const R& c, const Matrix<R>& a) {
    Matrix<R> r(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) r.at(i, j) = c * a.at(i, j);
    return r;
}

template <typename R>
bool is_zero_matrix(const Matrix<R>& a) {
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (!a.at(i, j).is_zero()) return false;
    return true;
}

template <typename R>
bool is_symmetric(const Matrix<R>& a) {
    if (!a.is_square()) return false;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i + 1; j < a.cols(); ++j)
            if (!(a.at(i, j) == a.at(j, i))) return false;
    return true;
}

template <typename R>
bool is_unitriangular(const Matrix<R>& a, bool upper) {
    if (!a.is_square()) return false;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        if (!a.at(i, i).is_one()) return false;
        for (std::size_t j = 0; j < a.cols(); ++j) {
            bool below = j < i;
            if ((upper && below && !a.at(i, j).is_zero()) ||
                (!upper && !below && i != j && !a.at(i, j).is_zero()))
                return false;
        }
    }
    return true;
}

template <typename R>
bool is_diagonal(const Matrix<R>& a) {
    if (!a.is_square()) return false;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (i != j && !a.at(i, j).is_zero()) return false;
    return true;
}

// Exact inverse of a triangular (or diagonal) matrix. The tag fixes the
// orientation; every diagonal entry must be a unit of R. Unitriangular input
// inverts without any division.
template <typename R>
Matrix<R> invert_triangular(const Matrix<R>& a, ShapeTag tag) {
    if (!a.is_square()) throw std::invalid_argument("invert_triangular: not square");
    const std::size_t n = a.rows();
    for (std::size_t i = 0; i < n; ++i)
        if (!a.at(i, i).is_unit())
            throw std::domain_error("invert_triangular: non-unit diagonal entry");

    Matrix<R> x(n, n);
    if (tag == ShapeTag::Diagonal) {
        for (std::size_t i = 0; i < n; ++i) x.at(i, i) = a.at(i, i).inv();
        return x;
    }
    if (tag == ShapeTag::UpperUnitriangular) {
        for (std::size_t j = 0; j < n; ++j) {
            x.at(j, j) = a.at(j, j).inv();
            for (std::size_t ii = j; ii-- > 0;) {
                R s = R::zero();
                for (std::size_t k = ii + 1; k <= j; ++k) s += a.at(ii, k) * x.at(k, j);
                x.at(ii, j) = -(a.at(ii, ii).inv() * s);
            }
        }
        return x;
    }
    if (tag == ShapeTag::LowerUnitriangular) {
        for (std::size_t j = 0; j < n; ++j) {
            x.at(j, j) = a.at(j, j).inv();
            for (std::size_t i = j + 1; i < n; ++i) {
                R s = R::zero();
                for (std::size_t k = j; k < i; ++k) s += a.at(i, k) * x.at(k, j);
                x.at(i, j) = -(a.at(i, i).inv() * s);
            }
        }
        return x;
    }
    throw std::invalid_argument("invert_triangular: tag must fix a triangular shape");
}

// Exact rank by Gaussian elimination over a field.
template <typename R>
std::size_t exact_rank(Matrix<R> a) {
    static_assert(is_field_ring<R>::value,
                  "exact_rank needs a field ring; evaluate polynomial entries first");
    std::size_t rank = 0;
    std::size_t row = 0;
    for (std::size_t col = 0; col < a.cols() && row < a.rows(); ++col) {
        std::size_t piv = row;
        while (piv < a.rows() && a.at(piv, col).is_zero()) ++piv;
        if (piv == a.rows()) continue;
        if (piv != row)
            for (std::size_t j = col; j < a.cols(); ++j) std::swap(a.at(piv, j), a.at(row, j));
        R inv = a.at(row, col).inv();
        for (std::size_t i = row + 1; i < a.rows(); ++i) {
            if (a.at(i, col).is_zero()) continue;
            R f = a.at(i, col) * inv;
            for (std::size_t j = col; j < a.cols(); ++j)
                a.at(i, j) -= f * a.at(row, j);
        }
        ++rank;
        ++row;
    }
    return rank;
}

// Exact determinant over a field.
template <typename R>
R determinant(Matrix<R> a) {
    static_assert(is_field_ring<R>::value, "determinant needs a field ring");
    if (!a.is_square()) throw std::invalid_argument("determinant: not square");
    const std::size_t n = a.rows();
    R det = R::one();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && a.at(piv, col).is_zero()) ++piv;
        if (piv == n) return R::zero();
        if (piv != col) {
            for (std::size_t j = col; j < n; ++j) std::swap(a.at(piv, j), a.at(col, j));
            det = -det;
        }
        det = det * a.at(col, col);
        R inv = a.at(col, col).inv();
        for (std::size_t i = col + 1; i < n; ++i) {
            if (a.at(i, col).is_zero()) continue;
            R f = a.at(i, col) * inv;
            for (std::size_t j = col; j < n; ++j) a.at(i, j) -= f * a.at(col, j);
        }
    }
    return det;
}

// Exact inverse of a general square matrix over a field (Gauss-Jordan).
template <typename R>
Matrix<R> invert_field(Matrix<R> a) {
    static_assert(is_field_ring<R>::value, "invert_field needs a field ring");
    if (!a.is_square()) throw std::invalid_argument("invert_field: not square");
    const std::size_t n = a.rows();
    Matrix<R> x = Matrix<R>::identity(n);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && a.at(piv, col).is_zero()) ++piv;
        if (piv == n) throw std::domain_error("invert_field: singular matrix");
        if (piv != col) {
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(a.at(piv, j), a.at(col, j));
                std::swap(x.at(piv, j), x.at(col, j));
            }
        }
        R inv = a.at(col, col).inv();
        for (std::size_t j = 0; j < n; ++j) {
            a.at(col, j) = inv * a.at(col, j);
            x.at(col, j) = inv * x.at(col, j);
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == col || a.at(i, col).is_zero()) continue;
            R f = a.at(i, col);
            for (std::size_t j = 0; j < n; ++j) {
                a.at(i, j) -= f * a.at(col, j);
                x.at(i, j) -= f * x.at(col, j);
            }
        }
    }
    return x;
}

// Basis of the right nullspace of a (rows x cols) matrix over a field.
template <typename R>
std::vector<std::vector<R>> nullspace(Matrix<R> a) {
    static_assert(is_field_ring<R>::value, "nullspace needs a field ring");
    const std::size_t m = a.rows(), n = a.cols();
    std::vector<std::size_t> pivot_col;
    std::size_t row = 0;
    for (std::size_t col = 0; col < n && row < m; ++col) {
        std::size_t piv = row;
        while (piv < m && a.at(piv, col).is_zero()) ++piv;
        if (piv == m) continue;
        if (piv != row)
            for (std::size_t j = 0; j < n; ++j) std::swap(a.at(piv, j), a.at(row, j));
        R inv = a.at(row, col).inv();
        for (std::size_t j = 0; j < n; ++j) a.at(row, j) = inv * a.at(row, j);
        for (std::size_t i = 0; i < m; ++i) {
            if (i == row || a.at(i, col).is_zero()) continue;
            R f = a.at(i, col);
            for (std::size_t j = 0; j < n; ++j) a.at(i, j) -= f * a.at(row, j);
        }
        pivot_col.push_back(col);
        ++row;
    }
    std::vector<bool> is_pivot(n, false);
    for (std::size_t c : pivot_col) is_pivot[c] = true;
    std::vector<std::vector<R>> basis;
    for (std::size_t free = 0; free < n; ++free) {
        if (is_pivot[free]) continue;
        std::vector<R> v(n, R::zero());
        v[free] = R::one();
        for (std::size_t r = 0; r < pivot_col.size(); ++r)
            v[pivot_col[r]] = -a.at(r, free);
        basis.push_back(std::move(v));
    }
    return basis;
}

// Row vector times matrix.
template <typename R>
std::vector<R> row_times(const std::vector<R>& v, const Matrix<R>& a) {
    if (v.size() != a.rows())
        throw std::invalid_argument("row_times: dimension mismatch");
    std::vector<R> r(a.cols(), R::zero());
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (v[k].is_zero()) continue;
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (a.at(k, j).is_zero()) continue;
            r[j] += v[k] * a.at(k, j);
        }
    }
    return r;
}

template <typename R>
Matrix<R> get_block(const Matrix<R>& a, std::size_t r0, std::size_t c0,
                    std::size_t nr, std::size_t nc) {
    if (r0 + nr > a.rows() || c0 + nc > a.cols())
        throw std::invalid_argument("get_block: out of range");
    Matrix<R> b(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
        for (std::size_t j = 0; j < nc; ++j) b.at(i, j) = a.at(r0 + i, c0 + j);
    return b;
}

template <typename R>
void set_block(Matrix<R>& a, std::size_t r0, std::size_t c0, const Matrix<R>& b) {
    if (r0 + b.rows() > a.rows() || c0 + b.cols() > a.cols())
        throw std::invalid_argument("set_block: out of range");
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) a.at(r0 + i, c0 + j) = b.at(i, j);
}

} // namespace sympfact

#endif // SYMPFACT_MATRIX_HPP
