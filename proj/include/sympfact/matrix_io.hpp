#ifndef SYMPFACT_MATRIX_IO_HPP
#define SYMPFACT_MATRIX_IO_HPP

#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "sympfact/matrix.hpp"
#include "sympfact/scalar_io.hpp"

namespace sympfact {

// Matrix file layout:
//   matrix <rows> <cols> <ring>
//   <cols entries> ... one whitespace-separated line per row
// ring is "gaussian" or "poly:<m>" with m the number of variables.

class FormatError : public std::runtime_error {
  public:
    explicit FormatError(const std::string& message) : std::runtime_error(message) {}
};

struct RingSpec {
    bool is_poly = false;
    std::size_t nvars = 0;

    bool operator==(const RingSpec&) const = default;
};

inline RingSpec parse_ring_token(const std::string& token) {
    if (token == "gaussian") return RingSpec{false, 0};
    const std::string prefix = "poly:";
    if (token.rfind(prefix, 0) == 0) {
        std::string digs = token.substr(prefix.size());
        if (digs.empty() || digs.find_first_not_of("0123456789") != std::string::npos)
            throw FormatError("bad ring token '" + token + "'");
        return RingSpec{true, std::stoul(digs)};
    }
    throw FormatError("unknown ring '" + token + "'");
}

inline std::string ring_token(const RingSpec& ring) {
    if (!ring.is_poly) return "gaussian";
    return "poly:" + std::to_string(ring.nvars);
}

// Line-oriented reader that skips blank lines and tracks the line number for
// error messages.
class LineReader {
  public:
    explicit LineReader(std::istream& in) : in_(in) {}

    bool next(std::string& out) {
        while (std::getline(in_, out)) {
            ++line_;
            if (out.find_first_not_of(" \t\r\n") != std::string::npos) return true;
        }
        return false;
    }

    std::string require(const std::string& what) {
        std::string line;
        if (!next(line))
            throw FormatError("unexpected end of input, expected " + what);
        return line;
    }

    std::size_t line() const { return line_; }

  private:
    std::istream& in_;
    std::size_t line_ = 0;
};

inline std::vector<std::string> split_tokens(const std::string& line) {
    std::istringstream ss(line);
    std::vector<std::string> toks;
    std::string t;
    while (ss >> t) toks.push_back(t);
    return toks;
}

namespace detail {

inline std::size_t parse_count(const std::string& token, const std::string& what,
                               std::size_t line) {
    if (token.empty() || token.find_first_not_of("0123456789") != std::string::npos)
        throw FormatError("line " + std::to_string(line) + ": bad " + what + " '" +
                          token + "'");
    return std::stoul(token);
}

template <class R>
void check_ring_fit(const R&, const RingSpec&) {}

inline void check_ring_fit(const MultiPoly& p, const RingSpec& ring) {
    if (p.max_var() > ring.nvars)
        throw FormatError("entry uses variable x" + std::to_string(p.max_var()) +
                          " outside ring " + ring_token(ring));
}

} // namespace detail

template <class R>
Matrix<R> read_matrix_body(LineReader& lr, std::size_t rows, std::size_t cols,
                           const RingSpec& ring) {
    Matrix<R> m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        std::string line = lr.require("matrix row");
        auto toks = split_tokens(line);
        if (toks.size() != cols)
            throw FormatError("line " + std::to_string(lr.line()) + ": expected " +
                              std::to_string(cols) + " entries, got " +
                              std::to_string(toks.size()));
        for (std::size_t j = 0; j < cols; ++j) {
            try {
                m.at(i, j) = parse_scalar<R>(toks[j]);
            } catch (const ParseError& e) {
                throw FormatError("line " + std::to_string(lr.line()) + ", entry " +
                                  std::to_string(j + 1) + ": " + e.what());
            }
            detail::check_ring_fit(m.at(i, j), ring);
        }
    }
    return m;
}

using MatrixVariant = std::variant<Matrix<Gaussian>, Matrix<MultiPoly>>;

struct MatrixFile {
    RingSpec ring;
    MatrixVariant value;
};

// Consumes a matrix header plus body; leaves the reader past the last row.
inline MatrixFile read_matrix_object(LineReader& lr, const std::string& header) {
    auto toks = split_tokens(header);
    if (toks.size() != 4 || toks[0] != "matrix")
        throw FormatError("line " + std::to_string(lr.line()) +
                          ": expected 'matrix <rows> <cols> <ring>'");
    std::size_t rows = detail::parse_count(toks[1], "row count", lr.line());
    std::size_t cols = detail::parse_count(toks[2], "column count", lr.line());
    RingSpec ring = parse_ring_token(toks[3]);
    MatrixFile out{ring, MatrixVariant{}};
    if (ring.is_poly)
        out.value = read_matrix_body<MultiPoly>(lr, rows, cols, ring);
    else
        out.value = read_matrix_body<Gaussian>(lr, rows, cols, ring);
    return out;
}

inline void expect_no_trailing(LineReader& lr) {
    std::string extra;
    if (lr.next(extra))
        throw FormatError("line " + std::to_string(lr.line()) +
                          ": unexpected extra content");
}

inline MatrixFile read_matrix_file(std::istream& in) {
    LineReader lr(in);
    MatrixFile out = read_matrix_object(lr, lr.require("matrix header"));
    expect_no_trailing(lr);
    return out;
}

template <class R>
void write_matrix_body(std::ostream& out, const Matrix<R>& m) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) out << ' ';
            out << print_scalar(m.at(i, j));
        }
        out << '\n';
    }
}

inline std::size_t poly_ring_vars(const Matrix<MultiPoly>& m, std::size_t at_least = 0) {
    std::size_t nvars = at_least;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (m.at(i, j).max_var() > nvars) nvars = m.at(i, j).max_var();
    return nvars;
}

inline void write_matrix_file(std::ostream& out, const Matrix<Gaussian>& m) {
    out << "matrix " << m.rows() << ' ' << m.cols() << " gaussian\n";
    write_matrix_body(out, m);
}

inline void write_matrix_file(std::ostream& out, const Matrix<MultiPoly>& m,
                              std::size_t nvars_hint = 0) {
    RingSpec ring{true, poly_ring_vars(m, nvars_hint)};
    out << "matrix " << m.rows() << ' ' << m.cols() << ' ' << ring_token(ring) << '\n';
    write_matrix_body(out, m);
}

inline void write_matrix_file(std::ostream& out, const MatrixFile& mf) {
    std::visit(
        [&](const auto& m) {
            using R = typename std::decay_t<decltype(m)>::ring_type;
            if constexpr (std::is_same_v<R, MultiPoly>)
                write_matrix_file(out, m, mf.ring.nvars);
            else
                write_matrix_file(out, m);
        },
        mf.value);
}

} // namespace sympfact

#endif // SYMPFACT_MATRIX_IO_HPP
