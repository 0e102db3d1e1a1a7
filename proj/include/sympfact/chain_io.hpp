#ifndef SYMPFACT_CHAIN_IO_HPP
#define SYMPFACT_CHAIN_IO_HPP

#include <istream>
#include <ostream>
#include <string>
#include <variant>

#include "sympfact/matrix_io.hpp"
#include "sympfact/symplectic.hpp"

namespace sympfact {

// Chain file layout:
//   chain <n> <K> [<ring>]            ring defaults to gaussian
// followed by K blocks, each either
//   factor <minus|plus>   then n rows of A and n rows of Z     (elementary)
//   factor <lower|upper>  then n rows of G                     (standard)
// All blocks of one file must be of the same kind. An empty chain reads as
// an elementary chain.

using ChainVariant =
    std::variant<ElementaryChain<Gaussian>, ElementaryChain<MultiPoly>,
                 FactorChain<Gaussian>, FactorChain<MultiPoly>>;

struct ChainFile {
    RingSpec ring;
    ChainVariant value;
};

namespace detail {

template <class R>
ChainVariant read_chain_blocks(LineReader& lr, std::size_t n, std::size_t count,
                               const RingSpec& ring) {
    ElementaryChain<R> ec{n, {}};
    FactorChain<R> fc{n, {}};
    bool elementary = false, standard = false;
    for (std::size_t k = 0; k < count; ++k) {
        std::string header = lr.require("factor header");
        auto toks = split_tokens(header);
        if (toks.size() != 2 || toks[0] != "factor")
            throw FormatError("line " + std::to_string(lr.line()) +
                              ": expected 'factor <kind>'");
        const std::string& kind = toks[1];
        if (kind == "minus" || kind == "plus") {
            if (standard)
                throw FormatError("line " + std::to_string(lr.line()) +
                                  ": cannot mix elementary and standard factors");
            elementary = true;
            FactorSign sign = kind == "minus" ? FactorSign::Minus : FactorSign::Plus;
            Matrix<R> a = read_matrix_body<R>(lr, n, n, ring);
            Matrix<R> z = read_matrix_body<R>(lr, n, n, ring);
            ec.factors.push_back({sign, std::move(a), std::move(z)});
        } else if (kind == "lower" || kind == "upper") {
            if (elementary)
                throw FormatError("line " + std::to_string(lr.line()) +
                                  ": cannot mix elementary and standard factors");
            standard = true;
            FactorSide side = kind == "lower" ? FactorSide::Lower : FactorSide::Upper;
            fc.factors.push_back({side, read_matrix_body<R>(lr, n, n, ring)});
        } else {
            throw FormatError("line " + std::to_string(lr.line()) +
                              ": unknown factor kind '" + kind + "'");
        }
    }
    try {
        if (standard) {
            validate_chain(fc);
            return fc;
        }
        validate_chain(ec);
        return ec;
    } catch (const std::invalid_argument& e) {
        throw FormatError(e.what());
    }
}

} // namespace detail

inline ChainFile read_chain_object(LineReader& lr, const std::string& header) {
    auto toks = split_tokens(header);
    if ((toks.size() != 3 && toks.size() != 4) || toks[0] != "chain")
        throw FormatError("line " + std::to_string(lr.line()) +
                          ": expected 'chain <n> <K> [<ring>]'");
    std::size_t n = detail::parse_count(toks[1], "half dimension", lr.line());
    std::size_t count = detail::parse_count(toks[2], "factor count", lr.line());
    if (n == 0)
        throw FormatError("line " + std::to_string(lr.line()) + ": n must be positive");
    RingSpec ring = toks.size() == 4 ? parse_ring_token(toks[3]) : RingSpec{false, 0};
    ChainFile out{ring, {}};
    if (ring.is_poly)
        out.value = detail::read_chain_blocks<MultiPoly>(lr, n, count, ring);
    else
        out.value = detail::read_chain_blocks<Gaussian>(lr, n, count, ring);
    return out;
}

inline ChainFile read_chain_file(std::istream& in) {
    LineReader lr(in);
    ChainFile out = read_chain_object(lr, lr.require("chain header"));
    expect_no_trailing(lr);
    return out;
}

namespace detail {

inline RingSpec chain_ring_spec(const ElementaryChain<Gaussian>&, std::size_t) {
    return RingSpec{false, 0};
}
inline RingSpec chain_ring_spec(const FactorChain<Gaussian>&, std::size_t) {
    return RingSpec{false, 0};
}
inline RingSpec chain_ring_spec(const ElementaryChain<MultiPoly>& c, std::size_t hint) {
    std::size_t v = hint;
    for (const auto& f : c.factors) {
        v = poly_ring_vars(f.a, v);
        v = poly_ring_vars(f.z, v);
    }
    return RingSpec{true, v};
}
inline RingSpec chain_ring_spec(const FactorChain<MultiPoly>& c, std::size_t hint) {
    std::size_t v = hint;
    for (const auto& f : c.factors) v = poly_ring_vars(f.g, v);
    return RingSpec{true, v};
}

template <class R>
void write_chain_body(std::ostream& out, const ElementaryChain<R>& c) {
    for (const auto& f : c.factors) {
        out << "factor " << (f.sign == FactorSign::Minus ? "minus" : "plus") << '\n';
        write_matrix_body(out, f.a);
        write_matrix_body(out, f.z);
    }
}

template <class R>
void write_chain_body(std::ostream& out, const FactorChain<R>& c) {
    for (const auto& f : c.factors) {
        out << "factor " << (f.side == FactorSide::Lower ? "lower" : "upper") << '\n';
        write_matrix_body(out, f.g);
    }
}

} // namespace detail

template <class Chain>
void write_chain_file(std::ostream& out, const Chain& c, std::size_t nvars_hint = 0) {
    RingSpec ring = detail::chain_ring_spec(c, nvars_hint);
    out << "chain " << c.n << ' ' << c.factors.size() << ' ' << ring_token(ring) << '\n';
    detail::write_chain_body(out, c);
}

inline void write_chain_file(std::ostream& out, const ChainFile& cf) {
    std::visit([&](const auto& c) { write_chain_file(out, c, cf.ring.nvars); }, cf.value);
}

// Reader for inputs that may hold either a matrix or a chain.
using ObjectVariant = std::variant<MatrixFile, ChainFile>;

inline ObjectVariant read_object_file(std::istream& in) {
    LineReader lr(in);
    std::string header = lr.require("object header");
    auto toks = split_tokens(header);
    if (!toks.empty() && toks[0] == "matrix") {
        MatrixFile mf = read_matrix_object(lr, header);
        expect_no_trailing(lr);
        return mf;
    }
    if (!toks.empty() && toks[0] == "chain") {
        ChainFile cf = read_chain_object(lr, header);
        expect_no_trailing(lr);
        return cf;
    }
    throw FormatError("line " + std::to_string(lr.line()) +
                      ": expected a 'matrix' or 'chain' header");
}

} // namespace sympfact

#endif // SYMPFACT_CHAIN_IO_HPP
