#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "sympfact/chain_io.hpp"
#include "sympfact/matrix_io.hpp"
#include "sympfact/scalar_io.hpp"

using namespace sympfact;

TEST_CASE("Rational parsing") {
    CHECK(parse_scalar<Rational>("3/2") == Rational(3, 2));
    CHECK(parse_scalar<Rational>("-1/2") == Rational(-1, 2));
    CHECK(parse_scalar<Rational>("7") == Rational(7));
    CHECK(parse_scalar<Rational>("2/4") == Rational(1, 2));
    CHECK(parse_scalar<Rational>(" 10/5 ") == Rational(2));
    CHECK_THROWS_AS(parse_scalar<Rational>(""), ParseError);
    CHECK_THROWS_AS(parse_scalar<Rational>("/2"), ParseError);
    CHECK_THROWS_AS(parse_scalar<Rational>("1/0"), ParseError);
    CHECK_THROWS_AS(parse_scalar<Rational>("abc"), ParseError);
    CHECK_THROWS_AS(parse_scalar<Rational>("3/2x"), ParseError);
}

TEST_CASE("Gaussian parsing and round trips") {
    CHECK(parse_scalar<Gaussian>("1-2i") == Gaussian(Rational(1), Rational(-2)));
    CHECK(parse_scalar<Gaussian>("0+i") == Gaussian::i());
    CHECK(parse_scalar<Gaussian>("0-i") == -Gaussian::i());
    CHECK(parse_scalar<Gaussian>("3/2-1/3i") ==
          Gaussian(Rational(3, 2), Rational(-1, 3)));
    CHECK(parse_scalar<Gaussian>("5") == Gaussian(5));
    CHECK(parse_scalar<Gaussian>("0+2i") == Gaussian(Rational(0), Rational(2)));
    CHECK(parse_scalar<Gaussian>("1 - 2i") == Gaussian(Rational(1), Rational(-2)));
    // A pure-imaginary literal needs an explicit real part.
    CHECK_THROWS_AS(parse_scalar<Gaussian>("5i"), ParseError);
    CHECK_THROWS_AS(parse_scalar<Gaussian>("i"), ParseError);

    const char* canon[] = {"1-2i", "0+i", "0-i", "3/2-1/3i", "5", "0+2i", "-7", "-1/2+3i"};
    for (const char* s : canon)
        CHECK(print_scalar(parse_scalar<Gaussian>(s)) == s);
}

TEST_CASE("Polynomial parsing and round trips") {
    MultiPoly x1 = MultiPoly::variable(1);
    MultiPoly x2 = MultiPoly::variable(2);
    CHECK(parse_scalar<MultiPoly>("x1^2*x2-1/3") ==
          x1 * x1 * x2 - MultiPoly::constant(Gaussian(Rational(1, 3))));
    CHECK(parse_scalar<MultiPoly>("x1^2*x2 - 1/3") ==
          parse_scalar<MultiPoly>("x1^2*x2-1/3"));
    CHECK(parse_scalar<MultiPoly>("1-2*x1") == MultiPoly(1) - MultiPoly(2) * x1);
    CHECK(parse_scalar<MultiPoly>("1-2i") ==
          MultiPoly::constant(Gaussian(Rational(1), Rational(-2))));
    CHECK(parse_scalar<MultiPoly>("1-2i*x1") ==
          MultiPoly::constant(Gaussian(Rational(1), Rational(-2))) * x1);
    CHECK(parse_scalar<MultiPoly>("x2*x1") == x1 * x2);
    CHECK_THROWS_AS(parse_scalar<MultiPoly>("x0"), ParseError);
    CHECK_THROWS_AS(parse_scalar<MultiPoly>("2*"), ParseError);
    CHECK_THROWS_AS(parse_scalar<MultiPoly>("x1^0"), ParseError);
    CHECK_THROWS_AS(parse_scalar<MultiPoly>("+x1"), ParseError);

    const char* canon[] = {"x1^2+x1+x2", "x1^2*x2-1/3", "-1*x1",      "x1^2-0+2i*x2",
                           "1-2i*x1",    "0",           "x1*x2^3-x2", "1-i*x1"};
    for (const char* s : canon)
        CHECK(print_scalar(parse_scalar<MultiPoly>(s)) == s);
}

TEST_CASE("Matrix file round trip over the Gaussian ring") {
    std::string text = "matrix 2 2 gaussian\n1-2i 0+i\n3/2 0\n";
    std::istringstream in(text);
    MatrixFile mf = read_matrix_file(in);
    REQUIRE_FALSE(mf.ring.is_poly);
    const auto& m = std::get<Matrix<Gaussian>>(mf.value);
    CHECK(m.at(0, 0) == Gaussian(Rational(1), Rational(-2)));
    CHECK(m.at(1, 0) == Gaussian(Rational(3, 2)));
    std::ostringstream out;
    write_matrix_file(out, mf);
    CHECK(out.str() == text);
}

TEST_CASE("Matrix file round trip over the polynomial ring") {
    std::string text = "matrix 1 3 poly:3\nx1^2*x2-1/3 0 1-2i*x1\n";
    std::istringstream in(text);
    MatrixFile mf = read_matrix_file(in);
    REQUIRE(mf.ring.is_poly);
    CHECK(mf.ring.nvars == 3);
    std::ostringstream out;
    write_matrix_file(out, mf);
    CHECK(out.str() == text);
}

TEST_CASE("Matrix file error reporting") {
    auto read = [](const std::string& text) {
        std::istringstream in(text);
        return read_matrix_file(in);
    };
    CHECK_THROWS_AS(read("matrix 2 2\n1 0\n0 1\n"), FormatError);
    CHECK_THROWS_AS(read("matrix 1 2 gaussian\n1 0 0\n"), FormatError);
    CHECK_THROWS_AS(read("matrix 2 2 gaussian\n1 0\n"), FormatError);
    CHECK_THROWS_AS(read("matrix 1 1 poly:1\nx2\n"), FormatError);
    CHECK_THROWS_AS(read("matrix 1 1 gaussian\n1\nextra\n"), FormatError);
    CHECK_THROWS_AS(read("matrix 1 1 gaussian\nx1\n"), FormatError);
    CHECK_THROWS_AS(read("matrix 1 1 orbit\n1\n"), FormatError);
    try {
        read("matrix 1 2 gaussian\n1 5i\n");
        FAIL("expected FormatError");
    } catch (const FormatError& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
        CHECK(std::string(e.what()).find("entry 2") != std::string::npos);
    }
}

TEST_CASE("Blank lines between rows are tolerated") {
    std::istringstream in("matrix 2 1 gaussian\n\n4\n\n-1/3\n\n");
    MatrixFile mf = read_matrix_file(in);
    const auto& m = std::get<Matrix<Gaussian>>(mf.value);
    CHECK(m.at(0, 0) == Gaussian(4));
    CHECK(m.at(1, 0) == Gaussian(Rational(-1, 3)));
}

TEST_CASE("Elementary chain files round trip") {
    std::string text =
        "chain 2 2 gaussian\n"
        "factor minus\n"
        "1 3\n0 1\n"
        "1 2\n2 5\n"
        "factor plus\n"
        "1 -1\n0 1\n"
        "0 0\n0 1/2\n";
    std::istringstream in(text);
    ChainFile cf = read_chain_file(in);
    const auto& c = std::get<ElementaryChain<Gaussian>>(cf.value);
    REQUIRE(c.factors.size() == 2);
    CHECK(c.n == 2);
    CHECK(c.factors[0].sign == FactorSign::Minus);
    CHECK(c.factors[0].a.at(0, 1) == Gaussian(3));
    CHECK(c.factors[1].z.at(1, 1) == Gaussian(Rational(1, 2)));
    std::ostringstream out;
    write_chain_file(out, cf);
    CHECK(out.str() == text);
}

TEST_CASE("Standard factor chain files round trip") {
    std::string text =
        "chain 2 2 poly:1\n"
        "factor upper\n"
        "x1 0\n0 1\n"
        "factor lower\n"
        "0 2\n2 x1\n";
    std::istringstream in(text);
    ChainFile cf = read_chain_file(in);
    const auto& c = std::get<FactorChain<MultiPoly>>(cf.value);
    REQUIRE(c.factors.size() == 2);
    CHECK(c.factors[0].side == FactorSide::Upper);
    std::ostringstream out;
    write_chain_file(out, cf);
    CHECK(out.str() == text);
}

TEST_CASE("Chain header ring defaults to gaussian") {
    std::istringstream in("chain 1 1\nfactor minus\n1\n4\n");
    ChainFile cf = read_chain_file(in);
    CHECK_FALSE(cf.ring.is_poly);
    const auto& c = std::get<ElementaryChain<Gaussian>>(cf.value);
    CHECK(c.factors[0].z.at(0, 0) == Gaussian(4));
}

TEST_CASE("Chain validation errors surface as format errors") {
    auto read = [](const std::string& text) {
        std::istringstream in(text);
        return read_chain_file(in);
    };
    // Leading plus violates the sign alternation.
    CHECK_THROWS_AS(read("chain 1 1\nfactor plus\n1\n0\n"), FormatError);
    // Non-unitriangular A.
    CHECK_THROWS_AS(read("chain 1 1\nfactor minus\n2\n0\n"), FormatError);
    // Asymmetric Z.
    CHECK_THROWS_AS(read("chain 2 1\nfactor minus\n1 0\n0 1\n0 1\n0 0\n"), FormatError);
    // Mixing elementary and standard blocks.
    CHECK_THROWS_AS(read("chain 1 2\nfactor minus\n1\n0\nfactor lower\n0\n"),
                    FormatError);
    // Consecutive same-side standard factors.
    CHECK_THROWS_AS(read("chain 1 2\nfactor lower\n1\nfactor lower\n2\n"), FormatError);
    // Unknown factor kind.
    CHECK_THROWS_AS(read("chain 1 1\nfactor left\n1\n0\n"), FormatError);
    // n = 0 is rejected.
    CHECK_THROWS_AS(read("chain 0 0\n"), FormatError);
}

TEST_CASE("Mixed object reader distinguishes matrices from chains") {
    std::istringstream in1("matrix 1 1 gaussian\n7\n");
    ObjectVariant o1 = read_object_file(in1);
    CHECK(std::holds_alternative<MatrixFile>(o1));
    std::istringstream in2("chain 1 1\nfactor lower\n3\n");
    ObjectVariant o2 = read_object_file(in2);
    CHECK(std::holds_alternative<ChainFile>(o2));
    std::istringstream in3("orbit 1 1\n");
    CHECK_THROWS_AS(read_object_file(in3), FormatError);
}
