// Command line surface for the sympfact library. One subcommand per library
// operation; matrices and chains move through the text formats of matrix_io
// and chain_io. Input comes from a positional file argument or standard
// input. Exit codes: 0 success, 1 failed verification or unsuccessful
// search, 2 usage or input errors.

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>

#include <CLI11.hpp>

#include "sympfact/bounds.hpp"
#include "sympfact/chain_io.hpp"
#include "sympfact/factorization.hpp"
#include "sympfact/fiber.hpp"
#include "sympfact/matrix_io.hpp"
#include "sympfact/numeric_search.hpp"
#include "sympfact/prng.hpp"
#include "sympfact/symplectic.hpp"

namespace {

using namespace sympfact;

// Thrown for semantically negative results (exit 1), as opposed to usage
// errors (exit 2).
struct CheckFailed {};

std::istream& open_input(const std::string& path, std::ifstream& file) {
    if (path.empty() || path == "-") return std::cin;
    file.open(path);
    if (!file) throw FormatError("cannot open '" + path + "'");
    return file;
}

MatrixFile read_matrix_input(const std::string& path) {
    std::ifstream file;
    return read_matrix_file(open_input(path, file));
}

ChainFile read_chain_input(const std::string& path) {
    std::ifstream file;
    return read_chain_file(open_input(path, file));
}

ObjectVariant read_object_input(const std::string& path) {
    std::ifstream file;
    return read_object_file(open_input(path, file));
}

// Product matrix of any object: a matrix is itself, a chain multiplies out.
MatrixFile object_product(const ObjectVariant& obj) {
    if (std::holds_alternative<MatrixFile>(obj)) return std::get<MatrixFile>(obj);
    const ChainFile& cf = std::get<ChainFile>(obj);
    MatrixFile out{cf.ring, {}};
    std::visit([&](const auto& c) { out.value = psi(c); }, cf.value);
    return out;
}

std::vector<Gaussian> read_target_vector(const std::string& path, std::size_t& n_out) {
    MatrixFile mf = read_matrix_input(path);
    if (!std::holds_alternative<Matrix<Gaussian>>(mf.value))
        throw FormatError("target must be a gaussian matrix");
    const auto& m = std::get<Matrix<Gaussian>>(mf.value);
    std::vector<Gaussian> v;
    if (m.rows() == 1)
        for (std::size_t j = 0; j < m.cols(); ++j) v.push_back(m.at(0, j));
    else if (m.cols() == 1)
        for (std::size_t i = 0; i < m.rows(); ++i) v.push_back(m.at(i, 0));
    else
        throw FormatError("target must be a single row or column");
    if (v.size() % 2 != 0 || v.empty())
        throw FormatError("target length must be 2n");
    n_out = v.size() / 2;
    return v;
}

int cmd_verify(const std::string& path, const std::string& form) {
    SymplecticForm f =
        form == "skew" ? SymplecticForm::SkewDiagonal : SymplecticForm::Standard;
    MatrixFile mf = object_product(read_object_input(path));
    bool ok = std::visit([&](const auto& m) { return is_symplectic(m, f); }, mf.value);
    std::cout << "symplectic: " << (ok ? "true" : "false") << "\n";
    if (!ok) throw CheckFailed{};
    return 0;
}

int cmd_make_elementary(const std::string& path) {
    ChainFile cf = read_chain_input(path);
    std::visit(
        [&](const auto& c) {
            if (c.factors.size() != 1)
                throw FormatError("make-elementary expects a chain with exactly one factor");
            using Chain = std::decay_t<decltype(c)>;
            using R = typename Chain::ring_type;
            Matrix<R> m;
            if constexpr (std::is_same_v<Chain, ElementaryChain<R>>)
                m = materialize_elementary(c.factors[0]);
            else
                m = materialize_standard(c.factors[0]);
            if constexpr (std::is_same_v<R, MultiPoly>)
                write_matrix_file(std::cout, m, cf.ring.nvars);
            else
                write_matrix_file(std::cout, m);
        },
        cf.value);
    return 0;
}

int cmd_factor7(const std::string& path) {
    ChainFile cf = read_chain_input(path);
    std::visit(
        [&](const auto& c) {
            using Chain = std::decay_t<decltype(c)>;
            using R = typename Chain::ring_type;
            if constexpr (std::is_same_v<Chain, ElementaryChain<R>>) {
                if (c.factors.size() != 1)
                    throw FormatError("factor7 expects a chain with exactly one factor");
                auto result = factor_elementary_7(c.factors[0]);
                write_chain_file(std::cout, result.chain, cf.ring.nvars);
            } else {
                throw FormatError("factor7 expects an elementary chain, not shear factors");
            }
        },
        cf.value);
    return 0;
}

int cmd_verify_product(const std::string& path, const std::string& target_path) {
    MatrixFile product = object_product(read_object_input(path));
    MatrixFile target = object_product(read_object_input(target_path));
    if (product.value.index() != target.value.index())
        throw FormatError("product and target use different rings");
    bool ok = std::visit(
        [&](const auto& p) {
            return p == std::get<std::decay_t<decltype(p)>>(target.value);
        },
        product.value);
    std::cout << "product-match: " << (ok ? "true" : "false") << "\n";
    if (!ok) throw CheckFailed{};
    return 0;
}

int cmd_search(const std::string& path, std::size_t k, const std::string& strategy,
               std::size_t restarts, std::optional<std::uint64_t> seed) {
    MatrixFile mf = read_matrix_input(path);
    if (!std::holds_alternative<Matrix<Gaussian>>(mf.value))
        throw FormatError("search expects a gaussian target matrix");
    const auto& target = std::get<Matrix<Gaussian>>(mf.value);
    if (strategy == "exact") {
        SearchResult r = search_exact(target, k);
        if (r.status == SearchStatus::Found) {
            write_chain_file(std::cout, r.chain);
            return 0;
        }
        std::cout << "status: "
                  << (r.status == SearchStatus::NotFound ? "not-found" : "unsupported")
                  << "\n";
        if (!r.note.empty()) std::cout << "note: " << r.note << "\n";
        throw CheckFailed{};
    }
    if (!seed) throw CLI::ValidationError("--seed is required for --strategy numeric");
    NumericSearchResult r = search_numeric(target, k, restarts, *seed);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12e", r.residual);
    std::cout << "status: evidence\n";
    std::cout << "leading: " << (r.leading == FactorSide::Lower ? "lower" : "upper")
              << "\n";
    std::cout << "best-restart: " << r.best_restart << "\n";
    std::cout << "residual: " << buf << "\n";
    return 0;
}

int cmd_psi(const std::string& path) {
    ChainFile cf = read_chain_input(path);
    write_matrix_file(std::cout, object_product(ObjectVariant(cf)));
    return 0;
}

int cmd_phi(const std::string& path) {
    ChainFile cf = read_chain_input(path);
    std::visit(
        [&](const auto& c) {
            using R = typename std::decay_t<decltype(c)>::ring_type;
            std::vector<R> row = phi(c);
            Matrix<R> m(1, row.size());
            for (std::size_t j = 0; j < row.size(); ++j) m.at(0, j) = row[j];
            if constexpr (std::is_same_v<R, MultiPoly>)
                write_matrix_file(std::cout, m, cf.ring.nvars);
            else
                write_matrix_file(std::cout, m);
        },
        cf.value);
    return 0;
}

int cmd_singular(const std::string& path) {
    ChainFile cf = read_chain_input(path);
    bool inside = std::visit(
        [&](const auto& c) -> bool {
            using Chain = std::decay_t<decltype(c)>;
            using R = typename Chain::ring_type;
            if constexpr (std::is_same_v<Chain, ElementaryChain<R>>)
                return in_singular_set(c);
            else
                throw FormatError("singular expects an elementary chain");
        },
        cf.value);
    std::cout << "singular: " << (inside ? "true" : "false") << "\n";
    return 0;
}

int cmd_jacobian(const std::string& path, bool rank_only) {
    ChainFile cf = read_chain_input(path);
    if (!std::holds_alternative<ElementaryChain<Gaussian>>(cf.value))
        throw FormatError("jacobian expects a gaussian elementary chain");
    Matrix<Gaussian> jac = jacobian_phi(std::get<ElementaryChain<Gaussian>>(cf.value));
    if (rank_only)
        std::cout << "rank: " << exact_rank(jac) << "\n";
    else
        write_matrix_file(std::cout, jac);
    return 0;
}

void print_plan(const EliminationPlan& plan) {
    std::cout << "plan n=" << plan.n << " K=" << plan.K
              << " stratum=" << stratum_name(plan.stratum) << " pivot=" << plan.pivot
              << "\n";
    for (std::size_t id = 1; id <= plan.var_names.size(); ++id)
        std::cout << "var x" << id << " " << plan.var_names[id - 1] << "\n";
    std::cout << "free";
    for (std::size_t id : plan.free_vars) std::cout << " x" << id;
    std::cout << "\n";
    for (const auto& sub : plan.subs)
        std::cout << "sub x" << sub.var << " " << print_scalar(sub.expr) << "\n";
    std::cout << "residual " << print_scalar(plan.residual) << " = "
              << print_scalar(plan.residual_constant) << "\n";
}

int cmd_reduce(const std::string& path, std::size_t K) {
    std::size_t n = 0;
    std::vector<Gaussian> target = read_target_vector(path, n);
    print_plan(reduce_fiber(target, K, n));
    return 0;
}

int cmd_verify_reduce(const std::string& path, std::size_t K, std::size_t trials,
                      std::uint64_t seed) {
    std::size_t n = 0;
    std::vector<Gaussian> target = read_target_vector(path, n);
    EliminationPlan plan = reduce_fiber(target, K, n);
    ReductionReport rep = verify_reduction(plan, trials, seed);
    std::cout << rep.text;
    if (!rep.ok()) throw CheckFailed{};
    return 0;
}

int cmd_bounds(std::size_t n, std::size_t d, std::optional<std::size_t> ktilde,
               std::optional<std::size_t> kcont2) {
    BoundResult b = k_bounds({n, d, ktilde, kcont2});
    std::cout << "lower=" << b.lower << " upper=";
    if (b.upper)
        std::cout << *b.upper;
    else
        std::cout << "unavailable";
    std::cout << "\n";
    for (const auto& line : b.derivation) std::cout << line << "\n";
    return 0;
}

int cmd_gen(std::size_t n, std::size_t k, std::uint64_t seed, const std::string& ring,
            const std::string& emit) {
    SplitMix64 g(seed);
    if (ring == "poly") {
        ElementaryChain<MultiPoly> c = random_sparse_poly_chain(g, n, k);
        if (emit == "matrix")
            write_matrix_file(std::cout, psi(c));
        else
            write_chain_file(std::cout, c);
    } else {
        ElementaryChain<Gaussian> c = random_elementary_chain(g, n, k);
        if (emit == "matrix")
            write_matrix_file(std::cout, psi(c));
        else
            write_chain_file(std::cout, c);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact symplectic factorization toolkit"};
    app.require_subcommand(1);

    std::string path, form = "std", strategy = "exact", ring = "gaussian", emit = "chain";
    std::string target_path;
    std::size_t k = 0, restarts = 200, trials = 20, K = 0, n = 0, d = 0;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> ktilde, kcont2;
    bool rank_only = false;

    auto* verify = app.add_subcommand("verify", "Check a matrix against a symplectic form");
    verify->add_option("file", path, "input file (default: stdin)");
    verify->add_option("--form", form, "std or skew")
        ->check(CLI::IsMember({"std", "skew"}));

    auto* make = app.add_subcommand("make-elementary", "Materialize a one-factor chain");
    make->add_option("file", path, "input file (default: stdin)");

    auto* factor7 = app.add_subcommand("factor7", "Factor an elementary matrix into 7 shears");
    factor7->add_option("file", path, "input file (default: stdin)");

    auto* vprod = app.add_subcommand("verify-product",
                                     "Compare the product of a chain against a target");
    vprod->add_option("file", path, "input file (default: stdin)");
    vprod->add_option("--target", target_path, "matrix or chain to compare against")
        ->required();

    auto* search = app.add_subcommand("search", "Search for a k-factor decomposition");
    search->add_option("file", path, "target matrix file (default: stdin)");
    search->add_option("--k", k, "number of factors")->required();
    search->add_option("--strategy", strategy, "exact or numeric")
        ->check(CLI::IsMember({"exact", "numeric"}));
    search->add_option("--restarts", restarts, "numeric restarts (default 200)");
    search->add_option("--seed", seed, "seed for numeric restarts");

    auto* psi_cmd = app.add_subcommand("psi", "Multiply out a chain");
    psi_cmd->add_option("file", path, "input file (default: stdin)");

    auto* phi_cmd = app.add_subcommand("phi", "Last row of a chain product");
    phi_cmd->add_option("file", path, "input file (default: stdin)");

    auto* singular = app.add_subcommand("singular", "Singular-set membership of a chain");
    singular->add_option("file", path, "input file (default: stdin)");

    auto* jac = app.add_subcommand("jacobian", "Exact Jacobian of the last-row map");
    jac->add_option("file", path, "input file (default: stdin)");
    jac->add_flag("--rank", rank_only, "print only the rank");

    auto* reduce = app.add_subcommand("reduce", "Reduce the fiber equations over a target");
    reduce->add_option("file", path, "target row vector file (default: stdin)");
    reduce->add_option("--K", K, "number of chain levels")->required();

    auto* vred = app.add_subcommand("verify-reduce", "Trial-verify a reduction plan");
    vred->add_option("file", path, "target row vector file (default: stdin)");
    vred->add_option("--K", K, "number of chain levels")->required();
    vred->add_option("--trials", trials, "number of trials (default 20)");
    auto* vred_seed = vred->add_option("--seed", seed, "trial seed");
    vred_seed->required();

    auto* bounds = app.add_subcommand("bounds", "Factor-count bounds");
    bounds->add_option("--n", n, "half-dimension")->required();
    bounds->add_option("--d", d, "parameter dimension")->required();
    bounds->add_option("--ktilde", ktilde, "known skew-form factor count");
    bounds->add_option("--kcont2", kcont2, "known continuous count at n=2");

    auto* gen = app.add_subcommand("gen", "Generate a random chain");
    gen->add_option("--n", n, "half-dimension")->required();
    gen->add_option("--k", k, "number of factors")->required();
    gen->add_option("--seed", seed, "generator seed")->required();
    gen->add_option("--ring", ring, "gaussian or poly")
        ->check(CLI::IsMember({"gaussian", "poly"}));
    gen->add_option("--emit", emit, "chain or matrix")
        ->check(CLI::IsMember({"chain", "matrix"}));

    try {
        app.parse(argc, argv);
        if (verify->parsed()) return cmd_verify(path, form);
        if (make->parsed()) return cmd_make_elementary(path);
        if (factor7->parsed()) return cmd_factor7(path);
        if (vprod->parsed()) return cmd_verify_product(path, target_path);
        if (search->parsed()) return cmd_search(path, k, strategy, restarts, seed);
        if (psi_cmd->parsed()) return cmd_psi(path);
        if (phi_cmd->parsed()) return cmd_phi(path);
        if (singular->parsed()) return cmd_singular(path);
        if (jac->parsed()) return cmd_jacobian(path, rank_only);
        if (reduce->parsed()) return cmd_reduce(path, K);
        if (vred->parsed()) return cmd_verify_reduce(path, K, trials, *seed);
        if (bounds->parsed()) return cmd_bounds(n, d, ktilde, kcont2);
        if (gen->parsed()) return cmd_gen(n, k, *seed, ring, emit);
        return 2;
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    } catch (const CheckFailed&) {
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
