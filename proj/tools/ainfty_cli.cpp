// ainfty: command line front end.
//
//   ainfty trees enumerate --external N [--listing]
//   ainfty trees poset --external N
//   ainfty morse table --model circle|torus --max-k K [--amplitude A]
//   ainfty morse homology --model circle|torus
//   ainfty novikov eval --lhs X [--op add|sub|mul --rhs Y] [--cutoff p/q]
//   ainfty verify --input FILE --bound B [--strict-degree] [--cutoff p/q]
//                 [--merge-morse circle|torus --max-k K] [--format text|machine]
//
// Exit status: 0 success, 1 defects found, 2 usage or input error.

#include "ainfty/count_file.hpp"
#include "ainfty/errors.hpp"
#include "ainfty/homology.hpp"
#include "ainfty/morse_trees.hpp"
#include "ainfty/ribbon_tree.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace ainfty;

namespace {

std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ReportFormat report_format(const std::string& s)
{
    return s == "machine" ? ReportFormat::Machine : ReportFormat::Text;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"curved A-infinity structures on Morse complexes: trees, Morse tables, Novikov arithmetic, verifier"};
    app.require_subcommand(1);

    int external = 4;
    bool listing = false;
    auto* trees = app.add_subcommand("trees", "ribbon tree combinatorics");
    trees->require_subcommand(1);
    auto* t_enum = trees->add_subcommand("enumerate", "list G_{k+1} as canonical strings");
    t_enum->add_option("--external", external, "number of external vertices k+1")->required();
    t_enum->add_flag("--listing", listing, "also print indented adjacency listings");
    auto* t_poset = trees->add_subcommand("poset", "contraction poset with ranks and covers");
    t_poset->add_option("--external", external, "number of external vertices k+1")->required();

    std::string model_name = "torus";
    int max_k = 2;
    double amplitude = 1e-3;
    auto* morse = app.add_subcommand("morse", "model Morse complexes");
    morse->require_subcommand(1);
    auto* m_table = morse->add_subcommand("table", "beta = 0 operation table as a count file");
    m_table->add_option("--model", model_name, "circle or torus")->check(CLI::IsMember({"circle", "torus"}));
    m_table->add_option("--max-k", max_k, "largest arity")->check(CLI::Range(1, 4));
    m_table->add_option("--amplitude", amplitude, "initial perturbation amplitude");
    auto* m_hom = morse->add_subcommand("homology", "Betti numbers of (CM, m_{1,0})");
    m_hom->add_option("--model", model_name, "circle or torus")->check(CLI::IsMember({"circle", "torus"}));

    std::string lhs, rhs, op, cutoff;
    auto* nov = app.add_subcommand("novikov", "Novikov ring arithmetic");
    nov->require_subcommand(1);
    auto* n_eval = nov->add_subcommand("eval", "canonicalize or combine elements");
    n_eval->add_option("--lhs", lhs, "element, e.g. '2*T^1/2*e^1 + -3*T^0'")->required();
    n_eval->add_option("--rhs", rhs, "second operand");
    n_eval->add_option("--op", op, "add, sub or mul")->check(CLI::IsMember({"add", "sub", "mul"}));
    n_eval->add_option("--cutoff", cutoff, "energy cutoff p/q");

    std::string input, format = "text", merge_model;
    std::int64_t bound = 4;
    bool strict = false;
    auto* ver = app.add_subcommand("verify", "check the A_{n,K} relations of a count file");
    ver->add_option("--input", input, "count file")->required();
    ver->add_option("--bound", bound, "bound on norm(beta) + k")->check(CLI::NonNegativeNumber);
    ver->add_flag("--strict-degree", strict, "also enforce deg(out) = sum deg(in) + 2 - k - mu");
    ver->add_option("--cutoff", cutoff, "monoid window p/q (default: the bound)");
    ver->add_option("--merge-morse", merge_model, "merge with the computed beta = 0 table of a model")
        ->check(CLI::IsMember({"circle", "torus"}));
    ver->add_option("--max-k", max_k, "largest arity of the merged Morse table")->check(CLI::Range(1, 4));
    for (auto* sub : {t_enum, t_poset, m_table, m_hom, n_eval, ver})
        sub->add_option("--format", format, "text or machine")->check(CLI::IsMember({"text", "machine"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*t_enum) {
            if (external < 3)
                throw Error("no stable tree with fewer than 3 external vertices");
            for (const auto& t : enumerate_trees(external)) {
                std::cout << t.canonical() << '\n';
                if (listing)
                    std::cout << t.adjacency_listing();
            }
            return 0;
        }
        if (*t_poset) {
            if (external < 3)
                throw Error("no stable tree with fewer than 3 external vertices");
            for (const auto& node : contraction_poset(external)) {
                std::cout << node.tree << " rank=" << node.rank << " covers=";
                for (std::size_t i = 0; i < node.covers.size(); ++i)
                    std::cout << (i ? "," : "") << node.covers[i];
                if (node.covers.empty())
                    std::cout << '-';
                std::cout << '\n';
            }
            return 0;
        }
        if (*m_table) {
            MorseTableOptions opt;
            opt.max_k = max_k;
            opt.amplitude = amplitude;
            std::cout << emit(build_morse_table(MorseModel::by_name(model_name), opt));
            return 0;
        }
        if (*m_hom) {
            MorseTableOptions opt;
            opt.max_k = 1;
            const auto betti = betti_numbers(build_morse_table(MorseModel::by_name(model_name), opt));
            for (std::size_t d = 0; d < betti.size(); ++d)
                std::cout << (d ? " " : "") << 'b' << d << '=' << betti[d];
            std::cout << '\n';
            return 0;
        }
        if (*n_eval) {
            std::optional<Rational> cut;
            if (!cutoff.empty())
                cut = parse_rational(cutoff);
            auto a = NovikovElement::parse(lhs);
            if (cut)
                a = a.truncate(EnergyCutoff(*cut));
            NovikovElement r = a;
            if (!op.empty()) {
                if (rhs.empty())
                    throw Error("--op needs --rhs");
                auto b = NovikovElement::parse(rhs);
                if (cut)
                    b = b.truncate(EnergyCutoff(*cut));
                r = op == "add" ? a + b : op == "sub" ? a - b : a * b;
            }
            std::cout << r.to_string() << '\n';
            if (format == "text") {
                const auto v = r.valuation();
                std::cout << "valuation " << (v ? format_rational(*v) : std::string("inf")) << '\n';
                const auto d = r.degree();
                std::cout << "degree "
                          << (d.kind == NovikovDegree::Kind::Homogeneous ? std::to_string(d.value)
                              : d.kind == NovikovDegree::Kind::Mixed     ? std::string("mixed")
                                                                         : std::string("none"))
                          << '\n';
            }
            return 0;
        }
        if (*ver) {
            Rational window = cutoff.empty() ? Rational(bound) : parse_rational(cutoff);
            auto table = parse_table(read_file(input), window);
            if (!merge_model.empty()) {
                MorseTableOptions opt;
                opt.max_k = max_k;
                table = merge(build_morse_table(MorseModel::by_name(merge_model), opt), table);
            }
            if (!gapped_check(table))
                std::cerr << "warning: table has entries outside the monoid closure\n";
            VerifyOptions vo;
            vo.strict_degree = strict;
            const auto report = verify(table, bound, vo);
            std::cout << format_report(table, report, bound, report_format(format));
            return report.ok() ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
