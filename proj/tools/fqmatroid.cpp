#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fqm/errors.hpp"
#include "fqm/families.hpp"
#include "fqm/matrix_io.hpp"
#include "fqm/report.hpp"
#include "fqm/verify.hpp"

namespace {

using namespace fqm;

MatrixFile load(const std::string& path) {
    if (path == "-") return read_matrix(std::cin);
    return read_matrix_file(path);
}

void emit(const MatrixFile& mf, const std::string& out_path) {
    if (out_path.empty() || out_path == "-")
        write_matrix(std::cout, mf);
    else
        write_matrix_file(out_path, mf);
}

std::optional<std::string> nonempty(const std::string& s) {
    return s.empty() ? std::nullopt : std::optional<std::string>(s);
}

// Distinguished-element metadata survives a transform only when the label does.
std::optional<std::string> carried(const LinearMatroid& m, const std::optional<std::string>& d) {
    if (d && m.rep().has_label(*d)) return d;
    return std::nullopt;
}

struct ConstructArgs {
    std::string family;
    int rank = 0;
    int m = 0;
    int n = 0;
    int q = 0;
    bool structural = false;
    std::string out;
};

int cmd_construct(const ConstructArgs& a) {
    auto parametric = [&](Family f) {
        if (a.rank <= 0) throw PreconditionError("--rank is required for family " + a.family);
        if (a.q != 0 && a.q != 2)
            throw PreconditionError("family " + a.family + " is binary; drop --q or use --q 2");
        return a.structural ? build_structural(f, a.rank) : build_figure(f, a.rank);
    };
    BuiltFamily built = [&] {
        if (a.family == "Lr") return parametric(Family::Lr);
        if (a.family == "Jr") return parametric(Family::Jr);
        if (a.family == "Mr") return parametric(Family::Mr);
        if (a.family == "Nr") return parametric(Family::Nr);
        if (a.family == "Pr") {
            if (a.rank <= 0) throw PreconditionError("--rank is required for family Pr");
            return build_structural(Family::Pr, a.rank);
        }
        if (a.family == "fano") return build_named(Family::Fano);
        if (a.family == "ag32") return build_named(Family::AG32);
        if (a.family == "golay12") return build_named(Family::Golay12);
        if (a.family == "U") {
            if (a.m <= 0 || a.n <= 0 || a.q <= 0)
                throw PreconditionError("family U needs --m, --n, and --q");
            return build_uniform(a.m, a.n, a.q);
        }
        if (a.family == "circuit") {
            if (a.rank <= 0 || a.q <= 0)
                throw PreconditionError("family circuit needs --rank and --q");
            return build_circuit_uniform(a.rank, a.q);
        }
        throw PreconditionError(
            "unknown family '" + a.family +
            "' (choose Lr, Jr, Mr, Nr, Pr, fano, ag32, golay12, U, circuit)");
    }();
    emit(from_matrix(built.matroid.rep(), nonempty(built.designated)), a.out);
    return 0;
}

struct AnalyzeArgs {
    std::string file;
    bool json = false;
    bool circuits = false;
    std::string element;
};

int cmd_analyze(const AnalyzeArgs& a) {
    MatrixFile mf = load(a.file);
    LinearMatroid m(to_matrix(mf));
    AnalyzeOptions opts;
    opts.with_circuits = a.circuits;
    opts.element = nonempty(a.element);
    std::cout << (a.json ? analyze_json(m, mf.designated, opts) + "\n"
                         : analyze_text(m, mf.designated, opts));
    return 0;
}

struct VerifyArgs {
    std::string suite;
    int q = 0;
    int rank = 0;
    int rank_min = 0;
    int rank_max = 0;
    long samples = 0;
    std::uint64_t seed = 1;
    int chunk_size = 0;
    int workers = 0;
    bool exhaustive = false;
    bool sample_only = false;
    bool json = false;
    bool timing = false;
};

int cmd_verify(const VerifyArgs& a) {
    if (a.exhaustive && a.sample_only)
        throw PreconditionError("--exhaustive and --sample-only exclude each other");
    SuiteConfig cfg;
    cfg.suite = a.suite;
    cfg.q = a.q;
    cfg.rank_min = a.rank > 0 ? a.rank : a.rank_min;
    cfg.rank_max = a.rank > 0 ? a.rank : a.rank_max;
    cfg.mode = a.exhaustive ? "exhaustive" : a.sample_only ? "sample" : "all";
    cfg.samples = a.samples;
    cfg.seed = a.seed;
    cfg.chunk_size = a.chunk_size;
    cfg.workers = a.workers;
    SuiteOutcome out = run_suite(cfg);
    if (a.json) {
        std::cout << verify_json(out, a.timing) << "\n";
    } else {
        const auto& c = out.config;
        std::cout << "suite " << c.suite << "  q " << c.q << "  ranks " << c.rank_min << ".."
                  << c.rank_max << "  mode " << c.mode << "  samples " << c.samples << "  seed "
                  << c.seed << "\n";
        for (const auto& [k, v] : out.counts) std::cout << "  " << k << ": " << v << "\n";
        if (!out.violations.empty()) {
            std::cout << "violations (" << out.violations.size() << "):\n";
            for (const auto& v : out.violations) std::cout << "  - " << v << "\n";
        }
        std::cout << (out.pass ? "PASS" : "FAIL") << " in " << out.elapsed_ms << " ms\n";
    }
    return out.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fqmatroid: linear matroids over small finite fields"};
    app.require_subcommand(1);

    ConstructArgs ca;
    auto* construct = app.add_subcommand("construct", "build a catalog matroid as a matrix file");
    construct->add_option("--family", ca.family,
                          "Lr | Jr | Mr | Nr | Pr | fano | ag32 | golay12 | U | circuit")
        ->required();
    construct->add_option("--rank", ca.rank, "rank for parametric families");
    construct->add_option("--m", ca.m, "rank of U_{m,n}");
    construct->add_option("--n", ca.n, "size of U_{m,n}");
    construct->add_option("--q", ca.q, "field size where the family allows a choice");
    construct->add_flag("--structural", ca.structural,
                        "assemble from smaller pieces instead of the fixed matrix");
    construct->add_option("--out", ca.out, "output path (default: stdout)");

    AnalyzeArgs aa;
    auto* analyze = app.add_subcommand("analyze", "rank/girth/paving/per-element report");
    analyze->add_option("file", aa.file, "matrix file ('-' for stdin)")->required();
    analyze->add_flag("--json", aa.json, "machine-readable report");
    analyze->add_flag("--circuits", aa.circuits, "include the full circuit list");
    analyze->add_option("--element", aa.element, "deep report for one element");

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "run a verification campaign");
    verify->add_option("suite", va.suite, "thm-binary | thm-ternary-bound | thm-two-loose | thm-paving | prop-free")
        ->required();
    verify->add_option("--q", va.q, "field size (0: suite default)");
    verify->add_option("--rank", va.rank, "single rank (sets both ends of the range)");
    verify->add_option("--rank-min", va.rank_min, "lowest rank");
    verify->add_option("--rank-max", va.rank_max, "highest rank");
    verify->add_option("--samples", va.samples, "sampled instances per rank");
    verify->add_option("--seed", va.seed, "base RNG seed");
    verify->add_option("--chunk-size", va.chunk_size, "work-chunk granularity");
    verify->add_option("--workers", va.workers, "thread count (0: FQMATROID_WORKERS or hardware)");
    verify->add_flag("--exhaustive", va.exhaustive, "exhaustive phases only");
    verify->add_flag("--sample-only", va.sample_only, "sampled phases only");
    verify->add_flag("--json", va.json, "emit the outcome as JSON");
    verify->add_flag("--timing", va.timing, "include elapsed_ms in the JSON (breaks rerun identity)");

    auto* transform = app.add_subcommand("transform", "derive a new matrix file");
    transform->require_subcommand(1);
    std::string t_in, t_in_b, t_out, t_element, t_ea, t_eb;
    std::vector<std::string> t_keep;
    int t_count = 2;
    auto* t_dual = transform->add_subcommand("dual", "dual matroid on the same ground set");
    t_dual->add_option("file", t_in, "matrix file ('-' for stdin)")->required();
    t_dual->add_option("--out", t_out, "output path (default: stdout)");
    auto* t_restrict = transform->add_subcommand("restrict", "keep only the listed columns");
    t_restrict->add_option("file", t_in, "matrix file ('-' for stdin)")->required();
    t_restrict->add_option("--keep", t_keep, "comma-separated labels")->required()->delimiter(',');
    t_restrict->add_option("--out", t_out, "output path (default: stdout)");
    auto* t_series = transform->add_subcommand("series-sub", "replace an element by a series class");
    t_series->add_option("file", t_in, "matrix file ('-' for stdin)")->required();
    t_series->add_option("--element", t_element, "element to expand (default: designated)");
    t_series->add_option("--count", t_count, "class size (default 2)");
    t_series->add_option("--out", t_out, "output path (default: stdout)");
    auto* t_twosum = transform->add_subcommand("two-sum", "two-sum across basepoints");
    t_twosum->add_option("file_a", t_in, "first matrix file")->required();
    t_twosum->add_option("file_b", t_in_b, "second matrix file")->required();
    t_twosum->add_option("--ea", t_ea, "basepoint in the first file (default: designated)");
    t_twosum->add_option("--eb", t_eb, "basepoint in the second file (default: designated)");
    t_twosum->add_option("--out", t_out, "output path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (construct->parsed()) return cmd_construct(ca);
        if (analyze->parsed()) return cmd_analyze(aa);
        if (verify->parsed()) return cmd_verify(va);
        if (t_dual->parsed()) {
            MatrixFile mf = load(t_in);
            LinearMatroid m(to_matrix(mf));
            LinearMatroid d = m.dual();
            emit(from_matrix(d.rep(), carried(d, mf.designated)), t_out);
            return 0;
        }
        if (t_restrict->parsed()) {
            MatrixFile mf = load(t_in);
            LinearMatroid m(to_matrix(mf));
            LinearMatroid r = m.restricted(t_keep);
            emit(from_matrix(r.rep(), carried(r, mf.designated)), t_out);
            return 0;
        }
        if (t_series->parsed()) {
            MatrixFile mf = load(t_in);
            LinearMatroid m(to_matrix(mf));
            std::string x = !t_element.empty() ? t_element
                            : mf.designated    ? *mf.designated
                                               : throw PreconditionError(
                                                  "--element required: the file has no designated element");
            LinearMatroid s = series_substitute(m, x, t_count);
            emit(from_matrix(s.rep(), carried(s, mf.designated)), t_out);
            return 0;
        }
        if (t_twosum->parsed()) {
            MatrixFile fa = load(t_in), fb = load(t_in_b);
            LinearMatroid a(to_matrix(fa)), b(to_matrix(fb));
            std::string ea = !t_ea.empty() ? t_ea
                             : fa.designated ? *fa.designated
                                             : throw PreconditionError(
                                                "--ea required: the first file has no designated element");
            std::string eb = !t_eb.empty() ? t_eb
                             : fb.designated ? *fb.designated
                                             : throw PreconditionError(
                                                "--eb required: the second file has no designated element");
            LinearMatroid s = two_sum(a, ea, b, eb);
            emit(from_matrix(s.rep(), carried(s, fa.designated)), t_out);
            return 0;
        }
        std::cerr << "error: no command\n";
        return 2;
    } catch (const FalsificationError& ex) {
        std::cerr << "falsified: " << ex.what() << " [" << ex.details() << "]\n";
        return 1;
    } catch (const Error& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    }
}
