// Command-line front end: one subcommand per verification suite, plus `all`.
// Exit code 0 means no unexpected failures (the jordan suite is expected to
// fail, everything else to pass).

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fuglab/fuglab.hpp"

namespace {

struct CliOptions {
    fuglab::SuiteConfig config;
    std::string out_path;
    std::string format = "json";
    std::string fixture_path;
};

void add_common_options(CLI::App* cmd, CliOptions& opts) {
    cmd->add_option("--trials", opts.config.trials, "Number of instances to run")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--seed", opts.config.seed, "Campaign seed (64-bit unsigned)");
    cmd->add_option("--max-dim", opts.config.max_dim, "Largest matrix dimension")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--max-distinct-eigs", opts.config.max_distinct_eigs,
                    "Largest number of distinct eigenvalues")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--tol-hypothesis", opts.config.hypothesis_tol,
                    "Residual tolerance for the hypothesis side");
    cmd->add_option("--tol-conclusion", opts.config.conclusion_tol,
                    "Residual tolerance for the conclusion side");
    cmd->add_option("--rank-tol", opts.config.rank_tol,
                    "Relative singular-value cutoff for the intertwiner solver");
    cmd->add_option("--fixture", opts.fixture_path,
                    "Matrix JSON file used as the base matrix instead of a random one");
    cmd->add_option("--out", opts.out_path, "Report output path");
    cmd->add_option("--format", opts.format, "Report format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
}

void print_summary(const fuglab::SuiteReport& report) {
    std::cout << "suite " << fuglab::to_string(report.config.suite) << ": "
              << report.instances.size() << " instances, " << report.pass << " PASS, "
              << report.fail << " FAIL, " << report.vacuous << " VACUOUS ("
              << report.wall_time_seconds << " s)\n";
    for (const auto& r : report.instances) {
        const bool expect_fail = (r.check == "jordan");
        if (expect_fail != (r.verdict == fuglab::Verdict::fail)) {
            std::cout << "  unexpected " << fuglab::to_string(r.verdict) << ": " << r.instance_id
                      << " hypothesis=" << r.hypothesis_residual
                      << " conclusion=" << r.conclusion_residual << '\n';
        }
    }
    if (report.unexpected() == 0) {
        std::cout << "no unexpected failures\n";
    } else {
        std::cout << report.unexpected() << " unexpected result(s)\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-dimensional verification suites for intertwining relations of normal "
                 "matrices"};
    app.require_subcommand(1);

    CliOptions opts;
    if (const char* tol_file = std::getenv("FUGLAB_TOLERANCES")) {
        try {
            fuglab::apply_tolerance_file(opts.config, tol_file);
        } catch (const fuglab::Error& e) {
            std::cerr << "error: " << e.what() << '\n';
            return 2;
        }
    }

    const std::pair<fuglab::SuiteKind, const char*> suites[] = {
        {fuglab::SuiteKind::theorem21, "Function transport through an intertwiner"},
        {fuglab::SuiteKind::flip, "B A = A B*  =>  B* A = A B"},
        {fuglab::SuiteKind::fuglede, "B A = A B  =>  B* A = A B*"},
        {fuglab::SuiteKind::putnam, "B A = A C  =>  B* A = A C*"},
        {fuglab::SuiteKind::transport, "B A = A C  =>  C A* = A* B"},
        {fuglab::SuiteKind::norm_identity, "||B* T x|| = ||B T x|| for normal B"},
        {fuglab::SuiteKind::selfadjoint_product,
         "Hermitian B T forces Hermitian B* T for normal B"},
        {fuglab::SuiteKind::prop25, "Unitary/arrow block pairs always satisfy the flip"},
        {fuglab::SuiteKind::jordan, "Non-normal witness; every instance is expected to FAIL"},
        {fuglab::SuiteKind::oracle_dims,
         "Intertwiner dimension agrees with the multiplicity oracle"},
        {fuglab::SuiteKind::all, "Run every suite"},
    };
    for (const auto& [kind, help] : suites) {
        CLI::App* cmd = app.add_subcommand(std::string(fuglab::to_string(kind)), help);
        add_common_options(cmd, opts);
        cmd->callback([&opts, kind = kind]() { opts.config.suite = kind; });
    }

    CLI11_PARSE(app, argc, argv);

    try {
        if (!opts.fixture_path.empty()) {
            opts.config.fixture = fuglab::load_matrix(opts.fixture_path);
            opts.config.fixture_path = opts.fixture_path;
        }
        const fuglab::SuiteReport report = fuglab::run_suite(opts.config);
        if (!opts.out_path.empty()) {
            fuglab::emit_report(report, fuglab::format_from_string(opts.format), opts.out_path);
            std::cout << "report written to " << opts.out_path << '\n';
        }
        print_summary(report);
        return report.unexpected() == 0 ? 0 : 1;
    } catch (const fuglab::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
