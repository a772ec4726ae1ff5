#include <iostream>

#include "CLI11.hpp"
#include "mtcperm/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"mtcperm: checks for modular tensor category data and diagrammatic identities"};
    app.require_subcommand(1);

    mtcperm::CliConfig vc;
    auto* verify = app.add_subcommand("verify", "run verification suites on category data");
    verify->add_option("--category", vc.categories, "category JSON file or bundled name (repeatable)")->required();
    verify->add_option("--suite", vc.suite, "suite to run")
        ->check(CLI::IsMember({"consistency", "dualbases", "algebra", "iso", "pentagons", "all"}));
    verify->add_option("--tol", vc.tol, "residual tolerance (default: MTCPERM_TOL, else the category's)");
    verify->add_option("--jobs", vc.jobs, "worker threads (1 = serial)")->check(CLI::NonNegativeNumber);
    verify->add_option("--out", vc.out, "also write the report to this file");
    verify->add_option("--format", vc.format, "report format")->check(CLI::IsMember({"json", "text"}));
    verify->add_option("--rank-cap", vc.rank_cap, "refuse sweeps with more than this many label tuples");
    verify->add_flag("--as-drawn", vc.as_drawn, "iso suite: use the maps without twist factors");
    verify->add_option("--words", vc.words_dir, "directory of braid-word identity files");

    mtcperm::EvalConfig ec;
    auto* eval = app.add_subcommand("eval", "evaluate a diagram file (two files: compare)");
    eval->add_option("--category", ec.category, "category JSON file or bundled name")->required();
    eval->add_option("--source", ec.source, "source word(s), e.g. \"tau tau || ()\"");
    eval->add_option("--tol", ec.tol, "comparison tolerance");
    eval->add_option("files", ec.files, "diagram files")->required()->expected(1, 2);

    std::vector<std::string> pfiles;
    auto* parse = app.add_subcommand("parse", "parse diagram files and print the canonical form");
    parse->add_option("files", pfiles, "diagram files")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }
    if (*verify) return mtcperm::cmd_verify(vc, std::cout, std::cerr);
    if (*eval) return mtcperm::cmd_eval(ec, std::cout, std::cerr);
    if (*parse) return mtcperm::cmd_parse(pfiles, std::cout, std::cerr);
    return 2;
}
