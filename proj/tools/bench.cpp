// Serial vs parallel timings of the sweep kernels; residuals must agree.
#include <chrono>
#include <cstdio>
#include <functional>

#include "CLI11.hpp"
#include "mtcperm/dualbases.hpp"
#include "mtcperm/permutation.hpp"
#ifdef _OPENMP
#include <omp.h>
#endif

using namespace mtcperm;

namespace {

double max_residual(const Report& r) {
    double m = 0;
    for (const auto& c : r.checks) m = std::max(m, c.max_residual);
    return m;
}

double time_best(int reps, const std::function<void()>& f) {
    double best = 1e300;
    for (int i = 0; i < reps; ++i) {
        auto t0 = std::chrono::steady_clock::now();
        f();
        best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    return best;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"serial vs parallel sweep benchmark"};
    std::string category = "ising";
    int reps = 3, threads = 0;
    app.add_option("--category", category, "category JSON file or bundled name");
    app.add_option("--reps", reps, "repetitions (best time reported)");
    app.add_option("--jobs", threads, "threads for the parallel run (0: runtime default)");
    CLI11_PARSE(app, argc, argv);

    std::string path = category;
    if (path.find('/') == std::string::npos) path = std::string(MTCPERM_DATA_DIR) + "/" + category + ".json";
    auto cat = load_category(path);
#ifdef _OPENMP
    std::printf("category %s, OpenMP max threads %d\n", cat.name.c_str(), threads ? threads : omp_get_max_threads());
#else
    std::printf("category %s, built without OpenMP\n", cat.name.c_str());
#endif
    std::printf("%-22s %12s %12s %9s %s\n", "kernel", "serial [s]", "parallel [s]", "speedup", "residuals agree");

    struct Kernel {
        const char* name;
        std::function<Report(const Exec&)> run;
    };
    const std::vector<Kernel> kernels{
        {"pentagon/hexagon", [&](const Exec& ex) { return consistency_report(cat, ex); }},
        {"snake/RII/YB", [&](const Exec& ex) { Evaluator ev(cat); return diagram_identities_report(ev, ex); }},
        {"dual bases", [&](const Exec& ex) { Evaluator ev(cat); return dualbases_suite(ev, 10, 1, ex); }},
        {"module axioms", [&](const Exec& ex) {
             Evaluator ev(cat);
             PermOptions o;
             o.exec = ex;
             return module_axiom_suite(ev, o);
         }},
    };
    for (const auto& k : kernels) {
        Report rs, rp;
        const double ts = time_best(reps, [&] { rs = k.run(Exec{false}); });
        const double tp = time_best(reps, [&] { rp = k.run(Exec{true, threads}); });
        const bool agree = std::abs(max_residual(rs) - max_residual(rp)) <= 1e-12 * (1 + max_residual(rs));
        std::printf("%-22s %12.4f %12.4f %9.2f %s\n", k.name, ts, tp, ts / tp, agree ? "yes" : "NO");
    }
}
