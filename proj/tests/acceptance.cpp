// Acceptance run: one PASS/FAIL line per criterion, with timings and the worst residuals.
// --expect-fail 5,6 exits 0 iff exactly the listed criteria fail.
#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "mtcperm/dsl.hpp"
#include "mtcperm/dualbases.hpp"
#include "mtcperm/permutation.hpp"

using namespace mtcperm;
namespace fs = std::filesystem;

namespace {

const std::vector<std::string> kBundled{"trivial", "z2", "z3", "fibonacci", "ising"};
const std::vector<std::string> kPerturbed{"broken_pentagon", "broken_hexagon"};

std::string data(const std::string& n) { return std::string(MTCPERM_DATA_DIR) + "/" + n + ".json"; }
std::string fixture(const std::string& n) { return std::string(MTCPERM_TEST_DIR) + "/fixtures/" + n + ".json"; }

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

double max_residual(const Report& r) {
    double m = 0;
    for (const auto& c : r.checks) m = std::max(m, c.max_residual);
    return m;
}

const Check* find(const Report& r, const std::string& id) {
    for (const auto& c : r.checks)
        if (c.id == id) return &c;
    return nullptr;
}

std::string fmt(double x) {
    char b[32];
    std::snprintf(b, sizeof b, "%.2e", x);
    return b;
}

struct Line {
    int id;
    bool pass;
    double seconds;
    std::string detail;
};

std::vector<Line> lines;

void emit(int id, bool pass, double secs, const std::string& detail) {
    lines.push_back({id, pass, secs, detail});
    std::printf("criterion %d: %s  (%.2fs)  %s\n", id, pass ? "PASS" : "FAIL", secs, detail.c_str());
    std::fflush(stdout);
}

void note(const std::string& s) {
    std::printf("    %s\n", s.c_str());
    std::fflush(stdout);
}

int run(const std::string& cmd) {
    int st = std::system((cmd + " >/dev/null 2>&1").c_str());
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

void criterion1() {
    Timer t;
    bool ok = true;
    double worst = 0, weakest = 1e300;
    for (const auto& n : kBundled) {
        auto r = consistency_report(load_category(data(n), {false}));
        ok = ok && r.pass() && max_residual(r) < 1e-10;
        worst = std::max(worst, max_residual(r));
    }
    for (const auto& n : kPerturbed) {
        auto r = consistency_report(load_category(fixture(n), {false}));
        const double m = max_residual(r);
        ok = ok && !r.pass() && m > 1e-2;
        weakest = std::min(weakest, m);
    }
    const double s = t.seconds();
    emit(1, ok && s < 5, s, "bundled max " + fmt(worst) + ", perturbed min " + fmt(weakest));
}

void criterion2() {
    Timer t;
    bool ok = true;
    double worst = 0;
    for (const auto& n : kBundled) {
        auto cat = load_category(data(n));
        Evaluator ev(cat);
        auto r = diagram_identities_report(ev);
        ok = ok && max_residual(r) < 1e-9;
        worst = std::max(worst, max_residual(r));
    }
    const double s = t.seconds();
    emit(2, ok && s < 30, s, "snake/RII/YB max " + fmt(worst));
}

void criterion3() {
    Timer t;
    bool ok = true;
    double worst = 0;
    for (const auto& n : kBundled) {
        auto cat = load_category(data(n));
        Evaluator ev(cat);
        auto r = dualbases_suite(ev, 10);
        ok = ok && r.pass();
        worst = std::max(worst, max_residual(r));
    }
    const double s = t.seconds();
    emit(3, ok && s < 60, s, "pairings, star pairing delta, completeness, basis independence max " + fmt(worst));
}

void criterion4() {
    Timer t;
    bool ok = true;
    double worst = 0;
    for (const char* n : {"fibonacci", "ising"}) {
        auto cat = load_category(data(n));
        Evaluator ev(cat);
        auto r = algebra_suite(ev);
        ok = ok && r.pass();
        worst = std::max(worst, max_residual(r));
        note(std::string(n) + ": A_P, A1, A2, A, B, C " + (r.pass() ? "pass" : "FAIL") + " (max " +
             fmt(max_residual(r)) + ")");
    }
    emit(4, ok, t.seconds(), "max " + fmt(worst));
}

void criterion5() {
    Timer t;
    bool drawn_ok = true, corrected_ok = true;
    double drawn_worst = 0, corrected_worst = 0;
    for (const char* n : {"fibonacci", "ising"}) {
        auto cat = load_category(data(n));
        Evaluator ev(cat);
        PermOptions drawn;
        drawn.twist_correction = false;
        auto rd = verify_iso_suite(ev, drawn);
        auto rc = verify_iso_suite(ev);
        drawn_ok = drawn_ok && rd.pass();
        corrected_ok = corrected_ok && rc.pass();
        drawn_worst = std::max(drawn_worst, max_residual(rd));
        corrected_worst = std::max(corrected_worst, max_residual(rc));
        const Check* f = rd.first_failure();
        note(std::string(n) + ": maps as drawn " + (rd.pass() ? "pass" : "fail") +
             (f ? " (first: " + f->id + " " + fmt(f->max_residual) + ")" : "") +
             "; f o f_inv = id " + (find(rd, "f o f_inv = id") && find(rd, "f o f_inv = id")->pass ? "holds" : "FAILS") +
             "; with twist factors " + (rc.pass() ? "pass" : "FAIL") + " (max " + fmt(max_residual(rc)) + ")");
    }
    const double s = t.seconds();
    emit(5, drawn_ok && s < 600, s, "maps as drawn: max " + fmt(drawn_worst));
    note(std::string("twist-corrected maps: ") + (corrected_ok ? "PASS" : "FAIL") + " (max " +
         fmt(corrected_worst) + ")");
}

void criterion6() {
    Timer t;
    auto cat = load_category(data("fibonacci"));
    Evaluator ev(cat);
    auto pent = module_pentagon_suite(ev);
    int pent_pass = 0;
    for (const char* id : {"f", "g", "l", "h", "k", "p"}) {
        const Check* c = find(pent, std::string("pentagon:") + id);
        pent_pass += c && c->pass;
    }
    auto ax = module_axiom_suite(ev);
    int ax_pass = 0;
    for (const auto& c : ax.checks) ax_pass += c.pass;
    auto mixed = module_axiom_suite(ev, {}, true);
    auto theta1 = module_pentagon_suite(ev, {}, true);
    const bool mixed_fails = !mixed.pass();
    const bool theta1_fails = !theta1.pass();
    note("module-functor pentagons: " + std::to_string(pent_pass) + "/6 pass; transcribed words " +
         (pent.pass() ? "agree" : "DISAGREE"));
    note("module axioms: " + std::to_string(ax_pass) + "/" + std::to_string(ax.checks.size()) + " pass");
    note(std::string("mixed braiding perturbation: ") + (mixed_fails ? "fails (as expected)" : "still passes") +
         " (max " + fmt(max_residual(mixed)) + ")");
    note(std::string("theta -> 1 perturbation: ") + (theta1_fails ? "fails (as expected)" : "still passes") +
         " (max " + fmt(max_residual(theta1)) + ")");
    const double s = t.seconds();
    const bool ok = pent_pass == 6 && pent.pass() && ax_pass == 12 && ax.checks.size() == 12 && mixed_fails &&
                    theta1_fails && s < 300;
    emit(6, ok, s, mixed_fails ? "" : "mixed-braiding perturbation is not detected");
}

void criterion7(const std::string& cli) {
    Timer t;
    bool ok = true;
    std::string detail;
    for (const auto& n : kBundled) {
        int rc = run(cli + " verify --suite all --category " + data(n));
        if (rc != 0) detail += n + " exit " + std::to_string(rc) + "; ";
        ok = ok && rc == 0;
    }
    for (const auto& n : kPerturbed) {
        int rc = run(cli + " verify --suite all --category " + fixture(n));
        if (rc != 1) detail += n + " exit " + std::to_string(rc) + "; ";
        ok = ok && rc == 1;
    }
    int files = 0;
    for (const auto& e : fs::directory_iterator(MTCPERM_DIAGRAM_DIR)) {
        if (e.path().extension() != ".dsl") continue;
        std::ifstream in(e.path());
        std::stringstream ss;
        ss << in.rdbuf();
        DiagramProgram p1;
        try {
            p1 = parse_dsl(ss.str());
        } catch (const ParseError&) {
            continue;  // deliberate error examples
        }
        const std::string s1 = print_dsl(p1);
        const bool rt = parse_dsl(s1) == p1 && print_dsl(parse_dsl(s1)) == s1;
        if (!rt) detail += e.path().filename().string() + " does not round-trip; ";
        ok = ok && rt;
        ++files;
    }
    emit(7, ok, t.seconds(), detail.empty() ? std::to_string(files) + " diagram files round-trip" : detail);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance checks"};
    std::vector<int> expect_fail;
    std::vector<int> only;
    std::string cli = MTCPERM_CLI_PATH;
    app.add_option("--expect-fail", expect_fail, "criteria known to fail")->delimiter(',');
    app.add_option("--only", only, "run only these criteria")->delimiter(',');
    app.add_option("--cli", cli, "path to the mtcperm executable");
    CLI11_PARSE(app, argc, argv);

    auto want = [&](int c) { return only.empty() || std::find(only.begin(), only.end(), c) != only.end(); };
    if (want(1)) criterion1();
    if (want(2)) criterion2();
    if (want(3)) criterion3();
    if (want(4)) criterion4();
    if (want(5)) criterion5();
    if (want(6)) criterion6();
    if (want(7)) criterion7(cli);

    std::set<int> failed, expected;
    for (const auto& l : lines)
        if (!l.pass) failed.insert(l.id);
    for (int c : expect_fail)
        if (want(c)) expected.insert(c);
    int npass = static_cast<int>(lines.size() - failed.size());
    std::printf("summary: %d/%zu criteria pass\n", npass, lines.size());
    if (!expect_fail.empty()) {
        std::printf("expected failures: %s\n", failed == expected ? "match" : "DO NOT match");
        return failed == expected ? 0 : 1;
    }
    return failed.empty() ? 0 : 1;
}
