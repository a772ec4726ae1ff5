#include "mtcperm/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "mtcperm/catdata.hpp"
#include "mtcperm/dsl.hpp"
#include "mtcperm/dualbases.hpp"
#include "mtcperm/permutation.hpp"

namespace mtcperm {

namespace fs = std::filesystem;

std::string resolve_category(const std::string& name) {
    if (fs::exists(name)) return name;
#ifdef MTCPERM_DATA_DIR
    for (const std::string& cand : {std::string(MTCPERM_DATA_DIR) + "/" + name,
                                     std::string(MTCPERM_DATA_DIR) + "/" + name + ".json"})
        if (fs::exists(cand)) return cand;
#endif
    return name;
}

namespace {

double effective_tol(double flag) {
    if (flag > 0) return flag;
    if (const char* env = std::getenv("MTCPERM_TOL")) {
        char* end = nullptr;
        double v = std::strtod(env, &end);
        if (end != env && v > 0) return v;
    }
    return -1.0;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// a suite that cannot run (non-modular input, size cap) is reported as one failing check
Report failed_suite(const std::string& suite, const std::string& cat, const std::string& why) {
    Report r;
    r.suite = suite;
    r.category = cat;
    Check c;
    c.id = suite + " preconditions";
    c.max_residual = 1.0;
    c.pass = false;
    c.note = why;
    r.add(c);
    return r;
}

Report merge_reports(const std::string& suite, const Report& a, const Report& b) {
    Report r;
    r.suite = suite;
    r.category = a.category;
    for (const auto* x : {&a, &b})
        for (const auto& c : x->checks) r.add(c);
    return r;
}

}  // namespace

int cmd_verify(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
    static const std::vector<std::string> kSuites{"consistency", "dualbases", "algebra", "iso", "pentagons"};
    std::vector<std::string> suites;
    if (cfg.suite == "all") suites = kSuites;
    else if (std::find(kSuites.begin(), kSuites.end(), cfg.suite) != kSuites.end()) suites = {cfg.suite};
    else {
        err << "unknown suite '" << cfg.suite << "'\n";
        return 2;
    }
    if (cfg.categories.empty()) {
        err << "no --category given\n";
        return 2;
    }
    Exec ex{cfg.jobs != 1, cfg.jobs > 1 ? cfg.jobs : 0};
    PermOptions opt;
    opt.rank_cap = cfg.rank_cap;
    opt.exec = ex;
    opt.twist_correction = !cfg.as_drawn;

    LoadOptions lo;
    lo.validate = false;
    lo.tolerance_override = effective_tol(cfg.tol);

    std::vector<Report> reports;
    bool all_pass = true;
    for (const auto& name : cfg.categories) {
        FusionCategoryData cat;
        try {
            cat = load_category(resolve_category(name), lo);
        } catch (const std::exception& e) {
            err << "error loading " << name << ": " << e.what() << "\n";
            return 2;
        }
        Report cons = consistency_report(cat, ex);
        const bool consistent = cons.pass();
        Evaluator ev(cat);
        for (const auto& s : suites) {
            Report r;
            if (s == "consistency") {
                r = cons;
            } else if (!consistent) {
                const Check* f = cons.first_failure();
                r = failed_suite(s, cat.name, "category data inconsistent: " + (f ? f->id : std::string("?")));
            } else {
                try {
                    if (s == "dualbases") r = dualbases_suite(ev, 10, 1, ex);
                    else if (s == "algebra") r = algebra_suite(ev, opt);
                    else if (s == "iso") r = verify_iso_suite(ev, opt);
                    else if (s == "pentagons")
                        r = merge_reports("pentagons", module_pentagon_suite(ev, opt, false, cfg.words_dir),
                                          module_axiom_suite(ev, opt));
                } catch (const ParseError& e) {
                    err << "error: " << e.what() << "\n";
                    return 2;
                } catch (const Error& e) {
                    r = failed_suite(s, cat.name, e.what());
                }
            }
            all_pass = all_pass && r.pass();
            reports.push_back(std::move(r));
        }
    }

    nlohmann::json j;
    j["reports"] = nlohmann::json::array();
    for (const auto& r : reports) j["reports"].push_back(r.to_json());
    j["pass"] = all_pass;
    std::string text;
    for (const auto& r : reports) text += r.to_text() + "\n";
    const std::string rendered = cfg.format == "json" ? j.dump(2) + "\n" : text;
    out << rendered;
    if (!all_pass)
        for (const auto& r : reports)
            if (const Check* f = r.first_failure()) {
                err << "first failure: [" << r.suite << "] " << r.category << ": " << f->id << " residual "
                    << f->max_residual << (f->worst_index.empty() ? "" : " at " + f->worst_index)
                    << (f->note.empty() ? "" : " (" + f->note + ")") << "\n";
                break;
            }
    if (!cfg.out.empty()) {
        std::ofstream o(cfg.out);
        if (!o) {
            err << "cannot write " << cfg.out << "\n";
            return 2;
        }
        o << (cfg.format == "text" ? text : j.dump(2) + "\n");
    }
    return all_pass ? 0 : 1;
}

namespace {

std::string tree_str(const FusionCategoryData& cat, const Word& w, const Tree& t) {
    // channels after each strand, with multiplicities when nontrivial
    std::string s = "(";
    for (size_t m = 1; m < t.x.size(); ++m) {
        if (m > 1) s += ",";
        s += cat.labels[t.x[m]];
        if (t.mu[m] > 1) s += "#" + std::to_string(t.mu[m]);
    }
    (void)w;
    return s + ")";
}

void print_morph(const Evaluator& ev, const Morph& m, std::ostream& out) {
    const auto& cat = ev.cat();
    out << "  " << word_str(cat, m.src) << " -> " << word_str(cat, m.tgt) << "\n";
    auto bs = ev.basis(m.src), bt = ev.basis(m.tgt);
    for (int t = 0; t < cat.rank(); ++t) {
        const Mat& b = m.blk[t];
        if (b.size() == 0) continue;
        out << "  total " << cat.labels[t] << ": " << b.rows() << "x" << b.cols() << "\n";
        out << "    cols:";
        for (const auto& tr : bs->by_total[t]) out << " " << tree_str(cat, m.src, tr);
        out << "\n    rows:";
        for (const auto& tr : bt->by_total[t]) out << " " << tree_str(cat, m.tgt, tr);
        out << "\n";
        for (Eigen::Index i = 0; i < b.rows(); ++i) {
            out << "    ";
            for (Eigen::Index j = 0; j < b.cols(); ++j) {
                cplx z = b(i, j);
                out << (j ? "  " : "") << std::setprecision(10) << z.real();
                if (std::abs(z.imag()) > 1e-14) out << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
            }
            out << "\n";
        }
    }
}

}  // namespace

int cmd_eval(const EvalConfig& cfg, std::ostream& out, std::ostream& err) {
    if (cfg.files.empty() || cfg.files.size() > 2) {
        err << "eval takes one diagram file, or two to compare\n";
        return 2;
    }
    FusionCategoryData cat;
    LoadOptions lo;
    lo.tolerance_override = effective_tol(cfg.tol);
    try {
        cat = load_category(resolve_category(cfg.category), lo);
    } catch (const std::exception& e) {
        err << "error loading " << cfg.category << ": " << e.what() << "\n";
        return 2;
    }
    Evaluator ev(cat);
    std::vector<std::vector<Morph>> results;
    for (const auto& file : cfg.files) {
        DiagramProgram p;
        try {
            p = parse_dsl(read_file(file));
        } catch (const ParseError& e) {
            err << file << ": parse error: " << e.what() << "\n";
            return 2;
        }
        try {
            results.push_back(cfg.source.empty() ? evaluate_program(ev, p)
                                                 : evaluate_program(ev, p, parse_source_spec(cat, cfg.source)));
        } catch (const ParseError& e) {
            err << "--source: parse error: " << e.what() << "\n";
            return 2;
        } catch (const UnknownLabel& e) {
            err << file << ": " << e.what() << "\n";
            return 2;
        } catch (const Error& e) {
            err << file << ": " << e.what() << "\n";
            return 1;
        }
        out << file << ":\n";
        for (size_t f = 0; f < results.back().size(); ++f) {
            if (results.back().size() > 1) out << " factor " << f + 1 << ":\n";
            print_morph(ev, results.back()[f], out);
        }
    }
    if (results.size() == 2) {
        const auto& a = results[0];
        const auto& b = results[1];
        if (a.size() != b.size()) {
            err << "diagrams have different factor counts\n";
            return 1;
        }
        double worst = 0.0;
        for (size_t f = 0; f < a.size(); ++f) {
            if (a[f].src != b[f].src || a[f].tgt != b[f].tgt) {
                err << "diagrams have different source or target in factor " << f + 1 << "\n";
                return 1;
            }
            worst = std::max(worst, Evaluator::residual(a[f], b[f]));
        }
        const bool eq = worst < cat.tolerance;
        out << "max |difference| = " << worst << (eq ? "  (equal)" : "  (different)") << "\n";
        return eq ? 0 : 1;
    }
    return 0;
}

int cmd_parse(const std::vector<std::string>& files, std::ostream& out, std::ostream& err) {
    int rc = 0;
    for (const auto& file : files) {
        try {
            out << print_dsl(parse_dsl(read_file(file)));
        } catch (const ParseError& e) {
            err << file << ": parse error: " << e.what() << "\n";
            rc = 2;
        }
    }
    return rc;
}

}  // namespace mtcperm
