#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mtcperm {

struct CliConfig {
    std::vector<std::string> categories;
    std::string suite = "all";  // consistency, dualbases, algebra, iso, pentagons, all
    double tol = -1.0;          // <= 0: MTCPERM_TOL, else the category file's value
    int jobs = 0;               // 0: runtime default, 1: serial
    std::string out;            // report file; empty: stdout only
    std::string format = "text";
    long rank_cap = 10000;
    bool as_drawn = false;      // iso suite without the twist factors on f1, f2, f^{-1}
    std::string words_dir;      // transcribed braid words; empty: bundled
};

// exit codes: 0 all checks pass, 1 some check fails, 2 load or parse error
int cmd_verify(const CliConfig& cfg, std::ostream& out, std::ostream& err);

struct EvalConfig {
    std::string category;
    std::vector<std::string> files;  // one diagram, or two to compare
    std::string source;              // overrides the file's source line
    double tol = -1.0;
};
// exit codes: 0 ok (and equal, for two files), 1 type mismatch or unequal, 2 load or parse error
int cmd_eval(const EvalConfig& cfg, std::ostream& out, std::ostream& err);

// prints the canonical form; exit 2 on parse errors
int cmd_parse(const std::vector<std::string>& files, std::ostream& out, std::ostream& err);

// a path as given, else a bundled category by name ("fibonacci" or "fibonacci.json")
std::string resolve_category(const std::string& name);

}  // namespace mtcperm
