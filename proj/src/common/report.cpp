#include "mtcperm/report.hpp"

#include <cstdio>
#include <sstream>

namespace mtcperm {

Check make_check(std::string id, double residual, std::string worst, double tol) {
    Check c;
    c.id = std::move(id);
    c.max_residual = residual;
    c.rel_residual = residual;
    c.worst_index = std::move(worst);
    c.pass = residual < tol;
    return c;
}

bool Report::pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

const Check* Report::first_failure() const {
    for (const auto& c : checks)
        if (!c.pass) return &c;
    return nullptr;
}

nlohmann::json Report::to_json() const {
    nlohmann::json j;
    j["suite"] = suite;
    j["category"] = category;
    j["checks"] = nlohmann::json::array();
    for (const auto& c : checks) {
        nlohmann::json cj{{"id", c.id},
                          {"max_residual", c.max_residual},
                          {"rel_residual", c.rel_residual},
                          {"worst_index", c.worst_index},
                          {"pass", c.pass}};
        if (!c.note.empty()) cj["note"] = c.note;
        j["checks"].push_back(cj);
    }
    j["pass"] = pass();
    return j;
}

std::string Report::to_text() const {
    std::ostringstream os;
    os << "[" << suite << "] " << category << ": " << (pass() ? "PASS" : "FAIL") << "\n";
    for (const auto& c : checks) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.3e", c.max_residual);
        os << "  " << (c.pass ? "ok   " : "FAIL ") << c.id << "  residual " << buf;
        if (!c.worst_index.empty()) os << "  at " << c.worst_index;
        if (!c.note.empty() && !c.pass) os << "  (" << c.note << ")";
        os << "\n";
    }
    return os.str();
}

}  // namespace mtcperm
