#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace mtcperm {

struct Check {
    std::string id;
    double max_residual = 0.0;
    double rel_residual = 0.0;
    std::string worst_index;
    bool pass = true;
    std::string note;
};

Check make_check(std::string id, double residual, std::string worst, double tol);

struct Report {
    std::string suite;
    std::string category;
    std::vector<Check> checks;

    bool pass() const;
    const Check* first_failure() const;
    void add(Check c) { checks.push_back(std::move(c)); }
    nlohmann::json to_json() const;
    std::string to_text() const;
};

}  // namespace mtcperm
