#pragma once

#include <array>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "mtcperm/common.hpp"
#include "mtcperm/report.hpp"
#include "mtcperm/sweep.hpp"

namespace mtcperm {

// One F^{abc}_d block. Left basis: ((ab)_e c)_d with (e, alpha, beta);
// right basis: (a(bc)_f)_d with (f, mu, nu). Multiplicity indices are 1-based.
struct FBlock {
    std::vector<std::array<int, 3>> left, right;
    Mat M;     // rows: left basis, cols: right basis
    Mat Minv;  // rows: right basis, cols: left basis
    std::map<std::array<int, 3>, int> left_pos, right_pos;

    int li(int e, int a, int b) const { return left_pos.at({e, a, b}); }
    int ri(int f, int m, int n) const { return right_pos.at({f, m, n}); }
};

// Cup/cap scalars for a label l on the strands of the two orientations.
// ev: (l up, l down) -> 1, evt: (l down, l up) -> 1,
// coev: 1 -> (l down, l up), coevt: 1 -> (l up, l down).
struct CupCap {
    cplx ev{1.0}, coev{1.0}, evt{1.0}, coevt{1.0};
};

class FusionCategoryData {
public:
    std::string name;
    std::vector<std::string> labels;
    std::vector<int> dual;
    std::vector<cplx> theta;
    std::vector<double> qdims;
    Mat S;
    double tolerance = kDefaultTol;
    std::vector<CupCap> cupcap;

    int rank() const { return static_cast<int>(labels.size()); }
    int N(int a, int b, int c) const { return n_[(a * r_ + b) * r_ + c]; }
    const FBlock* F(int a, int b, int c, int d) const {
        return f_[((a * r_ + b) * r_ + c) * r_ + d].get();
    }
    const Mat& R(int a, int b, int c) const { return rm_[(a * r_ + b) * r_ + c]; }
    int label_index(const std::string& s) const;
    const std::string& label(int i) const { return labels.at(i); }
    double global_dim() const;

    // construction interface
    void init(std::vector<std::string> labels, std::vector<int> dual);
    void set_N(int a, int b, int c, int n) { n_[(a * r_ + b) * r_ + c] = n; }
    void set_R(int a, int b, int c, Mat m) { rm_[(a * r_ + b) * r_ + c] = std::move(m); }
    // builds basis lists from N; entries default to zero
    FBlock& ensure_F(int a, int b, int c, int d);
    // fills Minv for all blocks and checks F completeness; throws MissingData/ConsistencyError
    void finalize_F();
    // derives qdims (unless given), S, cupcaps
    void finalize_derived(bool compute_qdims = true, bool compute_S = true);

private:
    int r_ = 0;
    std::vector<int> n_;
    std::vector<std::unique_ptr<FBlock>> f_;
    std::vector<Mat> rm_;
};

std::vector<std::string> split_top_level(const std::string& s, char sep);

struct LoadOptions {
    bool validate = true;  // run axiom checks and throw ConsistencyError on the first failure
    double tolerance_override = -1.0;
};

FusionCategoryData load_category(const std::string& path, const LoadOptions& opt = {});
FusionCategoryData parse_category(const std::string& text, const LoadOptions& opt = {},
                                  const std::string& default_name = "category");

// structural checks that do not need tolerances: unit strictness, rigidity, dual involution.
void check_structure(const FusionCategoryData& cat);

struct AxiomResult {
    double max_residual = 0.0;
    std::string worst_index;
    bool pass = true;
};

AxiomResult verify_pentagon(const FusionCategoryData& cat, const Exec& ex = {});
AxiomResult verify_hexagon(const FusionCategoryData& cat, const Exec& ex = {});
// hexagon for one orientation only: reverse=false uses c, reverse=true uses c^{-1}
AxiomResult verify_hexagon_one(const FusionCategoryData& cat, bool reverse, const Exec& ex = {});
AxiomResult verify_unit_F(const FusionCategoryData& cat);
AxiomResult verify_ribbon(const FusionCategoryData& cat);
AxiomResult verify_selfdual_twists(const FusionCategoryData& cat);
AxiomResult verify_cupcap(const FusionCategoryData& cat);
AxiomResult verify_dimension_law(const FusionCategoryData& cat);

std::vector<double> quantum_dimensions(const FusionCategoryData& cat);
Mat s_matrix(const FusionCategoryData& cat);
bool is_modular(const FusionCategoryData& cat);

// Every axiom check, in a fixed order; the first failing one is what load_category reports.
Report consistency_report(const FusionCategoryData& cat, const Exec& ex = {});

class DeligneCategoryData {
public:
    const FusionCategoryData* base = nullptr;
    int n = 1;
    std::vector<std::vector<int>> tuples;

    DeligneCategoryData(const FusionCategoryData& base, int n, long rank_cap = 10000);
    int rank() const { return static_cast<int>(tuples.size()); }
    int index(const std::vector<int>& t) const;
    int N(int i, int j, int k) const;
    cplx theta(int i) const;
    double qdim(int i) const;
    std::string label(int i) const;
    FusionCategoryData materialize() const;
};

DeligneCategoryData deligne_power(const FusionCategoryData& cat, int n, long rank_cap = 10000);

}  // namespace mtcperm
