#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace mtcperm {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;

inline constexpr double kDefaultTol = 1e-9;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ParseError : Error {
    int line = 0, col = 0;
    ParseError(const std::string& msg, int l = 0, int c = 0)
        : Error(l > 0 ? msg + " at line " + std::to_string(l) + ", col " + std::to_string(c) : msg),
          line(l), col(c) {}
};
struct ConsistencyError : Error { using Error::Error; };
struct MissingData : Error { using Error::Error; };
struct NumericalError : Error { using Error::Error; };
struct SizeError : Error { using Error::Error; };
struct UnknownLabel : Error { using Error::Error; };
struct PositionError : Error { using Error::Error; };
struct TypeMismatch : Error {
    int slice = -1;
    TypeMismatch(const std::string& msg, int s = -1)
        : Error(s >= 0 ? msg + " (slice " + std::to_string(s) + ")" : msg), slice(s) {}
};
struct ShapeMismatch : Error { using Error::Error; };
struct SingularPairing : Error { using Error::Error; };
struct NotModular : Error { using Error::Error; };
struct UnknownBasisId : Error { using Error::Error; };

inline double max_abs(const Mat& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline Mat kron(const Mat& a, const Mat& b) {
    Mat r(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            r.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return r;
}

}  // namespace mtcperm
