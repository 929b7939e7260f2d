#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace qlat {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<cplx, Eigen::ColMajor>;
using Triplet = Eigen::Triplet<cplx>;

inline constexpr double kPi = 3.14159265358979323846;

// Failure categories; the CLI maps each to a distinct exit code.
enum class ErrorKind {
    InvalidArgument,
    InvalidConfig,
    SizeCap,
    NonConvergence,
    InvariantViolation,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

inline int exit_code(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::InvalidArgument:
    case ErrorKind::InvalidConfig: return 2;
    case ErrorKind::SizeCap: return 3;
    case ErrorKind::NonConvergence: return 4;
    case ErrorKind::InvariantViolation: return 5;
    }
    return 1;
}

[[noreturn]] inline void fail(const std::string& what) {
    throw Error(ErrorKind::InvalidArgument, what);
}

inline void require(bool cond, const std::string& what) {
    if (!cond) fail(what);
}

}  // namespace qlat
