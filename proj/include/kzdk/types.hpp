#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace kzdk {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Parity of each basis index: 0 = even, 1 = odd.
using Parities = std::vector<int>;

/// Complex square matrix together with the parity vector of its basis.
struct GradedMatrix {
    Matrix mat;
    Parities par;

    GradedMatrix() = default;
    GradedMatrix(Matrix m, Parities p) : mat(std::move(m)), par(std::move(p)) {}
    Eigen::Index dim() const { return mat.rows(); }
};

/// Parameters hit the excluded set (resonances, e/kappa integral, ...).
class ExcludedParameterError : public std::runtime_error {
  public:
    explicit ExcludedParameterError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed module spec / configuration.
class SpecError : public std::invalid_argument {
  public:
    explicit SpecError(const std::string& what) : std::invalid_argument(what) {}
};

/// Internal consistency check failed beyond tolerance.
class NumericalError : public std::runtime_error {
  public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Operator (spectral) norm; matrices here are small, SVD is fine.
double op_norm(const Matrix& m);

/// Principal branch, Arg in (-pi, pi]; -0.0 imaginary parts are flushed so
/// that negative reals land on +i*pi.
Complex principal_log(Complex x);

inline Matrix ident(Eigen::Index n) { return Matrix::Identity(n, n); }

constexpr double kResidualTol = 1e-10;   // solver residuals
constexpr double kCompareTol = 1e-8;     // cross-method comparisons
constexpr double kRelationTol = 1e-12;   // algebra relation identities

}  // namespace kzdk
