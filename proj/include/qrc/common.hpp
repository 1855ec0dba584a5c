#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qrc {

using cplx = std::complex<double>;
using Index = Eigen::Index;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;
using SpMat = Eigen::SparseMatrix<cplx>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr cplx kI{0.0, 1.0};

// Error hierarchy. The CLI maps ConfigError to exit code 2 and
// NumericalError to exit code 3.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
  public:
    using Error::Error;
};

class DimensionMismatch : public Error {
  public:
    using Error::Error;
};

class NumericalError : public Error {
  public:
    using Error::Error;
};

class ConfigError : public Error {
  public:
    using Error::Error;
};

inline double max_abs(const CMat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

inline CMat hermitian_part(const CMat& m) { return 0.5 * (m + m.adjoint()); }

}  // namespace qrc
