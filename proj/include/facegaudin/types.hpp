#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace facegaudin {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr cplx kI{0.0, 1.0};

// Raised when an argument sits on (or too close to) a pole or a forbidden set.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A truncated series or an iteration failed to converge.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A jet was requested at a higher order than its producer can supply.
class JetOrderError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

std::string format_complex(cplx z);

}  // namespace facegaudin
