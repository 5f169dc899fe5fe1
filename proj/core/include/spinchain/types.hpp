#pragma once

#include <array>
#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

namespace spinchain {

using Complex = std::complex<double>;
using RVector = Eigen::VectorXd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using CMatrix = Eigen::MatrixXcd;

/// A control value (u1, u2): parabolic field intensity and shifted position.
using ControlPair = std::array<double, 2>;

inline constexpr std::size_t kChannels = 2;

/// Raised when a numerical solver cannot complete (step underflow, step budget).
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace spinchain
