#pragma once

#include <complex>
#include <Eigen/Dense>

namespace qnd {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr cplx kImag{0.0, 1.0};

// Default tolerances used by the validation layers.
inline constexpr double kStateTol = 1e-12;        // hermiticity / normalization of states
inline constexpr double kPsdTol = 1e-10;          // smallest-eigenvalue slack for density matrices
inline constexpr double kCommutatorTol = 1e-10;   // relative commutator residual
inline constexpr double kDiagonalityTol = 1e-9;   // off-diagonal mass after joint diagonalization
inline constexpr double kUniformImpactTol = 1e-12;

}  // namespace qnd
