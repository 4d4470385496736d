#pragma once

#include <complex>

#include <Eigen/Dense>

namespace thz {

using cxd = std::complex<double>;
using MatC = Eigen::MatrixXcd;
using VecC = Eigen::VectorXcd;
using MatD = Eigen::MatrixXd;
using VecD = Eigen::VectorXd;
using VecI = Eigen::VectorXi;

// Physical constants (SI units).
inline constexpr double kSpeedOfLight = 299792458.0;   // m/s
inline constexpr double kFreeSpaceImpedance = 377.0;   // ohm
inline constexpr double kMu0 = 1.25663706212e-6;       // H/m
inline constexpr double kEps0 = 8.8541878128e-12;      // F/m
inline constexpr double kPi = 3.141592653589793238462643383279502884;

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

}  // namespace thz
