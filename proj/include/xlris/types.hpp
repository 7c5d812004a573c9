#pragma once

#include <Eigen/Dense>
#include <complex>

namespace xlris {

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kLog2e = 1.44269504088896340735992468100189214; // 1/ln(2)

// dB / dBm helpers; all internal computation is in linear watts.
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double dbm_to_watt(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }

} // namespace xlris
