#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace spectra_forge {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

// Lattice frequency n in Z^d.
using Frequency = std::vector<int>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cplx kI{0.0, 1.0};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnsupportedDimension : public Error {
 public:
  using Error::Error;
};

class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Numerical diagnostics that exceeded a stated tolerance.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class ResourceError : public Error {
 public:
  using Error::Error;
};

inline Mat identity(int r) { return Mat::Identity(r, r); }

inline double fro(const Mat& m) { return m.norm(); }

// Matrix commutator [a, b].
inline Mat commutator(const Mat& a, const Mat& b) { return a * b - b * a; }

// Unit lattice frequency along `axis` scaled by `n`.
inline Frequency unit_frequency(int d, int axis, int n = 1) {
  Frequency f(d, 0);
  f[axis] = n;
  return f;
}

}  // namespace spectra_forge
