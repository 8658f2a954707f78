#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace gabor {

using Index = Eigen::Index;
using cplx = std::complex<double>;

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

/// A point z = (x, p) of phase space, stored as one column of length 2n.
using PhasePoint = Vec;

/// Phase-space points stored column-wise (2n x count).
using PointSet = Mat;

inline constexpr double kPi = 3.14159265358979323846;
/// hbar for which hbar-Gabor frames coincide with the usual time-frequency convention.
inline constexpr double kHbarTF = 1.0 / (2.0 * kPi);

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

/// Raised when a linear solve is too ill-conditioned to give a meaningful answer.
class NumericalDegeneracy : public Error {
 public:
  using Error::Error;
};

/// Raised when a requested enumeration or grid exceeds the configured caps.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Raised when a sampling grid cannot resolve the oscillation of an integrand.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

class DivergenceError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

inline PhasePoint phase_point(const Vec& x, const Vec& p) {
  if (x.size() != p.size() || x.size() == 0) {
    throw DimensionError("phase_point: x and p must have equal positive length");
  }
  PhasePoint z(2 * x.size());
  z << x, p;
  return z;
}

/// Half the length of a phase-space vector; throws for odd lengths.
inline Index phase_dim(const Vec& z) {
  if (z.size() == 0 || z.size() % 2 != 0) {
    throw DimensionError("phase-space vectors must have even positive length");
  }
  return z.size() / 2;
}

/// Runs fn(i) for i in [0, count). Work is split across GABOR_THREADS threads
/// (default std::thread::hardware_concurrency); each index is visited once, so
/// callers writing to slot i get results independent of the thread count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

/// Thread cap from GABOR_THREADS, or the hardware concurrency when unset.
unsigned thread_cap();

}  // namespace gabor
