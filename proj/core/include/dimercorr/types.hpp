#pragma once

#include <complex>

#include <Eigen/Dense>

namespace dimercorr {

using cd = std::complex<double>;

// Two-emitter states over the ordered basis (gg, eg, ge, ee).
using Ket = Eigen::Matrix<cd, 4, 1>;
using Operator = Eigen::Matrix<cd, 4, 4>;

// Density matrices are vectorized column-major: vec(rho)[i + 4 j] = rho(i, j),
// so vec(A rho B) = (B^T kron A) vec(rho).
using VecRho = Eigen::Matrix<cd, 16, 1>;
using Superoperator = Eigen::Matrix<cd, 16, 16>;

using Vec3 = Eigen::Vector3d;

inline VecRho vectorize(const Operator& rho) {
  return Eigen::Map<const VecRho>(rho.data());
}

inline Operator unvectorize(const VecRho& v) {
  return Eigen::Map<const Operator>(v.data());
}

}  // namespace dimercorr
