#include "dimercorr/dynamics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

namespace dimercorr::dynamics {

namespace {

Operator hermitize(const Operator& a) { return 0.5 * (a + a.adjoint()); }

}  // namespace

Eigen::Matrix<cd, 1, 16> trace_functional(const Operator& observable) {
  // Tr[O X] = sum_ij O(j, i) X(i, j) = vec(O^T) . vec(X)
  const Operator ot = observable.transpose();
  return Eigen::Map<const Eigen::Matrix<cd, 1, 16>>(ot.data());
}

Propagator::Propagator(const Superoperator& generator, double max_condition) : generator_(generator) {
  if (!generator.allFinite()) throw std::runtime_error("propagator: generator has non-finite entries");
  Eigen::ComplexEigenSolver<Superoperator> es(generator);
  if (es.info() != Eigen::Success) {
    spectral_ = false;
    return;
  }
  right_ = es.eigenvectors();
  lambda_ = es.eigenvalues();
  Eigen::JacobiSVD<Superoperator> svd(right_);
  const auto& s = svd.singularValues();
  condition_ = s(15) > 0.0 ? s(0) / s(15) : std::numeric_limits<double>::infinity();
  if (!(condition_ < max_condition)) {
    spectral_ = false;
    return;
  }
  left_ = right_.inverse();
}

Superoperator Propagator::at(double t) const {
  if (t == 0.0) return Superoperator::Identity();
  if (!spectral_) {
    const Superoperator lt = generator_ * t;
    Superoperator out = lt.exp();
    if (!out.allFinite()) throw std::runtime_error("propagator: matrix exponential failed at t = " + std::to_string(t));
    return out;
  }
  Eigen::Matrix<cd, 16, 1> e;
  for (int k = 0; k < 16; ++k) e(k) = std::exp(lambda_(k) * t);
  return right_ * e.asDiagonal() * left_;
}

VecRho Propagator::apply(const VecRho& v, double t) const {
  if (t == 0.0) return v;
  if (!spectral_) return at(t) * v;
  Eigen::Matrix<cd, 16, 1> c = left_ * v;
  for (int k = 0; k < 16; ++k) c(k) *= std::exp(lambda_(k) * t);
  return right_ * c;
}

SteadyState steady_state(const Superoperator& generator) {
  SteadyState out;
  const double norm = generator.norm();
  Eigen::JacobiSVD<Superoperator> svd(generator, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  out.smallest_gap = s(14);
  out.unique = !(s(14) <= 1e-9 * std::max(norm, 1e-300));

  VecRho v;
  if (out.unique) {
    // Replace the (0,0) population row with the trace functional.
    Superoperator a = generator;
    VecRho b = VecRho::Zero();
    a.row(0) = trace_functional(Operator::Identity());
    b(0) = 1.0;
    v = a.colPivHouseholderQr().solve(b);
  } else {
    // Average the trace-normalized null vectors.
    const auto& vmat = svd.matrixV();
    Operator acc = Operator::Zero();
    int used = 0;
    for (int k = 0; k < 16; ++k) {
      if (s(k) > 1e-9 * norm) continue;
      Operator r = hermitize(unvectorize(vmat.col(k)));
      const cd tr = r.trace();
      if (std::abs(tr) < 1e-8) continue;
      acc += r / tr;
      ++used;
    }
    if (used == 0) throw std::runtime_error("steady_state: null space has no trace-carrying state");
    v = vectorize(acc / static_cast<double>(used));
  }
  Operator rho = hermitize(unvectorize(v));
  rho /= rho.trace();
  if (!rho.allFinite()) throw std::runtime_error("steady_state: solve produced non-finite entries");
  out.rho = rho;
  out.residual = (generator * vectorize(rho)).norm();
  Eigen::SelfAdjointEigenSolver<Operator> es(rho);
  out.min_eigenvalue = es.eigenvalues()(0);
  if (out.min_eigenvalue < -1e-5) {
    throw std::runtime_error("steady_state: negative population " + std::to_string(out.min_eigenvalue));
  }
  return out;
}

Trajectory propagate(const Propagator& prop, const Operator& rho0, const std::vector<double>& t_grid) {
  Trajectory out;
  out.t_ps = t_grid;
  out.states.reserve(t_grid.size());
  const VecRho v0 = vectorize(rho0);
  for (double t : t_grid) out.states.push_back(unvectorize(prop.apply(v0, t)));
  return out;
}

Eigen::Matrix<cd, 16, 1> modal_amplitudes(const Propagator& prop, const Operator& x, const Operator& observable) {
  if (!prop.spectral()) throw std::logic_error("modal_amplitudes: propagator has no usable eigenbasis");
  const Eigen::Matrix<cd, 1, 16> row = trace_functional(observable) * prop.right_vectors();
  const Eigen::Matrix<cd, 16, 1> col = prop.left_vectors() * vectorize(x);
  return row.transpose().cwiseProduct(col);
}

std::vector<cd> regression_correlator(const Propagator& prop, const Operator& rho, const Operator& left,
                                      const Operator& right, const Operator& observable,
                                      const std::vector<double>& tau_grid) {
  const Operator x = right * rho * left;
  std::vector<cd> out;
  out.reserve(tau_grid.size());
  if (prop.spectral()) {
    const auto amp = modal_amplitudes(prop, x, observable);
    const auto& lam = prop.eigenvalues();
    const cd direct = (trace_functional(observable) * vectorize(x))(0);
    for (double tau : tau_grid) {
      if (tau == 0.0) {
        out.push_back(direct);
        continue;
      }
      cd sum = 0.0;
      for (int k = 0; k < 16; ++k) sum += amp(k) * std::exp(lam(k) * tau);
      out.push_back(sum);
    }
    return out;
  }
  const auto row = trace_functional(observable);
  const VecRho v = vectorize(x);
  for (double tau : tau_grid) out.push_back((row * prop.apply(v, tau))(0));
  return out;
}

}  // namespace dimercorr::dynamics
