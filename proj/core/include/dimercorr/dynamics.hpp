#pragma once

#include <vector>

#include "dimercorr/types.hpp"

namespace dimercorr::dynamics {

// exp(L t) for a fixed 16x16 generator. Uses the eigendecomposition when the
// eigenvector matrix is well conditioned, scaling-and-squaring otherwise.
class Propagator {
 public:
  explicit Propagator(const Superoperator& generator, double max_condition = 1e10);

  Superoperator at(double t) const;
  VecRho apply(const VecRho& v, double t) const;

  const Superoperator& generator() const { return generator_; }
  bool spectral() const { return spectral_; }
  double condition() const { return condition_; }
  const Eigen::Matrix<cd, 16, 1>& eigenvalues() const { return lambda_; }
  const Superoperator& right_vectors() const { return right_; }
  const Superoperator& left_vectors() const { return left_; }  // inverse of right_vectors

 private:
  Superoperator generator_;
  Superoperator right_ = Superoperator::Identity();
  Superoperator left_ = Superoperator::Identity();
  Eigen::Matrix<cd, 16, 1> lambda_ = Eigen::Matrix<cd, 16, 1>::Zero();
  double condition_ = 1.0;
  bool spectral_ = true;
};

struct SteadyState {
  Operator rho = Operator::Zero();
  double residual = 0.0;          // ||L rho||
  bool unique = true;             // second-smallest singular value above 1e-9 ||L||
  double smallest_gap = 0.0;      // that singular value
  double min_eigenvalue = 0.0;    // most negative eigenvalue of rho (positivity diagnostic)
};

// Throws std::runtime_error if the state is clearly unphysical (eigenvalue
// below -1e-5) or the solve fails.
SteadyState steady_state(const Superoperator& generator);

struct Trajectory {
  std::vector<double> t_ps;
  std::vector<Operator> states;
};

Trajectory propagate(const Propagator& prop, const Operator& rho0, const std::vector<double>& t_grid);

// Tr[obs exp(L tau)(right rho left)] over tau.
std::vector<cd> regression_correlator(const Propagator& prop, const Operator& rho, const Operator& left,
                                      const Operator& right, const Operator& observable,
                                      const std::vector<double>& tau_grid);

// Mode amplitudes c_k with Tr[obs exp(L tau) X] = sum_k c_k exp(lambda_k tau).
// Requires a spectral propagator.
Eigen::Matrix<cd, 16, 1> modal_amplitudes(const Propagator& prop, const Operator& x, const Operator& observable);

// Tr[obs X] as a row vector acting on vec(X).
Eigen::Matrix<cd, 1, 16> trace_functional(const Operator& observable);

}  // namespace dimercorr::dynamics
