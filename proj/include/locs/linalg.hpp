#ifndef LOCS_LINALG_HPP
#define LOCS_LINALG_HPP

#include <Eigen/Dense>

namespace locs {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// e^{A*dt} by scaling-and-squaring with diagonal Pade approximants.
/// Degree and scaling are picked from the 1-norm of A*dt; dt = 0 returns
/// the identity exactly. Throws std::invalid_argument on non-finite input.
MatrixXd mat_exp(const MatrixXd& A, double dt);

/// Both exponential integrals needed by an affine system over a horizon dt:
///   Phi  = e^{A*dt}
///   Psi  = integral_0^dt e^{A*s} ds        (drift propagator)
/// Computed from one augmented exponential of [[A, I], [0, 0]]*dt.
struct AffinePropagator {
  MatrixXd Phi;
  MatrixXd Psi;
};
AffinePropagator affine_propagator(const MatrixXd& A, double dt);

/// Controllability Gramian integral_0^dt e^{A*s} B B^T e^{A^T*s} ds via the
/// augmented exponential of [[-A, BB^T], [0, A^T]]*dt. Result is symmetrized.
MatrixXd gramian_van_loan(const MatrixXd& A, const MatrixXd& B, double dt);

}  // namespace locs

#endif
