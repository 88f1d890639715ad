#ifndef LOCS_LINSYS_HPP
#define LOCS_LINSYS_HPP

#include <cstdint>
#include <vector>

#include "locs/linalg.hpp"

namespace locs {

// Relative eigenvalue floor used when factoring the Gramian: eigenvalues
// below rank_tol = kRankTolFactor * d_max mark uncontrollable directions.
inline constexpr double kRankTolFactor = 1e-12;

// Inversion of the Gramian is refused when d_min/d_max falls below this;
// the energy blow-up in a near-uncontrollable direction is a real signal,
// not something to regularize away.
inline constexpr double kConditionThreshold = 1e-10;

/// Affine linear system xdot = A x + f + B u anchored at a linearization
/// point (x_ref, t_ref). B is a 0/1 driver-incidence matrix: each column
/// has exactly one nonzero entry (each input feeds one node).
struct LinearModel {
  MatrixXd A;
  MatrixXd B;
  VectorXd f;
  VectorXd x_ref;
  double t_ref = 0.0;

  Eigen::Index dim() const { return A.rows(); }
  Eigen::Index num_inputs() const { return B.cols(); }
};

/// Checks the driver-incidence invariants: entries in {0,1}, each column
/// sums to 1, each row sums to 0 or 1. Throws std::invalid_argument.
void validate_driver_matrix(const MatrixXd& B);

/// Dimension and driver-matrix validation for a full model.
void validate_model(const LinearModel& model);

/// W(t) over [t0, t1] together with its eigendecomposition. Eigenvalues are
/// sorted descending; eigenvector columns align with them. `controllable`
/// is false when the smallest eigenvalue sits below rank_tol, in which case
/// the reachable ellipsoid is degenerate along those directions.
struct GramianFactorization {
  MatrixXd W;
  VectorXd eigenvalues;
  MatrixXd eigenvectors;
  double t0 = 0.0;
  double t1 = 0.0;
  double rank_tol = 0.0;
  bool controllable = false;

  double d_max() const { return eigenvalues.size() ? eigenvalues(0) : 0.0; }
  double d_min() const {
    return eigenvalues.size() ? eigenvalues(eigenvalues.size() - 1) : 0.0;
  }

  /// W^{-1} v with eigenvalues floored at rank_tol. Never throws; along
  /// deficient directions the result is large but finite.
  VectorXd apply_inverse(const VectorXd& v) const;

  /// v^T W^{-1} v with the same floor.
  double quad_inverse(const VectorXd& v) const;

  /// Indices of eigendirections with d_i / d_max below the condition
  /// threshold (empty when the Gramian is safely invertible).
  std::vector<int> deficient_directions(
      double threshold = kConditionThreshold) const;
};

/// Fixed-endpoint steering task on a linear model.
struct SteeringProblem {
  LinearModel model;
  VectorXd x0;
  double t0 = 0.0;
  VectorXd xf;
  double tf = 0.0;
};

/// Closed-form minimum-energy control law
///   u(t) = B^T e^{A^T (tf - t)} W^{-1}(tf) (xf - g(tf)),
/// evaluable at any t in [t0, tf].
struct ControlLaw {
  LinearModel model;
  GramianFactorization gramian_tf;
  VectorXd x0;
  VectorXd gap;        // xf - g(tf)
  VectorXd winv_gap;   // W^{-1}(tf) gap
  double t0 = 0.0;
  double tf = 0.0;
  double total_energy = 0.0;  // gap^T W^{-1} gap

  VectorXd input_at(double t) const;
};

/// The set of states reachable at time t1 with energy exactly E: centered
/// at the zero-input state g(t1), semi-axis i of length sqrt(E)*sqrt(d_i)
/// along eigenvector i of W(t1).
struct EnergyEllipsoid {
  VectorXd center;
  GramianFactorization shape;
  double energy = 0.0;

  double semi_axis(int i) const;
};

/// Controllability Gramian over [t0, t] with eigendecomposition.
/// Requires t > t0. A deficient spectrum flags `controllable = false`
/// rather than raising.
GramianFactorization gramian(const LinearModel& model, double t0, double t);

/// Zero-input trajectory g(t) = e^{A(t-t0)} x0 + int_{t0}^t e^{A(t-s)} ds f.
/// Requires t >= t0; g(t0) == x0 exactly.
VectorXd zero_input_trajectory(const LinearModel& model, const VectorXd& x0,
                               double t0, double t);

/// Solves the fixed-endpoint minimum-energy problem. Throws when the
/// Gramian over [t0, tf] is numerically singular, naming the deficient
/// eigendirections.
ControlLaw min_energy_control(const SteeringProblem& problem);

/// Energy required to sit at state x at time t under the law's model:
/// (x - g(t))^T W^{-1}(t) (x - g(t)). Requires t in (t0, tf].
double control_energy_at(const ControlLaw& law, const VectorXd& x, double t);

/// Reachable-set ellipsoid at time t with energy budget E > 0.
EnergyEllipsoid energy_ellipsoid(const LinearModel& model, const VectorXd& x0,
                                 double t0, double t, double E);

/// Quadratic-form residual (x - center)^T W^{-1} (x - center) - E;
/// zero on the surface, negative inside.
double ellipsoid_membership(const EnergyEllipsoid& ell, const VectorXd& x);

/// Q points on the ellipsoid surface: standard normals normalized to the
/// unit sphere and pushed through V diag(sqrt(E d_i)). Deterministic for a
/// fixed seed (one RNG stream per sample index). On a degenerate Gramian
/// the samples stay inside the controllable subspace.
std::vector<VectorXd> sample_ellipsoid_surface(const EnergyEllipsoid& ell,
                                               int Q, std::uint64_t rng_seed);

}  // namespace locs

#endif
