#include "locs/linsys.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "locs/rng.hpp"

namespace locs {

void validate_driver_matrix(const MatrixXd& B) {
  if (B.cols() < 1) {
    throw std::invalid_argument("driver matrix must have at least one input");
  }
  for (Eigen::Index i = 0; i < B.rows(); ++i) {
    for (Eigen::Index k = 0; k < B.cols(); ++k) {
      if (B(i, k) != 0.0 && B(i, k) != 1.0) {
        throw std::invalid_argument("driver matrix entries must be 0 or 1");
      }
    }
  }
  for (Eigen::Index k = 0; k < B.cols(); ++k) {
    if (B.col(k).sum() != 1.0) {
      throw std::invalid_argument(
          "each input must be received by exactly one node");
    }
  }
  for (Eigen::Index i = 0; i < B.rows(); ++i) {
    const double row = B.row(i).sum();
    if (row != 0.0 && row != 1.0) {
      throw std::invalid_argument("each node receives at most one input");
    }
  }
}

void validate_model(const LinearModel& model) {
  const Eigen::Index n = model.A.rows();
  if (model.A.cols() != n) {
    throw std::invalid_argument("model A must be square");
  }
  if (model.B.rows() != n || model.f.size() != n || model.x_ref.size() != n) {
    throw std::invalid_argument("model dimensions inconsistent");
  }
  validate_driver_matrix(model.B);
}

VectorXd GramianFactorization::apply_inverse(const VectorXd& v) const {
  const VectorXd c = eigenvectors.transpose() * v;
  VectorXd scaled(c.size());
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    scaled(i) = c(i) / std::max(eigenvalues(i), rank_tol);
  }
  return eigenvectors * scaled;
}

double GramianFactorization::quad_inverse(const VectorXd& v) const {
  const VectorXd c = eigenvectors.transpose() * v;
  double q = 0.0;
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    q += c(i) * c(i) / std::max(eigenvalues(i), rank_tol);
  }
  return q;
}

std::vector<int> GramianFactorization::deficient_directions(
    double threshold) const {
  std::vector<int> idx;
  const double dmax = d_max();
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    if (dmax <= 0.0 || eigenvalues(i) / dmax < threshold) {
      idx.push_back(static_cast<int>(i));
    }
  }
  return idx;
}

GramianFactorization gramian(const LinearModel& model, double t0, double t) {
  validate_model(model);
  if (!(t > t0)) {
    std::ostringstream msg;
    msg << "gramian: invalid horizon, t = " << t << " must exceed t0 = " << t0;
    throw std::invalid_argument(msg.str());
  }

  GramianFactorization g;
  g.t0 = t0;
  g.t1 = t;
  g.W = gramian_van_loan(model.A, model.B, t - t0);

  Eigen::SelfAdjointEigenSolver<MatrixXd> es(g.W);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("gramian: eigendecomposition failed");
  }
  // SelfAdjointEigenSolver sorts ascending; flip to descending.
  const Eigen::Index n = g.W.rows();
  g.eigenvalues = es.eigenvalues().reverse();
  g.eigenvectors = es.eigenvectors().rowwise().reverse();
  g.rank_tol = kRankTolFactor * std::max(g.d_max(), 0.0);
  g.controllable = g.d_max() > 0.0 && g.d_min() > g.rank_tol;
  (void)n;
  return g;
}

VectorXd zero_input_trajectory(const LinearModel& model, const VectorXd& x0,
                               double t0, double t) {
  validate_model(model);
  if (x0.size() != model.dim()) {
    throw std::invalid_argument("zero_input_trajectory: x0 dimension");
  }
  if (t < t0) {
    throw std::invalid_argument("zero_input_trajectory: t < t0");
  }
  if (t == t0) {
    return x0;
  }
  const AffinePropagator p = affine_propagator(model.A, t - t0);
  return p.Phi * x0 + p.Psi * model.f;
}

namespace {

[[noreturn]] void throw_uncontrollable(const GramianFactorization& g,
                                       const char* who) {
  std::ostringstream msg;
  msg << who << ": Gramian on [" << g.t0 << ", " << g.t1
      << "] is numerically singular; deficient eigendirections:";
  for (int i : g.deficient_directions()) {
    msg << " #" << i << " (d = " << g.eigenvalues(i) << ")";
  }
  throw std::runtime_error(msg.str());
}

// Strict inverse: refuses rather than flooring when the spectrum is bad.
VectorXd inverse_apply_checked(const GramianFactorization& g,
                               const VectorXd& v, const char* who) {
  if (!g.controllable || g.d_min() / g.d_max() < kConditionThreshold) {
    throw_uncontrollable(g, who);
  }
  const VectorXd c = g.eigenvectors.transpose() * v;
  return g.eigenvectors * c.cwiseQuotient(g.eigenvalues);
}

}  // namespace

ControlLaw min_energy_control(const SteeringProblem& problem) {
  validate_model(problem.model);
  const Eigen::Index n = problem.model.dim();
  if (problem.x0.size() != n || problem.xf.size() != n) {
    throw std::invalid_argument("min_energy_control: state dimensions");
  }
  if (!(problem.tf > problem.t0)) {
    throw std::invalid_argument("min_energy_control: tf must exceed t0");
  }

  ControlLaw law;
  law.model = problem.model;
  law.x0 = problem.x0;
  law.t0 = problem.t0;
  law.tf = problem.tf;
  law.gramian_tf = gramian(problem.model, problem.t0, problem.tf);

  const VectorXd g_f =
      zero_input_trajectory(problem.model, problem.x0, problem.t0, problem.tf);
  law.gap = problem.xf - g_f;
  law.winv_gap =
      inverse_apply_checked(law.gramian_tf, law.gap, "min_energy_control");
  law.total_energy = std::max(law.gap.dot(law.winv_gap), 0.0);
  return law;
}

VectorXd ControlLaw::input_at(double t) const {
  return model.B.transpose() *
         (mat_exp(model.A.transpose(), tf - t) * winv_gap);
}

double control_energy_at(const ControlLaw& law, const VectorXd& x, double t) {
  if (!(t > law.t0) || t > law.tf) {
    throw std::invalid_argument("control_energy_at: t must lie in (t0, tf]");
  }
  const GramianFactorization g =
      (t == law.tf) ? law.gramian_tf : gramian(law.model, law.t0, t);
  const VectorXd gap =
      x - zero_input_trajectory(law.model, law.x0, law.t0, t);
  const VectorXd w = inverse_apply_checked(g, gap, "control_energy_at");
  return std::max(gap.dot(w), 0.0);
}

EnergyEllipsoid energy_ellipsoid(const LinearModel& model, const VectorXd& x0,
                                 double t0, double t, double E) {
  if (!(E > 0.0)) {
    throw std::invalid_argument("energy_ellipsoid: E must be positive");
  }
  EnergyEllipsoid ell;
  ell.shape = gramian(model, t0, t);
  ell.center = zero_input_trajectory(model, x0, t0, t);
  ell.energy = E;
  return ell;
}

double EnergyEllipsoid::semi_axis(int i) const {
  return std::sqrt(energy * std::max(shape.eigenvalues(i), 0.0));
}

double ellipsoid_membership(const EnergyEllipsoid& ell, const VectorXd& x) {
  return ell.shape.quad_inverse(x - ell.center) - ell.energy;
}

std::vector<VectorXd> sample_ellipsoid_surface(const EnergyEllipsoid& ell,
                                               int Q, std::uint64_t rng_seed) {
  if (Q < 1) {
    throw std::invalid_argument("sample_ellipsoid_surface: Q must be >= 1");
  }
  const Eigen::Index n = ell.center.size();
  const VectorXd& d = ell.shape.eigenvalues;

  // Directions with d_i at or below rank_tol are unreachable; samples are
  // confined to the span of the remaining eigenvectors.
  std::vector<bool> usable(n, true);
  for (Eigen::Index i = 0; i < n; ++i) {
    usable[i] = d(i) > ell.shape.rank_tol;
  }

  VectorXd axis_len(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    axis_len(i) = usable[i] ? std::sqrt(ell.energy * d(i)) : 0.0;
  }

  std::vector<VectorXd> points(static_cast<std::size_t>(Q));
  for (int k = 0; k < Q; ++k) {
    auto rng = rng_stream(rng_seed, {kDomainSurface, std::uint64_t(k)});
    std::normal_distribution<double> normal(0.0, 1.0);
    VectorXd z(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double v = normal(rng);
      z(i) = usable[i] ? v : 0.0;
    }
    double nz = z.norm();
    if (nz < 1e-300) {
      z.setZero();
      for (Eigen::Index i = 0; i < n; ++i) {
        if (usable[i]) {
          z(i) = 1.0;
          break;
        }
      }
      nz = z.norm();
    }
    z /= nz;
    points[static_cast<std::size_t>(k)] =
        ell.center + ell.shape.eigenvectors * axis_len.cwiseProduct(z);
  }
  return points;
}

}  // namespace locs
