#include "locs/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace locs {

namespace {

// Diagonal Pade approximant of order m for e^X. Returns (V - U)^{-1} (V + U)
// with U the odd part and V the even part of the numerator polynomial.
MatrixXd pade_exp(const MatrixXd& X, int m) {
  const Eigen::Index n = X.rows();
  const MatrixXd I = MatrixXd::Identity(n, n);
  const MatrixXd X2 = X * X;

  MatrixXd U, V;
  switch (m) {
    case 3: {
      static const double b[] = {120, 60, 12, 1};
      U = X * (b[3] * X2 + b[1] * I);
      V = b[2] * X2 + b[0] * I;
      break;
    }
    case 5: {
      static const double b[] = {30240, 15120, 3360, 420, 30, 1};
      const MatrixXd X4 = X2 * X2;
      U = X * (b[5] * X4 + b[3] * X2 + b[1] * I);
      V = b[4] * X4 + b[2] * X2 + b[0] * I;
      break;
    }
    case 7: {
      static const double b[] = {17297280, 8648640, 1995840, 277200,
                                 25200,    1512,    56,      1};
      const MatrixXd X4 = X2 * X2;
      const MatrixXd X6 = X4 * X2;
      U = X * (b[7] * X6 + b[5] * X4 + b[3] * X2 + b[1] * I);
      V = b[6] * X6 + b[4] * X4 + b[2] * X2 + b[0] * I;
      break;
    }
    case 9: {
      static const double b[] = {17643225600., 8821612800., 2075673600.,
                                 302702400.,   30270240.,   2162160.,
                                 110880.,      3960.,       90.,
                                 1.};
      const MatrixXd X4 = X2 * X2;
      const MatrixXd X6 = X4 * X2;
      const MatrixXd X8 = X6 * X2;
      U = X * (b[9] * X8 + b[7] * X6 + b[5] * X4 + b[3] * X2 + b[1] * I);
      V = b[8] * X8 + b[6] * X6 + b[4] * X4 + b[2] * X2 + b[0] * I;
      break;
    }
    default: {  // m == 13
      static const double b[] = {64764752532480000., 32382376266240000.,
                                 7771770303897600.,  1187353796428800.,
                                 129060195264000.,   10559470521600.,
                                 670442572800.,      33522128640.,
                                 1323241920.,        40840800.,
                                 960960.,            16380.,
                                 182.,               1.};
      const MatrixXd X4 = X2 * X2;
      const MatrixXd X6 = X4 * X2;
      U = X * (X6 * (b[13] * X6 + b[11] * X4 + b[9] * X2) + b[7] * X6 +
               b[5] * X4 + b[3] * X2 + b[1] * I);
      V = X6 * (b[12] * X6 + b[10] * X4 + b[8] * X2) + b[6] * X6 + b[4] * X4 +
          b[2] * X2 + b[0] * I;
      break;
    }
  }
  return (V - U).partialPivLu().solve(V + U);
}

}  // namespace

MatrixXd mat_exp(const MatrixXd& A, double dt) {
  if (A.rows() != A.cols()) {
    throw std::invalid_argument("mat_exp: matrix must be square");
  }
  if (!A.allFinite() || !std::isfinite(dt)) {
    throw std::invalid_argument("mat_exp: non-finite input");
  }
  const Eigen::Index n = A.rows();
  if (dt == 0.0 || n == 0) {
    return MatrixXd::Identity(n, n);
  }

  MatrixXd X = A * dt;
  const double norm = X.cwiseAbs().colwise().sum().maxCoeff();  // 1-norm

  // 1-norm thresholds for each Pade degree (double precision).
  if (norm <= 1.495585217958292e-2) return pade_exp(X, 3);
  if (norm <= 2.539398330063230e-1) return pade_exp(X, 5);
  if (norm <= 9.504178996162932e-1) return pade_exp(X, 7);
  if (norm <= 2.097847961257068e0) return pade_exp(X, 9);

  const double theta13 = 5.371920351148152e0;
  int squarings = 0;
  if (norm > theta13) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / theta13)));
    X *= std::ldexp(1.0, -squarings);
  }
  MatrixXd E = pade_exp(X, 13);
  for (int i = 0; i < squarings; ++i) {
    E = E * E;
  }
  return E;
}

AffinePropagator affine_propagator(const MatrixXd& A, double dt) {
  const Eigen::Index n = A.rows();
  MatrixXd aug = MatrixXd::Zero(2 * n, 2 * n);
  aug.topLeftCorner(n, n) = A;
  aug.topRightCorner(n, n) = MatrixXd::Identity(n, n);
  const MatrixXd E = mat_exp(aug, dt);
  return AffinePropagator{E.topLeftCorner(n, n), E.topRightCorner(n, n)};
}

MatrixXd gramian_van_loan(const MatrixXd& A, const MatrixXd& B, double dt) {
  const Eigen::Index n = A.rows();
  MatrixXd aug = MatrixXd::Zero(2 * n, 2 * n);
  aug.topLeftCorner(n, n) = -A;
  aug.topRightCorner(n, n) = B * B.transpose();
  aug.bottomRightCorner(n, n) = A.transpose();
  const MatrixXd E = mat_exp(aug, dt);
  // exp(aug*dt) = [[e^{-A dt}, H], [0, e^{A^T dt}]] with
  // W = e^{A dt} H = (bottom-right)^T (top-right).
  MatrixXd W =
      E.bottomRightCorner(n, n).transpose() * E.topRightCorner(n, n);
  return 0.5 * (W + W.transpose());
}

}  // namespace locs
