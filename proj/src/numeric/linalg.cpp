#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "zdsys/numeric.hpp"

namespace zdsys {

// Power iteration on B = M* M, run by repeated squaring so that the ratio of
// the two leading eigenvalues is driven to zero in a few dozen steps; the
// Rayleigh quotient of a column of the limit is a lower bound for ||M||^2
// that is exact up to rounding once the iteration has settled.
double operator_norm(const ComplexMatrix& M, double tol) {
  if (!(tol > 0)) throw Error(ErrorCode::PreconditionFailed, "norm tolerance must be positive");
  if (M.size() == 0) return 0.0;
  const ComplexMatrix B = M.adjoint() * M;
  const double scale = B.norm();
  if (scale == 0.0) return 0.0;

  ComplexMatrix A = B / scale;
  bool settled = false;
  for (int step = 0; step < 80 && !settled; ++step) {
    ComplexMatrix next = A * A;
    const double n = next.norm();
    if (n == 0.0) break;
    next /= n;
    settled = (next - A).norm() < 1e-13;
    A = std::move(next);
  }
  if (!settled) throw Error(ErrorCode::NoConvergence, "power iteration did not settle");

  Eigen::Index best = 0;
  A.colwise().norm().maxCoeff(&best);
  Eigen::VectorXcd x = A.col(best);
  x.normalize();
  // A few plain steps polish the vector against rounding in the squarings.
  double r = 0.0;
  for (int step = 0; step < 8; ++step) {
    Eigen::VectorXcd y = B * x;
    r = x.dot(y).real();
    const double ny = y.norm();
    if (ny == 0.0) break;
    x = y / ny;
  }
  r = std::max(r, x.dot(B * x).real());
  return std::sqrt(std::max(r, 0.0));
}

namespace {

double max_abs(const ComplexMatrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

// Unitary Q with Q* V Q diagonal for a normal V, from the commuting
// Hermitian pair (V + V*)/2 and (V - V*)/2i.
ComplexMatrix hermitian_pair_basis(const ComplexMatrix& V) {
  const Eigen::Index n = V.rows();
  const ComplexMatrix H1 = (V + V.adjoint()) / 2.0;
  const ComplexMatrix H2 = (V - V.adjoint()) / std::complex<double>(0, 2);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es1(H1);
  if (es1.info() != Eigen::Success) throw Error(ErrorCode::DegenerateEigenbasis, "Hermitian part did not diagonalize");
  const auto& vals = es1.eigenvalues();
  const ComplexMatrix& Q1 = es1.eigenvectors();
  ComplexMatrix Q(n, n);
  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index end = start + 1;
    while (end < n && vals(end) - vals(end - 1) < 1e-8) ++end;
    const ComplexMatrix Qc = Q1.middleCols(start, end - start);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es2(Qc.adjoint() * H2 * Qc);
    if (es2.info() != Eigen::Success) {
      throw Error(ErrorCode::DegenerateEigenbasis, "skew part did not diagonalize on an eigenspace");
    }
    Q.middleCols(start, end - start) = Qc * es2.eigenvectors();
    start = end;
  }
  return Q;
}

}  // namespace

ComplexMatrix unitary_nth_root(const ComplexMatrix& V, Index N, double tol) {
  if (N < 1) throw Error(ErrorCode::PreconditionFailed, "root order must be positive");
  if (V.rows() != V.cols()) throw Error(ErrorCode::NotUnitary, "matrix is not square");
  const Eigen::Index n = V.rows();
  if (n == 0) return V;
  const ComplexMatrix I = ComplexMatrix::Identity(n, n);
  if (max_abs(V.adjoint() * V - I) > tol || max_abs(V * V.adjoint() - I) > tol) {
    throw Error(ErrorCode::NotUnitary, "matrix is not unitary within tolerance");
  }

  Eigen::ComplexSchur<ComplexMatrix> schur(V);
  ComplexMatrix Q = schur.matrixU();
  ComplexMatrix T = schur.matrixT();
  if (max_abs(T.triangularView<Eigen::StrictlyUpper>().toDenseMatrix()) > 1e-9) {
    Q = hermitian_pair_basis(V);
    T = Q.adjoint() * V * Q;
  }

  Eigen::VectorXcd roots(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double theta = std::arg(T(i, i));
    // Eigenvalues at -1 sit on the branch point and take theta = pi.
    if (theta <= -std::numbers::pi + 1e-9) theta = std::numbers::pi;
    roots(i) = std::polar(1.0, theta / static_cast<double>(N));
  }
  ComplexMatrix W = Q * roots.asDiagonal() * Q.adjoint();

  ComplexMatrix P = I;
  for (Index k = 0; k < N; ++k) P = P * W;
  if (max_abs(P - V) > tol) {
    throw Error(ErrorCode::DegenerateEigenbasis, "the computed root does not reproduce the matrix");
  }
  return W;
}

nlohmann::json to_json(const ComplexMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({{"re", m(i, j).real()}, {"im", m(i, j).imag()}});
    rows.push_back(row);
  }
  return rows;
}

}  // namespace zdsys
