#pragma once

// Numerical side of the approximation argument: finite matrices for
// compactly supported crossed product elements, spectral norms, the unitary
// N-th root close to 1, the block cut-down norm estimate and the end-to-end
// check that the perturbed unitary u' stays within epsilon of u.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "zdsys/cpalgebra.hpp"

namespace zdsys {

using ComplexMatrix = Eigen::MatrixXcd;

struct Tolerances {
  double identity = 1e-10;  // unitarity, commutation, W^N = V
  double bound = 1e-9;      // slack on analytic bounds
  double norm = 1e-12;      // operator norm accuracy
};

/// The element acting on l^2 of a finite set of points (the window), where
/// u delta_x = delta_{h(x)}. Every column outside the window is zero.
struct CompactMatrixRep {
  std::vector<Point> window;
  ComplexMatrix matrix;
};

/// Throws NotCompactlySupported naming the first coefficient set that is not
/// finite.
CompactMatrixRep represent(const CPElement& a);
/// Same on a caller supplied window; throws PreconditionFailed when the
/// element reaches outside it.
CompactMatrixRep represent(const CPElement& a, const std::vector<Point>& window);

/// Largest singular value by power iteration on M* M. Throws NoConvergence
/// after the iteration cap.
double operator_norm(const ComplexMatrix& M, double tol = 1e-12);
/// 0 for the zero element, otherwise the norm of its representation.
double element_norm(const CPElement& a, double tol = 1e-12);

/// W with W^N = V, W a function of V, eigenvalues e^{i theta} with theta in
/// (-pi, pi] sent to e^{i theta / N}; hence ||W - I|| <= pi / N.
ComplexMatrix unitary_nth_root(const ComplexMatrix& V, Index N, double tol = 1e-10);

struct CutdownReport {
  std::vector<double> block_norms;  // ||p_m a q_m||
  double norm = 0;                  // ||a||
  bool off_diagonal_zero = true;    // p_m a q_n = 0 for m != n
  bool holds = false;               // ||a|| <= max block norm + tol
};

/// Throws PartitionFailure unless the p's and the q's each partition X.
CutdownReport cutdown_check(const CPElement& a, const std::vector<std::pair<ClopenSet, ClopenSet>>& blocks,
                            const Tolerances& tol = {});

struct BergReport {
  Index N = 0;
  double epsilon = 0;
  double norm_w_minus_1 = 0;
  double norm_u_prime_minus_u = 0;
  std::vector<double> per_block_norms;  // ||chi_{h^{n} Y} a chi_{h^{n-1} Y}||, n = 1..N
  double z_unitary_defect = 0;
  double z_commutator_norm = 0;  // max over U in P of ||z chi_U - chi_U z||
  std::optional<ComplexMatrix> v;  // chi_Y v2 v1* chi_Y on the levels inside Y
  std::vector<Point> v_basis;      // one point of each level, in matrix order
  CutdownReport cutdown;
  bool z_unitary = false;
  bool z_commutes = false;
  bool blocks_below_epsilon = false;
  bool pass = false;  // norm_u_prime_minus_u < epsilon
};

BergReport berg_verify(const SystemSpec& spec, const Partition& P, Index N, double epsilon, Index max_steps,
                       const Tolerances& tol = {});

nlohmann::json to_json(const ComplexMatrix& m);
nlohmann::json to_json(const BergReport& r);

}  // namespace zdsys
