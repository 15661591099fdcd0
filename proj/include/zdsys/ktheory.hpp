#pragma once

// K-theory at the level of a single partition: K0(C(P)) with the partition
// as basis, the matrix of alpha_* = [chi_E] -> [chi_{h(E)}], Smith normal
// form of id - alpha_* and the kernel and cokernel it presents, inclusion
// maps between levels and the class of an invariant projection.

#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "zdsys/space.hpp"

namespace zdsys {

using BigInt = boost::multiprecision::cpp_int;

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}
  IntMatrix(std::initializer_list<std::initializer_list<long long>> rows);

  static IntMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  BigInt& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const BigInt& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  bool is_diagonal() const;
  bool operator==(const IntMatrix&) const = default;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<BigInt> a_;
};

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
IntMatrix operator-(const IntMatrix& a, const IntMatrix& b);
/// Fraction-free Gaussian elimination.
BigInt determinant(const IntMatrix& a);

/// A = U D V, U and V unimodular, D diagonal with d1 | d2 | ... and d_i >= 0.
struct SNFResult {
  IntMatrix U, D, V;
  /// The nonzero diagonal entries, in order.
  std::vector<BigInt> invariant_factors() const;
};

SNFResult smith_normal_form(const IntMatrix& A);

struct K0Level {
  Partition partition;
  Index level = 0;  // generating level the partition came from, 0 if none
  std::size_t rank() const { return partition.size(); }
};

K0Level k0_level(const SystemSpec& spec, Index n);

/// Indicator vector of E in the partition basis; NotMeasurable when E
/// straddles an element.
std::vector<BigInt> k0_class(const ClopenSet& E, const K0Level& level);

struct AlphaStar {
  /// Square 0/1 matrix when h maps every element onto a union of elements.
  std::optional<IntMatrix> square;
  /// Otherwise: the common refinement R of P and h(P), the inclusion
  /// K0(C(P)) -> K0(C(R)) and alpha_* as a map K0(C(P)) -> K0(C(R)).
  std::optional<K0Level> finer;
  IntMatrix inclusion;
  IntMatrix alpha;
};

AlphaStar alpha_star(const K0Level& level);

/// Raised by pv_level when alpha_* does not preserve the level.
class NeedsRefinementError : public Error {
 public:
  NeedsRefinementError(const std::string& message, K0Level finer)
      : Error(ErrorCode::NeedsRefinement, message), finer_(std::move(finer)) {}
  const K0Level& finer() const noexcept { return finer_; }

 private:
  K0Level finer_;
};

struct PVLevel {
  Index level = 0;
  std::size_t k1_rank = 0;
  std::vector<BigInt> k1_torsion;  // always empty: kernels of integer maps are free
  std::size_t k0_rank = 0;
  std::vector<BigInt> k0_torsion;  // invariant factors greater than 1
};

PVLevel pv_level(const K0Level& level);

/// Rows index fine elements, columns coarse ones; NotFiner unless fine
/// refines coarse.
IntMatrix connecting_map(const K0Level& coarse, const K0Level& fine);

/// k0_class of an h-invariant E, the image under the index map of the K1
/// class of chi_E u chi_E + (1 - chi_E).
std::vector<BigInt> delta_class(const ClopenSet& E, const K0Level& level);

nlohmann::json to_json(const IntMatrix& m);
nlohmann::json to_json(const PVLevel& r);

}  // namespace zdsys
