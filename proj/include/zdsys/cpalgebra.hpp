#pragma once

// Exact arithmetic for finite sums  sum_n f_n u^n  in the crossed product
// C*(Z, X, h), where each f_n is a step function over clopen sets and u is the
// standard unitary (u f u* = f o h^-1). Also the tower matrix units, the
// unitaries v1, u1, v2, u2, u-hat built from an adapted pair, the identity
// suite checked on them and the circle algebra descriptor.

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "zdsys/space.hpp"
#include "zdsys/towers.hpp"

namespace zdsys {

using Scalar = std::complex<double>;

/// sum_i c_i chi_{E_i}: distinct nonzero scalars on disjoint nonempty sets,
/// sorted by (real, imaginary). Cells with the same value are merged, so the
/// form is canonical.
class StepFunction {
 public:
  struct Cell {
    Scalar c;
    ClopenSet E;
    bool operator==(const Cell&) const = default;
  };

  StepFunction() = default;
  /// Sums the given cells (overlaps add up) and canonicalizes.
  static StepFunction from_cells(const SystemSpec& spec, const std::vector<Cell>& cells);

  const std::vector<Cell>& cells() const noexcept { return cells_; }
  bool is_zero() const noexcept { return cells_.empty(); }

  /// Adds c on E in place.
  void accumulate(const SystemSpec& spec, Scalar c, const ClopenSet& E);

  bool operator==(const StepFunction&) const = default;

 private:
  std::vector<Cell> cells_;
};

class CPElement {
 public:
  explicit CPElement(SystemSpec spec) : spec_(std::move(spec)) {}

  static CPElement zero(const SystemSpec& spec) { return CPElement(spec); }
  static CPElement one(const SystemSpec& spec);
  /// c chi_E u^n.
  static CPElement term(Scalar c, const ClopenSet& E, Index n);
  static CPElement indicator(const ClopenSet& E) { return term(1.0, E, 0); }
  static CPElement u_power(const SystemSpec& spec, Index n);

  const SystemSpec& spec() const noexcept { return spec_; }
  /// Nonzero coefficients only, keyed by the power of u.
  const std::map<Index, StepFunction>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  /// Number of (n, cell) pairs.
  std::size_t size() const;

  /// Adds c chi_E u^n in place.
  void accumulate(Scalar c, const ClopenSet& E, Index n);

  bool operator==(const CPElement& other) const {
    return spec_ == other.spec_ && terms_ == other.terms_;
  }

 private:
  SystemSpec spec_;
  std::map<Index, StepFunction> terms_;
};

CPElement add(const CPElement& a, const CPElement& b);
CPElement subtract(const CPElement& a, const CPElement& b);
CPElement scale(Scalar c, const CPElement& a);
CPElement multiply(const CPElement& a, const CPElement& b);
CPElement adjoint(const CPElement& a);
/// Exact structural equality of canonical forms.
bool equals(const CPElement& a, const CPElement& b);
/// Every coefficient of a - b has modulus at most tol.
bool approx_equals(const CPElement& a, const CPElement& b, double tol);
/// a a* = a* a = 1, exactly.
bool is_unitary(const CPElement& a);
/// ab - ba.
CPElement commutator(const CPElement& a, const CPElement& b);

inline CPElement operator+(const CPElement& a, const CPElement& b) { return add(a, b); }
inline CPElement operator-(const CPElement& a, const CPElement& b) { return subtract(a, b); }
inline CPElement operator*(const CPElement& a, const CPElement& b) { return multiply(a, b); }

/// Matrix units e_{i,j}^{(t,k)} = chi_{h^i Y} u^{i-j} chi_{h^j Y} of a system.
class MatrixUnits {
 public:
  /// Throws InvalidSystem unless S is a valid system.
  explicit MatrixUnits(const ReturnSystem& S);

  const ReturnSystem& system() const noexcept { return S_; }
  CPElement e(std::size_t t, std::size_t k, Index i, Index j) const;
  /// sum_i e_{i,i}^{(t,k)}.
  CPElement tower_projection(std::size_t t, std::size_t k) const;

 private:
  ReturnSystem S_;
};

MatrixUnits matrix_units(const ReturnSystem& S);

struct ProofUnitaries {
  CPElement v1, u1, v2, u2, uhat;
  ClopenSet Y;                  // disjoint union of the Xhat_t
  std::vector<ClopenSet> Xhat;  // X_t minus (Y_{t,1} n h^{J_{t,1}} Y_{t,1})
};

/// v = sum chi_{h Y} u chi_Y over tower levels plus the wrap term.
CPElement tower_unitary(const ReturnSystem& S);

/// Throws IncompatiblePair when the bases of S' are not h^{J_{t,1}}(Y_{t,1}).
ProofUnitaries proof_unitaries(const ReturnSystem& S, const ReturnSystem& S_prime);

struct IdentityResult {
  std::string name;
  bool pass = true;
  std::optional<CPElement> witness;  // a nonzero difference on failure
  std::string detail;
};

struct SuiteReport {
  std::vector<IdentityResult> identities;
  bool all_pass() const;
};

/// Never throws on a failing identity; construction errors propagate.
SuiteReport identity_suite(const ReturnSystem& S, const ReturnSystem& S_prime);
/// Same, with the unitaries supplied by the caller (used for negative controls).
SuiteReport identity_suite(const ReturnSystem& S, const ReturnSystem& S_prime,
                           const ProofUnitaries& pu);

struct ATBlock {
  Index circle;                 // J_{t,1}
  std::vector<Index> matrices;  // J_{t,2}, ..., J_{t,K_t}
  bool operator==(const ATBlock&) const = default;
};

struct ATDescriptor {
  std::vector<ATBlock> blocks;
  bool operator==(const ATDescriptor&) const = default;
};

ATDescriptor approximant(const ReturnSystem& S, const ReturnSystem& S_prime);

/// Restriction to the fiber over `index` of a QuotientProduct (an element over
/// the fiber system), or to the collapsed fiber when index is empty (an
/// element over the one-point cycle). Other families have a single fiber:
/// only an empty index is accepted and the element is returned unchanged.
CPElement fiber_restrict(const CPElement& a, std::optional<Index> index);

nlohmann::json to_json(const CPElement& a);
CPElement element_from_json(const SystemSpec& spec, const nlohmann::json& j);
nlohmann::json to_json(const SuiteReport& r);
nlohmann::json to_json(const ATDescriptor& d);

}  // namespace zdsys
