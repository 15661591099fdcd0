#include <algorithm>
#include <map>

#include "zdsys/numeric.hpp"

namespace zdsys {

namespace {

std::vector<Point> points_of(const ClopenSet& E) {
  auto pts = finite_points(E);
  if (!pts) {
    throw Error(ErrorCode::NotCompactlySupported, "coefficient set " + E.to_string() + " is not finite");
  }
  return std::move(*pts);
}

}  // namespace

CompactMatrixRep represent(const CPElement& a, const std::vector<Point>& window) {
  std::map<Point, Eigen::Index> where;
  for (std::size_t i = 0; i < window.size(); ++i) where.emplace(window[i], static_cast<Eigen::Index>(i));
  const auto n = static_cast<Eigen::Index>(window.size());
  CompactMatrixRep rep{window, ComplexMatrix::Zero(n, n)};
  // (c chi_E u^k) delta_y = c delta_{h^k y} when h^k y lies in E.
  for (const auto& [k, f] : a.terms()) {
    for (const auto& cell : f.cells()) {
      for (const Point& x : points_of(cell.E)) {
        const Point y = apply_h(a.spec(), x, -k);
        const auto row = where.find(x);
        const auto col = where.find(y);
        if (row == where.end() || col == where.end()) {
          throw Error(ErrorCode::PreconditionFailed, "element reaches outside the window at " + x.to_string());
        }
        rep.matrix(row->second, col->second) += cell.c;
      }
    }
  }
  return rep;
}

CompactMatrixRep represent(const CPElement& a) {
  std::vector<Point> window;
  for (const auto& [k, f] : a.terms()) {
    for (const auto& cell : f.cells()) {
      for (const Point& x : points_of(cell.E)) {
        window.push_back(x);
        window.push_back(apply_h(a.spec(), x, -k));
      }
    }
  }
  std::sort(window.begin(), window.end());
  window.erase(std::unique(window.begin(), window.end()), window.end());
  return represent(a, window);
}

double element_norm(const CPElement& a, double tol) {
  if (a.is_zero()) return 0.0;
  return operator_norm(represent(a).matrix, tol);
}

CutdownReport cutdown_check(const CPElement& a, const std::vector<std::pair<ClopenSet, ClopenSet>>& blocks,
                            const Tolerances& tol) {
  std::vector<ClopenSet> ps, qs;
  for (const auto& [p, q] : blocks) {
    if (!is_empty(p)) ps.push_back(p);
    if (!is_empty(q)) qs.push_back(q);
  }
  if (blocks.empty() || !is_partition(ps) || !is_partition(qs)) {
    throw Error(ErrorCode::PartitionFailure, "the cut-down projections must each sum to 1");
  }
  CutdownReport r;
  double largest = 0.0;
  for (std::size_t m = 0; m < blocks.size(); ++m) {
    const CPElement left = CPElement::indicator(blocks[m].first) * a;
    for (std::size_t n = 0; n < blocks.size(); ++n) {
      const CPElement piece = left * CPElement::indicator(blocks[n].second);
      if (m == n) {
        r.block_norms.push_back(element_norm(piece, tol.norm));
        largest = std::max(largest, r.block_norms.back());
      } else if (!approx_equals(piece, CPElement(a.spec()), tol.identity)) {
        r.off_diagonal_zero = false;
      }
    }
  }
  r.norm = element_norm(a, tol.norm);
  r.holds = r.off_diagonal_zero && r.norm <= largest + tol.bound;
  return r;
}

}  // namespace zdsys
