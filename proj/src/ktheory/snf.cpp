#include <utility>

#include "zdsys/ktheory.hpp"

namespace zdsys {

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long long>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  a_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw Error(ErrorCode::PreconditionFailed, "ragged matrix literal");
    for (long long x : r) a_.emplace_back(x);
  }
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

bool IntMatrix::is_diagonal() const {
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) {
      if (i != j && (*this)(i, j) != 0) return false;
    }
  }
  return true;
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.rows()) throw Error(ErrorCode::PreconditionFailed, "matrix shapes do not compose");
  IntMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a(i, k) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += a(i, k) * b(k, j);
    }
  }
  return c;
}

IntMatrix operator-(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::PreconditionFailed, "matrix shapes differ");
  }
  IntMatrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) - b(i, j);
  }
  return c;
}

BigInt determinant(const IntMatrix& a) {
  if (a.rows() != a.cols()) throw Error(ErrorCode::PreconditionFailed, "determinant of a non-square matrix");
  const std::size_t n = a.rows();
  if (n == 0) return 1;
  IntMatrix m = a;
  BigInt sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t r = k + 1;
      while (r < n && m(r, k) == 0) ++r;
      if (r == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(r, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
      }
    }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

std::vector<BigInt> SNFResult::invariant_factors() const {
  std::vector<BigInt> out;
  for (std::size_t i = 0; i < std::min(D.rows(), D.cols()); ++i) {
    if (D(i, i) != 0) out.push_back(D(i, i));
  }
  return out;
}

namespace {

// Keeps A = U D V while D is reduced. A row operation on D is undone by the
// inverse column operation on U; a column operation on D by the inverse row
// operation on V.
class Reducer {
 public:
  explicit Reducer(const IntMatrix& A)
      : U(IntMatrix::identity(A.rows())), D(A), V(IntMatrix::identity(A.cols())) {}

  // row i += c * row j
  void add_row(std::size_t i, std::size_t j, const BigInt& c) {
    if (c == 0) return;
    for (std::size_t k = 0; k < D.cols(); ++k) D(i, k) += c * D(j, k);
    for (std::size_t k = 0; k < U.rows(); ++k) U(k, j) -= c * U(k, i);
  }
  // col j += c * col i
  void add_col(std::size_t j, std::size_t i, const BigInt& c) {
    if (c == 0) return;
    for (std::size_t k = 0; k < D.rows(); ++k) D(k, j) += c * D(k, i);
    for (std::size_t k = 0; k < V.cols(); ++k) V(i, k) -= c * V(j, k);
  }
  void swap_rows(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t k = 0; k < D.cols(); ++k) std::swap(D(i, k), D(j, k));
    for (std::size_t k = 0; k < U.rows(); ++k) std::swap(U(k, i), U(k, j));
  }
  void swap_cols(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t k = 0; k < D.rows(); ++k) std::swap(D(k, i), D(k, j));
    for (std::size_t k = 0; k < V.cols(); ++k) std::swap(V(i, k), V(j, k));
  }
  void negate_row(std::size_t i) {
    for (std::size_t k = 0; k < D.cols(); ++k) D(i, k) = -D(i, k);
    for (std::size_t k = 0; k < U.rows(); ++k) U(k, i) = -U(k, i);
  }

  IntMatrix U, D, V;
};

}  // namespace

SNFResult smith_normal_form(const IntMatrix& A) {
  Reducer r(A);
  IntMatrix& D = r.D;
  const std::size_t m = D.rows(), n = D.cols();

  for (std::size_t t = 0; t < std::min(m, n); ++t) {
    for (;;) {
      // Pivot of least absolute value in the lower right block.
      std::size_t pi = m, pj = n;
      for (std::size_t i = t; i < m; ++i) {
        for (std::size_t j = t; j < n; ++j) {
          if (D(i, j) != 0 && (pi == m || abs(D(i, j)) < abs(D(pi, pj)))) {
            pi = i;
            pj = j;
          }
        }
      }
      if (pi == m) break;
      r.swap_rows(t, pi);
      r.swap_cols(t, pj);

      // Truncating division leaves remainders smaller than the pivot.
      bool clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        r.add_row(i, t, BigInt(-(D(i, t) / D(t, t))));
        if (D(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        r.add_col(j, t, BigInt(-(D(t, j) / D(t, t))));
        if (D(t, j) != 0) clean = false;
      }
      if (!clean) continue;

      // Divisibility: fold a row holding a non-multiple into row t and retry.
      std::size_t bad = m;
      for (std::size_t i = t + 1; i < m && bad == m; ++i) {
        for (std::size_t j = t + 1; j < n; ++j) {
          if (D(i, j) % D(t, t) != 0) {
            bad = i;
            break;
          }
        }
      }
      if (bad == m) break;
      r.add_row(t, bad, 1);
    }
    if (D(t, t) < 0) r.negate_row(t);
  }
  return {std::move(r.U), std::move(r.D), std::move(r.V)};
}

nlohmann::json to_json(const IntMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j).str());
    rows.push_back(row);
  }
  return rows;
}

}  // namespace zdsys
