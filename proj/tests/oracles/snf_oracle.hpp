#pragma once

// Independent references for the K-theory code: invariant factors from
// determinantal divisors (gcd of all k x k minors, minors by cofactor
// expansion) and cycle counts of permutation matrices.

#include <numeric>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace zdsys::oracle {

using Big = boost::multiprecision::cpp_int;
using Dense = std::vector<std::vector<long long>>;

inline Big cofactor_det(const Dense& a, const std::vector<std::size_t>& rows, std::vector<std::size_t> cols) {
  if (rows.empty()) return 1;
  if (rows.size() == 1) return a[rows[0]][cols[0]];
  const std::vector<std::size_t> rest(rows.begin() + 1, rows.end());
  Big sum = 0;
  for (std::size_t c = 0; c < cols.size(); ++c) {
    const long long x = a[rows[0]][cols[c]];
    if (x == 0) continue;
    std::vector<std::size_t> sub = cols;
    sub.erase(sub.begin() + static_cast<long>(c));
    const Big minor = cofactor_det(a, rest, sub);
    sum += (c % 2 == 0 ? 1 : -1) * x * minor;
  }
  return sum;
}

inline void subsets(std::size_t n, std::size_t k, std::size_t start, std::vector<std::size_t>& cur,
                    std::vector<std::vector<std::size_t>>& out) {
  if (cur.size() == k) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = start; i < n; ++i) {
    cur.push_back(i);
    subsets(n, k, i + 1, cur, out);
    cur.pop_back();
  }
}

/// d_k = D_k / D_{k-1}, D_k the gcd of the k x k minors; stops at the rank.
inline std::vector<Big> invariant_factors(const Dense& a) {
  const std::size_t m = a.size(), n = m ? a[0].size() : 0;
  std::vector<Big> out;
  Big prev = 1;
  for (std::size_t k = 1; k <= std::min(m, n); ++k) {
    std::vector<std::vector<std::size_t>> rs, cs;
    std::vector<std::size_t> cur;
    subsets(m, k, 0, cur, rs);
    subsets(n, k, 0, cur, cs);
    Big g = 0;
    for (const auto& r : rs) {
      for (const auto& c : cs) g = boost::multiprecision::gcd(g, abs(cofactor_det(a, r, c)));
    }
    if (g == 0) break;
    out.push_back(g / prev);
    prev = g;
  }
  return out;
}

/// Number of cycles of the permutation sending i to perm[i].
inline std::size_t cycle_count(const std::vector<std::size_t>& perm) {
  std::vector<bool> seen(perm.size(), false);
  std::size_t cycles = 0;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    if (seen[i]) continue;
    ++cycles;
    for (std::size_t j = i; !seen[j]; j = perm[j]) seen[j] = true;
  }
  return cycles;
}

}  // namespace zdsys::oracle
