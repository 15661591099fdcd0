#include <cmath>
#include <numbers>

#include "zdsys/numeric.hpp"

namespace zdsys {

namespace {

struct Level {
  std::size_t t, k;
  Index i;
  ClopenSet set;  // h^i(Y'_{t,k})
};

// The tower levels of S' that make up Y; Y must be a union of them.
std::vector<Level> levels_in(const ReturnSystem& Sp, const ClopenSet& Y) {
  std::vector<Level> out;
  for (std::size_t t = 0; t < Sp.T(); ++t) {
    for (std::size_t k = 0; k < Sp.K(t); ++k) {
      const auto& [Yk, J] = Sp.towers[t][k];
      for (Index i = 0; i < J; ++i) {
        ClopenSet L = apply_h(Yk, i);
        const ClopenSet inside = intersect(L, Y);
        if (is_empty(inside)) continue;
        if (!(inside == L)) {
          throw Error(ErrorCode::ConstructionFailed, "Y is not a union of levels of the second system");
        }
        out.push_back({t, k, i, std::move(L)});
      }
    }
  }
  return out;
}

// The matrix of chi_Y x chi_Y in the matrix units of S' on the levels of Y.
ComplexMatrix compress(const CPElement& x, const std::vector<Level>& levels) {
  const auto m = static_cast<Eigen::Index>(levels.size());
  ComplexMatrix M = ComplexMatrix::Zero(m, m);
  for (Eigen::Index r = 0; r < m; ++r) {
    const CPElement left = CPElement::indicator(levels[r].set) * x;
    for (Eigen::Index c = 0; c < m; ++c) {
      const CPElement piece = left * CPElement::indicator(levels[c].set);
      if (piece.is_zero()) continue;
      const bool same_tower = levels[r].t == levels[c].t && levels[r].k == levels[c].k;
      const auto& terms = piece.terms();
      const Index shift = levels[r].i - levels[c].i;
      if (!same_tower || terms.size() != 1 || terms.begin()->first != shift ||
          terms.begin()->second.cells().size() != 1 || !(terms.begin()->second.cells()[0].E == levels[r].set)) {
        throw Error(ErrorCode::ConstructionFailed, "chi_Y v2 v1* chi_Y is not in the span of the matrix units");
      }
      M(r, c) = terms.begin()->second.cells()[0].c;
    }
  }
  return M;
}

// sum M(r, c) e'_{i_r, i_c}, dropping rounding noise.
CPElement expand(const ComplexMatrix& M, const std::vector<Level>& levels, const SystemSpec& spec) {
  CPElement x(spec);
  for (std::size_t r = 0; r < levels.size(); ++r) {
    for (std::size_t c = 0; c < levels.size(); ++c) {
      const Scalar v = M(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
      if (std::abs(v) <= 1e-15) continue;
      if (levels[r].t != levels[c].t || levels[r].k != levels[c].k) {
        if (std::abs(v) > 1e-12) {
          throw Error(ErrorCode::DegenerateEigenbasis, "the root mixes different towers");
        }
        continue;
      }
      x.accumulate(v, levels[r].set, levels[r].i - levels[c].i);
    }
  }
  return x;
}

// u^j x u^-j.
CPElement conjugate_by_u(const CPElement& x, Index j) {
  CPElement r(x.spec());
  for (const auto& [n, f] : x.terms()) {
    for (const auto& cell : f.cells()) r.accumulate(cell.c, apply_h(cell.E, j), n);
  }
  return r;
}

}  // namespace

BergReport berg_verify(const SystemSpec& spec, const Partition& P, Index N, double epsilon, Index max_steps,
                       const Tolerances& tol) {
  if (N < 1 || !(std::numbers::pi / static_cast<double>(N) < epsilon)) {
    throw Error(ErrorCode::PreconditionFailed, "need pi / N < epsilon");
  }
  const AdaptedPair pair = adapted_system_pair(spec, P, N, max_steps);
  const ProofUnitaries pu = proof_unitaries(pair.S, pair.S_prime);
  const CPElement one = CPElement::one(spec);
  const CPElement u = CPElement::u_power(spec, 1);

  BergReport r;
  r.N = N;
  r.epsilon = epsilon;

  const auto levels = levels_in(pair.S_prime, pu.Y);
  const ComplexMatrix V = compress(CPElement::indicator(pu.Y) * pu.v2 * adjoint(pu.v1), levels);
  const ComplexMatrix W = unitary_nth_root(V, N, tol.identity);
  r.v = V;
  for (const auto& L : levels) {
    const auto pts = finite_points(L.set);
    if (pts && pts->size() == 1) r.v_basis.push_back(pts->front());
  }
  if (W.size() > 0) {
    r.norm_w_minus_1 = operator_norm(W - ComplexMatrix::Identity(W.rows(), W.cols()), tol.norm);
  }

  // z = sum_j chi_{h^j Y} u^j w^{N-j} u^-j chi_{h^j Y} + chi_{rest}
  CPElement z(spec);
  ClopenSet used = ClopenSet::empty(spec);
  ComplexMatrix Wp = ComplexMatrix::Identity(W.rows(), W.cols());
  std::vector<ComplexMatrix> powers(static_cast<std::size_t>(N) + 1);
  for (Index p = 0; p <= N; ++p) {
    powers[static_cast<std::size_t>(p)] = Wp;
    Wp = Wp * W;
  }
  for (Index j = 0; j < N; ++j) {
    const CPElement wj = expand(powers[static_cast<std::size_t>(N - j)], levels, spec);
    z = z + conjugate_by_u(wj, j);
    used = set_union(used, apply_h(pu.Y, j));
  }
  z = z + CPElement::indicator(complement(used));

  const CPElement zs = adjoint(z);
  r.z_unitary_defect = std::max(element_norm(z * zs - one, tol.norm), element_norm(zs * z - one, tol.norm));
  r.z_unitary = r.z_unitary_defect <= tol.identity;
  for (const auto& U : P) {
    const CPElement chi = CPElement::indicator(U);
    r.z_commutator_norm = std::max(r.z_commutator_norm, element_norm(z * chi - chi * z, tol.norm));
  }
  r.z_commutes = r.z_commutator_norm <= tol.identity;

  const CPElement v1u2 = pu.v1 * pu.u2;
  const CPElement a = z * v1u2 - u * z;
  const CPElement u_prime = z * v1u2 * zs;
  r.norm_u_prime_minus_u = element_norm(u_prime - u, tol.norm);

  r.blocks_below_epsilon = true;
  for (Index n = 1; n <= N; ++n) {
    const CPElement piece =
        CPElement::indicator(apply_h(pu.Y, n)) * a * CPElement::indicator(apply_h(pu.Y, n - 1));
    r.per_block_norms.push_back(element_norm(piece, tol.norm));
    if (!(r.per_block_norms.back() < epsilon)) r.blocks_below_epsilon = false;
  }

  // Cut-down family: (h^n Y, h^{n-1} Y) for n = 1..N, then (Y, h^N Y),
  // (h^-1 Y, h^-1 Y) and the remainder on both sides.
  std::vector<std::pair<ClopenSet, ClopenSet>> blocks;
  ClopenSet covered = apply_h(pu.Y, -1);
  for (Index n = 1; n <= N; ++n) {
    blocks.emplace_back(apply_h(pu.Y, n), apply_h(pu.Y, n - 1));
    covered = set_union(covered, apply_h(pu.Y, n - 1));
  }
  covered = set_union(covered, apply_h(pu.Y, N));
  blocks.emplace_back(pu.Y, apply_h(pu.Y, N));
  blocks.emplace_back(apply_h(pu.Y, -1), apply_h(pu.Y, -1));
  blocks.emplace_back(complement(covered), complement(covered));
  if (!is_empty(pu.Y)) r.cutdown = cutdown_check(a, blocks, tol);
  else r.cutdown = CutdownReport{{}, element_norm(a, tol.norm), true, a.is_zero()};

  r.pass = r.norm_u_prime_minus_u < epsilon;
  return r;
}

nlohmann::json to_json(const BergReport& r) {
  nlohmann::json basis = nlohmann::json::array();
  for (const auto& p : r.v_basis) basis.push_back(to_json(p));
  return {{"N", r.N},
          {"epsilon", r.epsilon},
          {"norm_w_minus_1", r.norm_w_minus_1},
          {"norm_u_prime_minus_u", r.norm_u_prime_minus_u},
          {"per_block_norms", r.per_block_norms},
          {"z_unitary_defect", r.z_unitary_defect},
          {"z_commutator_norm", r.z_commutator_norm},
          {"v", r.v ? to_json(*r.v) : nlohmann::json(nullptr)},
          {"v_basis", basis},
          {"cutdown",
           {{"block_norms", r.cutdown.block_norms},
            {"norm", r.cutdown.norm},
            {"off_diagonal_zero", r.cutdown.off_diagonal_zero},
            {"holds", r.cutdown.holds}}},
          {"z_unitary", r.z_unitary},
          {"z_commutes", r.z_commutes},
          {"blocks_below_epsilon", r.blocks_below_epsilon},
          {"pass", r.pass}};
}

}  // namespace zdsys
