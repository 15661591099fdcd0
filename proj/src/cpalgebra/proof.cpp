#include <functional>

#include "zdsys/cpalgebra.hpp"

namespace zdsys {

MatrixUnits::MatrixUnits(const ReturnSystem& S) : S_(S) {
  if (S_.T() == 0) throw Error(ErrorCode::InvalidSystem, "system without bases");
  (void)tower_partitions(S_);
}

CPElement MatrixUnits::e(std::size_t t, std::size_t k, Index i, Index j) const {
  const ReturnClass& c = S_.towers.at(t).at(k);
  if (i < 0 || j < 0 || i >= c.J || j >= c.J) {
    throw Error(ErrorCode::PreconditionFailed, "matrix unit index outside the tower");
  }
  // chi_{h^i Y} u^{i-j} chi_{h^j Y} = chi_{h^i Y} u^{i-j}
  return CPElement::term(1.0, apply_h(c.Y, i), i - j);
}

CPElement MatrixUnits::tower_projection(std::size_t t, std::size_t k) const {
  const ReturnClass& c = S_.towers.at(t).at(k);
  CPElement p(S_.spec());
  for (Index j = 0; j < c.J; ++j) p.accumulate(1.0, apply_h(c.Y, j), 0);
  return p;
}

MatrixUnits matrix_units(const ReturnSystem& S) { return MatrixUnits(S); }

CPElement tower_unitary(const ReturnSystem& S) {
  CPElement v(S.spec());
  for (const auto& tower : S.towers) {
    for (const auto& [Y, J] : tower) {
      v.accumulate(1.0, Y, 1 - J);
      for (Index j = 0; j + 2 <= J; ++j) v.accumulate(1.0, apply_h(Y, j + 1), 1);
    }
  }
  return v;
}

namespace {

void require_pair(const ReturnSystem& S, const ReturnSystem& Sp) {
  if (S.T() == 0 || Sp.T() != S.T() || !(S.spec() == Sp.spec())) {
    throw Error(ErrorCode::IncompatiblePair, "the two systems must share the system and the number of bases");
  }
  for (std::size_t t = 0; t < S.T(); ++t) {
    const auto& [Y, J] = S.towers[t].front();
    if (!(Sp.bases[t] == apply_h(Y, J))) {
      throw Error(ErrorCode::IncompatiblePair,
                  "base " + std::to_string(t + 1) + " of the second system is not h^{J_{t,1}}(Y_{t,1})");
    }
  }
}

ClopenSet circle_support(const ReturnSystem& S, std::size_t t) {
  const auto& [Y, J] = S.towers[t].front();
  ClopenSet acc = ClopenSet::empty(S.spec());
  for (Index j = 0; j < J; ++j) acc = set_union(acc, apply_h(Y, j));
  return acc;
}

}  // namespace

ProofUnitaries proof_unitaries(const ReturnSystem& S, const ReturnSystem& Sp) {
  require_pair(S, Sp);
  const SystemSpec& spec = S.spec();
  const CPElement u = CPElement::u_power(spec, 1);
  const MatrixUnits e1(S);
  (void)tower_partitions(Sp);

  ProofUnitaries pu{tower_unitary(S), CPElement(spec), tower_unitary(Sp), CPElement(spec),
                    CPElement(spec), ClopenSet::empty(spec), {}};
  pu.u1 = adjoint(pu.v1) * u;
  pu.u2 = adjoint(pu.v2) * u;

  for (std::size_t t = 0; t < S.T(); ++t) {
    const auto& [Y1, J1] = S.towers[t].front();
    pu.Xhat.push_back(difference(S.bases[t], intersect(Y1, apply_h(Y1, J1))));
    pu.Y = set_union(pu.Y, pu.Xhat.back());
  }

  ClopenSet covered = ClopenSet::empty(spec);
  for (std::size_t t = 0; t < S.T(); ++t) {
    const Index J1 = S.towers[t].front().J;
    for (Index j = 0; j < J1; ++j) {
      pu.uhat = pu.uhat + e1.e(t, 0, j, J1 - 1) * pu.u2 * e1.e(t, 0, J1 - 1, j);
    }
    covered = set_union(covered, circle_support(S, t));
  }
  pu.uhat = pu.uhat + CPElement::indicator(complement(covered));
  return pu;
}

bool SuiteReport::all_pass() const {
  for (const auto& r : identities) {
    if (!r.pass) return false;
  }
  return true;
}

namespace {

// Collects lhs == rhs checks for one identity; keeps the first failure.
class Check {
 public:
  explicit Check(std::string name) { result_.name = std::move(name); }

  void expect(const CPElement& lhs, const CPElement& rhs, const std::string& where) {
    if (!result_.pass) return;
    if (lhs == rhs) return;
    result_.pass = false;
    result_.witness = lhs - rhs;
    result_.detail = where;
  }

  IdentityResult done() { return std::move(result_); }

 private:
  IdentityResult result_;
};

std::string at(std::size_t t, std::size_t k, Index j) {
  return "t=" + std::to_string(t + 1) + " k=" + std::to_string(k + 1) + " j=" + std::to_string(j);
}

void unit_relations(Check& c, const ReturnSystem& S, const std::string& label) {
  const MatrixUnits mu(S);
  const SystemSpec& spec = S.spec();
  CPElement diag(spec);
  for (std::size_t t = 0; t < S.T(); ++t) {
    for (std::size_t k = 0; k < S.K(t); ++k) {
      const Index J = S.towers[t][k].J;
      std::vector<std::vector<CPElement>> e(J);
      for (Index i = 0; i < J; ++i) {
        for (Index j = 0; j < J; ++j) e[i].push_back(mu.e(t, k, i, j));
      }
      for (Index i = 0; i < J; ++i) {
        diag = diag + e[i][i];
        for (Index j = 0; j < J; ++j) {
          c.expect(adjoint(e[i][j]), e[j][i], label + " adjoint " + at(t, k, i));
          for (Index l = 0; l < J; ++l) c.expect(e[i][j] * e[j][l], e[i][l], label + " product " + at(t, k, j));
          if (i != j) c.expect(e[i][i] * e[j][j], CPElement(spec), label + " orthogonality " + at(t, k, j));
        }
      }
    }
  }
  // Projections summing to 1 are pairwise orthogonal, which settles products
  // across different towers.
  c.expect(diag, CPElement::one(spec), label + " diagonal units sum to 1");
}

// v chi_{h^j Y} v* = chi_{h^{j+1} Y} below the top, and chi_Y from the top.
void tower_moves(Check& moves, Check& wrap, const ReturnSystem& S, const CPElement& v,
                 const std::string& label) {
  const CPElement vs = adjoint(v);
  for (std::size_t t = 0; t < S.T(); ++t) {
    for (std::size_t k = 0; k < S.K(t); ++k) {
      const auto& [Y, J] = S.towers[t][k];
      for (Index j = 0; j + 2 <= J; ++j) {
        moves.expect(v * CPElement::indicator(apply_h(Y, j)) * vs, CPElement::indicator(apply_h(Y, j + 1)),
                     label + " " + at(t, k, j));
      }
      wrap.expect(v * CPElement::indicator(apply_h(Y, J - 1)) * vs, CPElement::indicator(Y),
                  label + " " + at(t, k, J - 1));
    }
  }
}

// Closed form of v* u and its action on tower levels.
void return_unitary(Check& c, const ReturnSystem& S, const CPElement& w, const std::string& label) {
  CPElement closed(S.spec());
  for (std::size_t t = 0; t < S.T(); ++t) {
    for (std::size_t k = 0; k < S.K(t); ++k) {
      const auto& [Y, J] = S.towers[t][k];
      closed.accumulate(1.0, apply_h(Y, J - 1), J);
      for (Index j = 0; j + 2 <= J; ++j) closed.accumulate(1.0, apply_h(Y, j), 0);
      const CPElement ws = adjoint(w);
      for (Index j = 0; j + 2 <= J; ++j) {
        const CPElement level = CPElement::indicator(apply_h(Y, j));
        c.expect(w * level * ws, level, label + " fixes level " + at(t, k, j));
      }
      c.expect(w * CPElement::indicator(apply_h(Y, -1)) * ws, CPElement::indicator(apply_h(Y, J - 1)),
               label + " moves h^-1(Y) " + at(t, k, -1));
    }
  }
  c.expect(w, closed, label + " closed form");
}

void unitary(Check& c, const CPElement& a, const std::string& label) {
  const CPElement one = CPElement::one(a.spec());
  const CPElement s = adjoint(a);
  c.expect(a * s, one, label + " a a*");
  c.expect(s * a, one, label + " a* a");
}

}  // namespace

SuiteReport identity_suite(const ReturnSystem& S, const ReturnSystem& Sp) {
  return identity_suite(S, Sp, proof_unitaries(S, Sp));
}

SuiteReport identity_suite(const ReturnSystem& S, const ReturnSystem& Sp, const ProofUnitaries& pu) {
  require_pair(S, Sp);
  const SystemSpec& spec = S.spec();
  const CPElement one = CPElement::one(spec);
  const CPElement u = CPElement::u_power(spec, 1);
  const CPElement zero(spec);
  const MatrixUnits e1(S);
  SuiteReport report;
  auto finish = [&](Check& c) { report.identities.push_back(c.done()); };

  Check units("matrix_units");
  unit_relations(units, S, "S");
  unit_relations(units, Sp, "S'");
  finish(units);

  Check moves("v1_moves_levels");
  Check wrap("v1_wraps_top_level");
  tower_moves(moves, wrap, S, pu.v1, "v1");
  tower_moves(moves, wrap, Sp, pu.v2, "v2");
  finish(moves);
  finish(wrap);

  Check unitaries("tower_unitaries");
  unitary(unitaries, pu.v1, "v1");
  unitary(unitaries, pu.v2, "v2");
  unitary(unitaries, pu.u1, "u1");
  unitary(unitaries, pu.u2, "u2");
  return_unitary(unitaries, S, pu.u1, "u1");
  return_unitary(unitaries, Sp, pu.u2, "u2");
  finish(unitaries);

  const CPElement v21 = pu.v2 * adjoint(pu.v1);
  const CPElement v21s = adjoint(v21);

  Check preserves("v2v1_preserves_X_t");
  for (std::size_t t = 0; t < S.T(); ++t) {
    preserves.expect(v21 * CPElement::indicator(S.bases[t]) * v21s, CPElement::indicator(S.bases[t]),
                     "t=" + std::to_string(t + 1));
    for (std::size_t k = 0; k < S.K(t); ++k) {
      const auto& [Y, J] = S.towers[t][k];
      preserves.expect(v21 * CPElement::indicator(Y) * v21s, CPElement::indicator(apply_h(Y, J)), at(t, k, J));
    }
  }
  finish(preserves);

  // Checked for every t.
  Check fixes("v2v1_identity_on_Y_t1_prime");
  for (std::size_t t = 0; t < S.T(); ++t) {
    const auto& [Y1, J1] = S.towers[t].front();
    const CPElement chi = CPElement::indicator(intersect(Y1, apply_h(Y1, J1)));
    fixes.expect(v21 * chi, chi, "t=" + std::to_string(t + 1));
  }
  finish(fixes);

  Check uhat_unitary("uhat_unitary");
  unitary(uhat_unitary, pu.uhat, "uhat");
  finish(uhat_unitary);

  const CPElement uhat_s = adjoint(pu.uhat);
  Check commutes("uhat_commutes_with_A1");
  for (std::size_t t = 0; t < S.T(); ++t) {
    for (std::size_t k = 0; k < S.K(t); ++k) {
      const Index J = S.towers[t][k].J;
      for (Index i = 0; i < J; ++i) {
        for (Index j = 0; j < J; ++j) {
          const CPElement e = e1.e(t, k, i, j);
          if (k == 0) {
            commutes.expect(pu.uhat * e * uhat_s, e, at(t, k, i));
          } else {
            commutes.expect(e * pu.uhat, e, at(t, k, i));
            commutes.expect(pu.uhat * e, e, at(t, k, i));
          }
        }
      }
    }
  }
  finish(commutes);

  Check recover("uhat_recovers_u2");
  {
    CPElement left(spec), right(spec);
    ClopenSet tops = ClopenSet::empty(spec);
    for (std::size_t t = 0; t < S.T(); ++t) {
      const Index J1 = S.towers[t].front().J;
      left = left + e1.e(t, 0, J1 - 1, 0);
      right = right + e1.e(t, 0, 0, J1 - 1);
      tops = set_union(tops, apply_h(Sp.bases[t], -1));
    }
    recover.expect(left * pu.uhat * right + CPElement::indicator(complement(tops)), pu.u2, "all t");
  }
  finish(recover);

  Check corners("p_t_commutes_with_u2_and_uhat");
  for (std::size_t t = 0; t < S.T(); ++t) {
    const CPElement p = e1.tower_projection(t, 0);
    corners.expect(commutator(p, pu.u2), zero, "u2 t=" + std::to_string(t + 1));
    corners.expect(commutator(p, pu.uhat), zero, "uhat t=" + std::to_string(t + 1));
  }
  finish(corners);

  Check central("r_t_central");
  for (std::size_t t = 0; t < Sp.T(); ++t) {
    ClopenSet orbit = ClopenSet::empty(spec);
    for (const auto& [Y, J] : Sp.towers[t]) {
      for (Index j = 0; j < J; ++j) orbit = set_union(orbit, apply_h(Y, j));
    }
    const CPElement r = CPElement::indicator(orbit);
    central.expect(commutator(r, u), zero, "t=" + std::to_string(t + 1));
    central.expect(r * r, r, "projection t=" + std::to_string(t + 1));
  }
  finish(central);

  return report;
}

ATDescriptor approximant(const ReturnSystem& S, const ReturnSystem& Sp) {
  require_pair(S, Sp);
  ATDescriptor d;
  for (const auto& tower : S.towers) {
    ATBlock b{tower.front().J, {}};
    for (std::size_t k = 1; k < tower.size(); ++k) b.matrices.push_back(tower[k].J);
    d.blocks.push_back(std::move(b));
  }
  return d;
}

nlohmann::json to_json(const SuiteReport& r) {
  nlohmann::json ids = nlohmann::json::array();
  for (const auto& i : r.identities) {
    ids.push_back({{"name", i.name},
                   {"pass", i.pass},
                   {"witness", i.witness ? to_json(*i.witness) : nlohmann::json(nullptr)},
                   {"detail", i.detail}});
  }
  return {{"all_pass", r.all_pass()}, {"identities", ids}};
}

nlohmann::json to_json(const ATDescriptor& d) {
  nlohmann::json blocks = nlohmann::json::array();
  for (const auto& b : d.blocks) blocks.push_back({{"circle", b.circle}, {"matrices", b.matrices}});
  return {{"blocks", blocks}};
}

}  // namespace zdsys
