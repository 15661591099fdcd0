#include <algorithm>
#include <cmath>

#include "zdsys/cpalgebra.hpp"

namespace zdsys {

namespace {

bool scalar_less(Scalar a, Scalar b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

// Folds -0.0 into 0.0 so that equal values compare structurally equal.
Scalar tidy(Scalar c) { return {c.real() + 0.0, c.imag() + 0.0}; }

void require_same(const SystemSpec& a, const SystemSpec& b) {
  if (!(a == b)) throw Error(ErrorCode::MixedSystems, "crossed product elements over different systems");
}

}  // namespace

void StepFunction::accumulate(const SystemSpec& spec, Scalar c, const ClopenSet& E) {
  c = tidy(c);
  if (c == Scalar{} || is_empty(E)) return;
  std::vector<Cell> out;
  out.reserve(cells_.size() + 2);
  ClopenSet rest = E;
  bool rest_empty = false;
  for (const auto& cell : cells_) {
    if (rest_empty) {
      out.push_back(cell);
      continue;
    }
    ClopenSet overlap = intersect(cell.E, rest);
    if (is_empty(overlap)) {
      out.push_back(cell);
      continue;
    }
    ClopenSet outside = difference(cell.E, overlap);
    if (!is_empty(outside)) out.push_back({cell.c, std::move(outside)});
    out.push_back({tidy(cell.c + c), overlap});
    rest = difference(rest, overlap);
    rest_empty = is_empty(rest);
  }
  if (!rest_empty) out.push_back({c, std::move(rest)});

  // Merge equal values and drop zeros.
  std::sort(out.begin(), out.end(), [](const Cell& a, const Cell& b) { return scalar_less(a.c, b.c); });
  cells_.clear();
  for (auto& cell : out) {
    if (cell.c == Scalar{}) continue;
    if (!cells_.empty() && cells_.back().c == cell.c) {
      cells_.back().E = set_union(cells_.back().E, cell.E);
    } else {
      cells_.push_back(std::move(cell));
    }
  }
  (void)spec;
}

StepFunction StepFunction::from_cells(const SystemSpec& spec, const std::vector<Cell>& cells) {
  StepFunction f;
  for (const auto& cell : cells) f.accumulate(spec, cell.c, cell.E);
  return f;
}

CPElement CPElement::one(const SystemSpec& spec) { return term(1.0, ClopenSet::whole(spec), 0); }

CPElement CPElement::term(Scalar c, const ClopenSet& E, Index n) {
  CPElement a(E.spec());
  a.accumulate(c, E, n);
  return a;
}

CPElement CPElement::u_power(const SystemSpec& spec, Index n) {
  return term(1.0, ClopenSet::whole(spec), n);
}

std::size_t CPElement::size() const {
  std::size_t s = 0;
  for (const auto& [n, f] : terms_) s += f.cells().size();
  return s;
}

void CPElement::accumulate(Scalar c, const ClopenSet& E, Index n) {
  require_same(spec_, E.spec());
  auto& f = terms_[n];
  f.accumulate(spec_, c, E);
  if (f.is_zero()) terms_.erase(n);
}

CPElement add(const CPElement& a, const CPElement& b) {
  require_same(a.spec(), b.spec());
  CPElement r = a;
  for (const auto& [n, f] : b.terms()) {
    for (const auto& cell : f.cells()) r.accumulate(cell.c, cell.E, n);
  }
  return r;
}

CPElement scale(Scalar c, const CPElement& a) {
  CPElement r(a.spec());
  for (const auto& [n, f] : a.terms()) {
    for (const auto& cell : f.cells()) r.accumulate(c * cell.c, cell.E, n);
  }
  return r;
}

CPElement subtract(const CPElement& a, const CPElement& b) { return add(a, scale(-1.0, b)); }

// (c chi_E u^n)(d chi_F u^m) = cd chi_{E n h^n(F)} u^{n+m}.
CPElement multiply(const CPElement& a, const CPElement& b) {
  require_same(a.spec(), b.spec());
  CPElement r(a.spec());
  for (const auto& [n, f] : a.terms()) {
    std::vector<StepFunction::Cell> moved;
    for (const auto& [m, g] : b.terms()) {
      moved.clear();
      for (const auto& cell : g.cells()) moved.push_back({cell.c, apply_h(cell.E, n)});
      for (const auto& x : f.cells()) {
        for (const auto& y : moved) {
          ClopenSet E = intersect(x.E, y.E);
          if (!is_empty(E)) r.accumulate(x.c * y.c, E, n + m);
        }
      }
    }
  }
  return r;
}

// (c chi_E u^n)* = conj(c) chi_{h^-n(E)} u^-n.
CPElement adjoint(const CPElement& a) {
  CPElement r(a.spec());
  for (const auto& [n, f] : a.terms()) {
    for (const auto& cell : f.cells()) r.accumulate(std::conj(cell.c), apply_h(cell.E, -n), -n);
  }
  return r;
}

bool equals(const CPElement& a, const CPElement& b) {
  require_same(a.spec(), b.spec());
  return a == b;
}

bool approx_equals(const CPElement& a, const CPElement& b, double tol) {
  const CPElement d = subtract(a, b);
  for (const auto& [n, f] : d.terms()) {
    for (const auto& cell : f.cells()) {
      if (std::abs(cell.c) > tol) return false;
    }
  }
  return true;
}

bool is_unitary(const CPElement& a) {
  const CPElement one = CPElement::one(a.spec());
  const CPElement s = adjoint(a);
  return multiply(a, s) == one && multiply(s, a) == one;
}

CPElement commutator(const CPElement& a, const CPElement& b) {
  return subtract(multiply(a, b), multiply(b, a));
}

CPElement fiber_restrict(const CPElement& a, std::optional<Index> index) {
  const SystemSpec& spec = a.spec();
  if (spec.family() != Family::QuotientProduct) {
    if (index) {
      throw Error(ErrorCode::InvalidFiberPoint,
                  "a " + std::string(family_name(spec.family())) + " system has a single fiber");
    }
    return a;
  }
  if (!index) {
    const SystemSpec point = SystemSpec::finite_cycle(1);
    const Point collapsed = Point::collapsed();
    CPElement r(point);
    for (const auto& [n, f] : a.terms()) {
      for (const auto& cell : f.cells()) {
        if (contains_point(cell.E, collapsed)) r.accumulate(cell.c, ClopenSet::whole(point), n);
      }
    }
    return r;
  }
  CPElement r(spec.fiber());
  for (const auto& [n, f] : a.terms()) {
    for (const auto& cell : f.cells()) r.accumulate(cell.c, cell.E.slice_at(*index), n);
  }
  return r;
}

nlohmann::json to_json(const CPElement& a) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [n, f] : a.terms()) {
    nlohmann::json coeff = nlohmann::json::array();
    for (const auto& cell : f.cells()) {
      coeff.push_back({{"re", cell.c.real()}, {"im", cell.c.imag()}, {"set", to_json(cell.E)}});
    }
    terms.push_back({{"n", n}, {"coeff", coeff}});
  }
  return {{"terms", terms}};
}

CPElement element_from_json(const SystemSpec& spec, const nlohmann::json& j) {
  CPElement a(spec);
  try {
    for (const auto& t : j.at("terms")) {
      const Index n = t.at("n").get<Index>();
      for (const auto& c : t.at("coeff")) {
        a.accumulate({c.at("re").get<double>(), c.at("im").get<double>()},
                     clopen_from_json(spec, c.at("set")), n);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidSpec, std::string("malformed element: ") + e.what());
  }
  return a;
}

}  // namespace zdsys
