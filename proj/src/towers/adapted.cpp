#include <algorithm>

#include "zdsys/towers.hpp"

namespace zdsys {

namespace {

[[noreturn]] void construction_failed(const std::string& what) {
  throw Error(ErrorCode::ConstructionFailed, what);
}

std::size_t odometer_depth(const ClopenSet& a) {
  if (const auto* o = std::get_if<ClopenSet::Odometer>(&a.form())) return o->trie.depth();
  if (const auto* p = std::get_if<ClopenSet::Product>(&a.form())) {
    std::size_t d = 0;
    for (const auto& s : p->slices) d = std::max(d, odometer_depth(s));
    return d;
  }
  return 0;
}

// The partition a QuotientProduct partition induces on fiber k.
Partition fiber_partition(const Partition& P, Index k) {
  std::vector<ClopenSet> out;
  for (const auto& U : P) {
    ClopenSet s = U.slice_at(k);
    if (!is_empty(s)) out.push_back(std::move(s));
  }
  return Partition(std::move(out));
}

std::vector<ClopenSet> adapted_bases(const SystemSpec& spec, const Partition& P, Index N,
                                     std::size_t odometer_level) {
  switch (spec.family()) {
    case Family::FiniteCycle:
      return {ClopenSet::cycle(spec, {0})};
    case Family::Odometer:
      return {ClopenSet::cylinder(spec, std::vector<int>(odometer_level, 0))};
    case Family::CompactifiedShift: {
      const auto iu = P.block_containing(Point::infinity());
      const auto F = std::get<ClopenSet::Shift>(complement(P[*iu]).form()).exceptions;
      // X_1 = {inf} u (-inf, a] u [b, inf) with h^n(X_1) inside U for n < N and b - a >= N + 2.
      Index a = 0;
      Index b = N + 2;
      if (!F.empty()) {
        b = F.back() + 1;
        a = std::min(F.front() - N, b - N - 2);
      }
      std::vector<Index> gap;
      for (Index x = a + 1; x < b; ++x) gap.push_back(x);
      return {ClopenSet::shift(spec, gap, true)};
    }
    case Family::TwoPointShift:
      construction_failed("the two-point shift is not fiberwise essentially minimal");
    case Family::QuotientProduct: {
      const auto iu = P.block_containing(Point::collapsed());
      const auto window = P[*iu].window();
      std::vector<ClopenSet> out;
      if (!window) {
        out.push_back(ClopenSet::whole(spec));
        return out;
      }
      const auto [lo, hi] = *window;
      out.push_back(ClopenSet::product(
          spec, lo, std::vector<ClopenSet>(static_cast<std::size_t>(hi - lo + 1), ClopenSet::empty(spec.fiber())),
          true));
      for (Index k = lo; k <= hi; ++k) {
        for (const auto& b : adapted_bases(spec.fiber(), fiber_partition(P, k), N, odometer_level)) {
          out.push_back(ClopenSet::fiber_slice(spec, k, b));
        }
      }
      return out;
    }
  }
  construction_failed("unknown family");
}

// Moves the class meeting the fiber minimal set to the front of each base.
void minimal_class_first(ReturnSystem& S) {
  for (std::size_t t = 0; t < S.T(); ++t) {
    const auto p = minimal_point_in(S.bases[t]);
    if (!p) continue;
    auto& towers = S.towers[t];
    auto it = std::find_if(towers.begin(), towers.end(),
                           [&](const ReturnClass& c) { return contains_point(c.Y, *p); });
    if (it != towers.end()) std::rotate(towers.begin(), it, it + 1);
  }
}

ReturnSystem finer_than(ReturnSystem S, const Partition& target) {
  const auto parts = tower_partitions(S);
  if (is_finer(parts.first, target) && is_finer(parts.second, target)) return S;
  return refine_system(S, target);
}

bool meets_fiber_minimal_sets(const ClopenSet& Y, const ClopenSet& X) {
  const SystemSpec& spec = X.spec();
  switch (spec.family()) {
    case Family::FiniteCycle:
    case Family::Odometer:
      return is_empty(X) || !is_empty(Y);
    case Family::CompactifiedShift:
      return is_empty(X) || contains_point(Y, Point::infinity());
    case Family::TwoPointShift:
      return is_empty(X);
    case Family::QuotientProduct: {
      const bool x_tail = std::get<ClopenSet::Product>(X.form()).tail;
      if (x_tail && !std::get<ClopenSet::Product>(Y.form()).tail) return false;
      auto wx = X.window();
      auto wy = Y.window();
      if (!wx && !wy) return true;
      Index lo = wx ? wx->first : wy->first;
      Index hi = wx ? wx->second : wy->second;
      if (wy) {
        lo = std::min(lo, wy->first);
        hi = std::max(hi, wy->second);
      }
      for (Index k = lo; k <= hi; ++k) {
        if (!meets_fiber_minimal_sets(Y.slice_at(k), X.slice_at(k))) return false;
      }
      return true;
    }
  }
  return false;
}

void check_postconditions(const AdaptedPair& pair, const Partition& P, Index N) {
  const auto& S = pair.S;
  const auto& Sp = pair.S_prime;
  const auto vs = validate_system(S, P);
  if (!vs.ok()) construction_failed("S is not a valid system subordinate to P");
  const auto vsp = validate_system(Sp, P);
  if (!vsp.ok()) construction_failed("S' is not a valid system subordinate to P");

  for (std::size_t t = 0; t < S.T(); ++t) {
    const auto& X = S.bases[t];
    const auto& first = S.towers[t].front();
    const std::string tag = " (t = " + std::to_string(t + 1) + ")";
    if (!meets_fiber_minimal_sets(first.Y, X)) {
      construction_failed("postcondition (a): Y_{t,1} misses a fiber minimal set" + tag);
    }
    for (Index n = 0; n < N; ++n) {
      if (!P.block_containing(apply_h(X, n))) {
        construction_failed("postcondition (b): h^" + std::to_string(n) + "(X_t) straddles P" + tag);
      }
    }
    const ClopenSet hat = difference(X, intersect(first.Y, apply_h(first.Y, first.J)));
    ClopenSet seen = hat;
    for (Index n = 1; n <= N; ++n) {
      const ClopenSet image = apply_h(hat, n);
      if (!disjoint(seen, image)) {
        construction_failed("postcondition (d): iterates of the corrected base overlap" + tag);
      }
      seen = set_union(seen, image);
    }
    if (!(Sp.bases[t] == apply_h(first.Y, first.J))) {
      construction_failed("S' base is not h^{J_{t,1}}(Y_{t,1})" + tag);
    }
  }
  const auto [p1, p2] = tower_partitions(S);
  if (!is_finer(p1, P) || !is_finer(p2, P)) {
    construction_failed("postcondition (c): P1(S) or P2(S) is not finer than P");
  }
  const auto p1_prime = tower_partitions(Sp).first;
  if (!is_finer(p1_prime, p1) || !is_finer(p1_prime, p2)) {
    construction_failed("P1(S') is not finer than P1(S) and P2(S)");
  }
}

}  // namespace

AdaptedPair adapted_system_pair(const SystemSpec& spec, const Partition& P, Index N, Index max_steps) {
  if (N < 1) throw Error(ErrorCode::InvalidSpec, "N must be positive");
  if (!(P.spec() == spec)) throw Error(ErrorCode::MixedSystems, "partition from another system");
  if (!spec.fiberwise_essentially_minimal()) {
    construction_failed(std::string(family_name(spec.family())) + " is not fiberwise essentially minimal");
  }

  // Odometer bases use one cylinder length L everywhere: deep enough for P and with b^L > N.
  std::size_t level = 1;
  for (const auto& U : P) level = std::max(level, odometer_depth(U));
  const SystemSpec& leaf = spec.family() == Family::QuotientProduct ? spec.fiber() : spec;
  if (leaf.family() == Family::Odometer) {
    Index reach = 1;
    std::size_t L = 0;
    while (reach <= N) {
      reach *= leaf.base();
      ++L;
    }
    level = std::max(level, L);
  }

  AdaptedPair pair;
  try {
    pair.S = finer_than(build_from_bases(adapted_bases(spec, P, N, level), P, max_steps), P);
    minimal_class_first(pair.S);

    std::vector<ClopenSet> next;
    for (const auto& towers : pair.S.towers) next.push_back(apply_h(towers.front().Y, towers.front().J));
    pair.S_prime = build_from_bases(next, P, max_steps);
    const auto [p1, p2] = tower_partitions(pair.S);
    const Partition target = common_refinement(p1, p2);
    if (!is_finer(tower_partitions(pair.S_prime).first, target)) {
      pair.S_prime = refine_system(pair.S_prime, target);
    }
    minimal_class_first(pair.S_prime);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::MaxStepsExceeded) throw;
    construction_failed(std::string(error_code_name(e.code())) + ": " + e.what());
  }
  check_postconditions(pair, P, N);
  return pair;
}

Partition shift_window_partition(Index a, Index b, Index N) {
  const SystemSpec spec = SystemSpec::compactified_shift();
  const Index b_eff = std::max(b, a + N + 2);
  std::vector<ClopenSet> out;
  std::vector<Index> middle;
  for (Index x = a + N; x < b_eff; ++x) middle.push_back(x);
  out.push_back(ClopenSet::shift(spec, middle, true));
  for (Index x : middle) out.push_back(ClopenSet::shift(spec, {x}, false));
  return Partition(std::move(out));
}

Partition product_window_partition(const SystemSpec& spec, Index a, Index b, Index level) {
  if (spec.family() != Family::QuotientProduct || b < a || level < 1) {
    throw Error(ErrorCode::PreconditionFailed, "product window partition needs a quotient product, a <= b and level >= 1");
  }
  const Partition fiber = generating_partition(spec.fiber(), level);
  std::vector<ClopenSet> out;
  for (Index k = a; k <= b; ++k) {
    for (const auto& e : fiber) out.push_back(ClopenSet::fiber_slice(spec, k, e));
  }
  std::vector<ClopenSet> empties(static_cast<std::size_t>(b - a + 1), ClopenSet::empty(spec.fiber()));
  out.push_back(ClopenSet::product(spec, a, std::move(empties), true));
  return Partition(std::move(out));
}

}  // namespace zdsys
