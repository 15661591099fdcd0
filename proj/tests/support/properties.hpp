#pragma once

// Randomized suites shared by the unit tests and the acceptance binary:
// single-field corruptions of valid systems (every one must be rejected by
// validate_system) and randomized refine_system calls checked against their
// postconditions and the finer-partition equivalences.

#include <sstream>
#include <string>

#include "support/systems.hpp"

namespace zdsys::testing {

/// A nonempty proper clopen subset of E cut out by a generating partition.
inline std::optional<ClopenSet> proper_piece(const ClopenSet& E, std::mt19937& rng) {
  if (is_empty(E)) return std::nullopt;
  for (Index n = 1; n <= 8; ++n) {
    std::vector<ClopenSet> pieces;
    for (const auto& U : generating_partition(E.spec(), n)) {
      ClopenSet p = intersect(E, U);
      if (!is_empty(p)) pieces.push_back(std::move(p));
    }
    if (pieces.size() >= 2) return pieces[static_cast<std::size_t>(uniform(rng, 0, static_cast<Index>(pieces.size()) - 1))];
  }
  return std::nullopt;
}

struct Subject {
  ReturnSystem S;
  Partition P;
  std::string label;
};

/// Valid systems over every family that admits one.
inline std::vector<Subject> mutation_subjects(std::mt19937& rng) {
  std::vector<Subject> out;
  const auto shift = SystemSpec::compactified_shift();
  const Partition whole_shift({ClopenSet::whole(shift)});
  out.push_back({build_from_bases({shift_base(0, 7)}, whole_shift, 100), whole_shift, "shift base (0,7)"});
  const auto two = SystemSpec::two_point_shift();
  const Partition whole_two({ClopenSet::whole(two)});
  out.push_back({build_from_bases({ClopenSet::two_point(two, {0, 1, 2}, true, true)}, whole_two, 100), whole_two,
                 "two-point base"});
  const std::vector<SystemSpec> specs{SystemSpec::finite_cycle(6), SystemSpec::odometer(2), SystemSpec::odometer(3),
                                      shift, SystemSpec::quotient_product(SystemSpec::odometer(2)),
                                      SystemSpec::quotient_product(shift)};
  for (const auto& spec : specs) {
    for (int i = 0; i < 2; ++i) {
      const auto P = random_coarsening(generating_partition(spec, uniform(rng, 1, 2)),
                                       static_cast<std::size_t>(uniform(rng, 1, 5)), rng);
      const auto pair = adapted_system_pair(spec, P, uniform(rng, 1, 3), 2000);
      out.push_back({i == 0 ? pair.S : pair.S_prime, P, std::string(family_name(spec.family()))});
    }
  }
  return out;
}

inline const std::vector<std::string>& mutation_kinds() {
  static const std::vector<std::string> kinds{"J+1",       "J-1",        "Y shrink",   "Y grow",  "base shrink",
                                              "base grow", "drop class", "duplicate class", "swap Y"};
  return kinds;
}

/// One corruption of the given kind, or nullopt when it does not apply.
inline std::optional<ReturnSystem> mutate(const ReturnSystem& S, std::size_t kind, std::mt19937& rng) {
  ReturnSystem M = S;
  const auto t = static_cast<std::size_t>(uniform(rng, 0, static_cast<Index>(S.T()) - 1));
  auto& towers = M.towers[t];
  if (towers.empty()) return std::nullopt;
  const auto k = static_cast<std::size_t>(uniform(rng, 0, static_cast<Index>(towers.size()) - 1));
  auto& cls = towers[k];
  switch (kind) {
    case 0: cls.J += 1; break;
    case 1:
      if (cls.J < 2) return std::nullopt;
      cls.J -= 1;
      break;
    case 2: {
      const auto p = proper_piece(cls.Y, rng);
      cls.Y = p ? difference(cls.Y, *p) : ClopenSet::empty(cls.Y.spec());
      break;
    }
    case 3: {
      const auto p = proper_piece(complement(cls.Y), rng);
      if (!p) return std::nullopt;
      cls.Y = set_union(cls.Y, *p);
      break;
    }
    case 4: {
      const auto p = proper_piece(M.bases[t], rng);
      if (!p) return std::nullopt;
      M.bases[t] = difference(M.bases[t], *p);
      break;
    }
    case 5: {
      const auto p = proper_piece(complement(M.bases[t]), rng);
      if (!p) return std::nullopt;
      M.bases[t] = set_union(M.bases[t], *p);
      break;
    }
    case 6: towers.erase(towers.begin() + static_cast<long>(k)); break;
    case 7: towers.push_back(cls); break;
    case 8: {
      if (towers.size() < 2) return std::nullopt;
      const std::size_t other = (k + 1) % towers.size();
      if (towers[other].Y == cls.Y) return std::nullopt;
      cls.Y = towers[other].Y;
      break;
    }
    default: return std::nullopt;
  }
  if (M == S) return std::nullopt;
  return M;
}

struct MutationStats {
  std::size_t total = 0;
  std::size_t caught = 0;
  std::vector<std::string> missed;
};

inline MutationStats run_mutation_suite(std::size_t count, unsigned seed) {
  std::mt19937 rng(seed);
  const auto subjects = mutation_subjects(rng);
  MutationStats stats;
  std::size_t kind = 0;
  for (std::size_t attempt = 0; stats.total < count && attempt < 100 * count; ++attempt, ++kind) {
    const Subject& s = subjects[static_cast<std::size_t>(uniform(rng, 0, static_cast<Index>(subjects.size()) - 1))];
    if (!validate_system(s.S, s.P).ok()) {
      stats.missed.push_back("subject " + s.label + " is not valid to begin with");
      continue;
    }
    const auto M = mutate(s.S, kind % mutation_kinds().size(), rng);
    if (!M) continue;
    ++stats.total;
    bool rejected = false;
    std::string note;
    try {
      rejected = !validate_system(*M, s.P).ok();
    } catch (const std::exception& e) {
      note = std::string(" (validator threw: ") + e.what() + ")";
    }
    if (rejected) ++stats.caught;
    else stats.missed.push_back(mutation_kinds()[kind % mutation_kinds().size()] + " on " + s.label + note);
  }
  return stats;
}

struct RefineStats {
  std::size_t calls = 0;
  std::vector<std::string> failures;
};

/// Random valid system of the family with the partition it is subordinate to.
inline Subject refine_subject(const SystemSpec& spec, std::mt19937& rng) {
  if (spec.family() == Family::TwoPointShift) {
    std::vector<Index> gap;
    const Index a = uniform(rng, -3, 0), b = uniform(rng, 1, 4);
    for (Index x = a + 1; x < b; ++x) gap.push_back(x);
    const Partition whole({ClopenSet::whole(spec)});
    return {build_from_bases({ClopenSet::two_point(spec, gap, true, true)}, whole, 100), whole, "two-point"};
  }
  const auto P = random_coarsening(generating_partition(spec, uniform(rng, 1, 2)),
                                   static_cast<std::size_t>(uniform(rng, 1, 4)), rng);
  const auto pair = adapted_system_pair(spec, P, uniform(rng, 1, 3), 2000);
  return {coin(rng) ? pair.S : pair.S_prime, P, std::string(family_name(spec.family()))};
}

inline RefineStats run_refine_suite(const SystemSpec& spec, std::size_t calls, unsigned seed) {
  std::mt19937 rng(seed);
  RefineStats stats;
  auto fail = [&](std::size_t call, const std::string& what) {
    std::ostringstream out;
    out << family_name(spec.family()) << " call " << call << ": " << what;
    stats.failures.push_back(out.str());
  };
  for (std::size_t call = 0; call < calls; ++call) {
    const Subject s = refine_subject(spec, rng);
    const auto target = random_coarsening(generating_partition(spec, uniform(rng, 1, 3)),
                                          static_cast<std::size_t>(uniform(rng, 2, 6)), rng);
    ++stats.calls;
    try {
      const ReturnSystem R = refine_system(s.S, target);
      if (R.bases != s.S.bases) fail(call, "bases changed");
      // Bases are kept, so R stays subordinate to the original partition; the
      // target is met by the tower partitions, checked below.
      const auto v = validate_system(R, s.P);
      for (const auto& c : v.conditions) {
        if (!c.pass) fail(call, "refined system fails (" + c.condition + "): " + c.detail);
      }
      for (std::size_t t = 0; t < R.T(); ++t) {
        for (const auto& c : R.towers[t]) {
          const bool inside = std::any_of(s.S.towers[t].begin(), s.S.towers[t].end(), [&](const ReturnClass& o) {
            return o.J == c.J && is_subset(c.Y, o.Y);
          });
          if (!inside) fail(call, "a refined class is not inside a class with the same return time");
        }
      }
      const auto [r1, r2] = tower_partitions(R);
      const auto [s1, s2] = tower_partitions(s.S);
      if (!is_finer(r1, target) || !is_finer(r2, target)) fail(call, "tower partitions are not finer than the target");
      if (!finer_system_criterion(s.S, R)) fail(call, "criterion rejects the refinement");
      // Both directions: the criterion matches P1 refinement, and P1 refinement matches P2 refinement.
      for (const auto& [coarse, fine, c1, f1, c2, f2] :
           {std::tuple{&s.S, &R, &s1, &r1, &s2, &r2}, std::tuple{&R, &s.S, &r1, &s1, &r2, &s2}}) {
        const bool crit = finer_system_criterion(*coarse, *fine);
        const bool p1 = is_finer(*f1, *c1);
        const bool p2 = is_finer(*f2, *c2);
        if (crit != p1) fail(call, "criterion and P1 refinement disagree");
        if (p1 != p2) fail(call, "P1 and P2 refinement disagree");
      }
    } catch (const std::exception& e) {
      fail(call, std::string("threw: ") + e.what());
    }
  }
  return stats;
}

inline std::vector<SystemSpec> refine_families() {
  return {SystemSpec::finite_cycle(6), SystemSpec::odometer(2), SystemSpec::compactified_shift(),
          SystemSpec::two_point_shift(), SystemSpec::quotient_product(SystemSpec::odometer(2))};
}

}  // namespace zdsys::testing
