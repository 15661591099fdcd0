#include "zdsys/towers.hpp"

namespace zdsys {

std::vector<ClopenSet> fiberwise_bases(const SystemSpec& spec, Index n) {
  switch (spec.family()) {
    case Family::FiniteCycle:
      return {ClopenSet::cycle(spec, {0})};
    case Family::Odometer:
      return {ClopenSet::cylinder(spec, std::vector<int>(static_cast<std::size_t>(n), 0))};
    case Family::CompactifiedShift: {
      std::vector<Index> window;
      for (Index k = -n; k < n; ++k) window.push_back(k);
      return {ClopenSet::shift(spec, window, true)};
    }
    case Family::TwoPointShift: {
      // Only the block of +inf; nothing can serve both minimal sets.
      std::vector<Index> band;
      for (Index k = 0; k < n; ++k) band.push_back(k);
      return {ClopenSet::two_point(spec, band, false, true)};
    }
    case Family::QuotientProduct: {
      std::vector<ClopenSet> out;
      std::vector<ClopenSet> empties(static_cast<std::size_t>(2 * n), ClopenSet::empty(spec.fiber()));
      out.push_back(ClopenSet::product(spec, -n, std::move(empties), true));
      const auto fiber = fiberwise_bases(spec.fiber(), n);
      for (Index k = -n; k < n; ++k) {
        for (const auto& b : fiber) out.push_back(ClopenSet::fiber_slice(spec, k, b));
      }
      return out;
    }
  }
  return {};
}

namespace {

std::string invariant_sets_note(const SystemSpec& spec) {
  if (spec.family() == Family::TwoPointShift) {
    return "; {+inf} and {-inf} are two disjoint closed invariant sets in one fiber, so the "
           "fiber is not essentially minimal";
  }
  return "";
}

}  // namespace

FiberwiseReport check_fiberwise(const SystemSpec& spec, Index depth, Index max_steps) {
  if (depth < 1) throw Error(ErrorCode::InvalidSpec, "depth must be >= 1");
  FiberwiseReport report;
  report.depth = depth;
  std::vector<ClopenSet> bases;
  for (Index n = 1; n <= depth; ++n) {
    const Partition P = generating_partition(spec, n);
    bases = fiberwise_bases(spec, n);
    ReturnSystem S;
    for (const auto& X : bases) {
      try {
        S.bases.push_back(X);
        S.towers.push_back(first_return_decomposition(X, max_steps).classes);
      } catch (const Error& e) {
        report.failure_witness = FiberwiseReport::Failure{
            n, X, std::string(error_code_name(e.code())) + ": " + e.what() + invariant_sets_note(spec)};
        return report;
      }
    }
    const ValidationReport v = validate_system(S, P);
    for (const auto& c : v.conditions) {
      if (c.pass) continue;
      std::string reason = "condition (" + c.condition + ") fails: " + c.detail;
      if (c.condition == "f") reason = "SaturationFailure: the towers over the bases miss part of X";
      reason += invariant_sets_note(spec);
      report.failure_witness = FiberwiseReport::Failure{
          n, c.witness.value_or(ClopenSet::whole(spec)), reason};
      return report;
    }
  }
  for (const auto& X : bases) {
    if (auto p = minimal_point_in(X)) report.z_witnesses.push_back(*p);
  }
  report.verdict = true;
  return report;
}

std::vector<ReturnSystem> nested_systems(const SystemSpec& spec, Index depth, Index max_steps) {
  if (depth < 1) throw Error(ErrorCode::InvalidSpec, "depth must be >= 1");
  std::vector<ReturnSystem> out;
  for (Index n = 1; n <= depth; ++n) {
    const Partition P = generating_partition(spec, n);
    ReturnSystem S = build_from_bases(fiberwise_bases(spec, n), P, max_steps);
    const auto parts = tower_partitions(S);
    if (!is_finer(parts.first, P) || !is_finer(parts.second, P)) S = refine_system(S, P);
    if (!out.empty()) {
      for (const auto& X : S.bases) {
        bool nested = false;
        for (const auto& Xp : out.back().bases) nested = nested || is_subset(X, Xp);
        if (!nested) {
          throw Error(ErrorCode::ConstructionFailed,
                      "level " + std::to_string(n) + " base " + X.to_string() + " is not nested");
        }
      }
    }
    out.push_back(std::move(S));
  }
  return out;
}

}  // namespace zdsys
