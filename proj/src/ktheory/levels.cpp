#include "zdsys/ktheory.hpp"

namespace zdsys {

K0Level k0_level(const SystemSpec& spec, Index n) { return {generating_partition(spec, n), n}; }

std::vector<BigInt> k0_class(const ClopenSet& E, const K0Level& level) {
  std::vector<BigInt> v;
  v.reserve(level.rank());
  for (const auto& block : level.partition) {
    const ClopenSet inside = intersect(block, E);
    if (is_empty(inside)) {
      v.emplace_back(0);
    } else if (inside == block) {
      v.emplace_back(1);
    } else {
      throw Error(ErrorCode::NotMeasurable, "set " + E.to_string() + " straddles " + block.to_string());
    }
  }
  return v;
}

namespace {

IntMatrix columns_of(const std::vector<ClopenSet>& sets, const K0Level& target) {
  IntMatrix m(target.rank(), sets.size());
  for (std::size_t j = 0; j < sets.size(); ++j) {
    const auto v = k0_class(sets[j], target);
    for (std::size_t i = 0; i < v.size(); ++i) m(i, j) = v[i];
  }
  return m;
}

}  // namespace

AlphaStar alpha_star(const K0Level& level) {
  std::vector<ClopenSet> images;
  bool preserved = true;
  for (const auto& block : level.partition) {
    images.push_back(apply_h(block, 1));
    for (const auto& other : level.partition) {
      const ClopenSet overlap = intersect(other, images.back());
      if (!is_empty(overlap) && !(overlap == other)) preserved = false;
    }
  }
  AlphaStar a;
  if (preserved) {
    a.square = columns_of(images, level);
    return a;
  }
  K0Level finer{common_refinement(level.partition, apply_h(level.partition, 1)), level.level};
  a.inclusion = columns_of(level.partition.elements(), finer);
  a.alpha = columns_of(images, finer);
  a.finer = std::move(finer);
  return a;
}

PVLevel pv_level(const K0Level& level) {
  AlphaStar a = alpha_star(level);
  if (!a.square) {
    throw NeedsRefinementError("h does not map the level onto unions of its elements; refine by h(P) ("
                                   + std::to_string(a.finer->rank()) + " elements)",
                               *a.finer);
  }
  const std::size_t n = level.rank();
  const SNFResult snf = smith_normal_form(IntMatrix::identity(n) - *a.square);
  PVLevel r;
  r.level = level.level;
  const auto factors = snf.invariant_factors();
  r.k1_rank = n - factors.size();
  r.k0_rank = n - factors.size();
  for (const auto& d : factors) {
    if (d > 1) r.k0_torsion.push_back(d);
  }
  return r;
}

IntMatrix connecting_map(const K0Level& coarse, const K0Level& fine) {
  if (!is_finer(fine.partition, coarse.partition)) {
    throw Error(ErrorCode::NotFiner, "the second level does not refine the first");
  }
  return columns_of(coarse.partition.elements(), fine);
}

std::vector<BigInt> delta_class(const ClopenSet& E, const K0Level& level) {
  if (!(apply_h(E, 1) == E)) throw Error(ErrorCode::NotInvariant, "set " + E.to_string() + " is not h-invariant");
  return k0_class(E, level);
}

nlohmann::json to_json(const PVLevel& r) {
  auto ints = [](const std::vector<BigInt>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& d : v) a.push_back(d.convert_to<long long>());
    return a;
  };
  return {{"level", r.level},
          {"approximation", "level-" + std::to_string(r.level) + " approximation"},
          {"k1", {{"rank", r.k1_rank}, {"torsion", ints(r.k1_torsion)}}},
          {"k0", {{"rank", r.k0_rank}, {"torsion", ints(r.k0_torsion)}}}};
}

}  // namespace zdsys
