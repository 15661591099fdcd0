#include <algorithm>

#include "zdsys/towers.hpp"

namespace zdsys {

ReturnDecomposition first_return_decomposition(const ClopenSet& U, Index max_steps) {
  if (is_empty(U)) throw Error(ErrorCode::InvalidSystem, "first return decomposition of an empty set");
  ReturnDecomposition out{U, {}};
  ClopenSet remaining = U;
  for (Index j = 1; j <= max_steps; ++j) {
    ClopenSet Y = intersect(remaining, apply_h(U, -j));
    if (!is_empty(Y)) {
      remaining = difference(remaining, Y);
      out.classes.push_back({std::move(Y), j});
      if (is_empty(remaining)) return out;
    }
  }
  throw Error(ErrorCode::MaxStepsExceeded,
              "points of " + remaining.to_string() + " do not return to the base within " +
                  std::to_string(max_steps) + " steps");
}

bool ValidationReport::ok() const {
  return std::all_of(conditions.begin(), conditions.end(), [](const auto& c) { return c.pass; });
}

const ConditionResult& ValidationReport::at(const std::string& condition) const {
  for (const auto& c : conditions) {
    if (c.condition == condition) return c;
  }
  throw Error(ErrorCode::InvalidSystem, "no condition '" + condition + "' in report");
}

namespace {

// First overlap or gap when the sets are meant to partition `whole`.
std::optional<std::pair<ClopenSet, std::string>> partition_defect(const std::vector<ClopenSet>& sets,
                                                                  const ClopenSet& whole) {
  ClopenSet covered = ClopenSet::empty(whole.spec());
  for (std::size_t i = 0; i < sets.size(); ++i) {
    if (is_empty(sets[i])) return std::make_pair(sets[i], "element " + std::to_string(i) + " is empty");
    ClopenSet overlap = intersect(covered, sets[i]);
    if (!is_empty(overlap)) {
      return std::make_pair(overlap, "element " + std::to_string(i) + " overlaps earlier elements");
    }
    covered = set_union(covered, sets[i]);
  }
  if (!(covered == whole)) {
    ClopenSet outside = difference(covered, whole);
    if (!is_empty(outside)) return std::make_pair(outside, "elements leave the target set");
    return std::make_pair(difference(whole, covered), "target set not covered");
  }
  return std::nullopt;
}

std::vector<ClopenSet> p1_sets(const ReturnSystem& S, Index shift) {
  std::vector<ClopenSet> out;
  for (const auto& towers : S.towers) {
    for (const auto& c : towers) {
      for (Index j = 0; j < c.J; ++j) out.push_back(apply_h(c.Y, j + shift));
    }
  }
  return out;
}

ConditionResult fail(const std::string& cond, std::optional<ClopenSet> witness, std::string detail) {
  return {cond, false, std::move(witness), std::move(detail)};
}

}  // namespace

ValidationReport validate_system(const ReturnSystem& S, const Partition& P) {
  ValidationReport report;
  const SystemSpec& spec = P.spec();

  // (a)
  if (S.T() == 0) {
    report.conditions.push_back(fail("a", std::nullopt, "T must be positive"));
  } else if (S.towers.size() != S.T()) {
    report.conditions.push_back(fail("a", std::nullopt, "tower lists do not match the bases"));
  } else {
    report.conditions.push_back({"a", true, std::nullopt, ""});
  }
  const std::size_t T = std::min(S.T(), S.towers.size());

  // (b)
  ConditionResult b{"b", true, std::nullopt, ""};
  for (std::size_t t = 0; t < S.T() && b.pass; ++t) {
    const auto& X = S.bases[t];
    if (!(X.spec() == spec)) {
      b = fail("b", std::nullopt, "base " + std::to_string(t + 1) + " belongs to another system");
    } else if (is_empty(X)) {
      b = fail("b", X, "base " + std::to_string(t + 1) + " is empty");
    } else if (!P.block_containing(X)) {
      b = fail("b", X, "base " + std::to_string(t + 1) + " is not contained in an element of P");
    }
  }
  report.conditions.push_back(b);

  // (c)
  ConditionResult c{"c", true, std::nullopt, ""};
  for (std::size_t t = 0; t < T && c.pass; ++t) {
    if (S.towers[t].empty()) c = fail("c", S.bases[t], "K_" + std::to_string(t + 1) + " is zero");
  }
  report.conditions.push_back(c);

  // (d)
  ConditionResult d{"d", true, std::nullopt, ""};
  for (std::size_t t = 0; t < T && d.pass; ++t) {
    std::vector<ClopenSet> ys;
    for (const auto& cl : S.towers[t]) ys.push_back(cl.Y);
    if (ys.empty()) continue;
    if (auto defect = partition_defect(ys, S.bases[t])) {
      d = fail("d", defect->first, "Y_{" + std::to_string(t + 1) + ",k}: " + defect->second);
    }
  }
  report.conditions.push_back(d);

  // (e)
  ConditionResult e{"e", true, std::nullopt, ""};
  for (std::size_t t = 0; t < T && e.pass; ++t) {
    const auto& X = S.bases[t];
    std::vector<ClopenSet> images;
    for (std::size_t k = 0; k < S.towers[t].size() && e.pass; ++k) {
      const auto& cl = S.towers[t][k];
      const std::string name = "(" + std::to_string(t + 1) + "," + std::to_string(k + 1) + ")";
      if (cl.J <= 0) {
        e = fail("e", cl.Y, "J" + name + " must be positive");
        break;
      }
      const ClopenSet image = apply_h(cl.Y, cl.J);
      if (!is_subset(image, X)) {
        e = fail("e", image, "h^J(Y" + name + ") is not inside X_" + std::to_string(t + 1));
        break;
      }
      for (Index j = 1; j < cl.J; ++j) {
        ClopenSet early = intersect(apply_h(cl.Y, j), X);
        if (!is_empty(early)) {
          e = fail("e", early, "Y" + name + " returns at step " + std::to_string(j) + " before J");
          break;
        }
      }
      images.push_back(image);
    }
    if (e.pass && !images.empty()) {
      if (auto defect = partition_defect(images, X)) {
        e = fail("e", defect->first, "{h^J(Y_{" + std::to_string(t + 1) + ",k})}: " + defect->second);
      }
    }
  }
  report.conditions.push_back(e);

  // (f), which also certifies the orbit saturation of the bases.
  ConditionResult f{"f", true, std::nullopt, ""};
  bool js_positive = true;
  for (std::size_t t = 0; t < T; ++t) {
    for (const auto& cl : S.towers[t]) js_positive = js_positive && cl.J > 0 && cl.Y.spec() == spec;
  }
  if (!js_positive) {
    f = fail("f", std::nullopt, "tower data malformed");
  } else if (auto defect = partition_defect(p1_sets(S, 0), ClopenSet::whole(spec))) {
    f = fail("f", defect->first, "P1(S): " + defect->second);
  }
  report.conditions.push_back(f);
  return report;
}

ReturnSystem build_from_bases(const std::vector<ClopenSet>& bases, const Partition& P,
                              Index max_steps) {
  if (bases.empty()) throw Error(ErrorCode::InvalidSystem, "no bases given");
  ClopenSet seen = ClopenSet::empty(P.spec());
  for (const auto& X : bases) {
    if (!(X.spec() == P.spec())) throw Error(ErrorCode::MixedSystems, "base from another system");
    if (!P.block_containing(X)) {
      throw Error(ErrorCode::NotSubordinate, "base " + X.to_string() + " straddles elements of P");
    }
    if (!disjoint(seen, X)) throw Error(ErrorCode::InvalidSystem, "bases are not pairwise disjoint");
    seen = set_union(seen, X);
  }
  ReturnSystem S;
  for (const auto& X : bases) {
    S.bases.push_back(X);
    S.towers.push_back(first_return_decomposition(X, max_steps).classes);
  }
  if (auto defect = partition_defect(p1_sets(S, 0), ClopenSet::whole(P.spec()))) {
    throw Error(ErrorCode::SaturationFailure, "towers do not partition X (" + defect->second +
                                                  "): " + defect->first.to_string());
  }
  return S;
}

std::pair<Partition, Partition> tower_partitions(const ReturnSystem& S) {
  try {
    return {Partition(p1_sets(S, 0)), Partition(p1_sets(S, 1))};
  } catch (const Error& e) {
    throw Error(ErrorCode::InvalidSystem, std::string("tower partitions: ") + e.what());
  }
}

ReturnSystem refine_system(const ReturnSystem& S, const Partition& target) {
  if (S.T() == 0) throw Error(ErrorCode::InvalidSystem, "system without bases");
  tower_partitions(S);
  if (!(S.spec() == target.spec())) {
    throw Error(ErrorCode::MixedSystems, "target partition from another system");
  }
  ReturnSystem out;
  out.bases = S.bases;
  for (const auto& towers : S.towers) {
    std::vector<ReturnClass> refined;
    for (const auto& cl : towers) {
      std::vector<ClopenSet> pieces{cl.Y};
      for (Index j = 0; j <= cl.J; ++j) {
        std::vector<ClopenSet> next;
        for (const auto& piece : pieces) {
          const ClopenSet image = apply_h(piece, j);
          if (target.block_containing(image)) {
            next.push_back(piece);
            continue;
          }
          for (const auto& U : target) {
            ClopenSet part = intersect(image, U);
            if (!is_empty(part)) next.push_back(apply_h(part, -j));
          }
        }
        pieces = std::move(next);
      }
      for (auto& piece : pieces) refined.push_back({std::move(piece), cl.J});
    }
    std::stable_sort(refined.begin(), refined.end(), [](const ReturnClass& a, const ReturnClass& b) {
      if (a.J != b.J) return a.J < b.J;
      return a.Y < b.Y;
    });
    out.towers.push_back(std::move(refined));
  }
  return out;
}

bool finer_system_criterion(const ReturnSystem& coarse, const ReturnSystem& fine) {
  const SystemSpec& spec = coarse.spec();
  ClopenSet a = ClopenSet::empty(spec);
  ClopenSet b = ClopenSet::empty(spec);
  for (const auto& X : coarse.bases) a = set_union(a, X);
  for (const auto& X : fine.bases) b = set_union(b, X);
  if (!(a == b)) throw Error(ErrorCode::BaseMismatch, "the two systems have different base unions");
  for (const auto& towers : fine.towers) {
    for (const auto& fc : towers) {
      bool inside = false;
      for (const auto& ct : coarse.towers) {
        for (const auto& cc : ct) {
          if (is_subset(fc.Y, cc.Y)) {
            inside = true;
            break;
          }
        }
        if (inside) break;
      }
      if (!inside) return false;
    }
  }
  return true;
}

ReturnStats min_return_stats(const ReturnSystem& S) {
  ReturnStats stats{kNoSecondClass, kNoSecondClass};
  for (const auto& towers : S.towers) {
    for (std::size_t k = 0; k < towers.size(); ++k) {
      stats.min_all = std::min(stats.min_all, towers[k].J);
      if (k >= 1) stats.min_k_ge_2 = std::min(stats.min_k_ge_2, towers[k].J);
    }
  }
  return stats;
}

namespace {

Index set_scale(const ClopenSet& a) {
  const SystemSpec& spec = a.spec();
  switch (spec.family()) {
    case Family::FiniteCycle: return spec.period();
    case Family::Odometer: {
      Index scale = 1;
      const auto depth = std::get<ClopenSet::Odometer>(a.form()).trie.depth();
      for (std::size_t i = 0; i < depth && scale < (Index{1} << 40); ++i) scale *= spec.base();
      return scale;
    }
    case Family::CompactifiedShift:
    case Family::TwoPointShift: {
      const auto& ex = std::holds_alternative<ClopenSet::Shift>(a.form())
                           ? std::get<ClopenSet::Shift>(a.form()).exceptions
                           : std::get<ClopenSet::TwoPoint>(a.form()).exceptions;
      Index scale = 1;
      for (Index v : ex) scale = std::max(scale, (v < 0 ? -v : v) + 1);
      return 2 * scale;
    }
    case Family::QuotientProduct: {
      const auto& p = std::get<ClopenSet::Product>(a.form());
      Index scale = 1;
      for (const auto& s : p.slices) scale = std::max(scale, set_scale(s));
      return scale;
    }
  }
  return 1;
}

}  // namespace

Index default_max_steps(const Partition& P) {
  Index scale = 1;
  for (const auto& U : P) scale = std::max(scale, set_scale(U));
  return 10 * scale + 64;
}

using nlohmann::json;

json to_json(const ReturnSystem& S) {
  json bases = json::array();
  for (const auto& X : S.bases) bases.push_back(to_json(X));
  json towers = json::array();
  for (const auto& t : S.towers) {
    json list = json::array();
    for (const auto& c : t) list.push_back(json{{"Y", to_json(c.Y)}, {"J", c.J}});
    towers.push_back(list);
  }
  return json{{"bases", bases}, {"towers", towers}};
}

ReturnSystem system_from_json(const SystemSpec& spec, const json& j) {
  try {
    ReturnSystem S;
    for (const auto& X : j.at("bases")) S.bases.push_back(clopen_from_json(spec, X));
    for (const auto& t : j.at("towers")) {
      std::vector<ReturnClass> list;
      for (const auto& c : t) list.push_back({clopen_from_json(spec, c.at("Y")), c.at("J").get<Index>()});
      S.towers.push_back(std::move(list));
    }
    return S;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidSpec, std::string("return system JSON: ") + e.what());
  }
}

json to_json(const ValidationReport& r) {
  json conditions = json::array();
  for (const auto& c : r.conditions) {
    conditions.push_back(json{{"condition", c.condition},
                              {"pass", c.pass},
                              {"witness", c.witness ? to_json(*c.witness) : json(nullptr)},
                              {"detail", c.detail}});
  }
  return json{{"ok", r.ok()}, {"conditions", conditions}};
}

json to_json(const FiberwiseReport& r) {
  json z = json::array();
  for (const auto& p : r.z_witnesses) z.push_back(to_json(p));
  json failure = nullptr;
  if (r.failure_witness) {
    failure = json{{"level", r.failure_witness->level},
                   {"set", to_json(r.failure_witness->set)},
                   {"reason", r.failure_witness->reason}};
  }
  return json{{"verdict", r.verdict},
              {"depth", r.depth},
              {"z_witnesses", z},
              {"z_is_depth_truncated", true},
              {"failure_witness", failure}};
}

}  // namespace zdsys
