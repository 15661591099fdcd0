#include "zdsys/commands.hpp"

#include <algorithm>
#include <exception>
#include <numbers>
#include <random>
#include <sstream>

#include "zdsys/ktheory.hpp"

namespace zdsys::cli {

using nlohmann::json;

namespace {

[[noreturn]] void bad_spec(const std::string& what) { throw Error(ErrorCode::InvalidSpec, what); }

Index int_field(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number_integer()) bad_spec(std::string("partition needs integer '") + key + "'");
  return j.at(key).get<Index>();
}

// The partition a spec file asks for at a given level. Without a "partition"
// entry the generating sequence is used.
Partition partition_at(const SystemSpec& spec, const json& file, Index level, Index N) {
  if (!file.contains("partition")) return generating_partition(spec, level);
  const json& p = file.at("partition");
  const std::string kind = p.value("kind", "generating");
  if (kind == "generating") return generating_partition(spec, level);
  if (kind == "trivial") return Partition({ClopenSet::whole(spec)});
  if (kind == "shift_window") {
    if (spec.family() != Family::CompactifiedShift) bad_spec("shift_window needs the compactified shift");
    return shift_window_partition(int_field(p, "a"), int_field(p, "b"), N);
  }
  if (kind == "product_window") return product_window_partition(spec, int_field(p, "a"), int_field(p, "b"), level);
  if (kind == "explicit") {
    if (!p.contains("sets")) bad_spec("explicit partition needs 'sets'");
    return partition_from_json(spec, p.at("sets"));
  }
  bad_spec("unknown partition kind '" + kind + "'");
}

Index steps_for(const RunConfig& c, const Partition& P) { return c.max_steps ? *c.max_steps : default_max_steps(P); }

// Level indices 1..depth, shuffled when a seed is given. Only the order of
// evaluation changes; results are stored by level.
std::vector<Index> evaluation_order(const RunConfig& c) {
  std::vector<Index> order;
  for (Index n = 1; n <= c.depth; ++n) order.push_back(n);
  if (c.seed) {
    std::mt19937_64 rng(*c.seed);
    std::shuffle(order.begin(), order.end(), rng);
  }
  return order;
}

// Runs body(n) for every level in evaluation order; the error reported is
// that of the lowest failing level, whatever the order.
template <class Body>
void for_each_level(const RunConfig& c, Body body) {
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(c.depth));
  for (Index n : evaluation_order(c)) {
    try {
      body(n);
    } catch (...) {
      errors[static_cast<std::size_t>(n - 1)] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::string describe(const ATDescriptor& d) {
  std::ostringstream out;
  bool first = true;
  for (const auto& b : d.blocks) {
    out << (first ? "" : " + ") << (b.circle == 1 ? "C(S^1)" : "C(S^1)xM_" + std::to_string(b.circle));
    for (Index m : b.matrices) out << " + M_" << m;
    first = false;
  }
  return out.str();
}

// Bratteli multiplicities of the towers of `fine` through the bases of the
// towers of `coarse`. Rows follow fine towers in (t, k) order, columns coarse.
json inclusion(const ReturnSystem& coarse, const ReturnSystem& fine) {
  struct Lvl {
    std::size_t tower;
    Index i;
    ClopenSet set;
  };
  std::vector<Lvl> levels;
  std::size_t columns = 0;
  for (const auto& base : coarse.towers) {
    for (const auto& [Y, J] : base) {
      for (Index i = 0; i < J; ++i) levels.push_back({columns, i, apply_h(Y, i)});
      ++columns;
    }
  }
  json rows = json::array();
  bool nested = true;
  for (const auto& base : fine.towers) {
    for (const auto& [Y, J] : base) {
      std::vector<Index> row(columns, 0);
      for (Index j = 0; j < J && nested; ++j) {
        const ClopenSet L = apply_h(Y, j);
        const auto hit = std::find_if(levels.begin(), levels.end(), [&](const Lvl& l) { return is_subset(L, l.set); });
        if (hit == levels.end()) nested = false;
        else if (hit->i == 0) ++row[hit->tower];
      }
      rows.push_back(row);
    }
  }
  return {{"nested", nested}, {"multiplicities", nested ? rows : json(nullptr)}};
}

Outcome cmd_tower(const RunConfig& c, const SystemSpec& spec, const json& file) {
  std::vector<ClopenSet> bases;
  if (c.base) {
    bases.push_back(clopen_from_json(spec, json::parse(*c.base)));
  } else if (file.contains("base")) {
    bases.push_back(clopen_from_json(spec, file.at("base")));
  } else if (file.contains("bases")) {
    for (const auto& b : file.at("bases")) bases.push_back(clopen_from_json(spec, b));
  } else {
    bases = fiberwise_bases(spec, c.depth);
  }
  const Partition P = file.contains("partition") ? partition_at(spec, file, c.depth, c.N)
                                                 : Partition({ClopenSet::whole(spec)});
  const ReturnSystem S = build_from_bases(bases, P, steps_for(c, P));
  const ValidationReport v = validate_system(S, P);

  json K = json::array();
  std::vector<Index> times;
  for (const auto& base : S.towers) {
    K.push_back(base.size());
    for (const auto& cls : base) times.push_back(cls.J);
  }
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());

  json result = {{"system", to_json(S)}, {"validation", to_json(v)}, {"valid", v.ok()},
                 {"T", S.T()},           {"K", K},                   {"return_times", times}};
  if (v.ok()) {
    const auto parts = tower_partitions(S);
    const auto stats = min_return_stats(S);
    result["P1"] = to_json(parts.first);
    result["P1_size"] = parts.first.size();
    result["min_return"] = {{"all", stats.min_all},
                            {"k_ge_2", stats.min_k_ge_2 == kNoSecondClass ? json(nullptr) : json(stats.min_k_ge_2)}};
  }
  return {result, v.ok() ? 0 : 1};
}

Outcome cmd_fiberwise(const RunConfig& c, const SystemSpec& spec) {
  const Index steps = c.max_steps ? *c.max_steps : default_max_steps(generating_partition(spec, c.depth));
  const FiberwiseReport r = check_fiberwise(spec, c.depth, steps);
  return {to_json(r), r.verdict ? 0 : 1};
}

Outcome cmd_approximant(const RunConfig& c, const SystemSpec& spec, const json& file) {
  std::vector<std::optional<AdaptedPair>> pairs(static_cast<std::size_t>(c.depth));
  for_each_level(c, [&](Index n) {
    const Partition P = partition_at(spec, file, n, c.N);
    pairs[static_cast<std::size_t>(n - 1)] = adapted_system_pair(spec, P, c.N, steps_for(c, P));
  });
  json levels = json::array();
  json inclusions = json::array();
  for (Index n = 1; n <= c.depth; ++n) {
    const AdaptedPair& pair = *pairs[static_cast<std::size_t>(n - 1)];
    const ATDescriptor d = approximant(pair.S, pair.S_prime);
    levels.push_back({{"level", n}, {"T", pair.S.T()}, {"descriptor", to_json(d)}, {"algebra", describe(d)}});
    if (n > 1) {
      json inc = inclusion(pairs[static_cast<std::size_t>(n - 2)]->S, pair.S);
      inc["from"] = n - 1;
      inc["to"] = n;
      inclusions.push_back(std::move(inc));
    }
  }
  return {{{"N", c.N}, {"levels", levels}, {"inclusions", inclusions}}, 0};
}

Outcome cmd_ktheory(const RunConfig& c, const SystemSpec& spec) {
  std::vector<std::optional<K0Level>> used(static_cast<std::size_t>(c.depth));
  std::vector<json> rows(static_cast<std::size_t>(c.depth));
  for_each_level(c, [&](Index n) {
    K0Level level = k0_level(spec, n);
    bool refined = false;
    // alpha_* may leave the level; its common refinement with h(P) is tried next.
    for (int attempt = 0;; ++attempt) {
      try {
        json row = to_json(pv_level(level));
        row["partition_size"] = level.rank();
        row["refined"] = refined;
        rows[static_cast<std::size_t>(n - 1)] = std::move(row);
        break;
      } catch (const NeedsRefinementError& e) {
        if (attempt >= 8) throw;
        level = e.finer();
        refined = true;
      }
    }
    used[static_cast<std::size_t>(n - 1)] = std::move(level);
  });
  json maps = json::array();
  for (Index n = 2; n <= c.depth; ++n) {
    json m = {{"from", n - 1}, {"to", n}};
    try {
      m["matrix"] = to_json(connecting_map(*used[static_cast<std::size_t>(n - 2)], *used[static_cast<std::size_t>(n - 1)]));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NotFiner) throw;
      m["matrix"] = nullptr;
    }
    maps.push_back(std::move(m));
  }
  return {{{"levels", rows}, {"connecting_maps", maps}}, 0};
}

Outcome cmd_berg(const RunConfig& c, const SystemSpec& spec, const json& file) {
  const double eps = c.epsilon ? *c.epsilon : std::numbers::pi / static_cast<double>(c.N) + 0.01;
  const Partition P = partition_at(spec, file, c.depth, c.N);
  const BergReport r = berg_verify(spec, P, c.N, eps, steps_for(c, P), c.tolerances);
  json result = to_json(r);
  result["bound"] = std::numbers::pi / static_cast<double>(c.N);
  return {result, r.pass ? 0 : 1};
}

Outcome cmd_identities(const RunConfig& c, const SystemSpec& spec, const json& file) {
  const Partition P = partition_at(spec, file, c.depth, c.N);
  const AdaptedPair pair = adapted_system_pair(spec, P, c.N, steps_for(c, P));
  const SuiteReport r = identity_suite(pair.S, pair.S_prime);
  return {to_json(r), r.all_pass() ? 0 : 1};
}

}  // namespace

Outcome run_command(const RunConfig& c, const json& file) {
  if (c.depth < 1) throw Error(ErrorCode::PreconditionFailed, "depth must be at least 1");
  if (c.N < 1) throw Error(ErrorCode::PreconditionFailed, "N must be at least 1");
  const SystemSpec spec = spec_from_json(file.contains("system") ? file.at("system") : file);
  if (c.command == "tower") return cmd_tower(c, spec, file);
  if (c.command == "fiberwise") return cmd_fiberwise(c, spec);
  if (c.command == "approximant") return cmd_approximant(c, spec, file);
  if (c.command == "ktheory") return cmd_ktheory(c, spec);
  if (c.command == "berg") {
    if (c.epsilon && !(*c.epsilon > std::numbers::pi / static_cast<double>(c.N))) {
      throw Error(ErrorCode::PreconditionFailed, "berg needs epsilon > pi / N");
    }
    return cmd_berg(c, spec, file);
  }
  if (c.command == "identities") return cmd_identities(c, spec, file);
  throw Error(ErrorCode::PreconditionFailed, "unknown command '" + c.command + "'");
}

json report(const RunConfig& c, const json& file, const Outcome& outcome) {
  json config = {{"spec", file},
                 {"depth", c.depth},
                 {"N", c.N},
                 {"epsilon", c.epsilon ? json(*c.epsilon) : json(nullptr)},
                 {"max_steps", c.max_steps ? json(*c.max_steps) : json(nullptr)},
                 {"tolerances",
                  {{"identity", c.tolerances.identity}, {"bound", c.tolerances.bound}, {"norm", c.tolerances.norm}}}};
  return {{"schema_version", kSchemaVersion},
          {"command", c.command},
          {"config", config},
          {"exit_code", outcome.exit_code},
          {"result", outcome.result}};
}

json error_report(const std::string& command, const std::string& code, const std::string& message) {
  return {{"schema_version", kSchemaVersion},
          {"command", command},
          {"exit_code", 2},
          {"error", {{"code", code}, {"message", message}}}};
}

}  // namespace zdsys::cli
