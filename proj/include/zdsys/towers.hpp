#pragma once

// Kakutani-Rokhlin style tower systems: first return decompositions, systems
// of finite first return time maps, their validation and refinement, the
// fiberwise essential minimality gate and the adapted pairs used downstream.

#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "zdsys/space.hpp"

namespace zdsys {

struct ReturnClass {
  ClopenSet Y;
  Index J;
  bool operator==(const ReturnClass&) const = default;
};

/// lambda_U restricted to its level sets.
struct ReturnDecomposition {
  ClopenSet base;
  std::vector<ReturnClass> classes;  // increasing J
};

ReturnDecomposition first_return_decomposition(const ClopenSet& U, Index max_steps);

/// S = (T, X_t, K_t, Y_{t,k}, J_{t,k}); towers[t][k] holds (Y_{t,k}, J_{t,k}).
struct ReturnSystem {
  std::vector<ClopenSet> bases;
  std::vector<std::vector<ReturnClass>> towers;

  std::size_t T() const noexcept { return bases.size(); }
  std::size_t K(std::size_t t) const { return towers.at(t).size(); }
  const SystemSpec& spec() const { return bases.front().spec(); }
  bool operator==(const ReturnSystem&) const = default;
};

struct ConditionResult {
  std::string condition;  // "a" .. "f"
  bool pass = true;
  std::optional<ClopenSet> witness;
  std::string detail;
};

struct ValidationReport {
  std::vector<ConditionResult> conditions;

  bool ok() const;
  const ConditionResult& at(const std::string& condition) const;
};

/// Checks every condition independently; never throws on an invalid system.
ValidationReport validate_system(const ReturnSystem& S, const Partition& P);

/// One tower list per base from the first return decomposition.
ReturnSystem build_from_bases(const std::vector<ClopenSet>& bases, const Partition& P,
                              Index max_steps);

/// (P1(S), P2(S)), each ordered by (t, k, j).
std::pair<Partition, Partition> tower_partitions(const ReturnSystem& S);

/// Same bases; every Y split so that h^j(Y) for 0 <= j <= J sits inside one
/// element of target. Towers within a base are sorted by (J, canonical order).
ReturnSystem refine_system(const ReturnSystem& S, const Partition& target);

/// True when every Y' of fine lies inside some Y of coarse. Equivalent to
/// P1(fine) finer than P1(coarse) when the base unions agree; throws
/// BaseMismatch otherwise.
bool finer_system_criterion(const ReturnSystem& coarse, const ReturnSystem& fine);

struct FiberwiseReport {
  bool verdict = false;
  Index depth = 0;
  std::vector<Point> z_witnesses;  // depth-truncated approximation of Z
  struct Failure {
    Index level;
    ClopenSet set;
    std::string reason;
  };
  std::optional<Failure> failure_witness;
};

/// The per-family bases used at generating level n: one base per fiber block
/// meeting the fiber minimal sets.
std::vector<ClopenSet> fiberwise_bases(const SystemSpec& spec, Index n);

FiberwiseReport check_fiberwise(const SystemSpec& spec, Index depth, Index max_steps);

/// S^(1), ..., S^(depth) with nested bases, each subordinate to and finer
/// than generating_partition(n).
std::vector<ReturnSystem> nested_systems(const SystemSpec& spec, Index depth, Index max_steps);

struct AdaptedPair {
  ReturnSystem S;
  ReturnSystem S_prime;
};

/// An adapted pair (S, S') for P and N; every postcondition is asserted before
/// returning, and a violation throws ConstructionFailed naming it.
AdaptedPair adapted_system_pair(const SystemSpec& spec, const Partition& P, Index N, Index max_steps);

/// The partition used for the integer-shift worked example: the block of
/// infinity is {inf} u (-inf, a+N-1] u [b', inf) and the integers in between
/// are singletons, with b' = max(b, a+N+2). The adapted pair built from it has
/// X_1 = {inf} u (-inf, a] u [b', inf).
Partition shift_window_partition(Index a, Index b, Index N);

/// Fibers a..b cut by the fiber's generating partition at `level`, plus the
/// block of the collapsed point carrying every other fiber.
Partition product_window_partition(const SystemSpec& spec, Index a, Index b, Index level);

inline constexpr Index kNoSecondClass = std::numeric_limits<Index>::max();

struct ReturnStats {
  Index min_all;
  Index min_k_ge_2;  // kNoSecondClass when every base has a single class
};

ReturnStats min_return_stats(const ReturnSystem& S);

/// 10 * (largest window or level appearing in P) + 64.
Index default_max_steps(const Partition& P);

nlohmann::json to_json(const ReturnSystem& S);
ReturnSystem system_from_json(const SystemSpec& spec, const nlohmann::json& j);
nlohmann::json to_json(const ValidationReport& r);
nlohmann::json to_json(const FiberwiseReport& r);

}  // namespace zdsys
