// Acceptance run: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>

#include <Eigen/SVD>

#include "oracles/snf_oracle.hpp"
#include "support/properties.hpp"
#include "zdsys/ktheory.hpp"
#include "zdsys/numeric.hpp"

using namespace zdsys;
using namespace zdsys::testing;

namespace {

constexpr double kPi = std::numbers::pi;

struct Verdict {
  bool pass = true;
  std::ostringstream note;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) note << "failed: ";
      else note << "; ";
      note << what;
      pass = false;
    }
  }
};

using Clock = std::chrono::steady_clock;

bool run(int id, const char* title, double budget_s, const std::function<void(Verdict&)>& body) {
  Verdict v;
  const auto start = Clock::now();
  try {
    body(v);
  } catch (const std::exception& e) {
    v.require(false, std::string("threw ") + e.what());
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  if (budget_s > 0) v.require(secs < budget_s, "took " + std::to_string(secs) + " s");
  std::printf("criterion %d %s: %s (%.3f s)%s%s\n", id, v.pass ? "PASS" : "FAIL", title, secs,
              v.note.str().empty() ? "" : " - ", v.note.str().c_str());
  std::fflush(stdout);
  return v.pass;
}

ClopenSet single(Index x) { return ClopenSet::shift(SystemSpec::compactified_shift(), {x}, false); }

void tower_reproduction(Verdict& v) {
  const auto spec = SystemSpec::compactified_shift();
  const Partition whole({ClopenSet::whole(spec)});
  const ClopenSet base = ClopenSet::shift(spec, {1, 2, 3, 4, 5, 6}, true);
  const auto S = build_from_bases({base}, whole, 100);
  v.require(validate_system(S, whole).ok(), "system invalid");
  v.require(S.T() == 1 && S.K(0) == 2, "expected T=1, K=2");
  v.require(S.towers[0][0] == ReturnClass{ClopenSet::shift(spec, {0, 1, 2, 3, 4, 5, 6}, true), 1},
            "Y_{1,1} should be {inf} u (-inf,-1] u [7,inf) with J=1");
  v.require(S.towers[0][1] == ReturnClass{single(0), 7}, "Y_{1,2} should be {0} with J=7");
  std::vector<ClopenSet> listing{S.towers[0][0].Y};
  for (Index x = 0; x <= 6; ++x) listing.push_back(single(x));
  v.require(tower_partitions(S).first.elements() == listing, "P1(S) differs from the eight listed sets");
}

void odometer_towers(Verdict& v) {
  const auto bin = SystemSpec::odometer(2);
  const Partition whole({ClopenSet::whole(bin)});
  for (Index L = 1; L <= 6; ++L) {
    const auto S = build_from_bases({ClopenSet::cylinder(bin, std::vector<int>(static_cast<std::size_t>(L), 0))},
                                    whole, 200);
    v.require(S.T() == 1 && S.K(0) == 1 && S.towers[0][0].J == (Index{1} << L),
              "L=" + std::to_string(L) + " is not a single tower of height 2^L");
  }
}

void approximant_dimensions(Verdict& v) {
  auto timed = [&](const std::string& label, const std::function<bool()>& f) {
    const auto start = Clock::now();
    const bool ok = f();
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    v.require(ok, label + " descriptor");
    v.require(secs < 5.0, label + " over 5 s");
  };
  const auto shift = SystemSpec::compactified_shift();
  for (const auto& [a, b] : {std::pair<Index, Index>{0, 5}, {0, 8}, {-3, 4}}) {
    timed("shift (" + std::to_string(a) + "," + std::to_string(b) + ")", [&, a = a, b = b] {
      const auto pair = adapted_system_pair(shift, shift_window_partition(a, b, 2), 2, 1000);
      return approximant(pair.S, pair.S_prime) == ATDescriptor{{{1, {b - a}}}};
    });
  }
  const auto bin = SystemSpec::odometer(2);
  for (Index L = 1; L <= 6; ++L) {
    timed("odometer L=" + std::to_string(L), [&] {
      const auto pair = adapted_system_pair(bin, generating_partition(bin, L), 1, 1000);
      return approximant(pair.S, pair.S_prime) == ATDescriptor{{{Index{1} << L, {}}}};
    });
  }
  const auto qp = SystemSpec::quotient_product(bin);
  for (const auto& [a, b] : {std::pair<Index, Index>{0, 3}, {-2, 2}}) {
    for (Index L = 1; L <= 3; ++L) {
      timed("product (" + std::to_string(a) + "," + std::to_string(b) + ") L=" + std::to_string(L),
            [&, a = a, b = b] {
              const auto pair = adapted_system_pair(qp, product_window_partition(qp, a, b, L), 1, 1000);
              ATDescriptor expected{{{1, {}}}};
              for (Index k = a; k <= b; ++k) expected.blocks.push_back({Index{1} << L, {}});
              return approximant(pair.S, pair.S_prime) == expected;
            });
    }
  }
}

void identity_suites(Verdict& v) {
  auto check = [&](const std::string& label, const AdaptedPair& pair) {
    const auto r = identity_suite(pair.S, pair.S_prime);
    v.require(r.identities.size() == 11, label + ": expected 11 identities");
    for (const auto& id : r.identities) v.require(id.pass, label + ": " + id.name);
  };
  const auto bin = SystemSpec::odometer(2);
  for (Index L = 1; L <= 4; ++L) {
    check("odometer L=" + std::to_string(L), adapted_system_pair(bin, generating_partition(bin, L), 1, 1000));
  }
  const auto shift = SystemSpec::compactified_shift();
  for (const auto& [a, b] : {std::pair<Index, Index>{0, 5}, {0, 8}, {-3, 4}}) {
    for (Index N : {1, 2, 3}) {
      check("shift (" + std::to_string(a) + "," + std::to_string(b) + ") N=" + std::to_string(N),
            adapted_system_pair(shift, shift_window_partition(a, b, N), N, 1000));
    }
  }
}

void berg(Verdict& v) {
  const auto shift = SystemSpec::compactified_shift();
  for (Index N : {2, 4, 8, 16}) {
    const double eps = kPi / static_cast<double>(N) + 0.01;
    const auto r = berg_verify(shift, shift_window_partition(0, 8, N), N, eps, 2000);
    const std::string at = "N=" + std::to_string(N) + ": ";
    v.require(r.z_unitary_defect <= 1e-10, at + "z not unitary");
    v.require(r.z_commutator_norm <= 1e-10, at + "z does not commute with C(P)");
    v.require(r.norm_u_prime_minus_u <= kPi / static_cast<double>(N) + 1e-9, at + "||u'-u|| above pi/N");
  }
  const auto bin = SystemSpec::odometer(2);
  for (Index L = 1; L <= 3; ++L) {
    const auto r = berg_verify(bin, generating_partition(bin, L), 4, kPi / 4 + 0.01, 2000);
    v.require(r.norm_u_prime_minus_u <= 1e-12, "odometer L=" + std::to_string(L) + ": ||u'-u|| nonzero");
  }
}

void unitary_roots(Verdict& v) {
  std::mt19937 rng(2024);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = uniform(rng, 1, 16);
    const Index N = uniform(rng, 1, 32);
    ComplexMatrix A(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) A(i, j) = {g(rng), g(rng)};
    }
    const ComplexMatrix V = Eigen::HouseholderQR<ComplexMatrix>(A).householderQ();
    const auto W = unitary_nth_root(V, N);
    ComplexMatrix P = ComplexMatrix::Identity(n, n);
    for (Index k = 0; k < N; ++k) P = P * W;
    // Norms from an SVD, independent of the library's power iteration.
    const auto norm = [](const ComplexMatrix& M) { return Eigen::JacobiSVD<ComplexMatrix>(M).singularValues()(0); };
    const std::string at = "trial " + std::to_string(trial) + ": ";
    v.require(norm(P - V) <= 1e-10, at + "W^N != V");
    v.require(norm(W - ComplexMatrix::Identity(n, n)) <= kPi / static_cast<double>(N) + 1e-9, at + "||W-I|| > pi/N");
  }
}

// Reads alpha_* as a permutation of the partition elements.
std::vector<std::size_t> permutation_of(const IntMatrix& m) {
  std::vector<std::size_t> perm(m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (m(i, j) == 1) perm[j] = i;
    }
  }
  return perm;
}

void ktheory(Verdict& v) {
  auto level_check = [&](const std::string& label, const K0Level& level) {
    const auto a = alpha_star(level);
    v.require(a.square.has_value(), label + ": alpha_* leaves the level");
    if (!a.square) return;
    // For a permutation both kernel and cokernel of 1 - alpha_* are free on the cycles.
    const std::size_t cycles = oracle::cycle_count(permutation_of(*a.square));
    const auto r = pv_level(level);
    v.require(cycles == 1, label + ": oracle does not give Z");
    v.require(r.k1_rank == cycles && r.k0_rank == cycles && r.k0_torsion.empty() && r.k1_torsion.empty(),
              label + ": groups differ from the oracle");
  };
  for (Index M = 1; M <= 12; ++M) level_check("cycle " + std::to_string(M), k0_level(SystemSpec::finite_cycle(M), 1));
  for (Index n = 1; n <= 6; ++n) level_check("odometer n=" + std::to_string(n), k0_level(SystemSpec::odometer(2), n));

  std::mt19937 rng(12);
  for (int trial = 0; trial < 500; ++trial) {
    const auto rows = static_cast<std::size_t>(uniform(rng, 1, 12));
    const auto cols = static_cast<std::size_t>(uniform(rng, 1, 12));
    IntMatrix A(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < cols; ++j) A(i, j) = uniform(rng, -9, 9);
    }
    const auto r = smith_normal_form(A);
    bool chain = r.D.is_diagonal();
    const auto f = r.invariant_factors();
    for (std::size_t i = 0; i + 1 < f.size(); ++i) chain = chain && f[i + 1] % f[i] == 0;
    v.require(r.U * r.D * r.V == A && chain && abs(determinant(r.U)) == 1 && abs(determinant(r.V)) == 1,
              "SNF trial " + std::to_string(trial));
  }
}

void fiberwise(Verdict& v) {
  const auto shift = SystemSpec::compactified_shift();
  for (const auto& spec : {shift, SystemSpec::odometer(2), SystemSpec::quotient_product(SystemSpec::odometer(2))}) {
    v.require(check_fiberwise(spec, 3, 500).verdict, std::string(family_name(spec.family())) + " rejected");
  }
  const auto r = check_fiberwise(SystemSpec::two_point_shift(), 3, 500);
  v.require(!r.verdict, "two-point shift accepted");
  v.require(r.failure_witness.has_value() && !is_empty(r.failure_witness->set), "no failure witness");
}

void properties(Verdict& v) {
  const auto m = run_mutation_suite(100, 1);
  v.require(m.total == 100, "only " + std::to_string(m.total) + " mutants generated");
  v.require(m.caught == m.total, std::to_string(m.total - m.caught) + " mutants survived");
  for (const auto& spec : refine_families()) {
    const auto r = run_refine_suite(spec, 50, 7);
    v.require(r.calls == 50 && r.failures.empty(),
              std::string(family_name(spec.family())) + ": " + (r.failures.empty() ? "" : r.failures.front()));
  }
  if (v.pass) v.note << "100/100 mutants caught; 50 refine calls on each of " << refine_families().size() << " families";
}

}  // namespace

int main() {
  bool ok = true;
  ok &= run(1, "tower reproduction", 1.0, tower_reproduction);
  ok &= run(2, "odometer towers", 0, odometer_towers);
  ok &= run(3, "approximant dimensions", 0, approximant_dimensions);
  ok &= run(4, "symbolic identity suite", 0, identity_suites);
  ok &= run(5, "Berg verification", 30.0, berg);
  ok &= run(6, "unitary root properties", 60.0, unitary_roots);
  ok &= run(7, "K-theory levels and SNF", 0, ktheory);
  ok &= run(8, "fiberwise gate", 0, fiberwise);
  ok &= run(9, "property suites", 0, properties);
  return ok ? 0 : 1;
}
