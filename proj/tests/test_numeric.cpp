#include <doctest.h>

#include <cmath>
#include <numbers>

#include <Eigen/SVD>

#include "support/systems.hpp"
#include "zdsys/numeric.hpp"

using namespace zdsys;
using namespace zdsys::testing;

namespace {

const SystemSpec kShift = SystemSpec::compactified_shift();
const SystemSpec kBinary = SystemSpec::odometer(2);
constexpr double kPi = std::numbers::pi;
const Scalar I1(0, 1);

ClopenSet sh(std::vector<Index> f) { return ClopenSet::shift(kShift, f, false); }
CPElement chi(const ClopenSet& E) { return CPElement::indicator(E); }

double svd_norm(const ComplexMatrix& M) {
  if (M.size() == 0) return 0;
  return Eigen::JacobiSVD<ComplexMatrix>(M).singularValues()(0);
}

ComplexMatrix random_matrix(std::mt19937& rng, Eigen::Index n, Eigen::Index m) {
  std::normal_distribution<double> g;
  ComplexMatrix M(n, m);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) M(i, j) = {g(rng), g(rng)};
  }
  return M;
}

// Product of random Householder reflections times a random diagonal phase.
ComplexMatrix random_unitary(std::mt19937& rng, Eigen::Index n) {
  std::uniform_real_distribution<double> phase(-kPi, kPi);
  ComplexMatrix U = ComplexMatrix::Identity(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    Eigen::VectorXcd v = random_matrix(rng, n, 1);
    v.normalize();
    U = (ComplexMatrix::Identity(n, n) - 2.0 * v * v.adjoint()) * U;
  }
  for (Eigen::Index i = 0; i < n; ++i) U.row(i) *= std::polar(1.0, phase(rng));
  return U;
}

ComplexMatrix power(const ComplexMatrix& W, Index N) {
  ComplexMatrix P = ComplexMatrix::Identity(W.rows(), W.cols());
  for (Index k = 0; k < N; ++k) P = P * W;
  return P;
}

}  // namespace

TEST_CASE("representation examples") {
  const auto a = CPElement::term(1.0, sh({0}), 1);
  const auto rep = represent(a);
  CHECK(rep.window == std::vector<Point>{Point::integer(-1), Point::integer(0)});
  CHECK(rep.matrix(1, 0) == Scalar(1));
  CHECK(rep.matrix.cwiseAbs().sum() == 1.0);
  CHECK(operator_norm(rep.matrix) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(represent(CPElement(kShift)).matrix.size() == 0);
  CHECK(element_norm(CPElement(kShift)) == 0.0);
  const auto d = represent(chi(sh({0})) + chi(sh({3})));
  CHECK(d.matrix == ComplexMatrix::Identity(2, 2));
  CHECK_THROWS_AS(represent(CPElement::one(kShift)), Error);
  CHECK_THROWS_AS(represent(chi(ClopenSet::cylinder(kBinary, {0}))), Error);
  try {
    represent(CPElement::one(kBinary));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotCompactlySupported);
  }
  // Finite cycles are always representable.
  const auto c5 = SystemSpec::finite_cycle(5);
  CHECK(represent(CPElement::u_power(c5, 1)).matrix.rows() == 5);
  CHECK(element_norm(CPElement::u_power(c5, 2) + CPElement::one(c5)) == doctest::Approx(2.0));
}

TEST_CASE("representation is a star homomorphism on a window") {
  std::mt19937 rng(3);
  std::vector<Point> window;
  for (Index x = -12; x <= 12; ++x) window.push_back(Point::integer(x));
  auto random_element = [&]() {
    CPElement a(kShift);
    static const Scalar values[] = {{1, 0}, {-1, 0}, {0, 1}, {0.5, -2}};
    for (int t = 0; t < 3; ++t) {
      std::vector<Index> F;
      for (int i = 0; i < 3; ++i) F.push_back(uniform(rng, -4, 4));
      a.accumulate(values[uniform(rng, 0, 3)], sh(F), uniform(rng, -2, 2));
    }
    return a;
  };
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = random_element();
    const auto b = random_element();
    const auto A = represent(a, window).matrix;
    const auto B = represent(b, window).matrix;
    CHECK((represent(a * b, window).matrix - A * B).norm() <= 1e-12);
    CHECK((represent(a + b, window).matrix - (A + B)).norm() <= 1e-12);
    CHECK((represent(adjoint(a), window).matrix - A.adjoint()).norm() <= 1e-12);
  }
  for (const auto& p : {SystemSpec::finite_cycle(7)}) {
    for (int trial = 0; trial < 100; ++trial) {
      CPElement a(p), b(p);
      a.accumulate(I1, random_set(p, rng), uniform(rng, -3, 3));
      b.accumulate(2.0, random_set(p, rng), uniform(rng, -3, 3));
      b.accumulate(1.0, random_set(p, rng), 0);
      std::vector<Point> all;
      for (Index x = 0; x < 7; ++x) all.push_back(Point::integer(x));
      CHECK((represent(a * b, all).matrix - represent(a, all).matrix * represent(b, all).matrix).norm() <= 1e-12);
    }
  }
}

TEST_CASE("operator norm") {
  CHECK(operator_norm(ComplexMatrix{{0, 1}, {1, 0}}) == doctest::Approx(1.0).epsilon(1e-12));
  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = 3;
  d(1, 1) = Scalar(0, -4);
  CHECK(operator_norm(d) == doctest::Approx(4.0).epsilon(1e-12));
  const double golden = (1 + std::sqrt(5.0)) / 2;  // singular values of [[1,1],[0,1]] are phi and 1/phi
  CHECK(std::abs(operator_norm(ComplexMatrix{{1, 1}, {0, 1}}) - golden) <= 1e-12);
  CHECK(operator_norm(ComplexMatrix::Zero(3, 3)) == 0.0);
  CHECK_THROWS_AS(operator_norm(d, 0.0), Error);

  std::mt19937 rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    const auto M = random_matrix(rng, uniform(rng, 1, 24), uniform(rng, 1, 24));
    CHECK(std::abs(operator_norm(M) - svd_norm(M)) <= 1e-12 * std::max(1.0, svd_norm(M)));
  }
  // Nearly tied top singular values.
  for (int trial = 0; trial < 20; ++trial) {
    const auto U = random_unitary(rng, 8), V = random_unitary(rng, 8);
    Eigen::VectorXd s = Eigen::VectorXd::LinSpaced(8, 0.1, 1.0);
    s(6) = 1.0 - 1e-9;
    const ComplexMatrix M = U * s.cast<Scalar>().asDiagonal() * V;
    CHECK(std::abs(operator_norm(M) - 1.0) <= 1e-12);
  }
}

TEST_CASE("orthogonal sums take the largest block norm") {
  std::mt19937 rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    const auto n1 = uniform(rng, 1, 6), n2 = uniform(rng, 1, 6);
    const auto A = random_matrix(rng, n1, n1), B = random_matrix(rng, n2, n2);
    const ComplexMatrix PA = A * A.adjoint(), PB = B * B.adjoint();
    ComplexMatrix M = ComplexMatrix::Zero(n1 + n2, n1 + n2);
    M.topLeftCorner(n1, n1) = PA;
    M.bottomRightCorner(n2, n2) = PB;
    CHECK(std::abs(operator_norm(M) - std::max(operator_norm(PA), operator_norm(PB))) <= 1e-10);
  }
}

TEST_CASE("unitary roots") {
  const ComplexMatrix swap{{0, 1}, {1, 0}};
  const auto W = unitary_nth_root(swap, 2);
  const ComplexMatrix expected = 0.5 * ComplexMatrix{{1.0 + I1, 1.0 - I1}, {1.0 - I1, 1.0 + I1}};
  CHECK((W - expected).norm() <= 1e-12);
  CHECK((W * W - swap).norm() <= 1e-12);
  CHECK(operator_norm(W - ComplexMatrix::Identity(2, 2)) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(std::sqrt(2.0) <= kPi / 2);

  for (Index N : {1, 3, 7}) {
    CHECK((unitary_nth_root(ComplexMatrix::Identity(4, 4), N) - ComplexMatrix::Identity(4, 4)).norm() <= 1e-14);
  }
  ComplexMatrix minus_one(1, 1);
  minus_one(0, 0) = std::polar(1.0, kPi);
  CHECK(std::abs(unitary_nth_root(minus_one, 3)(0, 0) - std::polar(1.0, kPi / 3)) <= 1e-12);

  CHECK_THROWS_AS(unitary_nth_root(ComplexMatrix{{2, 0}, {0, 1}}, 2), Error);
  CHECK_THROWS_AS(unitary_nth_root(swap, 0), Error);
}

TEST_CASE("unitary root properties") {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = uniform(rng, 1, 16);
    const Index N = uniform(rng, 1, 32);
    const auto V = random_unitary(rng, n);
    const auto W = unitary_nth_root(V, N);
    CHECK(operator_norm(power(W, N) - V) <= 1e-10);
    CHECK(operator_norm(W - ComplexMatrix::Identity(n, n)) <= kPi / static_cast<double>(N) + 1e-9);
    // A function of V commutes with V.
    CHECK((W * V - V * W).norm() <= 1e-10);
  }
  // Degenerate spectra, including repeated -1.
  for (int trial = 0; trial < 20; ++trial) {
    const auto n = uniform(rng, 2, 10);
    const auto Q = random_unitary(rng, n);
    Eigen::VectorXcd ev(n);
    for (Eigen::Index i = 0; i < n; ++i) ev(i) = i % 2 ? Scalar(-1) : std::polar(1.0, 0.7);
    const ComplexMatrix V = Q * ev.asDiagonal() * Q.adjoint();
    const Index N = uniform(rng, 1, 9);
    const auto W = unitary_nth_root(V, N);
    CHECK(operator_norm(power(W, N) - V) <= 1e-10);
    CHECK(operator_norm(W - ComplexMatrix::Identity(n, n)) <= kPi / static_cast<double>(N) + 1e-9);
  }
}

TEST_CASE("cut-down estimate") {
  const ClopenSet A = sh({0, 1}), B = sh({5});
  const ClopenSet rest = complement(set_union(A, B));
  const CPElement a = CPElement::term(1.0, sh({1}), 1) + CPElement::term(2.0, B, 0);
  const auto r = cutdown_check(a, {{A, A}, {B, B}, {rest, rest}});
  CHECK(r.off_diagonal_zero);
  CHECK(r.holds);
  CHECK(r.norm == doctest::Approx(2.0));
  CHECK(r.block_norms[0] == doctest::Approx(1.0));
  CHECK(r.block_norms[1] == doctest::Approx(2.0));

  const auto z = cutdown_check(CPElement(kShift), {{A, A}, {complement(A), complement(A)}});
  CHECK(z.norm == 0.0);
  CHECK(z.block_norms == std::vector<double>{0.0, 0.0});
  CHECK_THROWS_AS(cutdown_check(a, {{A, A}, {B, B}}), Error);
}

TEST_CASE("Berg verification") {
  SUBCASE("integer shift") {
    for (Index N : {2, 4, 8, 16}) {
      const double eps = kPi / static_cast<double>(N) + 0.01;
      const auto r = berg_verify(kShift, shift_window_partition(0, 8, N), N, eps, 2000);
      INFO("N=", N);
      CHECK(r.z_unitary);
      CHECK(r.z_commutes);
      CHECK(r.blocks_below_epsilon);
      CHECK(r.cutdown.off_diagonal_zero);
      CHECK(r.cutdown.holds);
      CHECK(r.norm_u_prime_minus_u <= kPi / static_cast<double>(N) + 1e-9);
      CHECK(r.norm_w_minus_1 <= kPi / static_cast<double>(N) + 1e-9);
      CHECK(r.pass);
      REQUIRE(r.v);
      CHECK((*r.v - ComplexMatrix{{0, 1}, {1, 0}}).norm() <= 1e-15);
    }
    const auto r = berg_verify(kShift, shift_window_partition(0, 8, 4), 4, kPi / 4 + 0.01, 2000);
    CHECK(r.v_basis == std::vector<Point>{Point::integer(0), Point::integer(8)});
  }
  SUBCASE("odometer") {
    for (Index L = 1; L <= 3; ++L) {
      const auto r = berg_verify(kBinary, generating_partition(kBinary, L), 4, kPi / 4 + 0.01, 2000);
      CHECK(r.norm_u_prime_minus_u <= 1e-12);
      CHECK(r.norm_w_minus_1 == 0.0);
      CHECK(r.z_unitary_defect == 0.0);
      CHECK(r.pass);
    }
  }
  SUBCASE("precondition") {
    CHECK_THROWS_AS(berg_verify(kShift, shift_window_partition(0, 8, 1), 1, 0.1, 100), Error);
  }
}
