#include <doctest.h>

#include <cmath>

#include "ddmem/model.hpp"
#include "ddmem/tensor.hpp"
#include "ddmem/tolerances.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace ddmem;
using ddmem::testing::rng;

TEST_CASE("kron: identity factors") {
  const TensorOperator i2 = TensorOperator::identity({2});
  const TensorOperator out = kron(i2, i2);
  CHECK(out.dims() == std::vector<int>{2, 2});
  CHECK((out - TensorOperator::identity({2, 2})).max_norm() == 0.0);
}

TEST_CASE("kron: sigma_z x I is diag(1,1,-1,-1)") {
  const TensorOperator out = kron(pauli_z(), TensorOperator::identity({2}));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const cxd want = (i == j) ? cxd(i < 2 ? 1.0 : -1.0) : cxd(0.0);
      CHECK(out(i, j) == want);
    }
}

TEST_CASE("kron: (s+ + s-) x (a + a') at n_max=1 matches the index-formula oracle") {
  const TensorOperator sx = sigma_plus() + sigma_minus();
  const TensorOperator a = annihilation(1);
  const TensorOperator x = a + a.adjoint();
  const TensorOperator got = kron(sx, x);
  const TensorOperator want = oracle::kron_direct(sx, x);
  CHECK((got - want).max_norm() == 0.0);
}

TEST_CASE("kron: associativity is exact on exactly-representable entries") {
  auto r = rng(11);
  std::uniform_int_distribution<int> pick(-4, 4);
  auto int_matrix = [&](std::vector<int> dims) {
    TensorOperator t(std::move(dims));
    for (auto& v : t.data()) v = cxd(pick(r), pick(r));
    return t;
  };
  for (int rep = 0; rep < 20; ++rep) {
    const TensorOperator a = int_matrix({2});
    const TensorOperator b = int_matrix({3});
    const TensorOperator c = int_matrix({2});
    const TensorOperator lhs = kron(kron(a, b), c);
    const TensorOperator rhs = kron(a, kron(b, c));
    CHECK((lhs - rhs).max_norm() == 0.0);
  }
}

TEST_CASE("partial_trace: product state factorizes") {
  auto r = rng(21);
  const TensorOperator ra = ddmem::testing::random_density({2}, r);
  const TensorOperator rb = ddmem::testing::random_density({3}, r);
  const TensorOperator joint = kron(ra, rb);
  const TensorOperator red = partial_trace(joint, {0});
  CHECK((red - ra).max_norm() < 1e-14);
}

TEST_CASE("partial_trace: maximally entangled pair reduces to I/2") {
  TensorOperator psi({2, 2});
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) psi(2 * i + i, 2 * j + j) = 0.5;
  const TensorOperator red = partial_trace(psi, {0});
  CHECK((red - TensorOperator::identity({2}) * cxd(0.5)).max_norm() < 1e-15);
}

TEST_CASE("partial_trace: random [2,2,3] against the naive summation oracle") {
  auto r = rng(22);
  const TensorOperator rho = ddmem::testing::random_density({2, 2, 3}, r);
  const TensorOperator got = partial_trace(rho, {0, 2});
  const TensorOperator want = oracle::partial_trace_naive(rho, {2, 2, 3}, {0, 2});
  CHECK((got - want).max_norm() < 1e-14);
  CHECK(std::abs(got.trace() - rho.trace()) < tol::partial_trace_trace);
}

TEST_CASE("partial_trace: trace and positivity preserved on random densities") {
  auto r = rng(23);
  for (int rep = 0; rep < 10; ++rep) {
    const TensorOperator rho = ddmem::testing::random_density({2, 3, 2}, r);
    const TensorOperator red = partial_trace(rho, {1});
    CHECK(std::abs(red.trace() - 1.0) < tol::partial_trace_trace);
    CHECK(hermitian_eig(red).eigenvalues.front() >= tol::density_eig_floor);
  }
}

TEST_CASE("partial_trace: bad keep sets are rejected") {
  const TensorOperator rho = TensorOperator::identity({2, 3});
  CHECK_THROWS_AS(partial_trace(rho, {}), std::invalid_argument);
  CHECK_THROWS_AS(partial_trace(rho, {2}), std::invalid_argument);
  CHECK_THROWS_AS(partial_trace(rho, {1, 0}), std::invalid_argument);
}

TEST_CASE("hermitian_eig: diagonal case sorts ascending") {
  TensorOperator h({3});
  h(0, 0) = 3.0;
  h(1, 1) = 1.0;
  h(2, 2) = 2.0;
  const Spectrum sp = hermitian_eig(h);
  CHECK(sp.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(sp.eigenvalues[1] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(sp.eigenvalues[2] == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("hermitian_eig: Pauli x spectrum") {
  const Spectrum sp = hermitian_eig(pauli_x());
  CHECK(sp.eigenvalues[0] == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(sp.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("hermitian_eig: random 16x16 against the bisection oracle") {
  auto r = rng(31);
  const TensorOperator h = ddmem::testing::random_hermitian({16}, r);
  const Spectrum sp = hermitian_eig(h);
  const std::vector<double> want = oracle::eigenvalues_bisection(h, 1e-12);
  REQUIRE(want.size() == 16);
  for (int i = 0; i < 16; ++i)
    CHECK(std::abs(sp.eigenvalues[i] - want[i]) < 1e-8);
}

TEST_CASE("hermitian_eig: reconstruction and orthonormality up to dim 64") {
  auto r = rng(32);
  for (int n : {4, 17, 64}) {
    const TensorOperator h = ddmem::testing::random_hermitian({n}, r);
    const Spectrum sp = hermitian_eig(h);
    const TensorOperator& v = sp.eigenvectors;
    TensorOperator recon({n});
    for (int m = 0; m < n; ++m)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          recon(i, j) += sp.eigenvalues[m] * v(i, m) * std::conj(v(j, m));
    CHECK((recon - h).max_norm() <= tol::eig_reconstruct * h.max_norm());
    CHECK((v.adjoint() * v - TensorOperator::identity({n})).max_norm() <= tol::eig_orthonormal);
    for (int m = 1; m < n; ++m) CHECK(sp.eigenvalues[m] >= sp.eigenvalues[m - 1]);
  }
}

TEST_CASE("hermitian_eig: non-Hermitian input throws") {
  TensorOperator h({2});
  h(0, 1) = 1.0;  // lower triangle left empty
  CHECK_THROWS_AS(hermitian_eig(h), std::invalid_argument);
}

TEST_CASE("trace_distance: coincident states") {
  auto r = rng(41);
  const TensorOperator rho = ddmem::testing::random_density({4}, r);
  CHECK(trace_distance(rho, rho) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("trace_distance: orthogonal pure states are distance 1") {
  TensorOperator r0({2}), r1({2});
  r0(0, 0) = 1.0;
  r1(1, 1) = 1.0;
  CHECK(trace_distance(r0, r1) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("trace_distance: |0> vs |+> closed form 1/sqrt(2)") {
  TensorOperator r0({2});
  r0(0, 0) = 1.0;
  TensorOperator rp({2});
  rp(0, 0) = rp(0, 1) = rp(1, 0) = rp(1, 1) = 0.5;
  CHECK(trace_distance(r0, rp) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("trace_distance: dimension mismatch throws") {
  CHECK_THROWS_AS(trace_distance(TensorOperator::identity({2}), TensorOperator::identity({3})),
                  std::invalid_argument);
}

TEST_CASE("trace_distance: metric axioms on random density triples") {
  auto r = rng(42);
  for (int rep = 0; rep < 50; ++rep) {
    const TensorOperator a = ddmem::testing::random_density({4}, r);
    const TensorOperator b = ddmem::testing::random_density({4}, r);
    const TensorOperator c = ddmem::testing::random_density({4}, r);
    const double dab = trace_distance(a, b);
    const double dba = trace_distance(b, a);
    const double dac = trace_distance(a, c);
    const double dbc = trace_distance(b, c);
    CHECK(dab >= -tol::metric_axioms);
    CHECK(std::abs(dab - dba) <= tol::metric_axioms);
    CHECK(dab <= dac + dbc + tol::metric_axioms);
  }
}

TEST_CASE("unitary_exp: t = 0 gives the identity") {
  auto r = rng(51);
  const TensorOperator h = ddmem::testing::random_hermitian({5}, r);
  CHECK((unitary_exp(h, 0.0) - TensorOperator::identity({5})).max_norm() < 1e-12);
}

TEST_CASE("unitary_exp: diagonal closed form") {
  const double w = 0.7, t = 1.3;
  const TensorOperator u = unitary_exp(pauli_z() * cxd(0.5 * w), t);
  CHECK(std::abs(u(0, 0) - std::exp(cxd(0.0, -0.5 * w * t))) < 1e-14);
  CHECK(std::abs(u(1, 1) - std::exp(cxd(0.0, 0.5 * w * t))) < 1e-14);
  CHECK(std::abs(u(0, 1)) < 1e-14);
}

TEST_CASE("unitary_exp: random Hermitian matches the scaled Taylor oracle") {
  auto r = rng(52);
  const TensorOperator h = ddmem::testing::random_hermitian({6}, r);
  const double t = 0.3;
  const TensorOperator got = unitary_exp(h, t);
  const TensorOperator want = oracle::expm_taylor(h * cxd(0.0, -t));
  CHECK((got - want).max_norm() < 1e-8);
  CHECK((got.adjoint() * got - TensorOperator::identity({6})).max_norm() <= tol::unitarity);
}

TEST_CASE("unitary_exp: non-Hermitian input throws") {
  TensorOperator h({2});
  h(1, 0) = 2.0;
  CHECK_THROWS_AS(unitary_exp(h, 1.0), std::invalid_argument);
}
