#include <doctest.h>

#include <cmath>
#include <random>

#include "adia/errors.hpp"
#include "adia/linalg.hpp"
#include "test_helpers.hpp"

using namespace adia;
using namespace adia::testing;

TEST_CASE("eigh of sigma_z gives (-1, 1) and the standard basis reordered") {
  const EigenDecomposition d = eigh(pauli_z());
  CHECK(d.values[0] == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(d.values[1] == doctest::Approx(1.0).epsilon(1e-14));
  // lowest level is |1> (the -1 eigenvector), canonical phase real positive
  CHECK(std::abs(d.vectors(1, 0) - cplx(1.0, 0.0)) < 1e-14);
  CHECK(std::abs(d.vectors(0, 1) - cplx(1.0, 0.0)) < 1e-14);
  CHECK(std::abs(d.vectors(0, 0)) < 1e-14);
  CHECK(std::abs(d.vectors(1, 1)) < 1e-14);
}

TEST_CASE("eigh of eta sz + xi sx reduces to sigma_z at xi = 0") {
  ComplexMatrix h = pauli_z();  // eta = 1, xi = 0
  const EigenDecomposition d = eigh(h);
  CHECK(d.values[0] == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(d.values[1] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("spin-half eigenvalues are +-Omega = +-sqrt(1.01) at eta=1, xi=0.1") {
  const double omega = std::sqrt(1.01);
  for (double tau : {0.0, 0.7, 3.9}) {
    const ComplexMatrix h = spin_half_h(spin_half(1.0, 0.1, 5.0), tau);
    const EigenDecomposition d = eigh(h);
    CHECK(d.values[0] == doctest::Approx(-omega).epsilon(1e-13));
    CHECK(d.values[1] == doctest::Approx(omega).epsilon(1e-13));
    CHECK(omega == doctest::Approx(1.0049876).epsilon(1e-7));
  }
}

TEST_CASE("eigh rejects a non-Hermitian matrix and reports the asymmetry") {
  ComplexMatrix h(2);
  h(0, 1) = cplx(1.0, 0.0);
  h(1, 0) = cplx(1.0, 0.5);  // defect 0.5
  try {
    eigh(h);
    FAIL("expected NotHermitian");
  } catch (const NotHermitian& e) {
    CHECK(e.max_asymmetry() == doctest::Approx(0.5).epsilon(1e-12));
  }
}

TEST_CASE("degenerate spectra are flagged") {
  const EigenDecomposition d = eigh(ComplexMatrix::identity(3));
  CHECK(d.degenerate);
  CHECK(d.min_gap < 1e-10);
}

TEST_CASE("reconstruction residual stays below 1e-10 for random Hermitian dims 2..8") {
  std::mt19937 rng(42);
  for (int dim = 2; dim <= 8; ++dim) {
    for (int rep = 0; rep < 100; ++rep) {
      const ComplexMatrix h = random_hermitian(dim, rng);
      const EigenDecomposition d = eigh(h);
      // H - V E V^dagger, entrywise max
      double worst = 0.0;
      for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c) {
          cplx s{};
          for (int i = 0; i < dim; ++i)
            s += d.vectors(r, i) * d.values[static_cast<size_t>(i)] * std::conj(d.vectors(c, i));
          worst = std::max(worst, std::abs(h(r, c) - s));
        }
      CHECK(worst <= 1e-10);
      // columns orthonormal to 1e-12
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
          cplx s{};
          for (int r = 0; r < dim; ++r) s += std::conj(d.vectors(r, i)) * d.vectors(r, j);
          CHECK(std::abs(s - (i == j ? 1.0 : 0.0)) <= 1e-12);
        }
      for (size_t i = 0; i + 1 < d.values.size(); ++i) CHECK(d.values[i] <= d.values[i + 1]);
    }
  }
}

TEST_CASE("propagate_step leaves the state alone for H = 0") {
  std::mt19937 rng(7);
  const State psi = random_unit_state(3, rng);
  const State out = propagate_step(ComplexMatrix::zero(3), 0.37, psi);
  CHECK(state_distance(out, psi) < 1e-14);
}

TEST_CASE("propagate_step applies the diagonal phase for H = sigma_z, dt = pi") {
  const State psi{cplx(1.0, 0.0), cplx(0.0, 0.0)};
  const State out = propagate_step(pauli_z(), 3.14159265358979323846, psi);
  CHECK(std::abs(out[0] - cplx(-1.0, 0.0)) < 1e-12);
  CHECK(std::abs(out[1]) < 1e-14);
}

TEST_CASE("propagate_step matches the closed form exp(-i sx t) at t = pi/2") {
  const State psi{cplx(1.0, 0.0), cplx(0.0, 0.0)};
  const State out = propagate_step(pauli_x(), 0.5 * 3.14159265358979323846, psi);
  CHECK(std::abs(out[0]) < 1e-12);
  CHECK(std::abs(out[1] - cplx(0.0, -1.0)) < 1e-12);
}

TEST_CASE("propagate_step preserves inner products") {
  std::mt19937 rng(11);
  for (int rep = 0; rep < 50; ++rep) {
    const int dim = 2 + static_cast<int>(rng() % 5);
    const ComplexMatrix h = random_hermitian(dim, rng);
    const State a = random_unit_state(dim, rng);
    const State b = random_unit_state(dim, rng);
    const cplx before = inner(a, b);
    const cplx after = inner(propagate_step(h, 0.23, a), propagate_step(h, 0.23, b));
    CHECK(std::abs(after - before) <= 1e-10);
  }
}

TEST_CASE("unitarity drift stays below 1e-10 over 1e4 propagation steps") {
  std::mt19937 rng(3);
  const ComplexMatrix h = random_hermitian(4, rng);
  State psi = random_unit_state(4, rng);
  State phi = random_unit_state(4, rng);
  const cplx ip0 = inner(psi, phi);
  for (int k = 0; k < 10000; ++k) {
    psi = propagate_step(h, 0.01, psi);
    phi = propagate_step(h, 0.01, phi);
  }
  CHECK(std::abs(norm(psi) - 1.0) <= 1e-10);
  CHECK(std::abs(norm(phi) - 1.0) <= 1e-10);
  CHECK(std::abs(inner(psi, phi) - ip0) <= 1e-10);
}

TEST_CASE("batch decomposition matches the single-matrix path under both policies") {
  std::mt19937 rng(99);
  std::vector<ComplexMatrix> batch;
  for (int k = 0; k < 64; ++k) batch.push_back(random_hermitian(3 + k % 6, rng));
  const auto serial = eigh_batch(batch, ExecutionPolicy::Serial);
  const auto parallel = eigh_batch(batch, ExecutionPolicy::Parallel);
  REQUIRE(serial.size() == parallel.size());
  for (size_t k = 0; k < batch.size(); ++k) {
    for (size_t i = 0; i < serial[k].values.size(); ++i)
      CHECK(serial[k].values[i] == parallel[k].values[i]);  // identical code path per item
    for (int r = 0; r < batch[k].dim(); ++r)
      for (int c = 0; c < batch[k].dim(); ++c)
        CHECK(serial[k].vectors(r, c) == parallel[k].vectors(r, c));
  }
}
