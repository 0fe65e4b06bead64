#pragma once

#include <random>

#include "ddmem/tensor.hpp"

// Deterministic random matrices for property tests.

namespace ddmem::testing {

inline std::mt19937_64 rng(uint64_t seed) { return std::mt19937_64(seed); }

inline cxd random_cxd(std::mt19937_64& r) {
  std::normal_distribution<double> n(0.0, 1.0);
  return {n(r), n(r)};
}

inline TensorOperator random_matrix(std::vector<int> dims, std::mt19937_64& r) {
  TensorOperator t(std::move(dims));
  for (auto& v : t.data()) v = random_cxd(r);
  return t;
}

inline TensorOperator random_hermitian(std::vector<int> dims, std::mt19937_64& r) {
  const TensorOperator g = random_matrix(std::move(dims), r);
  return (g + g.adjoint()) * cxd(0.5);
}

// rho = G G' / Tr(G G'), full rank almost surely
inline TensorOperator random_density(std::vector<int> dims, std::mt19937_64& r) {
  const TensorOperator g = random_matrix(std::move(dims), r);
  TensorOperator rho = g * g.adjoint();
  return rho * (1.0 / rho.trace());
}

inline TensorOperator random_qubit_state(std::mt19937_64& r) {
  return random_density({2}, r);
}

// random unitary via exp(-iH)
TensorOperator random_unitary(std::vector<int> dims, std::mt19937_64& r);

}  // namespace ddmem::testing
