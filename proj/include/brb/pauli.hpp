#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>

namespace brb {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Qubit i is bit i of alpha/beta masks and bit i of a basis-state index, so
// qubit 0 is the rightmost tensor factor ("little-endian").
//
// A Pauli-group element is sign * X(alpha) Z(beta) where X(alpha) applies X on
// every qubit in alpha and Z(beta) applies Z on every qubit in beta. The sign
// is a power of i accumulated by products; X(alpha)Z(beta) itself carries no
// phase, so e.g. the (1,1) single-qubit element is XZ = -iY, not Y.
struct PauliOperator {
  int n_qubits = 1;
  uint32_t alpha = 0;
  uint32_t beta = 0;
  int phase_i_power = 0;  // operator = i^phase_i_power * X(alpha) Z(beta)

  Complex sign() const;
};

PauliOperator pauli_identity(int n_qubits);

// Group product a*b (apply b first when acting on kets by convention of
// matrix products; Paulis form a group either way).
PauliOperator pauli_multiply(const PauliOperator& a, const PauliOperator& b);

PauliOperator pauli_inverse(const PauliOperator& a);

bool pauli_equal(const PauliOperator& a, const PauliOperator& b);

// Dense 2^n x 2^n matrix of the operator, including its sign.
Matrix pauli_to_matrix(const PauliOperator& p);

// Dense X(alpha)Z(beta) with no sign, by linear index v = (alpha << n) | beta.
Matrix pauli_string_matrix(int n_qubits, uint32_t v);

inline uint32_t pauli_index(int n_qubits, uint32_t alpha, uint32_t beta) {
  return (alpha << n_qubits) | beta;
}
inline uint32_t pauli_index_alpha(int n_qubits, uint32_t v) { return v >> n_qubits; }
inline uint32_t pauli_index_beta(int n_qubits, uint32_t v) {
  return v & ((1u << n_qubits) - 1);
}

Matrix kron(const Matrix& a, const Matrix& b);

inline int parity(uint32_t x) { return __builtin_popcount(x) & 1; }

// True if a == phase * b for some unit phase, entrywise within tol.
bool equal_mod_phase(const Matrix& a, const Matrix& b, double tol);

}  // namespace brb
