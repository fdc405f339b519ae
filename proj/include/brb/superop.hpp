#pragma once

#include <vector>

#include "brb/pauli.hpp"

namespace brb {

// Dense superoperators are capped at this many qubits (4^6 x 4^6 doubles).
inline constexpr int kMaxSuperopQubits = 3;

// ColumnStacking: vec(rho) stacks columns, so vec(A rho B) = (B^T (x) A) vec(rho)
// and a unitary U acts as conj(U) (x) U.
// PauliBasis: coordinates over normalized strings X(alpha)Z(beta)/sqrt(2^n),
// ordered by v = (alpha << n) | beta (the transfer-matrix picture).
enum class Basis { ColumnStacking, PauliBasis };

struct Superoperator {
  int n_qubits = 1;
  Basis basis = Basis::ColumnStacking;
  Matrix m;  // 4^n x 4^n
};

Superoperator superop_identity(int n_qubits, Basis basis);

Vector vectorize(const Matrix& rho);
Matrix unvectorize(const Vector& v);

// Unitary conjugation rho -> U rho U^dag as a column-stacking superoperator.
Superoperator unitary_to_superoperator(const Matrix& u);

// Kraus action rho -> sum_a K_a rho K_a^dag as a column-stacking superoperator.
Superoperator kraus_to_superoperator(int n_qubits, const std::vector<Matrix>& kraus);

// Unitary basis-change matrix whose column v is vec of the normalized Pauli
// string v. Cached per qubit count.
const Matrix& pauli_basis_matrix(int n_qubits);

Superoperator to_basis(const Superoperator& s, Basis basis);

// compose(a, b) applies b first: the map a o b.
Superoperator compose(const Superoperator& a, const Superoperator& b);

// State vectors carry the same basis as the superoperator applied to them.
Vector apply(const Superoperator& s, const Vector& state);

Vector state_in_basis(const Matrix& rho, Basis basis);

// tr(E^dag rho) for an observable E given as a dense matrix and a state vector
// in the given basis.
Complex expectation(const Matrix& observable, const Vector& state, Basis basis);

}  // namespace brb
