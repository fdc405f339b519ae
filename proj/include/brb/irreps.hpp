#pragma once

#include <functional>
#include <vector>

#include "brb/cnot_dihedral.hpp"
#include "brb/superop.hpp"

namespace brb {

// Characters take the (alpha, beta) masks of a Pauli-group element; for the
// Z group alpha is always 0.
using PauliCharacter = std::function<double(uint32_t alpha, uint32_t beta)>;

// Product irrep of the N-qubit Pauli group, labeled per qubit by
// 0 (trivial), 1, 2, 3. The projector is rank one onto a single normalized
// Pauli string; the label maps per qubit to the string 1, Z, XZ, X.
Superoperator pauli_irrep_projector(int n_qubits, const std::vector<int>& labels);
double pauli_irrep_character(const std::vector<int>& labels, uint32_t alpha, uint32_t beta);

// The two Pauli-irrep rows used by the benchmarking protocol: b = 1 is the
// all-1 label (character (-1)^|alpha|, projector onto Z...Z), b = 2 the all-3
// label (character (-1)^|beta|, projector onto X...X).
Superoperator brb_character_projector(int n_qubits, int b);
double brb_character(int n_qubits, int b, uint32_t alpha, uint32_t beta);

// Irreps of the N-qubit Z group are labeled by an X-mask; the class projector
// sums the 2^N rank-one projectors sharing that mask (multiplicity space).
Superoperator z_class_projector(int n_qubits, uint32_t alpha_class);
Superoperator z_rank1_projector(int n_qubits, uint32_t pauli_index);
double z_class_character(uint32_t alpha_class, uint32_t beta);

// The three irreducible blocks of the CX-dihedral group action: 0 = identity
// string, 1 = other Z strings, 2 = strings with X component.
Superoperator dihedral_projector(int n_qubits, int block);

enum class GroupKind { PauliN, ZN, DihedralN };

// Literal projection formula: (dim V / |G|) sum_g character*(g) ghat.
// dim V = 1 for the abelian groups used here.
Superoperator group_average_projector(GroupKind kind, int n_qubits, const PauliCharacter& character);

// Literal Schur average (1/|G|) sum_g ghat^dag Q ghat. The parallel flag
// selects the OpenMP path; both paths return identical matrices.
Superoperator schur_average(GroupKind kind, int n_qubits, const Superoperator& q, bool parallel = false);

// Closed form of the same average: sum_i tr(P_i Q)/tr(P_i) P_i over a
// complete set of orthogonal projectors (multiplicity-free case).
Superoperator schur_project(const std::vector<Superoperator>& projectors, const Superoperator& q);

}  // namespace brb
