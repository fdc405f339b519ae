#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "brb/pauli.hpp"
#include "brb/rng.hpp"

namespace brb {

// Canonical form of an element of the phase-quotiented group generated by
// {X_i, T_i, CX_{ij}}: acting on computational basis states as
//   |x> -> w^{p(x)} |M x ^ a>,   w = exp(i pi / 4),
// where p is a multilinear polynomial over Z_8 with zero constant term
// (the constant is a global phase and is quotiented away), M is invertible
// over GF(2) and a is a bit vector. Supports up to 3 qubits.
//
// Not every such (p, M, a) is reachable from the generators: a degree-k
// monomial of p can only carry a coefficient that is a multiple of 2^(k-1),
// because substituting XOR expressions into lower-degree terms is the only
// source of higher-degree ones (x ^ y = x + y - 2xy). Closure under
// multiplication follows from the same expansion, and a BFS over the
// generators confirms the count, so the group order is
//   prod_k (8 / 2^(k-1))^(n choose k) * 2^n * |GL(n, 2)|,
// which is 16, 6144, and 88080384 for n = 1, 2, 3.

inline constexpr int kMaxDihedralQubits = 3;

// Multilinear polynomial over Z_8: coefficient of prod_{i in S} x_i is
// c[S] for subset masks S in [0, 2^n); c[0] is the constant term.
using PhasePoly = std::array<uint8_t, 8>;

// Rows of an n x n GF(2) matrix as bit masks: row(i) bit j = M[i][j].
using BinMatrix = std::array<uint8_t, 3>;

struct CnotDihedralElement {
  int n_qubits = 1;
  PhasePoly phase{};     // canonical: phase[0] == 0
  BinMatrix linear{};    // invertible over GF(2)
  uint8_t affine = 0;
};

CnotDihedralElement cd_identity(int n_qubits);
CnotDihedralElement cd_x(int n_qubits, int qubit);
CnotDihedralElement cd_t(int n_qubits, int qubit);
CnotDihedralElement cd_cx(int n_qubits, int control, int target);
// X_target CX X_target: flips the target when the control is 0.
CnotDihedralElement cd_cx_prime(int n_qubits, int control, int target);

// Embedding of the phase-free Pauli X(alpha)Z(beta).
CnotDihedralElement cd_from_pauli(int n_qubits, uint32_t alpha, uint32_t beta);

// Group product g*h: h acts first.
CnotDihedralElement cd_multiply(const CnotDihedralElement& g, const CnotDihedralElement& h);
CnotDihedralElement cd_inverse(const CnotDihedralElement& g);
bool cd_equal(const CnotDihedralElement& a, const CnotDihedralElement& b);

// Injective 64-bit packing of the canonical form, for hashing/enumeration.
uint64_t cd_key(const CnotDihedralElement& g);

Matrix cd_to_unitary(const CnotDihedralElement& g);

CnotDihedralElement cd_sample_uniform(int n_qubits, Rng& rng);

// All group elements; only feasible for n <= 2 (16 and 6144 elements).
std::vector<CnotDihedralElement> cd_enumerate(int n_qubits);

// Independent closure oracle: BFS from the identity over the generator set
// {X_i, T_i, CX_{ij}}. Returns the number of distinct canonical forms.
size_t cd_bfs_closure_size(int n_qubits);

// prod_k (8 / 2^(k-1))^(n choose k) * 2^n * |GL(n, 2)|.
uint64_t cd_group_order(int n_qubits);
uint64_t gl2_group_order(int n_qubits);

int poly_eval(const PhasePoly& p, uint32_t x);
uint32_t binmat_apply(const BinMatrix& m, int n, uint32_t x);

}  // namespace brb
