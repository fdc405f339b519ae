#pragma once

#include <cstdint>
#include <vector>

#include "brb/pauli.hpp"
#include "brb/rng.hpp"

namespace brb {

// Bias-preserving gate alphabet: Pauli strings, S^k phase gates, CZ, and the
// two CX flavors (CXPrime = X_target CX).
struct Gate {
  enum class Kind { Pauli, Phase, CZ, CX, CXPrime };
  Kind kind = Kind::Pauli;
  uint32_t alpha = 0, beta = 0;  // Pauli
  int qubit = 0, exponent = 1;   // Phase
  int control = 0, target = 0;   // CZ (symmetric), CX, CXPrime
};

Gate gate_pauli(uint32_t alpha, uint32_t beta);
Gate gate_phase(int qubit, int exponent);
Gate gate_cz(int a, int b);
Gate gate_cx(int control, int target);
Gate gate_cx_prime(int control, int target);

struct Circuit {
  int n_qubits = 1;
  std::vector<Gate> gates;  // time order: gates[0] acts first
};

struct PauliFrame {
  int n_qubits = 1;
  uint32_t alpha = 0, beta = 0;
};

// Conjugates the frame by the gate, mod phase: F -> G F G^dag.
void push_frame(PauliFrame& frame, const Gate& gate);

// The Z-group element inserted before a CX-type gate: beta_pair bit 0 goes on
// the control, bit 1 on the target.
Gate cx_insertion(const Gate& cx_gate, uint32_t beta_pair);

// The Pauli picked up by replaying (insertion, then CX or CXPrime per `swap`)
// in place of the original CX-type gate.
PauliFrame cx_pickup(const Gate& cx_gate, uint32_t beta_pair, bool swap, int n_qubits);

struct CompiledCircuit {
  Circuit circuit;
  PauliFrame frame;  // apply after the circuit: frame * compiled = original mod phase
};

// Prefixes every CX-type gate with a fresh uniform two-qubit Z-group element
// (identity insertions are dropped) and replays it as CX or CXPrime with
// probability 1/2 each, accumulating the software Pauli frame.
CompiledCircuit randomized_compile(const Circuit& circuit, Rng& rng);

Matrix gate_unitary(const Gate& gate, int n_qubits);
Matrix circuit_unitary(const Circuit& circuit);
Matrix frame_unitary(const PauliFrame& frame);

}  // namespace brb
