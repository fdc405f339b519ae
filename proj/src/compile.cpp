#include "brb/compile.hpp"

#include <stdexcept>

namespace brb {

Gate gate_pauli(uint32_t alpha, uint32_t beta) {
  Gate g;
  g.kind = Gate::Kind::Pauli;
  g.alpha = alpha;
  g.beta = beta;
  return g;
}

Gate gate_phase(int qubit, int exponent) {
  Gate g;
  g.kind = Gate::Kind::Phase;
  g.qubit = qubit;
  g.exponent = ((exponent % 4) + 4) % 4;
  return g;
}

Gate gate_cz(int a, int b) {
  Gate g;
  g.kind = Gate::Kind::CZ;
  g.control = a;
  g.target = b;
  return g;
}

Gate gate_cx(int control, int target) {
  Gate g;
  g.kind = Gate::Kind::CX;
  g.control = control;
  g.target = target;
  return g;
}

Gate gate_cx_prime(int control, int target) {
  Gate g = gate_cx(control, target);
  g.kind = Gate::Kind::CXPrime;
  return g;
}

void push_frame(PauliFrame& frame, const Gate& gate) {
  const auto bit = [](uint32_t mask, int q) { return (mask >> q) & 1u; };
  switch (gate.kind) {
    case Gate::Kind::Pauli:
      return;  // Paulis commute mod phase
    case Gate::Kind::Phase:
      if (gate.exponent % 2 == 1 && bit(frame.alpha, gate.qubit)) {
        frame.beta ^= 1u << gate.qubit;
      }
      return;
    case Gate::Kind::CZ:
      if (bit(frame.alpha, gate.control)) frame.beta ^= 1u << gate.target;
      if (bit(frame.alpha, gate.target)) frame.beta ^= 1u << gate.control;
      return;
    case Gate::Kind::CX:
    case Gate::Kind::CXPrime:
      if (bit(frame.alpha, gate.control)) frame.alpha ^= 1u << gate.target;
      if (bit(frame.beta, gate.target)) frame.beta ^= 1u << gate.control;
      return;
  }
  throw std::invalid_argument("push_frame: bad gate kind");
}

Gate cx_insertion(const Gate& cx_gate, uint32_t beta_pair) {
  uint32_t beta = 0;
  if (beta_pair & 1u) beta |= 1u << cx_gate.control;
  if (beta_pair & 2u) beta |= 1u << cx_gate.target;
  return gate_pauli(0, beta);
}

PauliFrame cx_pickup(const Gate& cx_gate, uint32_t beta_pair, bool swap, int n_qubits) {
  PauliFrame p;
  p.n_qubits = n_qubits;
  // CX maps Z_t to Z_c Z_t under conjugation, so the inserted Z-group element
  // reappears after the gate with the target's phase copied onto the control.
  const uint32_t b_c = beta_pair & 1u;
  const uint32_t b_t = (beta_pair >> 1) & 1u;
  p.beta = ((b_c ^ b_t) << cx_gate.control) | (b_t << cx_gate.target);
  // Playing the other CX flavor contributes the X_t that relates the two;
  // relative to a CXPrime original the coin's meaning flips.
  uint32_t x_t = swap ? 1u : 0u;
  if (cx_gate.kind == Gate::Kind::CXPrime) x_t ^= 1u;
  p.alpha = x_t << cx_gate.target;
  return p;
}

CompiledCircuit randomized_compile(const Circuit& circuit, Rng& rng) {
  CompiledCircuit out;
  out.circuit.n_qubits = circuit.n_qubits;
  out.frame.n_qubits = circuit.n_qubits;
  for (const Gate& g : circuit.gates) {
    switch (g.kind) {
      case Gate::Kind::Pauli:
      case Gate::Kind::Phase:
      case Gate::Kind::CZ:
        push_frame(out.frame, g);
        out.circuit.gates.push_back(g);
        break;
      case Gate::Kind::CX:
      case Gate::Kind::CXPrime: {
        const uint32_t beta_pair = rng.uniform_below(4);
        const bool swap = rng.coin();
        push_frame(out.frame, g);
        const PauliFrame pickup = cx_pickup(g, beta_pair, swap, circuit.n_qubits);
        out.frame.alpha ^= pickup.alpha;
        out.frame.beta ^= pickup.beta;
        if (beta_pair != 0) out.circuit.gates.push_back(cx_insertion(g, beta_pair));
        Gate played = g;
        played.kind = swap ? Gate::Kind::CXPrime : Gate::Kind::CX;
        out.circuit.gates.push_back(played);
        break;
      }
    }
  }
  return out;
}

Matrix gate_unitary(const Gate& gate, int n_qubits) {
  const uint32_t dim = 1u << n_qubits;
  switch (gate.kind) {
    case Gate::Kind::Pauli:
      return pauli_string_matrix(n_qubits, pauli_index(n_qubits, gate.alpha, gate.beta));
    case Gate::Kind::Phase: {
      Matrix u = Matrix::Zero(dim, dim);
      const Complex im(0.0, 1.0);
      for (uint32_t x = 0; x < dim; ++x) {
        const bool on = (x >> gate.qubit) & 1u;
        u(x, x) = on ? std::pow(im, gate.exponent) : Complex(1.0);
      }
      return u;
    }
    case Gate::Kind::CZ: {
      Matrix u = Matrix::Zero(dim, dim);
      for (uint32_t x = 0; x < dim; ++x) {
        const bool both = ((x >> gate.control) & 1u) && ((x >> gate.target) & 1u);
        u(x, x) = both ? -1.0 : 1.0;
      }
      return u;
    }
    case Gate::Kind::CX:
    case Gate::Kind::CXPrime: {
      Matrix u = Matrix::Zero(dim, dim);
      const uint32_t flip = gate.kind == Gate::Kind::CXPrime ? 1u << gate.target : 0u;
      for (uint32_t x = 0; x < dim; ++x) {
        uint32_t y = x ^ flip;
        if ((x >> gate.control) & 1u) y ^= 1u << gate.target;
        u(y, x) = 1.0;
      }
      return u;
    }
  }
  throw std::invalid_argument("gate_unitary: bad gate kind");
}

Matrix circuit_unitary(const Circuit& circuit) {
  const uint32_t dim = 1u << circuit.n_qubits;
  Matrix u = Matrix::Identity(dim, dim);
  for (const Gate& g : circuit.gates) u = gate_unitary(g, circuit.n_qubits) * u;
  return u;
}

Matrix frame_unitary(const PauliFrame& frame) {
  return pauli_string_matrix(frame.n_qubits,
                             pauli_index(frame.n_qubits, frame.alpha, frame.beta));
}

}  // namespace brb
