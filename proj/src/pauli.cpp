#include "brb/pauli.hpp"

#include <stdexcept>

namespace brb {

Complex PauliOperator::sign() const {
  switch (((phase_i_power % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

PauliOperator pauli_identity(int n_qubits) { return PauliOperator{n_qubits, 0, 0, 0}; }

PauliOperator pauli_multiply(const PauliOperator& a, const PauliOperator& b) {
  if (a.n_qubits != b.n_qubits) throw std::invalid_argument("pauli_multiply: qubit count mismatch");
  PauliOperator r;
  r.n_qubits = a.n_qubits;
  r.alpha = a.alpha ^ b.alpha;
  r.beta = a.beta ^ b.beta;
  // X(a)Z(b) X(a')Z(b') = (-1)^{b.a'} X(a^a')Z(b^b')
  r.phase_i_power = (a.phase_i_power + b.phase_i_power + 2 * parity(a.beta & b.alpha)) % 4;
  return r;
}

PauliOperator pauli_inverse(const PauliOperator& a) {
  // (X(a)Z(b))^{-1} = Z(b)X(a) = (-1)^{a.b} X(a)Z(b)
  PauliOperator r = a;
  r.phase_i_power = ((-a.phase_i_power + 2 * parity(a.alpha & a.beta)) % 4 + 4) % 4;
  return r;
}

bool pauli_equal(const PauliOperator& a, const PauliOperator& b) {
  return a.n_qubits == b.n_qubits && a.alpha == b.alpha && a.beta == b.beta &&
         ((a.phase_i_power - b.phase_i_power) % 4 + 4) % 4 == 0;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix r(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      r.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return r;
}

Matrix pauli_string_matrix(int n_qubits, uint32_t v) {
  uint32_t alpha = pauli_index_alpha(n_qubits, v);
  uint32_t beta = pauli_index_beta(n_qubits, v);
  Matrix x(2, 2), z(2, 2), id(2, 2);
  x << 0, 1, 1, 0;
  z << 1, 0, 0, -1;
  id.setIdentity();
  Matrix r = Matrix::Identity(1, 1);
  for (int q = n_qubits - 1; q >= 0; --q) {
    Matrix f = id;
    bool ax = (alpha >> q) & 1, bz = (beta >> q) & 1;
    if (ax && bz) f = x * z;
    else if (ax) f = x;
    else if (bz) f = z;
    r = kron(r, f);
  }
  return r;
}

Matrix pauli_to_matrix(const PauliOperator& p) {
  return p.sign() * pauli_string_matrix(p.n_qubits, pauli_index(p.n_qubits, p.alpha, p.beta));
}

bool equal_mod_phase(const Matrix& a, const Matrix& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  Eigen::Index bi = 0, bj = 0;
  double best = 0.0;
  for (Eigen::Index i = 0; i < b.rows(); ++i)
    for (Eigen::Index j = 0; j < b.cols(); ++j)
      if (std::abs(b(i, j)) > best) { best = std::abs(b(i, j)); bi = i; bj = j; }
  if (best < tol) return a.cwiseAbs().maxCoeff() < tol;
  Complex phase = a(bi, bj) / b(bi, bj);
  if (std::abs(std::abs(phase) - 1.0) > tol) return false;
  return (a - phase * b).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace brb
