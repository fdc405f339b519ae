#include "brb/superop.hpp"

#include <mutex>
#include <stdexcept>
#include <unordered_map>

namespace brb {

namespace {

void check_qubits(int n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxSuperopQubits)
    throw std::invalid_argument("superoperator qubit count out of range");
}

}  // namespace

Superoperator superop_identity(int n_qubits, Basis basis) {
  check_qubits(n_qubits);
  Eigen::Index d4 = Eigen::Index(1) << (2 * n_qubits);
  return Superoperator{n_qubits, basis, Matrix::Identity(d4, d4)};
}

Vector vectorize(const Matrix& rho) {
  Eigen::Index d = rho.rows();
  Vector v(d * d);
  for (Eigen::Index j = 0; j < d; ++j) v.segment(j * d, d) = rho.col(j);
  return v;
}

Matrix unvectorize(const Vector& v) {
  Eigen::Index d = Eigen::Index(std::llround(std::sqrt(double(v.size()))));
  Matrix rho(d, d);
  for (Eigen::Index j = 0; j < d; ++j) rho.col(j) = v.segment(j * d, d);
  return rho;
}

Superoperator unitary_to_superoperator(const Matrix& u) {
  Eigen::Index d = u.rows();
  int n = 0;
  while ((Eigen::Index(1) << n) < d) ++n;
  if ((Eigen::Index(1) << n) != d || u.cols() != d)
    throw std::invalid_argument("unitary_to_superoperator: not a square power-of-two matrix");
  check_qubits(n);
  return Superoperator{n, Basis::ColumnStacking, kron(u.conjugate(), u)};
}

Superoperator kraus_to_superoperator(int n_qubits, const std::vector<Matrix>& kraus) {
  check_qubits(n_qubits);
  Eigen::Index d = Eigen::Index(1) << n_qubits;
  Matrix m = Matrix::Zero(d * d, d * d);
  for (const Matrix& k : kraus) {
    if (k.rows() != d || k.cols() != d)
      throw std::invalid_argument("kraus_to_superoperator: operator dimension mismatch");
    m += kron(k.conjugate(), k);
  }
  return Superoperator{n_qubits, Basis::ColumnStacking, m};
}

const Matrix& pauli_basis_matrix(int n_qubits) {
  check_qubits(n_qubits);
  static std::mutex mu;
  static std::unordered_map<int, Matrix> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n_qubits);
  if (it != cache.end()) return it->second;
  Eigen::Index d = Eigen::Index(1) << n_qubits;
  double norm = 1.0 / std::sqrt(double(d));
  Matrix b(d * d, d * d);
  for (uint32_t v = 0; v < uint32_t(d * d); ++v)
    b.col(v) = vectorize(Matrix(norm * pauli_string_matrix(n_qubits, v)));
  return cache.emplace(n_qubits, std::move(b)).first->second;
}

Superoperator to_basis(const Superoperator& s, Basis basis) {
  if (s.basis == basis) return s;
  const Matrix& b = pauli_basis_matrix(s.n_qubits);
  Superoperator r{s.n_qubits, basis, Matrix()};
  if (basis == Basis::PauliBasis)
    r.m = b.adjoint() * s.m * b;
  else
    r.m = b * s.m * b.adjoint();
  return r;
}

Superoperator compose(const Superoperator& a, const Superoperator& b) {
  if (a.n_qubits != b.n_qubits) throw std::invalid_argument("compose: qubit count mismatch");
  if (a.basis != b.basis) throw std::invalid_argument("compose: basis mismatch");
  return Superoperator{a.n_qubits, a.basis, a.m * b.m};
}

Vector apply(const Superoperator& s, const Vector& state) {
  if (state.size() != s.m.cols()) throw std::invalid_argument("apply: state dimension mismatch");
  return s.m * state;
}

Vector state_in_basis(const Matrix& rho, Basis basis) {
  Vector v = vectorize(rho);
  if (basis == Basis::ColumnStacking) return v;
  int n = 0;
  while ((Eigen::Index(1) << (2 * n)) < v.size()) ++n;
  return pauli_basis_matrix(n).adjoint() * v;
}

Complex expectation(const Matrix& observable, const Vector& state, Basis basis) {
  Vector e = state_in_basis(observable, basis);
  return e.dot(state);  // Eigen dot conjugates the left argument
}

}  // namespace brb
