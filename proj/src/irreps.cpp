#include "brb/irreps.hpp"

#include <stdexcept>

namespace brb {

namespace {

Superoperator diag_projector(int n_qubits, const std::vector<uint32_t>& indices) {
  Eigen::Index d4 = Eigen::Index(1) << (2 * n_qubits);
  Matrix m = Matrix::Zero(d4, d4);
  for (uint32_t v : indices) m(v, v) = 1.0;
  return Superoperator{n_qubits, Basis::PauliBasis, m};
}

uint32_t label_to_index(int n_qubits, const std::vector<int>& labels) {
  // per qubit: 0 -> (0,0) identity, 1 -> (0,1) Z, 2 -> (1,1) XZ, 3 -> (1,0) X
  uint32_t alpha = 0, beta = 0;
  for (int q = 0; q < n_qubits; ++q) {
    switch (labels[q]) {
      case 0: break;
      case 1: beta |= 1u << q; break;
      case 2: alpha |= 1u << q; beta |= 1u << q; break;
      case 3: alpha |= 1u << q; break;
      default: throw std::invalid_argument("pauli irrep label out of range");
    }
  }
  return pauli_index(n_qubits, alpha, beta);
}

}  // namespace

Superoperator pauli_irrep_projector(int n_qubits, const std::vector<int>& labels) {
  if (int(labels.size()) != n_qubits) throw std::invalid_argument("pauli irrep: label count mismatch");
  return diag_projector(n_qubits, {label_to_index(n_qubits, labels)});
}

double pauli_irrep_character(const std::vector<int>& labels, uint32_t alpha, uint32_t beta) {
  int sign = 0;
  for (size_t q = 0; q < labels.size(); ++q) {
    int a = (alpha >> q) & 1, b = (beta >> q) & 1;
    switch (labels[q]) {
      case 0: break;
      case 1: sign += a; break;
      case 2: sign += a + b; break;
      case 3: sign += b; break;
      default: throw std::invalid_argument("pauli irrep label out of range");
    }
  }
  return (sign & 1) ? -1.0 : 1.0;
}

Superoperator brb_character_projector(int n_qubits, int b) {
  if (b != 1 && b != 2) throw std::invalid_argument("brb character index must be 1 or 2");
  std::vector<int> labels(n_qubits, b == 1 ? 1 : 3);
  return pauli_irrep_projector(n_qubits, labels);
}

double brb_character(int n_qubits, int b, uint32_t alpha, uint32_t beta) {
  std::vector<int> labels(n_qubits, b == 1 ? 1 : 3);
  return pauli_irrep_character(labels, alpha, beta);
}

Superoperator z_class_projector(int n_qubits, uint32_t alpha_class) {
  std::vector<uint32_t> idx;
  for (uint32_t beta = 0; beta < (1u << n_qubits); ++beta)
    idx.push_back(pauli_index(n_qubits, alpha_class, beta));
  return diag_projector(n_qubits, idx);
}

Superoperator z_rank1_projector(int n_qubits, uint32_t pauli_index_v) {
  return diag_projector(n_qubits, {pauli_index_v});
}

double z_class_character(uint32_t alpha_class, uint32_t beta) {
  return parity(alpha_class & beta) ? -1.0 : 1.0;
}

Superoperator dihedral_projector(int n_qubits, int block) {
  uint32_t dim = 1u << n_qubits;
  std::vector<uint32_t> idx;
  for (uint32_t v = 0; v < dim * dim; ++v) {
    uint32_t alpha = pauli_index_alpha(n_qubits, v);
    bool in_block = (block == 0 && v == 0) || (block == 1 && alpha == 0 && v != 0) ||
                    (block == 2 && alpha != 0);
    if (in_block) idx.push_back(v);
  }
  if (idx.empty()) throw std::invalid_argument("dihedral projector block must be 0, 1 or 2");
  return diag_projector(n_qubits, idx);
}

namespace {

Superoperator pauli_superop_ptm(int n_qubits, uint32_t alpha, uint32_t beta) {
  Matrix u = pauli_string_matrix(n_qubits, pauli_index(n_qubits, alpha, beta));
  return to_basis(unitary_to_superoperator(u), Basis::PauliBasis);
}

}  // namespace

Superoperator group_average_projector(GroupKind kind, int n_qubits, const PauliCharacter& character) {
  if (kind == GroupKind::DihedralN)
    throw std::invalid_argument("group_average_projector: dihedral characters not provided");
  uint32_t dim = 1u << n_qubits;
  Eigen::Index d4 = Eigen::Index(1) << (2 * n_qubits);
  Matrix acc = Matrix::Zero(d4, d4);
  size_t count = 0;
  uint32_t alpha_lim = kind == GroupKind::PauliN ? dim : 1;
  for (uint32_t alpha = 0; alpha < alpha_lim; ++alpha)
    for (uint32_t beta = 0; beta < dim; ++beta) {
      acc += character(alpha, beta) * pauli_superop_ptm(n_qubits, alpha, beta).m;
      ++count;
    }
  return Superoperator{n_qubits, Basis::PauliBasis, acc / double(count)};
}

Superoperator schur_average(GroupKind kind, int n_qubits, const Superoperator& q, bool parallel) {
  Superoperator qp = to_basis(q, Basis::PauliBasis);
  std::vector<Matrix> reps;
  if (kind == GroupKind::DihedralN) {
    for (const CnotDihedralElement& g : cd_enumerate(n_qubits))
      reps.push_back(to_basis(unitary_to_superoperator(cd_to_unitary(g)), Basis::PauliBasis).m);
  } else {
    uint32_t dim = 1u << n_qubits;
    uint32_t alpha_lim = kind == GroupKind::PauliN ? dim : 1;
    for (uint32_t alpha = 0; alpha < alpha_lim; ++alpha)
      for (uint32_t beta = 0; beta < dim; ++beta)
        reps.push_back(pauli_superop_ptm(n_qubits, alpha, beta).m);
  }

  Matrix acc = Matrix::Zero(qp.m.rows(), qp.m.cols());
  if (parallel) {
#ifdef BRB_HAVE_OPENMP
#pragma omp parallel
    {
      Matrix local = Matrix::Zero(qp.m.rows(), qp.m.cols());
#pragma omp for nowait
      for (long i = 0; i < long(reps.size()); ++i) local += reps[i].adjoint() * qp.m * reps[i];
#pragma omp critical
      acc += local;
    }
#else
    for (const Matrix& r : reps) acc += r.adjoint() * qp.m * r;
#endif
  } else {
    for (const Matrix& r : reps) acc += r.adjoint() * qp.m * r;
  }
  Superoperator out{n_qubits, Basis::PauliBasis, acc / double(reps.size())};
  return to_basis(out, q.basis);
}

Superoperator schur_project(const std::vector<Superoperator>& projectors, const Superoperator& q) {
  if (projectors.empty()) throw std::invalid_argument("schur_project: no projectors");
  Superoperator qp = to_basis(q, projectors.front().basis);
  Matrix acc = Matrix::Zero(qp.m.rows(), qp.m.cols());
  for (const Superoperator& p : projectors) {
    Complex tr_pq = (p.m * qp.m).trace();
    Complex tr_p = p.m.trace();
    acc += (tr_pq / tr_p) * p.m;
  }
  return Superoperator{qp.n_qubits, projectors.front().basis, acc};
}

}  // namespace brb
