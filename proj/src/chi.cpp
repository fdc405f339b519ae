#include "brb/chi.hpp"

#include <cmath>
#include <limits>

namespace brb {

namespace {

// tr(P_v^dag K) computed entrywise: P_v[x ^ alpha, x] = (-1)^{beta.x}.
Complex pauli_coefficient(int n_qubits, uint32_t v, const Matrix& k) {
  uint32_t alpha = pauli_index_alpha(n_qubits, v);
  uint32_t beta = pauli_index_beta(n_qubits, v);
  uint32_t dim = 1u << n_qubits;
  Complex t = 0.0;
  for (uint32_t x = 0; x < dim; ++x) {
    double s = parity(beta & x) ? -1.0 : 1.0;
    t += s * k(x ^ alpha, x);
  }
  return t / double(dim);
}

}  // namespace

ChiDiagonal chi_diagonal(const KrausChannel& ch) {
  validate_channel(ch);
  uint32_t dim2 = 1u << (2 * ch.n_qubits);
  ChiDiagonal chi{ch.n_qubits, Eigen::VectorXd::Zero(dim2)};
  for (const Matrix& k : ch.kraus)
    for (uint32_t v = 0; v < dim2; ++v) chi.values[v] += std::norm(pauli_coefficient(ch.n_qubits, v, k));
  return chi;
}

Matrix chi_matrix_full(const Superoperator& s) {
  Superoperator cs = to_basis(s, Basis::ColumnStacking);
  uint32_t dim2 = 1u << (2 * cs.n_qubits);
  std::vector<Matrix> strings(dim2);
  for (uint32_t v = 0; v < dim2; ++v) strings[v] = pauli_string_matrix(cs.n_qubits, v);
  Matrix chi(dim2, dim2);
  for (uint32_t u = 0; u < dim2; ++u)
    for (uint32_t v = 0; v < dim2; ++v) {
      Matrix basis_op = kron(strings[v].conjugate(), strings[u]);
      chi(u, v) = (basis_op.conjugate().cwiseProduct(cs.m)).sum() / double(dim2);
    }
  return chi;
}

namespace {

BiasReport report_from(double p_d, double p_nd, int n_qubits) {
  BiasReport r;
  r.p_d = p_d;
  r.p_nd = p_nd;
  if (p_nd == 0.0)
    r.eta = p_d == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  else
    r.eta = p_d / p_nd;
  r.chi_00 = 1.0 - p_d - p_nd;
  double dim = double(1u << n_qubits);
  r.fidelity = (dim * r.chi_00 + 1.0) / (dim + 1.0);
  return r;
}

}  // namespace

BiasReport bias_report(const ChiDiagonal& chi) {
  double p_d = 0.0, p_nd = 0.0;
  for (uint32_t v = 1; v < uint32_t(chi.values.size()); ++v) {
    if (pauli_index_alpha(chi.n_qubits, v) == 0)
      p_d += chi.values[v];
    else
      p_nd += chi.values[v];
  }
  return report_from(p_d, p_nd, chi.n_qubits);
}

BiasReport bias_report(const KrausChannel& ch) { return bias_report(chi_diagonal(ch)); }

SubspaceTraces subspace_traces(const Superoperator& s) {
  Superoperator ps = to_basis(s, Basis::PauliBasis);
  SubspaceTraces t;
  for (uint32_t v = 0; v < uint32_t(ps.m.rows()); ++v) {
    double d = ps.m(v, v).real();
    if (pauli_index_alpha(ps.n_qubits, v) == 0)
      t.trace_z += d;
    else
      t.trace_pmz += d;
  }
  return t;
}

BiasReport bias_from_traces(const SubspaceTraces& t, int n_qubits) {
  double d2 = double(1u << n_qubits);
  double d4 = d2 * d2;
  double p_nd = 1.0 - t.trace_z / d2;
  double p_d = ((d2 - 1.0) * t.trace_z - t.trace_pmz) / d4;
  return report_from(p_d, p_nd, n_qubits);
}

}  // namespace brb
