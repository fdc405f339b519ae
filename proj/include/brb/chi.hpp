#pragma once

#include "brb/channels.hpp"
#include "brb/superop.hpp"

namespace brb {

// Diagonal of the chi matrix in the X(alpha)Z(beta) operator basis, indexed by
// v = (alpha << n) | beta. This basis is fixed project-wide: expansions use
// the strings X(alpha)Z(beta) themselves (no re-phasing of XZ to Y), so chi
// here can differ from a Hermitian-basis chi by unit phases off the diagonal;
// the diagonal is phase-invariant.
struct ChiDiagonal {
  int n_qubits = 1;
  Eigen::VectorXd values;
};

ChiDiagonal chi_diagonal(const KrausChannel& ch);

// Full chi matrix recovered from a superoperator by projecting onto the
// operator basis P_v^* (x) P_u. Independent of any Kraus decomposition.
Matrix chi_matrix_full(const Superoperator& s);

struct BiasReport {
  double p_d = 0.0;       // weight on pure-Z strings, identity excluded
  double p_nd = 0.0;      // weight on strings with any X component
  double eta = 0.0;       // p_d / p_nd; +inf if p_nd = 0 < p_d, 0 if both 0
  double chi_00 = 0.0;    // 1 - p_d - p_nd
  double fidelity = 0.0;  // (2^n chi_00 + 1) / (2^n + 1)
};

BiasReport bias_report(const ChiDiagonal& chi);
BiasReport bias_report(const KrausChannel& ch);

struct SubspaceTraces {
  double trace_z = 0.0;    // sum of transfer-matrix diagonal over Z strings
  double trace_pmz = 0.0;  // same over strings with X component
};

SubspaceTraces subspace_traces(const Superoperator& s);

// (p_d, p_nd) expressed through the subspace traces; inverse of the relations
// trace_z = 2^n (1 - p_nd), trace_pmz = (4^n - 2^n)(1 - p_nd) - 4^n p_d.
BiasReport bias_from_traces(const SubspaceTraces& t, int n_qubits);

}  // namespace brb
