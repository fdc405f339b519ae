#include "brb/sequences.hpp"

#include <stdexcept>

#include "brb/irreps.hpp"
#include "brb/simulate.hpp"

namespace brb {

BrbSequence brb_generate_sequence(int n_qubits, int b, int n, Rng& rng) {
  if (b != 1 && b != 2) throw std::invalid_argument("brb_generate_sequence: b must be 1 or 2");
  if (n < 1) throw std::invalid_argument("brb_generate_sequence: n must be >= 1");
  const uint32_t dim = 1u << n_qubits;
  BrbSequence seq;
  seq.n_qubits = n_qubits;
  seq.b = b;
  seq.n = n;
  seq.u0_alpha = rng.uniform_below(dim);
  seq.u0_beta = rng.uniform_below(dim);
  seq.gates.reserve(static_cast<size_t>(n) + 1);

  CnotDihedralElement product = cd_identity(n_qubits);
  for (int i = 1; i <= n; ++i) {
    CnotDihedralElement u = cd_sample_uniform(n_qubits, rng);
    product = cd_multiply(u, product);
    if (i == 1) {
      seq.gates.push_back(cd_multiply(u, cd_from_pauli(n_qubits, seq.u0_alpha, seq.u0_beta)));
    } else {
      seq.gates.push_back(u);
    }
  }
  seq.gates.push_back(cd_inverse(product));
  seq.weight = brb_character(n_qubits, b, seq.u0_alpha, seq.u0_beta);
  return seq;
}

std::string ibrb_branch_name(IbrbBranch b) {
  switch (b) {
    case IbrbBranch::B0p: return "0+";
    case IbrbBranch::B0m: return "0-";
    case IbrbBranch::B1p: return "1+";
    case IbrbBranch::B1m: return "1-";
    case IbrbBranch::B2p: return "2+";
    case IbrbBranch::B2m: return "2-";
  }
  throw std::invalid_argument("ibrb_branch_name: bad branch");
}

IbrbBranch ibrb_branch_from_name(const std::string& name) {
  for (IbrbBranch b : kIbrbBranches) {
    if (name == ibrb_branch_name(b)) return b;
  }
  throw std::invalid_argument("ibrb_branch_from_name: unknown branch '" + name + "'");
}

int ibrb_gate_count(IbrbBranch b, int n) {
  return (b == IbrbBranch::B2p || b == IbrbBranch::B2m) ? 2 * n : n;
}

int ibrb_row_count(IbrbBranch b) {
  switch (b) {
    case IbrbBranch::B0p:
    case IbrbBranch::B0m:
    case IbrbBranch::B1m: return 1;
    default: return 2;
  }
}

int ibrb_prep_count(IbrbBranch b, int row) {
  (void)row;
  switch (b) {
    case IbrbBranch::B0p:
    case IbrbBranch::B0m:
    case IbrbBranch::B1p: return 2;
    default: return 1;
  }
}

double ibrb_prep_sign(IbrbBranch b, int row, int prep_state) {
  if (prep_state == 0) return 1.0;
  // Second state of a signed mixture: row 0 of 0+/0-, row 1 of 1+.
  if (b == IbrbBranch::B0p || b == IbrbBranch::B0m) return -1.0;
  if (b == IbrbBranch::B1p) return row == 1 ? -1.0 : 1.0;
  return 1.0;
}

double ibrb_character(IbrbBranch b, uint32_t beta) {
  switch (b) {
    case IbrbBranch::B0p:
    case IbrbBranch::B0m: return 1.0;
    case IbrbBranch::B1p:
    case IbrbBranch::B1m: return (beta & 2u) ? -1.0 : 1.0;
    case IbrbBranch::B2p: return (beta & 1u) ? -1.0 : 1.0;
    case IbrbBranch::B2m: return parity(beta & 3u) ? -1.0 : 1.0;
  }
  throw std::invalid_argument("ibrb_character: bad branch");
}

double ibrb_position_character(IbrbBranch b, int position, uint32_t beta) {
  if (b == IbrbBranch::B2p || b == IbrbBranch::B2m) {
    return position % 2 == 0 ? ibrb_character(IbrbBranch::B2p, beta)
                             : ibrb_character(IbrbBranch::B2m, beta);
  }
  return ibrb_character(b, beta);
}

IbrbSequence ibrb_generate_sequence(IbrbBranch branch, int n, Rng& rng) {
  if (n < 0) throw std::invalid_argument("ibrb_generate_sequence: n must be >= 0");
  const int m = ibrb_gate_count(branch, n);
  IbrbSequence seq;
  seq.branch = branch;
  seq.n = n;
  seq.z_gates.resize(static_cast<size_t>(m) + 1);
  seq.c_prime.resize(static_cast<size_t>(m));
  double weight = 1.0;
  for (int j = 0; j <= m; ++j) {
    seq.z_gates[static_cast<size_t>(j)] = static_cast<uint8_t>(rng.uniform_below(4));
    weight *= ibrb_position_character(branch, j, seq.z_gates[static_cast<size_t>(j)]);
  }
  const bool minus = branch == IbrbBranch::B0m || branch == IbrbBranch::B1m ||
                     branch == IbrbBranch::B2m;
  for (int j = 0; j < m; ++j) {
    seq.c_prime[static_cast<size_t>(j)] = rng.coin() ? 1 : 0;
    if (minus && seq.c_prime[static_cast<size_t>(j)]) weight = -weight;
  }
  seq.row = static_cast<int>(rng.uniform_below(static_cast<uint32_t>(ibrb_row_count(branch))));
  seq.prep_state = static_cast<int>(
      rng.uniform_below(static_cast<uint32_t>(ibrb_prep_count(branch, seq.row))));
  weight *= ibrb_prep_sign(branch, seq.row, seq.prep_state);
  seq.weight = weight;
  return seq;
}

}  // namespace brb
