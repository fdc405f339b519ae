#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "brb/cnot_dihedral.hpp"
#include "brb/rng.hpp"

namespace brb {

// One randomized sequence: a uniform Pauli U_0 compiled into the first gate,
// n uniform group elements, and a closing gate inverting their product. The
// recorded weight is the character of U_0 for the chosen branch b in {1, 2}.
struct BrbSequence {
  int n_qubits = 1;
  int b = 1;
  int n = 1;
  uint32_t u0_alpha = 0;
  uint32_t u0_beta = 0;
  std::vector<CnotDihedralElement> gates;  // n + 1 entries
  double weight = 1.0;
};

BrbSequence brb_generate_sequence(int n_qubits, int b, int n, Rng& rng);

enum class IbrbBranch { B0p, B0m, B1p, B1m, B2p, B2m };

inline constexpr std::array<IbrbBranch, 6> kIbrbBranches{
    IbrbBranch::B0p, IbrbBranch::B0m, IbrbBranch::B1p,
    IbrbBranch::B1m, IbrbBranch::B2p, IbrbBranch::B2m};

std::string ibrb_branch_name(IbrbBranch b);
IbrbBranch ibrb_branch_from_name(const std::string& name);

// Number of interleaved CX-type gates for sequence length n: branches 2+/2-
// consume two per length unit, the others one.
int ibrb_gate_count(IbrbBranch b, int n);

// Z-group gates z[0..m], interleaved gate choices c_prime[0..m-1] (false = CX,
// true = the X-conjugated variant), a uniformly chosen observable row for
// branches with two rows, a uniformly chosen preparation element for rows
// whose state is a +-1 mixture. The weight collects the branch character of
// every Z gate, the sigma sign of the interleaved choices, and the
// preparation sign.
struct IbrbSequence {
  IbrbBranch branch = IbrbBranch::B0p;
  int n = 1;
  std::vector<uint8_t> z_gates;
  std::vector<uint8_t> c_prime;
  int row = 0;
  int prep_state = 0;
  double weight = 1.0;
};

IbrbSequence ibrb_generate_sequence(IbrbBranch branch, int n, Rng& rng);

double ibrb_character(IbrbBranch b, uint32_t beta);
// Character applied to the Z gate at position index (0-based) in the applied
// order; branches 2+/2- alternate two characters.
double ibrb_position_character(IbrbBranch b, int position, uint32_t beta);

int ibrb_row_count(IbrbBranch b);
int ibrb_prep_count(IbrbBranch b, int row);

}  // namespace brb
