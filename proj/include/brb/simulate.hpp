#pragma once

#include <array>

#include "brb/noise.hpp"
#include "brb/sequences.hpp"
#include "brb/superop.hpp"

namespace brb {

// Precompiled column-stacking superoperators for the shot simulator.
struct CompiledBrbNoise {
  int n_qubits = 1;
  Superoperator gate, prep, meas;
};
CompiledBrbNoise compile_noise(const BrbNoise& noise, int n_qubits);

struct CompiledIbrbNoise {
  Superoperator z_noise, cx_noise, cxp_noise, prep, meas;
  Matrix cx_unitary, cxp_unitary;
};
CompiledIbrbNoise compile_noise(const IbrbNoise& noise);

// Exact expectation of the branch observable at the end of the noisy circuit.
double brb_sequence_expectation(const BrbSequence& seq, const CompiledBrbNoise& noise);
double ibrb_sequence_expectation(const IbrbSequence& seq, const CompiledIbrbNoise& noise);

struct ShotResult {
  int shots = 0;
  int shot_sum = 0;       // sum of raw +-1 outcomes
  double weighted_mean = 0.0;  // sequence weight * shot_sum / shots
};

// Samples `shots` single-shot +-1 outcomes of the exact Bernoulli law.
ShotResult sample_shots(double expectation, double weight, int shots, Rng& rng);

// Exact decay parameters of the group protocol under gate noise: lambda1 from
// the Z-string transfer trace, lambda2 from the complement, and the SPAM
// prefactors a1, a2 of the fitted exponentials.
struct BrbDecay {
  double lambda1 = 1.0, lambda2 = 1.0;
  double a1 = 1.0, a2 = 1.0;
};
BrbDecay brb_exact_decay(const BrbNoise& noise, int n_qubits);

// The interleaved protocol's central operator for one branch: the projected
// average of the two dressed interleaved gates, a 16x16 matrix in the Pauli
// basis of rank at most 4.
Matrix ibrb_m_operator(const IbrbNoise& noise, IbrbBranch b);

// Eigenvalues of the rank-4 restriction of the branch operator, labeled as
// the fitted pair (lambda, kappa) plus the two neglected ones. Branch 0+ has
// an exact unit eigenvalue (the additive constant of its decay model), which
// is reported as kappa while lambda is the largest remaining magnitude; all
// other branches take the two largest-magnitude eigenvalues with
// Re(lambda) > Re(kappa). Coefficients give the exact infinite-shot survival
// S(n) = sum_j coeff[j] * mu[j]^n including SPAM.
struct IbrbBranchDecay {
  double lambda = 1.0, kappa = 1.0;
  std::array<double, 2> neglected{};  // magnitudes
  std::array<Complex, 4> mu{};
  std::array<Complex, 4> coeff{};
  double max_imag = 0.0;  // largest |Im| over the two kept eigenvalues
};

struct IbrbDecays {
  std::array<IbrbBranchDecay, 6> branch;  // indexed by IbrbBranch order
};
IbrbDecays ibrb_exact_decays(const IbrbNoise& noise);

// Branch observables and preparation states as dense matrices, row-indexed.
Matrix ibrb_observable(IbrbBranch b, int row);
Matrix ibrb_prep_state(IbrbBranch b, int row, int prep_state);
double ibrb_prep_sign(IbrbBranch b, int row, int prep_state);
// The exact (possibly non-positive) preparation operator of a row.
Matrix ibrb_row_state(IbrbBranch b, int row);

Matrix brb_observable(int n_qubits, int b);
Matrix brb_prep_state(int n_qubits, int b);

}  // namespace brb
