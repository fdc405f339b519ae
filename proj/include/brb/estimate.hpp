#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "brb/chi.hpp"
#include "brb/fit.hpp"
#include "brb/noise.hpp"

namespace brb {

// One random sequence's aggregated shots. `arm` indexes the protocol branch:
// 0/1 for the group protocol's two irrep settings (b = 1, 2), 0..5 for the
// interleaved branches in IbrbBranch order.
struct SequenceRecord {
  int arm = 0;
  int n = 0;
  int sequence_id = 0;
  double weight = 1.0;
  int shots = 0;
  int shot_sum = 0;
  double weighted_mean = 0.0;
};

using RecordList = std::vector<SequenceRecord>;

// Per-length averages of the weighted means for one arm, with the standard
// error of the mean as fit weight (floored to avoid degenerate weights).
struct DecayPoints {
  std::vector<double> n, y, sigma;
};
DecayPoints decay_points(const RecordList& records, int arm);

struct BiasEstimate {
  double p_d = 0.0;
  double p_nd = 0.0;
  double eta = 0.0;
};

double eta_from_probabilities(double p_d, double p_nd);

// Dephasing / non-dephasing probabilities from the two group-protocol decay
// rates at the given qubit count.
BiasEstimate bias_from_brb_rates(int n_qubits, double lambda1, double lambda2);

// Fitted decay-rate pairs of the six interleaved branches, in IbrbBranch
// order. kappa[0] is the 0+ branch's additive constant slot and is unused.
struct IbrbRates {
  std::array<double, 6> lambda{};
  std::array<double, 6> kappa{};
};
BiasEstimate bias_from_ibrb_rates(const IbrbRates& rates);

struct BrbAnalysis {
  DecayFit fit_b1, fit_b2;
  BiasEstimate bias;
  bool fits_converged = false;
};
BrbAnalysis analyze_brb_records(const RecordList& records, int n_qubits);

struct IbrbAnalysis {
  std::array<DecayFit, 6> fits;
  IbrbRates rates;
  BiasEstimate bias;
  bool fits_converged = false;
};
IbrbAnalysis analyze_ibrb_records(const RecordList& records);

// Nonparametric bootstrap over sequences: resamples sequences with
// replacement within each (arm, n) cell, refits, and reports the spread.
// eta_stderr is taken over the resamples with finite eta.
struct BootstrapSummary {
  BiasEstimate point;
  double p_d_stderr = 0.0;
  double p_nd_stderr = 0.0;
  double eta_stderr = 0.0;
  int resamples = 0;
  int failures = 0;
};
BootstrapSummary bootstrap_brb(const RecordList& records, int n_qubits, int resamples,
                               uint64_t seed);
BootstrapSummary bootstrap_ibrb(const RecordList& records, int resamples, uint64_t seed);

double reduced_chi_squared(const std::vector<double>& estimates,
                           const std::vector<double>& truths,
                           const std::vector<double>& stderrs);

// Ground truth the interleaved protocol targets: the chi-diagonal bias of the
// average of the two interleaved-gate noise channels composed after the
// single-qubit-layer noise.
BiasReport ibrb_true_bias(const IbrbNoise& noise);

}  // namespace brb
