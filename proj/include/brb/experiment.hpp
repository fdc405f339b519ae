#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "brb/estimate.hpp"
#include "brb/noise.hpp"

namespace brb {

struct ExperimentConfig {
  std::vector<int> lengths;  // empty: protocol default grid
  int sequences_per_length = 250;
  int shots_per_sequence = 20;
  uint64_t seed = 1;
  bool parallel = true;
};

std::vector<int> default_brb_lengths();
std::vector<int> default_ibrb_lengths();

// Runs every (arm, n, sequence) work item with its own counter-derived RNG;
// results are bit-identical between the serial and parallel paths.
RecordList run_brb_experiment(const BrbNoise& noise, int n_qubits,
                              const ExperimentConfig& config);
RecordList run_ibrb_experiment(const IbrbNoise& noise, const ExperimentConfig& config);

// Arm labels used in result files: "1"/"2" for the group protocol,
// branch names ("0+", ...) for the interleaved one.
std::string arm_label(const std::string& protocol, int arm);
int arm_from_label(const std::string& protocol, const std::string& label);

struct RecordFile {
  std::string protocol;  // "brb" | "ibrb"
  RecordList records;
};

// CSV columns: protocol,b,n,sequence_id,weight,shot_outcomes_aggregate,
// weighted_mean. The aggregate is "shot_sum/shots". Numeric fields use 17
// significant digits so reruns are byte-identical and parse losslessly.
void write_records_csv(const std::string& path, const RecordFile& file);
RecordFile read_records_csv(const std::string& path);

std::string format_double(double x);  // shortest 17-significant-digit form

uint64_t fnv1a64(const std::string& bytes);
uint64_t fnv1a64_file(const std::string& path);
std::string hash_hex(uint64_t h);

// JSON value for a possibly infinite ratio: finite numbers stay numbers,
// +inf serializes as the string "inf".
nlohmann::ordered_json eta_to_json(double eta);
double eta_from_json(const nlohmann::ordered_json& j);

// Fig.-1/2-style study: `channels` random biased channels with log-spaced
// targets, one simulated experiment each, bootstrap error bars, and the
// reduced chi-squared of the estimates against the measured channel truth.
// Dephasing targets ascend with the channel index while non-dephasing
// targets descend, so the ratio sweeps a wide bias range without any single
// channel combining the strongest values of both.
struct SweepConfig {
  int channels = 50;
  int kraus_count = 6;
  double p_nd_min = 1e-5, p_nd_max = 1e-2;
  double p_d_min = 5e-3, p_d_max = 5e-2;
  // Optional extreme-bias tail: the last `tail_channels` non-dephasing
  // targets come from [tail_p_nd_min, tail_p_nd_max] instead of the main
  // band, stretching the bias ratio toward the detection floor while the
  // bulk of the ensemble stays where both rates are resolvable.
  int tail_channels = 0;
  double tail_p_nd_min = 0.0, tail_p_nd_max = 0.0;
  int bootstrap_resamples = 50;
  ExperimentConfig experiment;
};

// Protocol defaults. Both raise the non-dephasing floor above the detection
// limit of the default shot budget: near or below one expected flip event
// per dataset the rate estimate degenerates (a zero-event draw reports zero
// bootstrap spread), so the floors keep the weakest channel at tens of
// expected events. The interleaved configuration, whose short even/odd
// length grid resolves less, uses a higher floor plus a short extreme-bias
// tail so ratios up to the 1e3 scale stay in the ensemble.
SweepConfig brb_sweep_config();
SweepConfig ibrb_sweep_config();

struct SweepRow {
  int channel = 0;
  double target_p_d = 0.0, target_p_nd = 0.0;
  double truth_p_d = 0.0, truth_p_nd = 0.0, truth_eta = 0.0;
  double est_p_d = 0.0, est_p_nd = 0.0, est_eta = 0.0;
  double stderr_p_d = 0.0, stderr_p_nd = 0.0, stderr_eta = 0.0;
  int fit_failures = 0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  double chi2_p_d = 0.0, chi2_p_nd = 0.0, chi2_eta = 0.0;
  double within3_p_d = 0.0, within3_p_nd = 0.0, within3_eta = 0.0;  // fractions
};

SweepResult run_brb_sweep(const SweepConfig& config);
SweepResult run_ibrb_sweep(const SweepConfig& config);

void sweep_chi_squared(SweepResult& result);
nlohmann::ordered_json sweep_to_json(const SweepResult& result, const SweepConfig& config,
                                     const std::string& protocol);

}  // namespace brb
