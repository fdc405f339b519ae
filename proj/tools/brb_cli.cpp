// Command-line driver: channel generation, the two shot simulators, decay
// analysis with bootstrap error bars, the estimator-vs-truth sweep, and a
// fast self-check suite.
//
// Exit codes: 0 success, 1 usage error, 2 numerical/runtime failure,
// 3 self-check failure.

#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "brb/channels.hpp"
#include "brb/chi.hpp"
#include "brb/cnot_dihedral.hpp"
#include "brb/compile.hpp"
#include "brb/estimate.hpp"
#include "brb/experiment.hpp"
#include "brb/fit.hpp"
#include "brb/irreps.hpp"
#include "brb/noise.hpp"
#include "brb/simulate.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

ordered_json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  ordered_json j;
  in >> j;
  return j;
}

void write_json_file(const std::string& path, const ordered_json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

// Values from --config fill in only the options the user did not pass.
template <typename T>
void merge_option(const ordered_json& cfg, const char* key, const CLI::Option* opt, T& value) {
  if (opt->count() == 0 && cfg.contains(key)) value = cfg.at(key).get<T>();
}

ordered_json file_stamp(const std::string& path) {
  return ordered_json{{"path", path}, {"fnv1a64", brb::hash_hex(brb::fnv1a64_file(path))}};
}

std::string eta_text(double eta) {
  if (std::isinf(eta)) return eta > 0 ? "inf" : "-inf";
  return brb::format_double(eta);
}

// ---------------------------------------------------------------------------
// gen-channel

struct GenChannelOptions {
  int n_qubits = 2;
  int d = 6;
  double p_d = 0.0;
  double p_nd = 0.0;
  uint64_t seed = 1;
  std::string out = "channel.json";
};

int run_gen_channel(const GenChannelOptions& o) {
  brb::ChannelSpec spec{o.n_qubits, o.d, o.p_d, o.p_nd};
  brb::Rng rng(o.seed);
  brb::KrausChannel ch =
      o.d == 1 ? brb::identity_channel(o.n_qubits) : brb::random_biased_channel(spec, rng);
  brb::write_channel_json(o.out, ch);
  brb::BiasReport report = brb::bias_report(ch);
  std::printf("wrote %s (n=%d, d=%d)\n", o.out.c_str(), ch.n_qubits, static_cast<int>(ch.kraus.size()));
  std::printf("measured p_d  = %s\n", brb::format_double(report.p_d).c_str());
  std::printf("measured p_nd = %s\n", brb::format_double(report.p_nd).c_str());
  std::printf("measured eta  = %s\n", eta_text(report.eta).c_str());
  std::printf("fidelity      = %s\n", brb::format_double(report.fidelity).c_str());
  return 0;
}

// ---------------------------------------------------------------------------
// simulate-brb / simulate-ibrb

struct SimulateOptions {
  std::string channel, z_channel, cx_channel, cxp_channel;
  std::string prep, meas;
  std::vector<int> lengths;
  int sequences = 250;
  int shots = 20;
  uint64_t seed = 1;
  bool serial = false;
  std::string out;
};

ordered_json experiment_metadata(const std::string& protocol, int n_qubits,
                                 const brb::ExperimentConfig& config,
                                 const std::vector<int>& lengths,
                                 const ordered_json& inputs) {
  return ordered_json{{"protocol", protocol},
                      {"n_qubits", n_qubits},
                      {"lengths", lengths},
                      {"sequences_per_length", config.sequences_per_length},
                      {"shots_per_sequence", config.shots_per_sequence},
                      {"seed", config.seed},
                      {"inputs", inputs}};
}

brb::ExperimentConfig experiment_config(const SimulateOptions& o) {
  brb::ExperimentConfig config;
  config.lengths = o.lengths;
  config.sequences_per_length = o.sequences;
  config.shots_per_sequence = o.shots;
  config.seed = o.seed;
  config.parallel = !o.serial;
  return config;
}

int run_simulate_brb(const SimulateOptions& o) {
  brb::KrausChannel gate = brb::read_channel_json(o.channel);
  const int n = gate.n_qubits;
  brb::BrbNoise noise = brb::brb_noise_identity(n);
  noise.gate = gate;
  ordered_json inputs{{"channel", file_stamp(o.channel)}};
  inputs["prep"] = nullptr;
  inputs["meas"] = nullptr;
  if (!o.prep.empty()) {
    noise.prep = brb::read_channel_json(o.prep);
    inputs["prep"] = file_stamp(o.prep);
  }
  if (!o.meas.empty()) {
    noise.meas = brb::read_channel_json(o.meas);
    inputs["meas"] = file_stamp(o.meas);
  }

  brb::ExperimentConfig config = experiment_config(o);
  brb::RecordList records = brb::run_brb_experiment(noise, n, config);
  std::vector<int> lengths = config.lengths.empty() ? brb::default_brb_lengths() : config.lengths;

  fs::create_directories(o.out);
  const std::string csv = (fs::path(o.out) / "results.csv").string();
  brb::write_records_csv(csv, {"brb", records});
  write_json_file((fs::path(o.out) / "metadata.json").string(),
                  experiment_metadata("brb", n, config, lengths, inputs));
  std::printf("wrote %s (%zu records)\n", csv.c_str(), records.size());
  return 0;
}

int run_simulate_ibrb(const SimulateOptions& o) {
  brb::IbrbNoise noise = brb::ibrb_noise_identity();
  noise.z_gate = brb::read_channel_json(o.z_channel);
  noise.cx = brb::read_channel_json(o.cx_channel);
  noise.cx_prime = brb::read_channel_json(o.cxp_channel);
  ordered_json inputs{{"z_channel", file_stamp(o.z_channel)},
                      {"cx_channel", file_stamp(o.cx_channel)},
                      {"cxp_channel", file_stamp(o.cxp_channel)}};
  inputs["prep"] = nullptr;
  inputs["meas"] = nullptr;
  if (!o.prep.empty()) {
    noise.prep = brb::read_channel_json(o.prep);
    inputs["prep"] = file_stamp(o.prep);
  }
  if (!o.meas.empty()) {
    noise.meas = brb::read_channel_json(o.meas);
    inputs["meas"] = file_stamp(o.meas);
  }

  brb::ExperimentConfig config = experiment_config(o);
  brb::RecordList records = brb::run_ibrb_experiment(noise, config);
  std::vector<int> lengths = config.lengths.empty() ? brb::default_ibrb_lengths() : config.lengths;

  fs::create_directories(o.out);
  const std::string csv = (fs::path(o.out) / "results.csv").string();
  brb::write_records_csv(csv, {"ibrb", records});
  write_json_file((fs::path(o.out) / "metadata.json").string(),
                  experiment_metadata("ibrb", 2, config, lengths, inputs));
  std::printf("wrote %s (%zu records)\n", csv.c_str(), records.size());
  return 0;
}

// ---------------------------------------------------------------------------
// analyze

struct AnalyzeOptions {
  std::string results;
  int n_qubits = 2;
  int resamples = 50;
  uint64_t seed = 1;
  std::string out;
};

const char* model_name(brb::DecayModel model) {
  switch (model) {
    case brb::DecayModel::SingleExp: return "single_exp";
    case brb::DecayModel::ExpPlusConst: return "exp_plus_const";
    case brb::DecayModel::DoubleExp: return "double_exp";
  }
  return "unknown";
}

std::vector<const char*> model_param_names(brb::DecayModel model) {
  switch (model) {
    case brb::DecayModel::SingleExp: return {"a", "lambda"};
    case brb::DecayModel::ExpPlusConst: return {"a", "lambda", "b"};
    case brb::DecayModel::DoubleExp: return {"a", "lambda", "b", "kappa"};
  }
  return {};
}

ordered_json fit_to_json(const std::string& arm, const brb::DecayFit& fit) {
  ordered_json params = ordered_json::object();
  ordered_json stderrs = ordered_json::object();
  const auto names = model_param_names(fit.model);
  for (size_t i = 0; i < names.size(); ++i) {
    params[names[i]] = fit.params[static_cast<int>(i)];
    stderrs[names[i]] = fit.stderr_of(static_cast<int>(i));
  }
  return ordered_json{{"arm", arm},
                      {"model", model_name(fit.model)},
                      {"converged", fit.converged},
                      {"iterations", fit.iterations},
                      {"chi_squared", fit.chi_squared},
                      {"params", params},
                      {"stderr", stderrs}};
}

int run_analyze(const AnalyzeOptions& o) {
  fs::path in(o.results);
  fs::path csv = in;
  fs::path metadata;
  if (fs::is_directory(in)) {
    csv = in / "results.csv";
    metadata = in / "metadata.json";
  }
  brb::RecordFile file = brb::read_records_csv(csv.string());

  int n_qubits = o.n_qubits;
  ordered_json metadata_stamp = nullptr;
  if (!metadata.empty() && fs::exists(metadata)) {
    ordered_json meta = load_json_file(metadata.string());
    if (meta.contains("n_qubits")) n_qubits = meta.at("n_qubits").get<int>();
    metadata_stamp = file_stamp(metadata.string());
  }
  if (file.protocol == "ibrb") n_qubits = 2;

  ordered_json fits = ordered_json::array();
  brb::BootstrapSummary boot;
  bool converged = false;
  if (file.protocol == "brb") {
    brb::BrbAnalysis analysis = brb::analyze_brb_records(file.records, n_qubits);
    converged = analysis.fits_converged;
    fits.push_back(fit_to_json(brb::arm_label("brb", 0), analysis.fit_b1));
    fits.push_back(fit_to_json(brb::arm_label("brb", 1), analysis.fit_b2));
    boot = brb::bootstrap_brb(file.records, n_qubits, o.resamples, o.seed);
  } else {
    brb::IbrbAnalysis analysis = brb::analyze_ibrb_records(file.records);
    converged = analysis.fits_converged;
    for (int arm = 0; arm < 6; ++arm)
      fits.push_back(fit_to_json(brb::arm_label("ibrb", arm), analysis.fits[arm]));
    boot = brb::bootstrap_ibrb(file.records, o.resamples, o.seed);
  }

  if (boot.failures * 10 > boot.resamples)
    std::fprintf(stderr, "warning: %d of %d bootstrap refits failed\n", boot.failures,
                 boot.resamples);

  ordered_json report{
      {"protocol", file.protocol},
      {"n_qubits", n_qubits},
      {"inputs", ordered_json{{"results_csv", file_stamp(csv.string())},
                              {"metadata_json", metadata_stamp}}},
      {"fits", fits},
      {"estimates", ordered_json{{"p_d", boot.point.p_d},
                                 {"p_nd", boot.point.p_nd},
                                 {"eta", brb::eta_to_json(boot.point.eta)},
                                 {"p_d_stderr", boot.p_d_stderr},
                                 {"p_nd_stderr", boot.p_nd_stderr},
                                 {"eta_stderr", boot.eta_stderr}}},
      {"bootstrap", ordered_json{{"resamples", boot.resamples},
                                 {"seed", o.seed},
                                 {"failures", boot.failures}}}};

  std::string out = o.out;
  if (out.empty())
    out = fs::is_directory(in) ? (in / "report.json").string() : "report.json";
  write_json_file(out, report);

  std::printf("p_d  = %s +- %s\n", brb::format_double(boot.point.p_d).c_str(),
              brb::format_double(boot.p_d_stderr).c_str());
  std::printf("p_nd = %s +- %s\n", brb::format_double(boot.point.p_nd).c_str(),
              brb::format_double(boot.p_nd_stderr).c_str());
  std::printf("eta  = %s +- %s\n", eta_text(boot.point.eta).c_str(),
              brb::format_double(boot.eta_stderr).c_str());
  std::printf("wrote %s\n", out.c_str());

  if (!converged) {
    std::fprintf(stderr, "error: at least one decay fit did not converge\n");
    return 2;
  }
  return 0;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepOptions {
  std::string protocol;
  int channels = 50;
  int d = 6;
  double p_nd_min = 0.0;  // 0 keeps the per-protocol default
  double p_nd_max = 1e-2;
  double p_d_min = 5e-3, p_d_max = 5e-2;
  std::vector<int> lengths;
  int sequences = 250;
  int shots = 20;
  int resamples = 50;
  uint64_t seed = 1;
  bool serial = false;
  std::string out = "sweep.json";
};

int run_sweep(const SweepOptions& o) {
  brb::SweepConfig config =
      o.protocol == "brb" ? brb::brb_sweep_config() : brb::ibrb_sweep_config();
  config.channels = o.channels;
  config.kraus_count = o.d;
  if (o.p_nd_min > 0.0) {
    config.p_nd_min = o.p_nd_min;
    config.tail_channels = 0;
  }
  config.p_nd_max = o.p_nd_max;
  config.p_d_min = o.p_d_min;
  config.p_d_max = o.p_d_max;
  config.bootstrap_resamples = o.resamples;
  config.experiment.lengths = o.lengths;
  config.experiment.sequences_per_length = o.sequences;
  config.experiment.shots_per_sequence = o.shots;
  config.experiment.seed = o.seed;
  config.experiment.parallel = !o.serial;

  brb::SweepResult result =
      o.protocol == "brb" ? brb::run_brb_sweep(config) : brb::run_ibrb_sweep(config);
  write_json_file(o.out, brb::sweep_to_json(result, config, o.protocol));

  std::printf("%d channels, %d sequences x %d shots per length\n", config.channels,
              config.experiment.sequences_per_length, config.experiment.shots_per_sequence);
  std::printf("reduced chi2:    p_d=%.3f p_nd=%.3f eta=%.3f\n", result.chi2_p_d,
              result.chi2_p_nd, result.chi2_eta);
  std::printf("within 3 stderr: p_d=%.0f%% p_nd=%.0f%% eta=%.0f%%\n", 100 * result.within3_p_d,
              100 * result.within3_p_nd, 100 * result.within3_eta);
  std::printf("wrote %s\n", o.out.c_str());
  return 0;
}

// ---------------------------------------------------------------------------
// verify

bool check_group_orders() {
  for (int n = 1; n <= 2; ++n)
    if (brb::cd_bfs_closure_size(n) != brb::cd_group_order(n)) return false;
  return brb::cd_group_order(1) == 16 && brb::cd_group_order(2) == 6144;
}

bool check_canonical_products() {
  brb::Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng.uniform_below(2));
    auto g = brb::cd_sample_uniform(n, rng);
    auto h = brb::cd_sample_uniform(n, rng);
    brb::Matrix lhs = brb::cd_to_unitary(brb::cd_multiply(g, h));
    brb::Matrix rhs = brb::cd_to_unitary(g) * brb::cd_to_unitary(h);
    if (!brb::equal_mod_phase(lhs, rhs, 1e-10)) return false;
  }
  return true;
}

bool check_projectors() {
  const int n = 2;
  std::vector<brb::Superoperator> blocks;
  for (int block = 0; block < 3; ++block) blocks.push_back(brb::dihedral_projector(n, block));
  brb::Matrix sum = brb::Matrix::Zero(16, 16);
  for (const auto& p : blocks) {
    if ((p.m * p.m - p.m).cwiseAbs().maxCoeff() > 1e-10) return false;
    sum += p.m;
  }
  for (size_t i = 0; i < blocks.size(); ++i)
    for (size_t j = i + 1; j < blocks.size(); ++j)
      if ((blocks[i].m * blocks[j].m).cwiseAbs().maxCoeff() > 1e-10) return false;
  brb::Matrix eye = brb::Matrix::Identity(16, 16);
  return (sum - eye).cwiseAbs().maxCoeff() < 1e-10;
}

bool check_z_twirl() {
  brb::Rng rng(5);
  brb::ChannelSpec spec{2, 4, 0.05, 0.01};
  brb::KrausChannel ch = brb::random_biased_channel(spec, rng);
  brb::Superoperator s = brb::channel_to_superoperator(ch);
  brb::Matrix chi = brb::chi_matrix_full(s);
  brb::Matrix twirled = brb::chi_matrix_full(brb::z_twirl(s));
  for (int u = 0; u < 16; ++u)
    for (int v = 0; v < 16; ++v) {
      if ((u >> 2) != (v >> 2)) {
        if (std::abs(twirled(u, v)) > 1e-12) return false;
      } else if (u == v && std::abs(twirled(u, v) - chi(u, v)) > 1e-12) {
        return false;
      }
    }
  return true;
}

brb::KrausChannel random_pauli_channel(int n_qubits, double scale, brb::Rng& rng) {
  const int dim = 1 << (2 * n_qubits);
  Eigen::VectorXd p(dim);
  double total = 0;
  for (int v = 1; v < dim; ++v) {
    p(v) = scale * rng.uniform();
    total += p(v);
  }
  p(0) = 1.0 - total;
  return brb::pauli_channel(n_qubits, p);
}

bool check_brb_inversion() {
  brb::Rng rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    const int n = 1 + trial % 2;
    brb::BrbNoise noise = brb::brb_noise_identity(n);
    noise.gate = random_pauli_channel(n, 0.01, rng);
    brb::BrbDecay decay = brb::brb_exact_decay(noise, n);
    brb::BiasEstimate est = brb::bias_from_brb_rates(n, decay.lambda1, decay.lambda2);
    brb::BiasReport truth = brb::bias_report(brb::chi_diagonal(noise.gate));
    if (std::abs(est.p_d - truth.p_d) > 1e-10) return false;
    if (std::abs(est.p_nd - truth.p_nd) > 1e-10) return false;
  }
  return true;
}

bool check_ibrb_inversion() {
  brb::Rng rng(9);
  for (int trial = 0; trial < 2; ++trial) {
    brb::IbrbNoise noise = brb::ibrb_noise_identity();
    noise.cx = random_pauli_channel(2, 5e-6, rng);
    noise.cx_prime = noise.cx;
    noise.z_gate = random_pauli_channel(2, 2e-6, rng);
    brb::IbrbDecays decays = brb::ibrb_exact_decays(noise);
    brb::IbrbRates rates;
    for (int arm = 0; arm < 6; ++arm) {
      rates.lambda[arm] = decays.branch[arm].lambda;
      rates.kappa[arm] = decays.branch[arm].kappa;
      for (double neglected : decays.branch[arm].neglected)
        if (neglected > 1e-12) return false;
    }
    brb::BiasEstimate est = brb::bias_from_ibrb_rates(rates);
    brb::BiasReport truth = brb::ibrb_true_bias(noise);
    if (std::abs(est.p_d - truth.p_d) > 1e-8) return false;
    if (std::abs(est.p_nd - truth.p_nd) > 1e-8) return false;
  }
  return true;
}

bool check_randomized_compiling() {
  brb::Rng rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform_below(3));
    brb::Circuit circuit{n, {}};
    const int count = 3 + static_cast<int>(rng.uniform_below(6));
    for (int g = 0; g < count; ++g) {
      switch (rng.uniform_below(5)) {
        case 0:
          circuit.gates.push_back(brb::gate_pauli(static_cast<uint32_t>(rng.uniform_below(1u << n)),
                                                  static_cast<uint32_t>(rng.uniform_below(1u << n))));
          break;
        case 1:
          circuit.gates.push_back(brb::gate_phase(static_cast<int>(rng.uniform_below(n)),
                                                  static_cast<int>(rng.uniform_below(4))));
          break;
        case 2: {
          int a = static_cast<int>(rng.uniform_below(n));
          int b = static_cast<int>(rng.uniform_below(n - 1));
          circuit.gates.push_back(brb::gate_cz(a, b >= a ? b + 1 : b));
          break;
        }
        case 3: {
          int a = static_cast<int>(rng.uniform_below(n));
          int b = static_cast<int>(rng.uniform_below(n - 1));
          circuit.gates.push_back(brb::gate_cx(a, b >= a ? b + 1 : b));
          break;
        }
        default: {
          int a = static_cast<int>(rng.uniform_below(n));
          int b = static_cast<int>(rng.uniform_below(n - 1));
          circuit.gates.push_back(brb::gate_cx_prime(a, b >= a ? b + 1 : b));
          break;
        }
      }
    }
    brb::CompiledCircuit compiled = brb::randomized_compile(circuit, rng);
    brb::Matrix lhs = brb::frame_unitary(compiled.frame) * brb::circuit_unitary(compiled.circuit);
    if (!brb::equal_mod_phase(lhs, brb::circuit_unitary(circuit), 1e-10)) return false;
  }
  return true;
}

bool check_fit_recovery() {
  std::vector<double> n, y;
  for (int i = 1; i <= 40; i += 3) {
    n.push_back(i);
    y.push_back(0.7 * std::pow(0.97, i) + 0.25 * std::pow(-0.92, i));
  }
  brb::DecayFit fit = brb::fit_decay(brb::DecayModel::DoubleExp, n, y, {}, {});
  if (!fit.converged) return false;
  return std::abs(fit.lambda() - 0.97) < 1e-8 && std::abs(fit.kappa() + 0.92) < 1e-8 &&
         std::abs(fit.amplitude() - 0.7) < 1e-8 && std::abs(fit.constant() - 0.25) < 1e-8;
}

int run_verify() {
  struct Check {
    const char* name;
    std::function<bool()> run;
  };
  const std::vector<Check> checks = {
      {"group closure sizes match the order formula", check_group_orders},
      {"canonical products match dense unitaries", check_canonical_products},
      {"irrep projectors are orthogonal idempotents resolving the identity", check_projectors},
      {"z-twirl zeroes cross-x-mask chi entries and keeps the diagonal", check_z_twirl},
      {"group-protocol rate inversion round-trips on random Pauli noise", check_brb_inversion},
      {"interleaved trace identity round-trips on weak Pauli noise", check_ibrb_inversion},
      {"randomized compiling preserves circuits up to phase", check_randomized_compiling},
      {"double-exponential fit recovers noiseless parameters", check_fit_recovery},
  };
  int failures = 0;
  for (const auto& check : checks) {
    bool ok = false;
    try {
      ok = check.run();
    } catch (const std::exception& e) {
      std::fprintf(stderr, "  (%s threw: %s)\n", check.name, e.what());
    }
    std::printf("%s %s\n", ok ? "ok  " : "FAIL", check.name);
    if (!ok) ++failures;
  }
  if (failures) std::printf("%d of %zu checks failed\n", failures, checks.size());
  return failures ? 3 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Biased-noise channel simulator and decay-based bias estimator"};
  app.require_subcommand(1);

  GenChannelOptions gen;
  std::string gen_config;
  CLI::App* gen_cmd = app.add_subcommand("gen-channel", "Draw a biased channel and write it as JSON");
  auto* gen_n = gen_cmd->add_option("--n", gen.n_qubits, "Qubit count")->check(CLI::Range(1, 3));
  auto* gen_d = gen_cmd->add_option("--d", gen.d, "Kraus operator count (1 gives the identity)")
                    ->check(CLI::PositiveNumber);
  auto* gen_pd = gen_cmd->add_option("--pd", gen.p_d, "Dephasing probability target");
  auto* gen_pnd = gen_cmd->add_option("--pnd", gen.p_nd, "Non-dephasing probability target");
  auto* gen_seed = gen_cmd->add_option("--seed", gen.seed, "RNG seed");
  auto* gen_out = gen_cmd->add_option("--out", gen.out, "Output channel file");
  gen_cmd->add_option("--config", gen_config, "JSON file with defaults for the flags above");

  SimulateOptions sim_brb;
  std::string sim_brb_config;
  CLI::App* brb_cmd = app.add_subcommand("simulate-brb", "Run the group protocol shot simulator");
  brb_cmd->add_option("--channel", sim_brb.channel, "Gate-noise channel JSON")->required();
  brb_cmd->add_option("--prep", sim_brb.prep, "Preparation-noise channel JSON");
  brb_cmd->add_option("--meas", sim_brb.meas, "Measurement-noise channel JSON");
  auto* brb_lengths = brb_cmd->add_option("--lengths", sim_brb.lengths, "Sequence lengths");
  auto* brb_sequences = brb_cmd->add_option("--sequences", sim_brb.sequences, "Sequences per length");
  auto* brb_shots = brb_cmd->add_option("--shots", sim_brb.shots, "Shots per sequence");
  auto* brb_seed = brb_cmd->add_option("--seed", sim_brb.seed, "RNG seed");
  auto* brb_serial = brb_cmd->add_flag("--serial", sim_brb.serial, "Disable the parallel path");
  auto* brb_out = brb_cmd->add_option("--out", sim_brb.out, "Output directory");
  brb_cmd->add_option("--config", sim_brb_config, "JSON file with defaults for the flags above");

  SimulateOptions sim_ibrb;
  std::string sim_ibrb_config;
  CLI::App* ibrb_cmd =
      app.add_subcommand("simulate-ibrb", "Run the interleaved protocol shot simulator");
  ibrb_cmd->add_option("--z-channel", sim_ibrb.z_channel, "Z-layer noise channel JSON")->required();
  ibrb_cmd->add_option("--cx-channel", sim_ibrb.cx_channel, "Interleaved-gate noise JSON")->required();
  ibrb_cmd->add_option("--cxp-channel", sim_ibrb.cxp_channel, "Conjugate-gate noise JSON")->required();
  ibrb_cmd->add_option("--prep", sim_ibrb.prep, "Preparation-noise channel JSON");
  ibrb_cmd->add_option("--meas", sim_ibrb.meas, "Measurement-noise channel JSON");
  auto* ibrb_lengths = ibrb_cmd->add_option("--lengths", sim_ibrb.lengths, "Sequence lengths");
  auto* ibrb_sequences =
      ibrb_cmd->add_option("--sequences", sim_ibrb.sequences, "Sequences per length");
  auto* ibrb_shots = ibrb_cmd->add_option("--shots", sim_ibrb.shots, "Shots per sequence");
  auto* ibrb_seed = ibrb_cmd->add_option("--seed", sim_ibrb.seed, "RNG seed");
  auto* ibrb_serial = ibrb_cmd->add_flag("--serial", sim_ibrb.serial, "Disable the parallel path");
  auto* ibrb_out = ibrb_cmd->add_option("--out", sim_ibrb.out, "Output directory");
  ibrb_cmd->add_option("--config", sim_ibrb_config, "JSON file with defaults for the flags above");

  AnalyzeOptions analyze;
  CLI::App* analyze_cmd =
      app.add_subcommand("analyze", "Fit decays and report bias estimates with bootstrap errors");
  analyze_cmd->add_option("--results", analyze.results, "Results directory or CSV file")->required();
  analyze_cmd->add_option("--n", analyze.n_qubits, "Qubit count override when no metadata is found")
      ->check(CLI::Range(1, 3));
  analyze_cmd->add_option("--resamples", analyze.resamples, "Bootstrap resamples")
      ->check(CLI::NonNegativeNumber);
  analyze_cmd->add_option("--seed", analyze.seed, "Bootstrap RNG seed");
  analyze_cmd->add_option("--out", analyze.out, "Report path (default: alongside the results)");

  SweepOptions sweep;
  std::string sweep_config;
  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "Estimator-vs-truth study over random channels");
  sweep_cmd->add_option("--protocol", sweep.protocol, "brb or ibrb")
      ->required()
      ->check(CLI::IsMember({"brb", "ibrb"}));
  auto* sweep_channels = sweep_cmd->add_option("--channels", sweep.channels, "Channel count");
  auto* sweep_d = sweep_cmd->add_option("--d", sweep.d, "Kraus operators per channel");
  auto* sweep_pnd_min =
      sweep_cmd->add_option("--pnd-min", sweep.p_nd_min, "Smallest p_nd target (overrides the protocol default band and drops its tail)");
  auto* sweep_pnd_max = sweep_cmd->add_option("--pnd-max", sweep.p_nd_max, "Largest p_nd target");
  auto* sweep_pd_min = sweep_cmd->add_option("--pd-min", sweep.p_d_min, "Smallest p_d target");
  auto* sweep_pd_max = sweep_cmd->add_option("--pd-max", sweep.p_d_max, "Largest p_d target");
  auto* sweep_lengths = sweep_cmd->add_option("--lengths", sweep.lengths, "Sequence lengths");
  auto* sweep_sequences =
      sweep_cmd->add_option("--sequences", sweep.sequences, "Sequences per length");
  auto* sweep_shots = sweep_cmd->add_option("--shots", sweep.shots, "Shots per sequence");
  auto* sweep_resamples =
      sweep_cmd->add_option("--resamples", sweep.resamples, "Bootstrap resamples");
  auto* sweep_seed = sweep_cmd->add_option("--seed", sweep.seed, "RNG seed");
  auto* sweep_serial = sweep_cmd->add_flag("--serial", sweep.serial, "Disable the parallel path");
  auto* sweep_out = sweep_cmd->add_option("--out", sweep.out, "Output JSON path");
  sweep_cmd->add_option("--config", sweep_config, "JSON file with defaults for the flags above");

  CLI::App* verify_cmd = app.add_subcommand("verify", "Run the fast self-check suite");
  (void)verify_cmd;

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (gen_cmd->parsed()) {
      if (!gen_config.empty()) {
        ordered_json cfg = load_json_file(gen_config);
        merge_option(cfg, "n", gen_n, gen.n_qubits);
        merge_option(cfg, "d", gen_d, gen.d);
        merge_option(cfg, "pd", gen_pd, gen.p_d);
        merge_option(cfg, "pnd", gen_pnd, gen.p_nd);
        merge_option(cfg, "seed", gen_seed, gen.seed);
        merge_option(cfg, "out", gen_out, gen.out);
      }
      return run_gen_channel(gen);
    }
    if (brb_cmd->parsed()) {
      if (!sim_brb_config.empty()) {
        ordered_json cfg = load_json_file(sim_brb_config);
        merge_option(cfg, "lengths", brb_lengths, sim_brb.lengths);
        merge_option(cfg, "sequences", brb_sequences, sim_brb.sequences);
        merge_option(cfg, "shots", brb_shots, sim_brb.shots);
        merge_option(cfg, "seed", brb_seed, sim_brb.seed);
        merge_option(cfg, "serial", brb_serial, sim_brb.serial);
        merge_option(cfg, "out", brb_out, sim_brb.out);
      }
      if (sim_brb.out.empty()) sim_brb.out = "brb_results";
      return run_simulate_brb(sim_brb);
    }
    if (ibrb_cmd->parsed()) {
      if (!sim_ibrb_config.empty()) {
        ordered_json cfg = load_json_file(sim_ibrb_config);
        merge_option(cfg, "lengths", ibrb_lengths, sim_ibrb.lengths);
        merge_option(cfg, "sequences", ibrb_sequences, sim_ibrb.sequences);
        merge_option(cfg, "shots", ibrb_shots, sim_ibrb.shots);
        merge_option(cfg, "seed", ibrb_seed, sim_ibrb.seed);
        merge_option(cfg, "serial", ibrb_serial, sim_ibrb.serial);
        merge_option(cfg, "out", ibrb_out, sim_ibrb.out);
      }
      if (sim_ibrb.out.empty()) sim_ibrb.out = "ibrb_results";
      return run_simulate_ibrb(sim_ibrb);
    }
    if (analyze_cmd->parsed()) return run_analyze(analyze);
    if (sweep_cmd->parsed()) {
      if (!sweep_config.empty()) {
        ordered_json cfg = load_json_file(sweep_config);
        merge_option(cfg, "channels", sweep_channels, sweep.channels);
        merge_option(cfg, "d", sweep_d, sweep.d);
        merge_option(cfg, "pnd_min", sweep_pnd_min, sweep.p_nd_min);
        merge_option(cfg, "pnd_max", sweep_pnd_max, sweep.p_nd_max);
        merge_option(cfg, "pd_min", sweep_pd_min, sweep.p_d_min);
        merge_option(cfg, "pd_max", sweep_pd_max, sweep.p_d_max);
        merge_option(cfg, "lengths", sweep_lengths, sweep.lengths);
        merge_option(cfg, "sequences", sweep_sequences, sweep.sequences);
        merge_option(cfg, "shots", sweep_shots, sweep.shots);
        merge_option(cfg, "resamples", sweep_resamples, sweep.resamples);
        merge_option(cfg, "seed", sweep_seed, sweep.seed);
        merge_option(cfg, "serial", sweep_serial, sweep.serial);
        merge_option(cfg, "out", sweep_out, sweep.out);
      }
      return run_sweep(sweep);
    }
    if (verify_cmd->parsed()) return run_verify();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 1;
}
