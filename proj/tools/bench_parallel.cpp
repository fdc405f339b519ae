// Times the serial and OpenMP experiment paths on the same workload and
// checks that they produce bit-identical records.

#include <chrono>
#include <cstdio>
#include <cstring>

#include "brb/channels.hpp"
#include "brb/experiment.hpp"
#include "brb/noise.hpp"
#include "brb/rng.hpp"

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

bool identical(const brb::RecordList& a, const brb::RecordList& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].arm != b[i].arm || a[i].n != b[i].n || a[i].sequence_id != b[i].sequence_id ||
        a[i].shots != b[i].shots || a[i].shot_sum != b[i].shot_sum)
      return false;
    if (std::memcmp(&a[i].weight, &b[i].weight, sizeof(double)) != 0) return false;
    if (std::memcmp(&a[i].weighted_mean, &b[i].weighted_mean, sizeof(double)) != 0) return false;
  }
  return true;
}

}  // namespace

int main() {
  brb::Rng rng(42);
  brb::ChannelSpec gate_spec{2, 4, 0.02, 0.002};

  brb::BrbNoise brb_noise = brb::brb_noise_identity(2);
  brb_noise.gate = brb::random_biased_channel(gate_spec, rng);

  brb::IbrbNoise ibrb_noise = brb::ibrb_noise_identity();
  ibrb_noise.cx = brb::random_biased_channel(gate_spec, rng);
  ibrb_noise.cx_prime = brb::random_biased_channel(gate_spec, rng);
  brb::ChannelSpec z_spec{2, 4, 0.002, 0.0002};
  ibrb_noise.z_gate = brb::random_biased_channel(z_spec, rng);

  brb::ExperimentConfig config;
  config.sequences_per_length = 60;
  config.shots_per_sequence = 20;
  config.seed = 7;

  int failures = 0;
  for (const char* protocol : {"brb", "ibrb"}) {
    const bool is_brb = std::strcmp(protocol, "brb") == 0;

    config.parallel = false;
    auto start = std::chrono::steady_clock::now();
    brb::RecordList serial = is_brb ? brb::run_brb_experiment(brb_noise, 2, config)
                                    : brb::run_ibrb_experiment(ibrb_noise, config);
    const double t_serial = seconds_since(start);

    config.parallel = true;
    start = std::chrono::steady_clock::now();
    brb::RecordList parallel = is_brb ? brb::run_brb_experiment(brb_noise, 2, config)
                                      : brb::run_ibrb_experiment(ibrb_noise, config);
    const double t_parallel = seconds_since(start);

    const bool same = identical(serial, parallel);
    if (!same) ++failures;
    std::printf("%-5s %zu records  serial %.3fs  parallel %.3fs  speedup %.2fx  records %s\n",
                protocol, serial.size(), t_serial, t_parallel,
                t_parallel > 0 ? t_serial / t_parallel : 0.0, same ? "identical" : "DIFFER");
  }
  return failures ? 1 : 0;
}
