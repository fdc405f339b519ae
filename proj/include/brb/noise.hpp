#pragma once

#include "brb/channels.hpp"

namespace brb {

// Gate-independent noise for the group-element benchmarking protocol: each
// applied gate is followed by `gate`; `prep` acts after state preparation and
// `meas` before measurement.
struct BrbNoise {
  KrausChannel gate;
  KrausChannel prep;
  KrausChannel meas;
};

BrbNoise brb_noise_identity(int n_qubits);

// Interleaved two-qubit protocol noise: Z-group gates are followed by
// `z_gate`; the interleaved CX (and its X-conjugated variant) are preceded by
// `cx` (`cx_prime`). The protocol estimates the pair Lambda = cx o z_gate,
// Lambda' = cx_prime o z_gate.
struct IbrbNoise {
  KrausChannel z_gate;
  KrausChannel cx;
  KrausChannel cx_prime;
  KrausChannel prep;
  KrausChannel meas;
};

IbrbNoise ibrb_noise_identity();

}  // namespace brb
