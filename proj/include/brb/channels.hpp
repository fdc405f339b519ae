#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "brb/rng.hpp"
#include "brb/superop.hpp"

namespace brb {

struct KrausChannel {
  int n_qubits = 1;
  std::vector<Matrix> kraus;
};

// Throws std::invalid_argument unless sum K^dag K = 1 within tol and d >= 1.
void validate_channel(const KrausChannel& ch, double tol = 1e-10);

KrausChannel identity_channel(int n_qubits);

// Kraus set {A_i B_j} of the composite a o b (b applied first).
KrausChannel kraus_compose(const KrausChannel& a, const KrausChannel& b);

Superoperator channel_to_superoperator(const KrausChannel& ch);

struct ChannelSpec {
  int n_qubits = 1;
  int d = 1;  // number of Kraus operators, 1 <= d <= 4^n
  double p_d_target = 0.0;
  double p_nd_target = 0.0;
};

struct ChannelGenerationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Draws a biased channel: d-1 operators are random combinations of Z strings
// (dephasing, coefficient scale sqrt(10 p_d/d)) or of X(alpha!=0)Z(beta)
// strings (non-dephasing, scale sqrt(10 p_nd/d)), each coefficient r e^{i t}
// with uniform r in [0,1], t in [0,2pi); the last operator completes the
// channel through a Cholesky factor. Retries up to 100 times when the
// completion is not positive semidefinite, then throws ChannelGenerationError.
KrausChannel random_biased_channel(const ChannelSpec& spec, Rng& rng);

// Kraus set {sqrt(p_v) P_v} from 4^n probabilities indexed like the chi
// diagonal. Probabilities must be non-negative and sum to 1 within 1e-10.
KrausChannel pauli_channel(int n_qubits, const Eigen::VectorXd& probabilities);

// Average of conjugations by all Z strings. Zeroes every chi entry whose two
// X-masks differ and keeps the diagonal, turning any channel into one whose
// chi matrix is block-diagonal over X-masks. Idempotent.
Superoperator z_twirl(const Superoperator& s);

// Printed composition bound on |p_nd(A o B) - p_nd(A) - p_nd(B)|.
double composition_nd_bound(double pd_a, double pnd_a, double pd_b, double pnd_b, int n_qubits);

// Tighter form valid when one factor has been Z-twirled.
double twirled_nd_bound(double pd_a, double pnd_a, double pd_b, double pnd_b, int n_qubits);

// Bound on |p(A o B) - p(A) - p(B)| for total error probability p = p_d + p_nd.
double total_error_bound(double p_a, double p_b);

std::string channel_to_json(const KrausChannel& ch);
KrausChannel channel_from_json(const std::string& text);
void write_channel_json(const std::string& path, const KrausChannel& ch);
KrausChannel read_channel_json(const std::string& path);

}  // namespace brb
