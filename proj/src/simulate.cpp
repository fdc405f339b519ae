#include "brb/simulate.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "brb/chi.hpp"
#include "brb/irreps.hpp"
#include "brb/pauli.hpp"

namespace brb {

namespace {

Vector ket(std::initializer_list<Complex> entries) {
  Vector v(static_cast<Eigen::Index>(entries.size()));
  Eigen::Index i = 0;
  for (const Complex& e : entries) v(i++) = e;
  return v;
}

const Vector& ket0() {
  static const Vector v = ket({1.0, 0.0});
  return v;
}
const Vector& ket1() {
  static const Vector v = ket({0.0, 1.0});
  return v;
}
const Vector& ket_plus() {
  static const Vector v = ket({M_SQRT1_2, M_SQRT1_2});
  return v;
}
const Vector& ket_plus_i() {
  static const Vector v = ket({M_SQRT1_2, Complex(0.0, M_SQRT1_2)});
  return v;
}

Matrix outer(const Vector& k) { return k * k.adjoint(); }

Matrix mat_i() { return Matrix::Identity(2, 2); }
Matrix mat_x() { return pauli_string_matrix(1, pauli_index(1, 1, 0)); }
Matrix mat_y() {
  Matrix y(2, 2);
  y << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
  return y;
}
Matrix mat_z() { return pauli_string_matrix(1, pauli_index(1, 0, 1)); }

// rho <- U rho U^dag in place on the column-stacked state.
void apply_unitary(Vector& state, const Matrix& u, Eigen::Index dim) {
  Eigen::Map<Matrix> rho(state.data(), dim, dim);
  rho = u * rho * u.adjoint();
}

// Z(beta) conjugation: rho_{xy} picks up (-1)^{parity(beta&x) ^ parity(beta&y)}.
void apply_z_gate(Vector& state, uint32_t beta, Eigen::Index dim) {
  Eigen::Map<Matrix> rho(state.data(), dim, dim);
  for (Eigen::Index y = 0; y < dim; ++y) {
    for (Eigen::Index x = 0; x < dim; ++x) {
      if (parity(beta & static_cast<uint32_t>(x)) != parity(beta & static_cast<uint32_t>(y))) {
        rho(x, y) = -rho(x, y);
      }
    }
  }
}

Superoperator ptm(const KrausChannel& k) {
  return to_basis(channel_to_superoperator(k), Basis::PauliBasis);
}

Superoperator ptm(const Superoperator& s) { return to_basis(s, Basis::PauliBasis); }

}  // namespace

BrbNoise brb_noise_identity(int n_qubits) {
  BrbNoise noise;
  noise.gate = identity_channel(n_qubits);
  noise.prep = identity_channel(n_qubits);
  noise.meas = identity_channel(n_qubits);
  return noise;
}

IbrbNoise ibrb_noise_identity() {
  IbrbNoise noise;
  noise.z_gate = identity_channel(2);
  noise.cx = identity_channel(2);
  noise.cx_prime = identity_channel(2);
  noise.prep = identity_channel(2);
  noise.meas = identity_channel(2);
  return noise;
}

CompiledBrbNoise compile_noise(const BrbNoise& noise, int n_qubits) {
  CompiledBrbNoise c;
  c.n_qubits = n_qubits;
  c.gate = channel_to_superoperator(noise.gate);
  c.prep = channel_to_superoperator(noise.prep);
  c.meas = channel_to_superoperator(noise.meas);
  return c;
}

CompiledIbrbNoise compile_noise(const IbrbNoise& noise) {
  CompiledIbrbNoise c;
  c.z_noise = channel_to_superoperator(noise.z_gate);
  c.cx_noise = channel_to_superoperator(noise.cx);
  c.cxp_noise = channel_to_superoperator(noise.cx_prime);
  c.prep = channel_to_superoperator(noise.prep);
  c.meas = channel_to_superoperator(noise.meas);
  c.cx_unitary = cd_to_unitary(cd_cx(2, 0, 1));
  c.cxp_unitary = cd_to_unitary(cd_cx_prime(2, 0, 1));
  return c;
}

Matrix brb_observable(int n_qubits, int b) {
  const uint32_t full = (1u << n_qubits) - 1;
  if (b == 1) return pauli_string_matrix(n_qubits, pauli_index(n_qubits, 0, full));
  if (b == 2) return pauli_string_matrix(n_qubits, pauli_index(n_qubits, full, 0));
  throw std::invalid_argument("brb_observable: b must be 1 or 2");
}

Matrix brb_prep_state(int n_qubits, int b) {
  const Vector& factor = b == 1 ? ket0() : ket_plus();
  Vector state = factor;
  for (int q = 1; q < n_qubits; ++q) state = kron(factor, state);
  return outer(state);
}

double brb_sequence_expectation(const BrbSequence& seq, const CompiledBrbNoise& noise) {
  const Eigen::Index dim = Eigen::Index(1) << seq.n_qubits;
  Vector state = vectorize(brb_prep_state(seq.n_qubits, seq.b));
  state = noise.prep.m * state;
  for (const CnotDihedralElement& g : seq.gates) {
    apply_unitary(state, cd_to_unitary(g), dim);
    state = noise.gate.m * state;
  }
  state = noise.meas.m * state;
  const Vector e = vectorize(brb_observable(seq.n_qubits, seq.b));
  return e.dot(state).real();
}

Matrix ibrb_observable(IbrbBranch b, int row) {
  switch (b) {
    case IbrbBranch::B0p: return kron(mat_i(), mat_z());
    case IbrbBranch::B0m: return kron(mat_z(), mat_z());
    case IbrbBranch::B1p:
      return row == 0 ? kron(mat_x(), mat_i()) : kron(mat_x(), mat_z());
    case IbrbBranch::B1m: return kron(mat_y(), mat_i());
    case IbrbBranch::B2p:
      return row == 0 ? kron(mat_i(), mat_x()) : kron(mat_i(), mat_y());
    case IbrbBranch::B2m:
      return row == 0 ? kron(mat_z(), mat_x()) : kron(mat_z(), mat_y());
  }
  throw std::invalid_argument("ibrb_observable: bad branch");
}

Matrix ibrb_prep_state(IbrbBranch b, int row, int prep_state) {
  switch (b) {
    case IbrbBranch::B0p:
    case IbrbBranch::B0m:
      return outer(kron(ket0(), prep_state == 0 ? ket0() : ket1()));
    case IbrbBranch::B1p:
      return outer(kron(ket_plus(), prep_state == 0 ? ket0() : ket1()));
    case IbrbBranch::B1m: return outer(kron(ket_plus_i(), ket_plus_i()));
    case IbrbBranch::B2p:
    case IbrbBranch::B2m:
      return outer(kron(ket0(), row == 0 ? ket_plus() : ket_plus_i()));
  }
  throw std::invalid_argument("ibrb_prep_state: bad branch");
}

Matrix ibrb_row_state(IbrbBranch b, int row) {
  switch (b) {
    case IbrbBranch::B0p:
    case IbrbBranch::B0m: return 0.5 * kron(outer(ket0()), mat_z());
    case IbrbBranch::B1p:
      return row == 0 ? 0.5 * kron(outer(ket_plus()), mat_i())
                      : 0.5 * kron(outer(ket_plus()), mat_z());
    case IbrbBranch::B1m: return outer(kron(ket_plus_i(), ket_plus_i()));
    case IbrbBranch::B2p:
    case IbrbBranch::B2m:
      return outer(kron(ket0(), row == 0 ? ket_plus() : ket_plus_i()));
  }
  throw std::invalid_argument("ibrb_row_state: bad branch");
}

double ibrb_sequence_expectation(const IbrbSequence& seq, const CompiledIbrbNoise& noise) {
  const Eigen::Index dim = 4;
  Vector state = vectorize(ibrb_prep_state(seq.branch, seq.row, seq.prep_state));
  state = noise.prep.m * state;
  const int m = static_cast<int>(seq.c_prime.size());
  for (int j = 0; j < m; ++j) {
    apply_z_gate(state, seq.z_gates[static_cast<size_t>(j)], dim);
    state = noise.z_noise.m * state;
    if (seq.c_prime[static_cast<size_t>(j)]) {
      state = noise.cxp_noise.m * state;
      apply_unitary(state, noise.cxp_unitary, dim);
    } else {
      state = noise.cx_noise.m * state;
      apply_unitary(state, noise.cx_unitary, dim);
    }
  }
  apply_z_gate(state, seq.z_gates[static_cast<size_t>(m)], dim);
  state = noise.z_noise.m * state;
  state = noise.meas.m * state;
  const Vector e = vectorize(ibrb_observable(seq.branch, seq.row));
  return e.dot(state).real();
}

ShotResult sample_shots(double expectation, double weight, int shots, Rng& rng) {
  const double p = std::clamp(0.5 * (1.0 + expectation), 0.0, 1.0);
  ShotResult r;
  r.shots = shots;
  for (int s = 0; s < shots; ++s) {
    r.shot_sum += rng.uniform() < p ? 1 : -1;
  }
  r.weighted_mean = shots > 0 ? weight * static_cast<double>(r.shot_sum) / shots : 0.0;
  return r;
}

BrbDecay brb_exact_decay(const BrbNoise& noise, int n_qubits) {
  const uint32_t dim = 1u << n_qubits;
  const uint32_t n_pauli = dim * dim;
  const Superoperator gate = ptm(noise.gate);
  double trace_z = 0.0, trace_pmz = 0.0;
  for (uint32_t v = 0; v < n_pauli; ++v) {
    const double d = gate.m(v, v).real();
    if (v < dim) {
      trace_z += d;
    } else {
      trace_pmz += d;
    }
  }
  BrbDecay decay;
  decay.lambda1 = (trace_z - 1.0) / (dim - 1.0);
  decay.lambda2 = trace_pmz / (static_cast<double>(n_pauli) - dim);

  const Superoperator prep = ptm(noise.prep);
  const Superoperator meas = ptm(noise.meas);
  for (int b = 1; b <= 2; ++b) {
    const Matrix proj = brb_character_projector(n_qubits, b).m;
    const Vector rho = state_in_basis(brb_prep_state(n_qubits, b), Basis::PauliBasis);
    const Vector e = state_in_basis(brb_observable(n_qubits, b), Basis::PauliBasis);
    const Complex a = e.dot(meas.m * gate.m * proj * prep.m * rho);
    (b == 1 ? decay.a1 : decay.a2) = a.real();
  }
  return decay;
}

namespace {

// Rank-4 Pauli-basis projector onto one commutant class of the two-qubit
// Z-subgroup twirl: class c covers Pauli indices with a fixed X part.
constexpr std::array<int, 4> kClassBase{0, 8, 4, 12};

Matrix class_projector(int c) {
  Matrix p = Matrix::Zero(16, 16);
  for (int i = 0; i < 4; ++i) p(kClassBase[size_t(c)] + i, kClassBase[size_t(c)] + i) = 1.0;
  return p;
}

struct DressedPair {
  Matrix plus;   // (C Lc Lg + C' Lc' Lg) / 2 in the Pauli basis
  Matrix minus;  // (C Lc Lg - C' Lc' Lg) / 2
};

DressedPair dressed_pair(const IbrbNoise& noise) {
  const Matrix lg = ptm(noise.z_gate).m;
  const Matrix dressed_cx = ptm(unitary_to_superoperator(cd_to_unitary(cd_cx(2, 0, 1)))).m *
                            ptm(noise.cx).m * lg;
  const Matrix dressed_cxp =
      ptm(unitary_to_superoperator(cd_to_unitary(cd_cx_prime(2, 0, 1)))).m *
      ptm(noise.cx_prime).m * lg;
  DressedPair d;
  d.plus = 0.5 * (dressed_cx + dressed_cxp);
  d.minus = 0.5 * (dressed_cx - dressed_cxp);
  return d;
}

int branch_class(IbrbBranch b) {
  switch (b) {
    case IbrbBranch::B0p:
    case IbrbBranch::B0m: return 0;
    case IbrbBranch::B1p:
    case IbrbBranch::B1m: return 1;
    default: return 2;
  }
}

Matrix m_operator_from_pair(const DressedPair& d, IbrbBranch b) {
  switch (b) {
    case IbrbBranch::B0p: return class_projector(0) * d.plus * class_projector(0);
    case IbrbBranch::B0m: return class_projector(0) * d.minus * class_projector(0);
    case IbrbBranch::B1p: return class_projector(1) * d.plus * class_projector(1);
    case IbrbBranch::B1m: return class_projector(1) * d.minus * class_projector(1);
    case IbrbBranch::B2p:
      return class_projector(2) * d.plus * class_projector(3) * d.plus * class_projector(2);
    case IbrbBranch::B2m:
      return class_projector(2) * d.minus * class_projector(3) * d.minus * class_projector(2);
  }
  throw std::invalid_argument("ibrb_m_operator: bad branch");
}

}  // namespace

Matrix ibrb_m_operator(const IbrbNoise& noise, IbrbBranch b) {
  return m_operator_from_pair(dressed_pair(noise), b);
}

IbrbDecays ibrb_exact_decays(const IbrbNoise& noise) {
  const DressedPair pair = dressed_pair(noise);
  const Matrix spam_left = ptm(noise.meas).m * ptm(noise.z_gate).m;
  const Matrix prep_ptm = ptm(noise.prep).m;

  IbrbDecays out;
  for (size_t bi = 0; bi < kIbrbBranches.size(); ++bi) {
    const IbrbBranch b = kIbrbBranches[bi];
    const int base = kClassBase[size_t(branch_class(b))];
    const Matrix m16 = m_operator_from_pair(pair, b);
    Eigen::Matrix4cd m4;
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) m4(r, c) = m16(base + r, base + c);
    }

    Eigen::ComplexEigenSolver<Eigen::Matrix4cd> solver(m4);
    if (solver.info() != Eigen::Success) {
      throw std::runtime_error("ibrb_exact_decays: eigensolver failed");
    }
    const Eigen::Vector4cd mu = solver.eigenvalues();
    const Eigen::Matrix4cd vecs = solver.eigenvectors();
    const Eigen::Matrix4cd vinv = vecs.inverse();

    IbrbBranchDecay& decay = out.branch[bi];
    const int rows = ibrb_row_count(b);
    Eigen::Vector4cd coeff = Eigen::Vector4cd::Zero();
    for (int row = 0; row < rows; ++row) {
      const Vector e =
          state_in_basis(ibrb_observable(b, row), Basis::PauliBasis);
      const Vector rho =
          prep_ptm * state_in_basis(ibrb_row_state(b, row), Basis::PauliBasis);
      Eigen::Vector4cd left, right;
      const Vector left_full = (e.adjoint() * spam_left).adjoint();
      for (int i = 0; i < 4; ++i) {
        left(i) = std::conj(left_full(base + i));
        right(i) = rho(base + i);
      }
      const Eigen::Vector4cd lv = (left.transpose() * vecs).transpose();
      const Eigen::Vector4cd vr = vinv * right;
      for (int j = 0; j < 4; ++j) coeff(j) += lv(j) * vr(j) / static_cast<double>(rows);
    }
    for (int j = 0; j < 4; ++j) {
      decay.mu[size_t(j)] = mu(j);
      decay.coeff[size_t(j)] = coeff(j);
    }

    std::array<int, 4> order{0, 1, 2, 3};
    std::sort(order.begin(), order.end(),
              [&](int a, int c) { return std::abs(mu(a)) > std::abs(mu(c)); });
    int i_lambda, i_kappa;
    if (b == IbrbBranch::B0p) {
      // The additive constant of the decay model sits at the exact unit
      // eigenvalue; the fitted rate is the largest remaining magnitude.
      int unit = 0;
      for (int j = 1; j < 4; ++j) {
        if (std::abs(mu(j) - 1.0) < std::abs(mu(unit) - 1.0)) unit = j;
      }
      i_kappa = unit;
      i_lambda = order[0] == unit ? order[1] : order[0];
      int k = 0;
      for (int j = 0; j < 4; ++j) {
        if (order[size_t(j)] != i_lambda && order[size_t(j)] != i_kappa) {
          decay.neglected[size_t(k++)] = std::abs(mu(order[size_t(j)]));
        }
      }
    } else {
      i_lambda = order[0];
      i_kappa = order[1];
      if (mu(i_kappa).real() > mu(i_lambda).real()) std::swap(i_lambda, i_kappa);
      decay.neglected[0] = std::abs(mu(order[2]));
      decay.neglected[1] = std::abs(mu(order[3]));
    }
    decay.lambda = mu(i_lambda).real();
    decay.kappa = mu(i_kappa).real();
    decay.max_imag = std::max(std::abs(mu(i_lambda).imag()), std::abs(mu(i_kappa).imag()));
  }
  return out;
}

}  // namespace brb
