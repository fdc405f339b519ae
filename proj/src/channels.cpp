#include "brb/channels.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "brb/pauli.hpp"

namespace brb {

void validate_channel(const KrausChannel& ch, double tol) {
  if (ch.n_qubits < 1) throw std::invalid_argument("channel: bad qubit count");
  if (ch.kraus.empty()) throw std::invalid_argument("channel: needs at least one Kraus operator");
  Eigen::Index d = Eigen::Index(1) << ch.n_qubits;
  Matrix acc = Matrix::Zero(d, d);
  for (const Matrix& k : ch.kraus) {
    if (k.rows() != d || k.cols() != d) throw std::invalid_argument("channel: Kraus dimension mismatch");
    acc += k.adjoint() * k;
  }
  if ((acc - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() > tol)
    throw std::invalid_argument("channel: not trace preserving");
}

KrausChannel identity_channel(int n_qubits) {
  Eigen::Index d = Eigen::Index(1) << n_qubits;
  return KrausChannel{n_qubits, {Matrix::Identity(d, d)}};
}

KrausChannel kraus_compose(const KrausChannel& a, const KrausChannel& b) {
  if (a.n_qubits != b.n_qubits) throw std::invalid_argument("kraus_compose: qubit count mismatch");
  KrausChannel r{a.n_qubits, {}};
  r.kraus.reserve(a.kraus.size() * b.kraus.size());
  for (const Matrix& ka : a.kraus)
    for (const Matrix& kb : b.kraus) r.kraus.push_back(ka * kb);
  return r;
}

Superoperator channel_to_superoperator(const KrausChannel& ch) {
  return kraus_to_superoperator(ch.n_qubits, ch.kraus);
}

KrausChannel pauli_channel(int n_qubits, const Eigen::VectorXd& probabilities) {
  const Eigen::Index count = Eigen::Index(1) << (2 * n_qubits);
  if (probabilities.size() != count) {
    throw std::invalid_argument("pauli_channel: need 4^n probabilities");
  }
  double sum = 0.0;
  KrausChannel ch{n_qubits, {}};
  for (Eigen::Index v = 0; v < count; ++v) {
    const double p = probabilities(v);
    if (p < 0.0) throw std::invalid_argument("pauli_channel: negative probability");
    sum += p;
    if (p > 0.0) {
      ch.kraus.push_back(std::sqrt(p) *
                         pauli_string_matrix(n_qubits, static_cast<uint32_t>(v)));
    }
  }
  if (std::abs(sum - 1.0) > 1e-10) {
    throw std::invalid_argument("pauli_channel: probabilities must sum to 1");
  }
  return ch;
}

KrausChannel random_biased_channel(const ChannelSpec& spec, Rng& rng) {
  int n = spec.n_qubits;
  uint32_t dim = 1u << n;
  uint32_t dim2 = dim * dim;
  if (n < 1 || n > kMaxSuperopQubits) throw std::invalid_argument("channel spec: bad qubit count");
  if (spec.d < 1 || uint32_t(spec.d) > dim2) throw std::invalid_argument("channel spec: d out of range");
  if (spec.p_d_target < 0 || spec.p_nd_target < 0 || spec.p_d_target + spec.p_nd_target >= 1.0)
    throw std::invalid_argument("channel spec: bad probability targets");

  if (spec.d == 1) return identity_channel(n);

  const int kMaxRetries = 100;
  for (int attempt = 0; attempt < kMaxRetries; ++attempt) {
    KrausChannel ch{n, {}};
    Matrix acc = Matrix::Zero(dim, dim);
    for (int i = 0; i + 1 < spec.d; ++i) {
      Matrix k = Matrix::Zero(dim, dim);
      bool dephasing = rng.coin();
      double scale = std::sqrt(10.0 * (dephasing ? spec.p_d_target : spec.p_nd_target) / spec.d);
      for (uint32_t v = 0; v < dim2; ++v) {
        uint32_t alpha = pauli_index_alpha(n, v);
        if (dephasing != (alpha == 0)) continue;
        double r = rng.uniform();
        double t = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
        k += scale * r * std::exp(Complex(0.0, t)) * pauli_string_matrix(n, v);
      }
      ch.kraus.push_back(k);
      acc += k.adjoint() * k;
    }
    Matrix rem = Matrix::Identity(dim, dim) - acc;
    rem = 0.5 * (rem + rem.adjoint().eval());
    Eigen::LLT<Matrix> llt(rem);
    if (llt.info() != Eigen::Success) continue;
    ch.kraus.push_back(Matrix(llt.matrixL()).adjoint());
    validate_channel(ch);
    return ch;
  }
  throw ChannelGenerationError("random_biased_channel: completion not PSD after 100 attempts");
}

Superoperator z_twirl(const Superoperator& s) {
  Superoperator cs = to_basis(s, Basis::ColumnStacking);
  uint32_t dim = 1u << cs.n_qubits;
  Matrix acc = Matrix::Zero(cs.m.rows(), cs.m.cols());
  for (uint32_t beta = 0; beta < dim; ++beta) {
    Superoperator v = unitary_to_superoperator(pauli_string_matrix(cs.n_qubits, pauli_index(cs.n_qubits, 0, beta)));
    acc += v.m.adjoint() * cs.m * v.m;
  }
  Superoperator r{cs.n_qubits, Basis::ColumnStacking, acc / double(dim)};
  return to_basis(r, s.basis);
}

double composition_nd_bound(double pd_a, double pnd_a, double pd_b, double pnd_b, int n_qubits) {
  double n = double(n_qubits);
  double f1 = std::pow(2.0, n / 2.0 + 1.0);
  double f2 = std::pow(2.0, n);
  double f3 = std::pow(2.0, 1.5 * n + 1.0);
  double f4 = std::pow(2.0, 2.0 * n);
  return 2.0 * std::sqrt(pnd_a * pnd_b) +
         f1 * (std::sqrt(pd_a) * pnd_b + pnd_a * std::sqrt(pd_b) + std::sqrt(pd_a * pnd_a * pnd_b) +
               std::sqrt(pnd_a * pd_b * pnd_b)) +
         f2 * (pd_a * pnd_b + pnd_a * pd_b + 2.0 * std::sqrt(pd_a * pnd_a * pd_b * pnd_b) +
               2.0 * pnd_a * std::sqrt(pd_b) + 2.0 * std::sqrt(pd_a) * pnd_b) +
         f3 * (pnd_a * std::sqrt(pd_b * pnd_b) + std::sqrt(pd_a * pnd_a) * pnd_b) +
         f4 * pnd_a * pnd_b;
}

double twirled_nd_bound(double pd_a, double pnd_a, double pd_b, double pnd_b, int n_qubits) {
  double n = double(n_qubits);
  double f1 = std::pow(2.0, n / 2.0 + 1.0);
  double f2 = std::pow(2.0, n);
  return f1 * (std::sqrt(pd_a) * pnd_b + pnd_a * std::sqrt(pd_b)) +
         f2 * (pnd_a * pd_b + pd_a * pnd_b + pnd_a * pnd_b);
}

double total_error_bound(double p_a, double p_b) { return 2.0 * std::sqrt(p_a * p_b); }

namespace {

nlohmann::ordered_json matrix_to_json(const Matrix& m) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      row.push_back(nlohmann::ordered_json::array({m(i, j).real(), m(i, j).imag()}));
    rows.push_back(row);
  }
  return rows;
}

Matrix matrix_from_json(const nlohmann::json& rows, Eigen::Index d) {
  if (!rows.is_array() || Eigen::Index(rows.size()) != d)
    throw std::runtime_error("channel json: bad Kraus row count");
  Matrix m(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const auto& row = rows[i];
    if (!row.is_array() || Eigen::Index(row.size()) != d)
      throw std::runtime_error("channel json: bad Kraus column count");
    for (Eigen::Index j = 0; j < d; ++j) {
      const auto& e = row[j];
      if (!e.is_array() || e.size() != 2) throw std::runtime_error("channel json: entry is not [re, im]");
      m(i, j) = Complex(e[0].get<double>(), e[1].get<double>());
    }
  }
  return m;
}

}  // namespace

std::string channel_to_json(const KrausChannel& ch) {
  nlohmann::ordered_json j;
  j["n_qubits"] = ch.n_qubits;
  j["d"] = ch.kraus.size();
  nlohmann::ordered_json ops = nlohmann::ordered_json::array();
  for (const Matrix& k : ch.kraus) ops.push_back(matrix_to_json(k));
  j["kraus"] = ops;
  return j.dump(2) + "\n";
}

KrausChannel channel_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error(std::string("channel json: parse error: ") + e.what());
  }
  KrausChannel ch;
  if (!j.contains("n_qubits") || !j.contains("d") || !j.contains("kraus"))
    throw std::runtime_error("channel json: missing field");
  ch.n_qubits = j["n_qubits"].get<int>();
  if (ch.n_qubits < 1 || ch.n_qubits > kMaxSuperopQubits)
    throw std::runtime_error("channel json: qubit count out of range");
  size_t d = j["d"].get<size_t>();
  if (!j["kraus"].is_array() || j["kraus"].size() != d)
    throw std::runtime_error("channel json: d does not match kraus list");
  Eigen::Index dim = Eigen::Index(1) << ch.n_qubits;
  for (const auto& k : j["kraus"]) ch.kraus.push_back(matrix_from_json(k, dim));
  validate_channel(ch);
  return ch;
}

void write_channel_json(const std::string& path, const KrausChannel& ch) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << channel_to_json(ch);
}

KrausChannel read_channel_json(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return channel_from_json(ss.str());
}

}  // namespace brb
