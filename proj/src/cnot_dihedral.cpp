#include "brb/cnot_dihedral.hpp"

#include <bit>
#include <stdexcept>
#include <unordered_set>

namespace brb {

namespace {

void check_n(int n) {
  if (n < 1 || n > kMaxDihedralQubits) throw std::invalid_argument("cnot-dihedral: qubit count out of range");
}

// Working polynomials keep int coefficients and are reduced mod 8 at the end;
// all identities used are valid over the integers on {0,1} inputs, so mod-8
// reduction commutes with everything.
using WorkPoly = std::array<int, 8>;

WorkPoly wp_zero() { return WorkPoly{}; }

WorkPoly wp_from(const PhasePoly& p, int n) {
  WorkPoly w{};
  for (uint32_t s = 0; s < (1u << n); ++s) w[s] = p[s];
  return w;
}

void wp_reduce(WorkPoly& a) {
  for (int& c : a) c = ((c % 8) + 8) % 8;
}

WorkPoly wp_add(const WorkPoly& a, const WorkPoly& b) {
  WorkPoly r{};
  for (size_t i = 0; i < r.size(); ++i) r[i] = a[i] + b[i];
  wp_reduce(r);
  return r;
}

WorkPoly wp_scale(const WorkPoly& a, int k) {
  WorkPoly r{};
  for (size_t i = 0; i < r.size(); ++i) r[i] = a[i] * k;
  wp_reduce(r);
  return r;
}

// Product with x_i^2 = x_i: monomial masks combine by OR.
WorkPoly wp_mult(const WorkPoly& a, const WorkPoly& b, int n) {
  WorkPoly r{};
  uint32_t lim = 1u << n;
  for (uint32_t s = 0; s < lim; ++s) {
    if (a[s] == 0) continue;
    for (uint32_t t = 0; t < lim; ++t) {
      if (b[t] == 0) continue;
      r[s | t] += a[s] * b[t];
    }
  }
  wp_reduce(r);
  return r;
}

// For 0/1-valued polynomials u, v: u ^ v = u + v - 2uv.
WorkPoly wp_xor(const WorkPoly& u, const WorkPoly& v, int n) {
  WorkPoly r = wp_add(u, v);
  WorkPoly uv = wp_mult(u, v, n);
  return wp_add(r, wp_scale(uv, -2));
}

// Polynomial for (XOR of x_j over j in mask) ^ const_bit.
WorkPoly wp_linear_form(uint32_t mask, int const_bit, int n) {
  WorkPoly r{};
  r[0] = const_bit & 1;
  for (int j = 0; j < n; ++j) {
    if (!((mask >> j) & 1)) continue;
    WorkPoly xj{};
    xj[1u << j] = 1;
    r = wp_xor(r, xj, n);
  }
  return r;
}

// p(M x ^ a) expanded as a multilinear polynomial in x.
WorkPoly wp_substitute(const PhasePoly& p, const BinMatrix& m, uint8_t a, int n) {
  std::array<WorkPoly, 3> forms;
  for (int i = 0; i < n; ++i) forms[i] = wp_linear_form(m[i], (a >> i) & 1, n);
  WorkPoly r{};
  uint32_t lim = 1u << n;
  for (uint32_t s = 1; s < lim; ++s) {
    if (p[s] == 0) continue;
    WorkPoly term{};
    term[0] = 1;
    for (int i = 0; i < n; ++i)
      if ((s >> i) & 1) term = wp_mult(term, forms[i], n);
    r = wp_add(r, wp_scale(term, p[s]));
  }
  // The constant from p also shifts the phase uniformly.
  r[0] += p[0];
  wp_reduce(r);
  return r;
}

PhasePoly wp_canonical(WorkPoly w, int n) {
  wp_reduce(w);
  w[0] = 0;  // global phase quotient
  PhasePoly p{};
  for (uint32_t s = 0; s < (1u << n); ++s) p[s] = uint8_t(w[s]);
  return p;
}

bool binmat_invertible(const BinMatrix& m, int n) {
  std::array<uint8_t, 3> rows = m;
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int r = col; r < n; ++r)
      if ((rows[r] >> col) & 1) { pivot = r; break; }
    if (pivot < 0) return false;
    std::swap(rows[col], rows[pivot]);
    for (int r = 0; r < n; ++r)
      if (r != col && ((rows[r] >> col) & 1)) rows[r] ^= rows[col];
  }
  return true;
}

BinMatrix binmat_multiply(const BinMatrix& a, const BinMatrix& b, int n) {
  // row_i(AB) bit j = parity over k of A[i][k] B[k][j]
  BinMatrix r{};
  for (int i = 0; i < n; ++i) {
    uint8_t row = 0;
    for (int k = 0; k < n; ++k)
      if ((a[i] >> k) & 1) row ^= b[k];
    r[i] = row;
  }
  return r;
}

BinMatrix binmat_inverse(const BinMatrix& m, int n) {
  std::array<uint8_t, 3> rows = m;
  std::array<uint8_t, 3> inv{};
  for (int i = 0; i < n; ++i) inv[i] = uint8_t(1u << i);
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int r = col; r < n; ++r)
      if ((rows[r] >> col) & 1) { pivot = r; break; }
    if (pivot < 0) throw std::invalid_argument("binmat_inverse: singular matrix");
    std::swap(rows[col], rows[pivot]);
    std::swap(inv[col], inv[pivot]);
    for (int r = 0; r < n; ++r)
      if (r != col && ((rows[r] >> col) & 1)) { rows[r] ^= rows[col]; inv[r] ^= inv[col]; }
  }
  return inv;
}

BinMatrix binmat_identity(int n) {
  BinMatrix r{};
  for (int i = 0; i < n; ++i) r[i] = uint8_t(1u << i);
  return r;
}

}  // namespace

int poly_eval(const PhasePoly& p, uint32_t x) {
  int v = 0;
  for (uint32_t s = 0; s < p.size(); ++s)
    if (p[s] && (s & x) == s) v += p[s];
  return v % 8;
}

uint32_t binmat_apply(const BinMatrix& m, int n, uint32_t x) {
  uint32_t y = 0;
  for (int i = 0; i < n; ++i)
    if (parity(m[i] & x)) y |= 1u << i;
  return y;
}

CnotDihedralElement cd_identity(int n_qubits) {
  check_n(n_qubits);
  return CnotDihedralElement{n_qubits, PhasePoly{}, binmat_identity(n_qubits), 0};
}

CnotDihedralElement cd_x(int n_qubits, int qubit) {
  CnotDihedralElement g = cd_identity(n_qubits);
  g.affine = uint8_t(1u << qubit);
  return g;
}

CnotDihedralElement cd_t(int n_qubits, int qubit) {
  CnotDihedralElement g = cd_identity(n_qubits);
  g.phase[1u << qubit] = 1;
  return g;
}

CnotDihedralElement cd_cx(int n_qubits, int control, int target) {
  if (control == target) throw std::invalid_argument("cd_cx: control equals target");
  CnotDihedralElement g = cd_identity(n_qubits);
  g.linear[target] |= uint8_t(1u << control);
  return g;
}

CnotDihedralElement cd_cx_prime(int n_qubits, int control, int target) {
  CnotDihedralElement g = cd_cx(n_qubits, control, target);
  g.affine = uint8_t(1u << target);
  return g;
}

CnotDihedralElement cd_from_pauli(int n_qubits, uint32_t alpha, uint32_t beta) {
  CnotDihedralElement g = cd_identity(n_qubits);
  for (int i = 0; i < n_qubits; ++i)
    if ((beta >> i) & 1) g.phase[1u << i] = 4;
  g.affine = uint8_t(alpha);
  return g;
}

CnotDihedralElement cd_multiply(const CnotDihedralElement& g, const CnotDihedralElement& h) {
  if (g.n_qubits != h.n_qubits) throw std::invalid_argument("cd_multiply: qubit count mismatch");
  int n = g.n_qubits;
  CnotDihedralElement r;
  r.n_qubits = n;
  r.linear = binmat_multiply(g.linear, h.linear, n);
  r.affine = uint8_t(binmat_apply(g.linear, n, h.affine) ^ g.affine);
  WorkPoly p = wp_add(wp_from(h.phase, n), wp_substitute(g.phase, h.linear, h.affine, n));
  r.phase = wp_canonical(p, n);
  return r;
}

CnotDihedralElement cd_inverse(const CnotDihedralElement& g) {
  int n = g.n_qubits;
  CnotDihedralElement r;
  r.n_qubits = n;
  r.linear = binmat_inverse(g.linear, n);
  r.affine = uint8_t(binmat_apply(r.linear, n, g.affine));
  WorkPoly p = wp_scale(wp_substitute(g.phase, r.linear, r.affine, n), -1);
  r.phase = wp_canonical(p, n);
  return r;
}

bool cd_equal(const CnotDihedralElement& a, const CnotDihedralElement& b) {
  return a.n_qubits == b.n_qubits && cd_key(a) == cd_key(b);
}

uint64_t cd_key(const CnotDihedralElement& g) {
  uint64_t k = 0;
  for (uint32_t s = 1; s < (1u << g.n_qubits); ++s) k = (k << 3) | g.phase[s];
  for (int i = 0; i < g.n_qubits; ++i) k = (k << 3) | g.linear[i];
  k = (k << 3) | g.affine;
  return k;
}

Matrix cd_to_unitary(const CnotDihedralElement& g) {
  int n = g.n_qubits;
  uint32_t dim = 1u << n;
  Complex w = std::exp(Complex(0.0, 3.14159265358979323846 / 4.0));
  Matrix u = Matrix::Zero(dim, dim);
  for (uint32_t x = 0; x < dim; ++x) {
    uint32_t y = binmat_apply(g.linear, n, x) ^ g.affine;
    u(y, x) = std::pow(w, poly_eval(g.phase, x));
  }
  return u;
}

CnotDihedralElement cd_sample_uniform(int n_qubits, Rng& rng) {
  check_n(n_qubits);
  CnotDihedralElement g;
  g.n_qubits = n_qubits;
  for (uint32_t s = 1; s < (1u << n_qubits); ++s) {
    const int shift = std::popcount(s) - 1;
    g.phase[s] = uint8_t(rng.uniform_below(8u >> shift) << shift);
  }
  g.affine = uint8_t(rng.uniform_below(1u << n_qubits));
  do {
    for (int i = 0; i < n_qubits; ++i) g.linear[i] = uint8_t(rng.uniform_below(1u << n_qubits));
  } while (!binmat_invertible(g.linear, n_qubits));
  return g;
}

std::vector<CnotDihedralElement> cd_enumerate(int n_qubits) {
  check_n(n_qubits);
  if (n_qubits > 2) throw std::invalid_argument("cd_enumerate: only n <= 2 supported");
  int n = n_qubits;
  uint32_t dim = 1u << n;
  uint64_t n_phase = 1;
  for (uint32_t s = 1; s < dim; ++s) n_phase *= 8u >> (std::popcount(s) - 1);

  std::vector<BinMatrix> gl;
  BinMatrix m{};
  for (uint32_t bits = 0; bits < (1u << (n * n)); ++bits) {
    for (int i = 0; i < n; ++i) m[i] = uint8_t((bits >> (i * n)) & (dim - 1));
    if (binmat_invertible(m, n)) gl.push_back(m);
  }

  std::vector<CnotDihedralElement> out;
  out.reserve(n_phase * dim * gl.size());
  for (uint64_t pc = 0; pc < n_phase; ++pc) {
    PhasePoly p{};
    uint64_t rest = pc;
    for (uint32_t s = 1; s < dim; ++s) {
      const int shift = std::popcount(s) - 1;
      const uint64_t radix = 8u >> shift;
      p[s] = uint8_t((rest % radix) << shift);
      rest /= radix;
    }
    for (uint32_t a = 0; a < dim; ++a)
      for (const BinMatrix& lm : gl) out.push_back(CnotDihedralElement{n, p, lm, uint8_t(a)});
  }
  return out;
}

size_t cd_bfs_closure_size(int n_qubits) {
  check_n(n_qubits);
  std::vector<CnotDihedralElement> gens;
  for (int i = 0; i < n_qubits; ++i) {
    gens.push_back(cd_x(n_qubits, i));
    gens.push_back(cd_t(n_qubits, i));
  }
  for (int i = 0; i < n_qubits; ++i)
    for (int j = 0; j < n_qubits; ++j)
      if (i != j) gens.push_back(cd_cx(n_qubits, i, j));

  std::unordered_set<uint64_t> seen;
  std::vector<CnotDihedralElement> frontier{cd_identity(n_qubits)};
  seen.insert(cd_key(frontier.front()));
  while (!frontier.empty()) {
    std::vector<CnotDihedralElement> next;
    for (const CnotDihedralElement& g : frontier)
      for (const CnotDihedralElement& gen : gens) {
        CnotDihedralElement h = cd_multiply(gen, g);
        if (seen.insert(cd_key(h)).second) next.push_back(h);
      }
    frontier = std::move(next);
  }
  return seen.size();
}

uint64_t gl2_group_order(int n_qubits) {
  uint64_t order = 1;
  uint64_t dim = 1ull << n_qubits;
  for (int k = 0; k < n_qubits; ++k) order *= dim - (1ull << k);
  return order;
}

uint64_t cd_group_order(int n_qubits) {
  uint64_t dim = 1ull << n_qubits;
  uint64_t phase = 1;
  for (uint64_t s = 1; s < dim; ++s) phase *= 8u >> (std::popcount(s) - 1);
  return phase * dim * gl2_group_order(n_qubits);
}

}  // namespace brb
