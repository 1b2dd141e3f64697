// Copyright 2026 The mbqc-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mbqc_lab/quantum_core.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "mbqc_lab/errors.hpp"

namespace mbqc {

namespace {

constexpr Complex kI{0.0, 1.0};

std::uint64_t qubit_bit(int num_qubits, int q) {
  return std::uint64_t{1} << (num_qubits - 1 - q);
}

int log2_exact(Eigen::Index size) {
  if (size <= 0) throw InvariantError("amplitude vector is empty");
  int n = 0;
  while ((Eigen::Index{1} << n) < size) ++n;
  if ((Eigen::Index{1} << n) != size) {
    throw InvariantError("dimension " + std::to_string(size) + " is not a power of two");
  }
  return n;
}

// Gathers the amplitudes addressed by `targets` for each control-satisfying
// base index, multiplies by m and scatters back.
void apply_matrix_inplace(Vector& v, int num_qubits, const std::vector<int>& targets,
                          const std::vector<int>& controls, const Matrix& m) {
  const int k = static_cast<int>(targets.size());
  const std::size_t local_dim = std::size_t{1} << k;
  std::vector<std::uint64_t> offsets(local_dim, 0);
  std::uint64_t target_mask = 0;
  for (int i = 0; i < k; ++i) target_mask |= qubit_bit(num_qubits, targets[i]);
  for (std::size_t a = 0; a < local_dim; ++a) {
    std::uint64_t off = 0;
    for (int i = 0; i < k; ++i) {
      if ((a >> (k - 1 - i)) & 1U) off |= qubit_bit(num_qubits, targets[i]);
    }
    offsets[a] = off;
  }
  std::uint64_t control_mask = 0;
  for (int c : controls) control_mask |= qubit_bit(num_qubits, c);

  const std::uint64_t dim = std::uint64_t{1} << num_qubits;
  std::vector<Complex> in(local_dim);
  for (std::uint64_t base = 0; base < dim; ++base) {
    if ((base & target_mask) != 0) continue;
    if ((base & control_mask) != control_mask) continue;
    for (std::size_t a = 0; a < local_dim; ++a) in[a] = v[static_cast<Eigen::Index>(base | offsets[a])];
    for (std::size_t r = 0; r < local_dim; ++r) {
      Complex acc{0.0, 0.0};
      for (std::size_t c = 0; c < local_dim; ++c) {
        acc += m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) * in[c];
      }
      v[static_cast<Eigen::Index>(base | offsets[r])] = acc;
    }
  }
}

bool is_unitary(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  Matrix d = m.adjoint() * m - Matrix::Identity(m.rows(), m.cols());
  return d.cwiseAbs().maxCoeff() <= tol;
}

void check_qubits_in_range(const std::vector<int>& qs, int num_qubits) {
  for (int q : qs) {
    if (q < 0 || q >= num_qubits) {
      throw InvariantError("qubit index " + std::to_string(q) + " out of range for " +
                           std::to_string(num_qubits) + " qubits");
    }
  }
}

// Maps (kept index, traced index) pairs to full basis indices.
struct Split {
  std::vector<std::uint64_t> keep_offsets;
  std::vector<std::uint64_t> rest_offsets;
};

Split split_register(int num_qubits, const std::vector<int>& keep) {
  std::vector<int> rest;
  for (int q = 0; q < num_qubits; ++q) {
    if (!std::binary_search(keep.begin(), keep.end(), q)) rest.push_back(q);
  }
  auto offsets = [num_qubits](const std::vector<int>& qs) {
    const int k = static_cast<int>(qs.size());
    std::vector<std::uint64_t> out(std::size_t{1} << k, 0);
    for (std::size_t a = 0; a < out.size(); ++a) {
      std::uint64_t off = 0;
      for (int i = 0; i < k; ++i) {
        if ((a >> (k - 1 - i)) & 1U) off |= qubit_bit(num_qubits, qs[i]);
      }
      out[a] = off;
    }
    return out;
  };
  return {offsets(keep), offsets(rest)};
}

std::vector<int> normalize_keep(std::vector<int> keep, int num_qubits) {
  if (keep.empty()) throw InvariantError("partial_trace: keep set is empty");
  std::sort(keep.begin(), keep.end());
  if (std::adjacent_find(keep.begin(), keep.end()) != keep.end()) {
    throw InvariantError("partial_trace: duplicate qubit in keep set");
  }
  check_qubits_in_range(keep, num_qubits);
  return keep;
}

}  // namespace

// ---------------------------------------------------------------- bit strings

BitString to_bits(std::uint64_t value, int width) {
  BitString s(static_cast<std::size_t>(width), '0');
  for (int j = 0; j < width; ++j) {
    if ((value >> (width - 1 - j)) & 1U) s[static_cast<std::size_t>(j)] = '1';
  }
  return s;
}

std::uint64_t from_bits(const BitString& bits) {
  if (!is_bit_string(bits)) throw ParseError("not a bit string: '" + bits + "'");
  std::uint64_t v = 0;
  for (char c : bits) v = (v << 1) | static_cast<std::uint64_t>(c == '1');
  return v;
}

bool is_bit_string(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return c == '0' || c == '1'; });
}

std::vector<BitString> all_bit_strings(int width) {
  std::vector<BitString> out;
  out.reserve(std::size_t{1} << width);
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << width); ++v) out.push_back(to_bits(v, width));
  return out;
}

// ------------------------------------------------------------------------ Ket

Ket::Ket(int num_qubits) : num_qubits_(num_qubits) {
  if (num_qubits < 0 || num_qubits > 30) throw InvariantError("unsupported qubit count");
  amps_ = Vector::Zero(Eigen::Index{1} << num_qubits);
  amps_[0] = 1.0;
}

Ket Ket::from_amplitudes(Vector amplitudes) {
  const int n = log2_exact(amplitudes.size());
  if (std::abs(amplitudes.squaredNorm() - 1.0) > tol::kUnitary) {
    std::ostringstream os;
    os << "ket is not normalized (norm^2 = " << amplitudes.squaredNorm() << ")";
    throw InvariantError(os.str());
  }
  return Ket(n, std::move(amplitudes));
}

Ket Ket::from_amplitudes_unchecked(Vector amplitudes) {
  const int n = log2_exact(amplitudes.size());
  return Ket(n, std::move(amplitudes));
}

Ket Ket::basis(int num_qubits, std::uint64_t index) {
  Ket k(num_qubits);
  if (index >= k.dim()) throw InvariantError("basis index out of range");
  k.amps_[0] = 0.0;
  k.amps_[static_cast<Eigen::Index>(index)] = 1.0;
  return k;
}

Ket Ket::from_bits(const BitString& bits) {
  return basis(static_cast<int>(bits.size()), mbqc::from_bits(bits));
}

Ket Ket::plus() {
  Vector v(2);
  v << std::numbers::sqrt2 / 2, std::numbers::sqrt2 / 2;
  return Ket(1, v);
}

Ket Ket::random(int num_qubits, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector v(Eigen::Index{1} << num_qubits);
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = Complex(gauss(rng), gauss(rng));
  v.normalize();
  return Ket(num_qubits, v);
}

Complex inner(const Ket& a, const Ket& b) {
  if (a.num_qubits() != b.num_qubits()) throw InvariantError("inner: dimension mismatch");
  return a.amplitudes().dot(b.amplitudes());
}

// ------------------------------------------------------------------ DensityOp

DensityOp DensityOp::from_matrix(Matrix m) {
  if (m.rows() != m.cols()) throw InvariantError("density operator must be square");
  const int n = log2_exact(m.rows());
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > tol::kUnitary) {
    throw InvariantError("density operator is not Hermitian");
  }
  if (std::abs(m.trace() - Complex(1.0, 0.0)) > tol::kUnitary) {
    throw InvariantError("density operator trace is not 1");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol::kUnitary) {
    throw InvariantError("density operator has a negative eigenvalue");
  }
  return DensityOp(n, std::move(m));
}

DensityOp DensityOp::from_matrix_unchecked(Matrix m) {
  const int n = log2_exact(m.rows());
  return DensityOp(n, std::move(m));
}

DensityOp DensityOp::pure(const Ket& k) {
  return DensityOp(k.num_qubits(), k.amplitudes() * k.amplitudes().adjoint());
}

DensityOp DensityOp::mixture(std::span<const double> weights, std::span<const Ket> kets) {
  if (weights.size() != kets.size() || kets.empty()) {
    throw InvariantError("mixture: weights and kets must be nonempty and equally sized");
  }
  const int n = kets.front().num_qubits();
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(kets.front().dim()),
                          static_cast<Eigen::Index>(kets.front().dim()));
  double total = 0.0;
  for (std::size_t i = 0; i < kets.size(); ++i) {
    if (kets[i].num_qubits() != n) throw InvariantError("mixture: dimension mismatch");
    if (weights[i] < 0.0) throw InvariantError("mixture: negative weight");
    m.noalias() += weights[i] * (kets[i].amplitudes() * kets[i].amplitudes().adjoint());
    total += weights[i];
  }
  if (std::abs(total - 1.0) > tol::kCompare) throw InvariantError("mixture: weights do not sum to 1");
  return DensityOp(n, std::move(m));
}

DensityOp DensityOp::maximally_mixed(int num_qubits) {
  const Eigen::Index d = Eigen::Index{1} << num_qubits;
  return DensityOp(num_qubits, Matrix::Identity(d, d) / static_cast<double>(d));
}

// ------------------------------------------------------------------- Unitary2

Unitary2::Unitary2(const Matrix2& m) : m_(m) {
  if (!is_unitary(m, tol::kUnitary)) throw InvariantError("2x2 matrix is not unitary");
}

Unitary2 Unitary2::pauli_x() {
  Matrix2 m;
  m << 0, 1, 1, 0;
  return Unitary2(m);
}

Unitary2 Unitary2::pauli_y() {
  Matrix2 m;
  m << 0, -kI, kI, 0;
  return Unitary2(m);
}

Unitary2 Unitary2::pauli_z() {
  Matrix2 m;
  m << 1, 0, 0, -1;
  return Unitary2(m);
}

Unitary2 Unitary2::hadamard() {
  const double s = std::numbers::sqrt2 / 2;
  Matrix2 m;
  m << s, s, s, -s;
  return Unitary2(m);
}

Unitary2 Unitary2::phase_s() {
  Matrix2 m;
  m << 1, 0, 0, kI;
  return Unitary2(m);
}

Unitary2 Unitary2::equatorial(double phi) {
  const double s = std::numbers::sqrt2 / 2;
  const Complex e = std::exp(kI * phi);
  Matrix2 m;
  m << s, s, s * e, -s * e;
  return Unitary2(m);
}

Unitary2 Unitary2::random(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix2 z;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) z(r, c) = Complex(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<Matrix2> qr(z);
  Matrix2 q = qr.householderQ();
  Matrix2 rmat = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < 2; ++i) {
    const double a = std::abs(rmat(i, i));
    if (a > 0) q.col(i) *= rmat(i, i) / a;
  }
  return Unitary2(q);
}

Unitary2 Unitary2::adjoint() const { return Unitary2(Matrix2(m_.adjoint())); }

Unitary2 Unitary2::operator*(const Unitary2& o) const { return Unitary2(Matrix2(m_ * o.m_)); }

// ----------------------------------------------------------------------- Gate

std::string to_string(GateKind k) {
  switch (k) {
    case GateKind::X: return "X";
    case GateKind::Y: return "Y";
    case GateKind::Z: return "Z";
    case GateKind::H: return "H";
    case GateKind::S: return "S";
    case GateKind::T: return "T";
    case GateKind::RX: return "RX";
    case GateKind::RY: return "RY";
    case GateKind::RZ: return "RZ";
    case GateKind::U3: return "U3";
    case GateKind::CZ: return "CZ";
    case GateKind::CNOT: return "CNOT";
    case GateKind::SWAP: return "SWAP";
  }
  return "?";
}

GateKind gate_kind_from_string(const std::string& s) {
  static const std::pair<const char*, GateKind> table[] = {
      {"X", GateKind::X},   {"Y", GateKind::Y},   {"Z", GateKind::Z},       {"H", GateKind::H},
      {"S", GateKind::S},   {"T", GateKind::T},   {"RX", GateKind::RX},     {"RY", GateKind::RY},
      {"RZ", GateKind::RZ}, {"U3", GateKind::U3}, {"CZ", GateKind::CZ},     {"CNOT", GateKind::CNOT},
      {"CX", GateKind::CNOT}, {"SWAP", GateKind::SWAP}};
  for (const auto& [name, kind] : table) {
    if (s == name) return kind;
  }
  throw ParseError("unknown gate kind '" + s + "'");
}

int target_arity(GateKind k) {
  switch (k) {
    case GateKind::CZ:
    case GateKind::CNOT:
    case GateKind::SWAP:
      return 2;
    default:
      return 1;
  }
}

int param_count(GateKind k) {
  switch (k) {
    case GateKind::RX:
    case GateKind::RY:
    case GateKind::RZ:
      return 1;
    case GateKind::U3:
      return 3;
    default:
      return 0;
  }
}

Gate Gate::single(GateKind k, int q, std::vector<double> params) {
  Gate g;
  g.kind = k;
  g.targets = {q};
  g.params = std::move(params);
  return g;
}

Gate Gate::cnot(int control, int target) {
  Gate g;
  g.kind = GateKind::CNOT;
  g.targets = {control, target};
  return g;
}

Gate Gate::cz(int a, int b) {
  Gate g;
  g.kind = GateKind::CZ;
  g.targets = {a, b};
  return g;
}

Gate Gate::swap(int a, int b) {
  Gate g;
  g.kind = GateKind::SWAP;
  g.targets = {a, b};
  return g;
}

Matrix Gate::base_matrix() const {
  if (static_cast<int>(params.size()) != param_count(kind)) {
    throw InvariantError(to_string(kind) + " expects " + std::to_string(param_count(kind)) +
                         " parameter(s)");
  }
  const double s2 = std::numbers::sqrt2 / 2;
  Matrix m;
  switch (kind) {
    case GateKind::X: return Unitary2::pauli_x().matrix();
    case GateKind::Y: return Unitary2::pauli_y().matrix();
    case GateKind::Z: return Unitary2::pauli_z().matrix();
    case GateKind::H: return Unitary2::hadamard().matrix();
    case GateKind::S: return Unitary2::phase_s().matrix();
    case GateKind::T:
      m = Matrix::Identity(2, 2);
      m(1, 1) = Complex(s2, s2);
      return m;
    case GateKind::RX: {
      const double c = std::cos(params[0] / 2), s = std::sin(params[0] / 2);
      m.resize(2, 2);
      m << c, -kI * s, -kI * s, c;
      return m;
    }
    case GateKind::RY: {
      const double c = std::cos(params[0] / 2), s = std::sin(params[0] / 2);
      m.resize(2, 2);
      m << c, -s, s, c;
      return m;
    }
    case GateKind::RZ: {
      m = Matrix::Zero(2, 2);
      m(0, 0) = std::exp(-kI * (params[0] / 2));
      m(1, 1) = std::exp(kI * (params[0] / 2));
      return m;
    }
    case GateKind::U3: {
      const double c = std::cos(params[0] / 2), s = std::sin(params[0] / 2);
      const double phi = params[1], lam = params[2];
      m.resize(2, 2);
      m << c, -std::exp(kI * lam) * s, std::exp(kI * phi) * s, std::exp(kI * (phi + lam)) * c;
      return m;
    }
    case GateKind::CZ:
      m = Matrix::Identity(4, 4);
      m(3, 3) = -1;
      return m;
    case GateKind::CNOT:
      m = Matrix::Zero(4, 4);
      m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1;
      return m;
    case GateKind::SWAP:
      m = Matrix::Zero(4, 4);
      m(0, 0) = m(1, 2) = m(2, 1) = m(3, 3) = 1;
      return m;
  }
  throw InvariantError("unhandled gate kind");
}

Gate Gate::adjoint() const {
  Gate g = *this;
  switch (kind) {
    case GateKind::S:
      g.kind = GateKind::U3;
      g.params = {0.0, 0.0, -std::numbers::pi / 2};
      break;
    case GateKind::T:
      g.kind = GateKind::U3;
      g.params = {0.0, 0.0, -std::numbers::pi / 4};
      break;
    case GateKind::RX:
    case GateKind::RY:
    case GateKind::RZ:
      g.params = {-params.at(0)};
      break;
    case GateKind::U3:
      g.params = {-params.at(0), -params.at(2), -params.at(1)};
      break;
    default:
      break;  // self-inverse
  }
  return g;
}

Gate Gate::with_control(int q) const {
  Gate g = *this;
  g.controls.push_back(q);
  return g;
}

void Gate::validate(int num_qubits) const {
  if (static_cast<int>(targets.size()) != target_arity(kind)) {
    throw InvariantError(to_string(kind) + " expects " + std::to_string(target_arity(kind)) +
                         " target(s)");
  }
  if (static_cast<int>(params.size()) != param_count(kind)) {
    throw InvariantError(to_string(kind) + " expects " + std::to_string(param_count(kind)) +
                         " parameter(s)");
  }
  check_qubits_in_range(targets, num_qubits);
  check_qubits_in_range(controls, num_qubits);
  std::vector<int> all = targets;
  all.insert(all.end(), controls.begin(), controls.end());
  std::sort(all.begin(), all.end());
  if (std::adjacent_find(all.begin(), all.end()) != all.end()) {
    throw InvariantError(to_string(kind) + ": targets and controls must be distinct");
  }
}

// -------------------------------------------------------------------- Circuit

Circuit& Circuit::add(Gate g) {
  gates.push_back(std::move(g));
  return *this;
}

Circuit& Circuit::append(const Circuit& other, int offset) {
  for (Gate g : other.gates) {
    for (int& q : g.targets) q += offset;
    for (int& q : g.controls) q += offset;
    gates.push_back(std::move(g));
  }
  return *this;
}

Circuit Circuit::adjoint() const {
  Circuit out(num_qubits);
  out.gates.reserve(gates.size());
  for (auto it = gates.rbegin(); it != gates.rend(); ++it) out.gates.push_back(it->adjoint());
  return out;
}

void Circuit::validate() const {
  if (num_qubits < 0) throw InvariantError("circuit has negative qubit count");
  for (const Gate& g : gates) g.validate(num_qubits);
}

// ----------------------------------------------------------------- operations

Ket tensor(const Ket& a, const Ket& b) {
  Vector out(static_cast<Eigen::Index>(a.dim() * b.dim()));
  const auto db = static_cast<Eigen::Index>(b.dim());
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(a.dim()); ++i) {
    out.segment(i * db, db) = a.amplitudes()[i] * b.amplitudes();
  }
  return Ket::from_amplitudes_unchecked(std::move(out));
}

Ket apply_gate(const Ket& state, const Gate& g) {
  g.validate(state.num_qubits());
  Vector v = state.amplitudes();
  apply_matrix_inplace(v, state.num_qubits(), g.targets, g.controls, g.base_matrix());
  return Ket::from_amplitudes_unchecked(std::move(v));
}

Ket apply_circuit(const Ket& state, const Circuit& c) {
  if (c.num_qubits != state.num_qubits()) {
    throw InvariantError("apply_circuit: circuit has " + std::to_string(c.num_qubits) +
                         " qubits, state has " + std::to_string(state.num_qubits()));
  }
  Vector v = state.amplitudes();
  for (const Gate& g : c.gates) {
    g.validate(c.num_qubits);
    apply_matrix_inplace(v, c.num_qubits, g.targets, g.controls, g.base_matrix());
  }
  return Ket::from_amplitudes_unchecked(std::move(v));
}

Ket apply_unitary2(const Ket& state, int qubit, const Unitary2& u) {
  check_qubits_in_range({qubit}, state.num_qubits());
  Vector v = state.amplitudes();
  apply_matrix_inplace(v, state.num_qubits(), {qubit}, {}, u.matrix());
  return Ket::from_amplitudes_unchecked(std::move(v));
}

Ket apply_local(const Ket& state, std::span<const Unitary2> us) {
  if (static_cast<int>(us.size()) != state.num_qubits()) {
    throw InvariantError("apply_local: need one unitary per qubit");
  }
  Vector v = state.amplitudes();
  for (int q = 0; q < state.num_qubits(); ++q) {
    if (us[static_cast<std::size_t>(q)].matrix().isIdentity(0.0)) continue;
    apply_matrix_inplace(v, state.num_qubits(), {q}, {}, us[static_cast<std::size_t>(q)].matrix());
  }
  return Ket::from_amplitudes_unchecked(std::move(v));
}

std::vector<MeasurementBranch> measure_in_basis(const Ket& state, int qubit, const Unitary2& u) {
  const int n = state.num_qubits();
  check_qubits_in_range({qubit}, n);
  const std::uint64_t bit = qubit_bit(n, qubit);
  const std::uint64_t low_mask = bit - 1;
  const std::uint64_t rest_dim = std::uint64_t{1} << (n - 1);

  std::vector<MeasurementBranch> out;
  for (int b = 0; b < 2; ++b) {
    // <b|u^dagger on the measured qubit: coefficients conj(u(a, b)).
    const Complex c0 = std::conj(u.matrix()(0, b));
    const Complex c1 = std::conj(u.matrix()(1, b));
    Vector rest(static_cast<Eigen::Index>(rest_dim));
    for (std::uint64_t r = 0; r < rest_dim; ++r) {
      const std::uint64_t hi = (r & ~low_mask) << 1;
      const std::uint64_t i0 = hi | (r & low_mask);
      rest[static_cast<Eigen::Index>(r)] = c0 * state[i0] + c1 * state[i0 | bit];
    }
    MeasurementBranch br;
    br.outcome = b;
    br.probability = rest.squaredNorm();
    if (br.probability < tol::kPrune) {
      br.zero = true;
    } else {
      rest /= std::sqrt(br.probability);
      br.post_state = Ket::from_amplitudes_unchecked(std::move(rest));
    }
    out.push_back(std::move(br));
  }
  return out;
}

DensityOp partial_trace(const Ket& state, std::vector<int> keep) {
  keep = normalize_keep(std::move(keep), state.num_qubits());
  const Split sp = split_register(state.num_qubits(), keep);
  Matrix a(static_cast<Eigen::Index>(sp.keep_offsets.size()),
           static_cast<Eigen::Index>(sp.rest_offsets.size()));
  for (std::size_t i = 0; i < sp.keep_offsets.size(); ++i) {
    for (std::size_t r = 0; r < sp.rest_offsets.size(); ++r) {
      a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(r)) =
          state[sp.keep_offsets[i] | sp.rest_offsets[r]];
    }
  }
  return DensityOp::from_matrix_unchecked(a * a.adjoint());
}

DensityOp partial_trace(const DensityOp& rho, std::vector<int> keep) {
  keep = normalize_keep(std::move(keep), rho.num_qubits());
  const Split sp = split_register(rho.num_qubits(), keep);
  const auto dk = static_cast<Eigen::Index>(sp.keep_offsets.size());
  Matrix out = Matrix::Zero(dk, dk);
  for (Eigen::Index i = 0; i < dk; ++i) {
    for (Eigen::Index j = 0; j < dk; ++j) {
      Complex acc{0.0, 0.0};
      for (std::uint64_t r : sp.rest_offsets) {
        acc += rho.matrix()(static_cast<Eigen::Index>(sp.keep_offsets[static_cast<std::size_t>(i)] | r),
                            static_cast<Eigen::Index>(sp.keep_offsets[static_cast<std::size_t>(j)] | r));
      }
      out(i, j) = acc;
    }
  }
  return DensityOp::from_matrix_unchecked(std::move(out));
}

double fidelity_with_pure(const DensityOp& rho, const Ket& phi) {
  if (rho.num_qubits() != phi.num_qubits()) throw InvariantError("fidelity: dimension mismatch");
  const double v = std::real(phi.amplitudes().dot(rho.matrix() * phi.amplitudes()));
  return std::sqrt(std::clamp(v, 0.0, 1.0));
}

double trace_distance(const DensityOp& a, const DensityOp& b) {
  if (a.num_qubits() != b.num_qubits()) throw InvariantError("trace_distance: dimension mismatch");
  Matrix d = a.matrix() - b.matrix();
  d = (d + d.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(d, Eigen::EigenvaluesOnly);
  return std::clamp(0.5 * es.eigenvalues().cwiseAbs().sum(), 0.0, 1.0);
}

double trace_distance_to_pure(std::span<const double> weights, std::span<const Ket> kets,
                              const Ket& phi) {
  if (weights.size() != kets.size()) throw InvariantError("trace_distance_to_pure: size mismatch");
  const auto dim = static_cast<Eigen::Index>(phi.dim());
  const auto k = static_cast<Eigen::Index>(kets.size() + 1);
  if (k >= dim) {
    std::vector<Ket> all(kets.begin(), kets.end());
    return trace_distance(DensityOp::mixture(weights, all), DensityOp::pure(phi));
  }
  Matrix cols(dim, k);
  for (std::size_t i = 0; i < kets.size(); ++i) {
    if (kets[i].num_qubits() != phi.num_qubits()) {
      throw InvariantError("trace_distance_to_pure: dimension mismatch");
    }
    cols.col(static_cast<Eigen::Index>(i)) = kets[i].amplitudes();
  }
  cols.col(k - 1) = phi.amplitudes();
  // The thin Q factor spans a space containing every column, so the
  // restricted operator has the same nonzero spectrum.
  Eigen::HouseholderQR<Matrix> qr(cols);
  const Matrix q = qr.householderQ() * Matrix::Identity(dim, k);
  const Matrix coords = q.adjoint() * cols;
  Matrix d = -coords.col(k - 1) * coords.col(k - 1).adjoint();
  for (Eigen::Index i = 0; i + 1 < k; ++i) {
    d.noalias() += weights[static_cast<std::size_t>(i)] * (coords.col(i) * coords.col(i).adjoint());
  }
  d = (d + d.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(d, Eigen::EigenvaluesOnly);
  return std::clamp(0.5 * es.eigenvalues().cwiseAbs().sum(), 0.0, 1.0);
}

Matrix circuit_to_unitary(const Circuit& c) {
  if (c.num_qubits > tol::kMaxDenseQubits) {
    throw CapExceeded("circuit_to_unitary supports at most " +
                      std::to_string(tol::kMaxDenseQubits) + " qubits");
  }
  c.validate();
  const Eigen::Index d = Eigen::Index{1} << c.num_qubits;
  Matrix u = Matrix::Identity(d, d);
  for (const Gate& g : c.gates) {
    const Matrix m = g.base_matrix();
    for (Eigen::Index col = 0; col < d; ++col) {
      Vector v = u.col(col);
      apply_matrix_inplace(v, c.num_qubits, g.targets, g.controls, m);
      u.col(col) = v;
    }
  }
  return u;
}

double entanglement_entropy(const Ket& state, const std::vector<int>& part) {
  if (part.empty() || static_cast<int>(part.size()) == state.num_qubits()) return 0.0;
  const DensityOp rho = partial_trace(state, part);
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix(), Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double l = es.eigenvalues()[i];
    if (l > 1e-15) s -= l * std::log2(l);
  }
  return std::max(0.0, s);
}

}  // namespace mbqc
