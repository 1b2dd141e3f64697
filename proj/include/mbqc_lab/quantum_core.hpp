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

// Dense statevector / density-operator kernel.
//
// Index convention: for an N-qubit register, qubit q is stored in bit
// (N - 1 - q) of the basis index, i.e. qubit 0 is the most significant bit.
// Every routine in the library follows this convention.

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace mbqc {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;
using Matrix2 = Eigen::Matrix2cd;

/// Bit strings (witnesses y, outcome strings m) are '0'/'1' character strings.
/// Character j is bit j, matching qubit order.
using BitString = std::string;

namespace tol {
inline constexpr double kUnitary = 1e-10;  // unitarity and normalization
inline constexpr double kCompare = 1e-9;   // numeric comparisons
inline constexpr double kPrune = 1e-12;    // zero-probability branch threshold
inline constexpr int kMaxDenseQubits = 12;
}  // namespace tol

BitString to_bits(std::uint64_t value, int width);
std::uint64_t from_bits(const BitString& bits);
bool is_bit_string(const std::string& s);
/// All 2^width strings in lexicographic (= numeric) order.
std::vector<BitString> all_bit_strings(int width);

class Ket {
 public:
  /// |0...0> on num_qubits qubits. num_qubits == 0 gives the scalar 1.
  explicit Ket(int num_qubits = 0);

  /// Validates length 2^k and unit norm (within tol::kUnitary).
  static Ket from_amplitudes(Vector amplitudes);
  /// Length check only; the caller guarantees normalization.
  static Ket from_amplitudes_unchecked(Vector amplitudes);
  static Ket basis(int num_qubits, std::uint64_t index);
  static Ket from_bits(const BitString& bits);
  static Ket plus();
  static Ket random(int num_qubits, std::mt19937_64& rng);

  int num_qubits() const { return num_qubits_; }
  std::size_t dim() const { return static_cast<std::size_t>(amps_.size()); }
  const Vector& amplitudes() const { return amps_; }
  Complex operator[](std::size_t i) const { return amps_[static_cast<Eigen::Index>(i)]; }
  double norm() const { return amps_.norm(); }

 private:
  Ket(int num_qubits, Vector amps) : num_qubits_(num_qubits), amps_(std::move(amps)) {}

  int num_qubits_;
  Vector amps_;
};

Complex inner(const Ket& a, const Ket& b);  // <a|b>

class DensityOp {
 public:
  /// Validates Hermiticity, unit trace and positivity (tolerance 1e-10).
  static DensityOp from_matrix(Matrix m);
  static DensityOp from_matrix_unchecked(Matrix m);
  static DensityOp pure(const Ket& k);
  /// sum_i weights[i] |kets[i]><kets[i]|; weights must sum to 1.
  static DensityOp mixture(std::span<const double> weights, std::span<const Ket> kets);
  static DensityOp maximally_mixed(int num_qubits);

  int num_qubits() const { return num_qubits_; }
  const Matrix& matrix() const { return m_; }

 private:
  DensityOp(int num_qubits, Matrix m) : num_qubits_(num_qubits), m_(std::move(m)) {}

  int num_qubits_;
  Matrix m_;
};

class Unitary2 {
 public:
  Unitary2() : m_(Matrix2::Identity()) {}
  /// Throws InvariantError unless m is unitary within 1e-10.
  explicit Unitary2(const Matrix2& m);

  static Unitary2 identity() { return {}; }
  static Unitary2 pauli_x();
  static Unitary2 pauli_y();
  static Unitary2 pauli_z();
  static Unitary2 hadamard();
  static Unitary2 phase_s();
  /// Basis {(|0> + e^{i phi}|1>)/sqrt2, (|0> - e^{i phi}|1>)/sqrt2}.
  static Unitary2 equatorial(double phi);
  static Unitary2 random(std::mt19937_64& rng);

  const Matrix2& matrix() const { return m_; }
  Unitary2 adjoint() const;
  Unitary2 operator*(const Unitary2& o) const;

 private:
  Matrix2 m_;
};

enum class GateKind { X, Y, Z, H, S, T, RX, RY, RZ, U3, CZ, CNOT, SWAP };

std::string to_string(GateKind k);
GateKind gate_kind_from_string(const std::string& s);
/// Number of target qubits the base gate acts on (1 or 2).
int target_arity(GateKind k);
/// Number of angle parameters (0, 1 or 3).
int param_count(GateKind k);

/// A gate from the closed gate set, optionally controlled on extra qubits.
/// CNOT targets are {control, target}; CZ and SWAP take two targets.
/// U3(theta, phi, lambda) = [[cos, -e^{i lambda} sin], [e^{i phi} sin, e^{i(phi+lambda)} cos]]
/// with half-angle theta/2.
struct Gate {
  GateKind kind = GateKind::X;
  std::vector<int> targets;
  std::vector<int> controls;
  std::vector<double> params;

  static Gate single(GateKind k, int q, std::vector<double> params = {});
  static Gate x(int q) { return single(GateKind::X, q); }
  static Gate h(int q) { return single(GateKind::H, q); }
  static Gate ry(int q, double theta) { return single(GateKind::RY, q, {theta}); }
  static Gate rz(int q, double theta) { return single(GateKind::RZ, q, {theta}); }
  static Gate cnot(int control, int target);
  static Gate cz(int a, int b);
  static Gate swap(int a, int b);

  /// Dense matrix on the targets only (2x2 or 4x4).
  Matrix base_matrix() const;
  /// Exact inverse within the gate set.
  Gate adjoint() const;
  Gate with_control(int q) const;
  /// Throws InvariantError on bad arity, overlapping or out-of-range indices.
  void validate(int num_qubits) const;
};

struct Circuit {
  int num_qubits = 0;
  std::vector<Gate> gates;

  Circuit() = default;
  explicit Circuit(int n) : num_qubits(n) {}
  Circuit(int n, std::vector<Gate> g) : num_qubits(n), gates(std::move(g)) {}

  Circuit& add(Gate g);
  /// Appends every gate of `other`, with qubit i of `other` mapped to
  /// offset + i.
  Circuit& append(const Circuit& other, int offset = 0);
  Circuit adjoint() const;
  void validate() const;
};

Ket tensor(const Ket& a, const Ket& b);
Ket apply_gate(const Ket& state, const Gate& g);
Ket apply_circuit(const Ket& state, const Circuit& c);
Ket apply_unitary2(const Ket& state, int qubit, const Unitary2& u);
/// Applies u[j] to qubit j for every j.
Ket apply_local(const Ket& state, std::span<const Unitary2> us);

struct MeasurementBranch {
  int outcome = 0;
  double probability = 0.0;
  /// Set when probability < tol::kPrune; post_state is then empty.
  bool zero = false;
  std::optional<Ket> post_state;
};

/// Measures `qubit` in the basis {u|0>, u|1>}; returns both branches, outcome
/// 0 first. Post states live on the remaining qubits (original order kept).
std::vector<MeasurementBranch> measure_in_basis(const Ket& state, int qubit, const Unitary2& u);

/// Reduced state on `keep` (sorted ascending in the result).
DensityOp partial_trace(const Ket& state, std::vector<int> keep);
DensityOp partial_trace(const DensityOp& rho, std::vector<int> keep);

/// sqrt(<phi|rho|phi>).
double fidelity_with_pure(const DensityOp& rho, const Ket& phi);

/// 1/2 sum |lambda_i| over eigenvalues of the Hermitized difference.
double trace_distance(const DensityOp& a, const DensityOp& b);

/// Trace distance between sum_i w_i|k_i><k_i| and |phi><phi|, computed by an
/// exact eigendecomposition restricted to span{k_i, phi}. Equal to
/// trace_distance on the assembled operators but avoids 2^n x 2^n matrices.
double trace_distance_to_pure(std::span<const double> weights, std::span<const Ket> kets,
                              const Ket& phi);

/// Dense 2^n x 2^n matrix of the circuit; n <= 12.
Matrix circuit_to_unitary(const Circuit& c);

/// Von Neumann entropy (bits) of the reduced state on `part`.
double entanglement_entropy(const Ket& state, const std::vector<int>& part);

}  // namespace mbqc
