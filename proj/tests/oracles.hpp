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

// Reference implementations used only by the tests. Nothing here calls into
// the library's simulation kernels: gate matrices are written out by hand,
// full operators are assembled with Kronecker products, and closed forms are
// used wherever one exists.

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "mbqc_lab/quantum_core.hpp"

namespace oracle {

using C = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline const C I{0.0, 1.0};

inline Mat mat2(C a, C b, C c, C d) {
  Mat m(2, 2);
  m << a, b, c, d;
  return m;
}

inline Mat single_qubit_matrix(mbqc::GateKind k, const std::vector<double>& p) {
  using mbqc::GateKind;
  const double r = 1.0 / std::sqrt(2.0);
  switch (k) {
    case GateKind::X: return mat2(0, 1, 1, 0);
    case GateKind::Y: return mat2(0, -I, I, 0);
    case GateKind::Z: return mat2(1, 0, 0, -1);
    case GateKind::H: return mat2(r, r, r, -r);
    case GateKind::S: return mat2(1, 0, 0, I);
    case GateKind::T: return mat2(1, 0, 0, std::exp(I * (std::numbers::pi / 4)));
    case GateKind::RX:
      return mat2(std::cos(p[0] / 2), -I * std::sin(p[0] / 2), -I * std::sin(p[0] / 2), std::cos(p[0] / 2));
    case GateKind::RY:
      return mat2(std::cos(p[0] / 2), -std::sin(p[0] / 2), std::sin(p[0] / 2), std::cos(p[0] / 2));
    case GateKind::RZ: return mat2(std::exp(-I * (p[0] / 2)), 0, 0, std::exp(I * (p[0] / 2)));
    case GateKind::U3:
      return mat2(std::cos(p[0] / 2), -std::exp(I * p[2]) * std::sin(p[0] / 2),
                  std::exp(I * p[1]) * std::sin(p[0] / 2), std::exp(I * (p[1] + p[2])) * std::cos(p[0] / 2));
    default: return Mat::Identity(2, 2);
  }
}

// Operator acting as `m` on qubit q of n (qubit 0 is the most significant).
inline Mat embed(const Mat& m, int q, int n) {
  Mat out = Mat::Identity(1, 1);
  for (int i = 0; i < n; ++i) {
    const Mat f = (i == q) ? m : Mat(Mat::Identity(2, 2));
    Mat k(out.rows() * 2, out.cols() * 2);
    for (int a = 0; a < out.rows(); ++a)
      for (int b = 0; b < out.cols(); ++b) k.block(a * 2, b * 2, 2, 2) = out(a, b) * f;
    out = k;
  }
  return out;
}

inline Mat projector(int q, int n, int value) {
  return embed(value ? mat2(0, 0, 0, 1) : mat2(1, 0, 0, 0), q, n);
}

inline Mat full_gate(const mbqc::Gate& g, int n) {
  using mbqc::GateKind;
  const std::size_t dim = std::size_t{1} << n;
  Mat base;
  switch (g.kind) {
    case GateKind::CNOT:
      base = projector(g.targets[0], n, 0) + projector(g.targets[0], n, 1) * embed(mat2(0, 1, 1, 0), g.targets[1], n);
      break;
    case GateKind::CZ:
      base = projector(g.targets[0], n, 0) + projector(g.targets[0], n, 1) * embed(mat2(1, 0, 0, -1), g.targets[1], n);
      break;
    case GateKind::SWAP: {
      const Mat x = mat2(0, 1, 1, 0), y = mat2(0, -I, I, 0), z = mat2(1, 0, 0, -1);
      const int a = g.targets[0], b = g.targets[1];
      base = 0.5 * (Mat::Identity(dim, dim) + embed(x, a, n) * embed(x, b, n) + embed(y, a, n) * embed(y, b, n) +
                    embed(z, a, n) * embed(z, b, n));
      break;
    }
    default: base = embed(single_qubit_matrix(g.kind, g.params), g.targets[0], n);
  }
  Mat all_on = Mat::Identity(dim, dim);
  for (int c : g.controls) all_on = all_on * projector(c, n, 1);
  return Mat::Identity(dim, dim) - all_on + all_on * base;
}

inline Mat full_circuit(const mbqc::Circuit& c) {
  const std::size_t dim = std::size_t{1} << c.num_qubits;
  Mat u = Mat::Identity(dim, dim);
  for (const mbqc::Gate& g : c.gates) u = full_gate(g, c.num_qubits) * u;
  return u;
}

inline Vec zero_state(int n) {
  Vec v = Vec::Zero(Eigen::Index{1} << n);
  v[0] = 1.0;
  return v;
}

// Probability that qubit 0 reads 1.
inline double prob_qubit0_one(const Vec& psi, int n) {
  return (psi.adjoint() * projector(0, n, 1) * psi)(0, 0).real();
}

// Explicit index-loop partial trace of |psi><psi|, keeping the listed qubits.
inline Mat partial_trace(const Vec& psi, int n, const std::vector<int>& keep) {
  const int k = static_cast<int>(keep.size());
  Mat rho = Mat::Zero(Eigen::Index{1} << k, Eigen::Index{1} << k);
  const std::size_t dim = std::size_t{1} << n;
  auto kept_index = [&](std::size_t i) {
    std::size_t out = 0;
    for (int q : keep) out = (out << 1) | ((i >> (n - 1 - q)) & 1);
    return out;
  };
  auto traced_bits = [&](std::size_t i) {
    std::size_t out = i;
    for (int q : keep) out &= ~(std::size_t{1} << (n - 1 - q));
    return out;
  };
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j)
      if (traced_bits(i) == traced_bits(j))
        rho(kept_index(i), kept_index(j)) += psi[i] * std::conj(psi[j]);
  return rho;
}

// Trace distance of two qubits from their Bloch vectors.
inline double bloch_trace_distance(const Mat& a, const Mat& b) {
  const Mat d = a - b;
  const double x = 2 * d(0, 1).real(), y = -2 * d(0, 1).imag(), z = (d(0, 0) - d(1, 1)).real();
  return 0.5 * std::sqrt(x * x + y * y + z * z);
}

inline double binomial_tail(double p, int k) {
  double s = 0.0;
  for (int j = k / 2 + 1; j <= k; ++j) {
    s += std::tgamma(k + 1.0) / (std::tgamma(j + 1.0) * std::tgamma(k - j + 1.0)) * std::pow(p, j) *
         std::pow(1 - p, k - j);
  }
  return s;
}

// Largest squared Schmidt coefficient of a two-qubit state in closed form.
inline double two_qubit_max_schmidt_sq(const Vec& psi) {
  const double det = std::abs(psi[0] * psi[3] - psi[1] * psi[2]);
  return 0.5 * (1.0 + std::sqrt(std::max(0.0, 1.0 - 4.0 * det * det)));
}

// Grid search of max |<a|psi>|^2 over single-qubit states a (Bloch sphere).
inline double single_qubit_grid_overlap(const Vec& psi, int steps = 400) {
  double best = 0.0;
  for (int i = 0; i <= steps; ++i) {
    const double th = std::numbers::pi * i / steps;
    for (int j = 0; j < 2 * steps; ++j) {
      const double ph = std::numbers::pi * j / steps;
      const C ov = std::cos(th / 2) * psi[0] + std::exp(-I * ph) * std::sin(th / 2) * psi[1];
      best = std::max(best, std::norm(ov));
    }
  }
  return best;
}

inline Mat random_density(int dim, int rank, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Mat a(dim, rank);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < rank; ++j) a(i, j) = C(g(rng), g(rng));
  Mat rho = a * a.adjoint();
  return rho / rho.trace().real();
}

inline mbqc::Circuit random_circuit(int n, int depth, std::mt19937_64& rng) {
  using mbqc::Gate;
  using mbqc::GateKind;
  std::uniform_int_distribution<int> pick(0, 11), qubit(0, n - 1);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  mbqc::Circuit c(n);
  for (int d = 0; d < depth; ++d) {
    const int k = pick(rng);
    const int a = qubit(rng);
    int b = qubit(rng);
    while (n > 1 && b == a) b = qubit(rng);
    if (k <= 5) {
      c.add(Gate::single(static_cast<GateKind>(k), a));
    } else if (k <= 8) {
      c.add(Gate::single(static_cast<GateKind>(k), a, {angle(rng)}));
    } else if (k == 9) {
      c.add(Gate::single(GateKind::U3, a, {angle(rng), angle(rng), angle(rng)}));
    } else if (n > 1) {
      c.add(k == 10 ? Gate::cnot(a, b) : Gate::cz(a, b));
    }
  }
  return c;
}

}  // namespace oracle
