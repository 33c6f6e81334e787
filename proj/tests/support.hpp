#pragma once

// Shared helpers for the unit tests: hand-built states and operators that the
// production code must reproduce.

#include <cmath>
#include <cstdint>

#include "qdi/linalg.hpp"
#include "qdi/rng.hpp"
#include "qdi/state.hpp"

namespace qdi::testing {

inline Mat2 identity2x2() { return Mat2::Identity(); }

// Generic single-qubit unitary exp(i theta n.sigma) = cos(theta) I
// + i sin(theta) n.sigma from three uniform draws.
inline Mat2 random_unitary2(Rng& rng) {
  const double theta = rng.uniform() * 2.0 * 3.14159265358979323846;
  const double z = 2.0 * rng.uniform() - 1.0;
  const double phi = rng.uniform() * 2.0 * 3.14159265358979323846;
  const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
  const Vec3 n(s * std::cos(phi), s * std::sin(phi), z);
  Mat2 u = std::cos(theta) * Mat2::Identity();
  for (int i = 0; i < 3; ++i) {
    u += Complex(0.0, std::sin(theta)) * n(i) * pauli(i);
  }
  return u;
}

// Single-qubit density matrix with Bloch vector drawn uniformly from the
// unit ball.
inline Mat2 random_qubit_state(Rng& rng) {
  Vec3 r;
  for (int i = 0; i < 3; ++i) r(i) = rng.gaussian();
  const double len = r.norm();
  if (len > 0.0) r *= std::cbrt(rng.uniform()) / len;
  Mat2 rho = 0.5 * Mat2::Identity();
  for (int i = 0; i < 3; ++i) rho += 0.5 * r(i) * pauli(i);
  return rho;
}

// Mixture sum_k p_k |k><k| (x) rho_k with {|k>} an orthonormal basis of the
// first qubit: a state whose first-side discord vanishes identically.
inline TwoQubitState random_classical_quantum_state(Rng& rng) {
  const Mat2 basis = random_unitary2(rng);
  const double p0 = rng.uniform();
  Mat4 rho = Mat4::Zero();
  for (int k = 0; k < 2; ++k) {
    const Mat2 ket_bra = basis.col(k) * basis.col(k).adjoint();
    const double pk = (k == 0) ? p0 : 1.0 - p0;
    rho += pk * kron(ket_bra, random_qubit_state(rng));
  }
  return TwoQubitState::from_matrix(rho);
}

// Fixed asymmetric classical-quantum state
// (|0><0| (x) |+><+| + |1><1| (x) |0><0|) / 2 with first-side discord zero
// and second-side indicator exactly 1/12.
inline TwoQubitState asymmetric_cq_state() {
  Mat2 plus;
  plus << 0.5, 0.5, 0.5, 0.5;
  Mat2 zero = Mat2::Zero();
  zero(0, 0) = 1.0;
  Mat2 proj0 = Mat2::Zero();
  proj0(0, 0) = 1.0;
  Mat2 proj1 = Mat2::Zero();
  proj1(1, 1) = 1.0;
  const Mat4 rho = 0.5 * kron(proj0, plus) + 0.5 * kron(proj1, zero);
  return TwoQubitState::from_matrix(rho);
}

// Conjugates s by u1 (x) u2.
inline TwoQubitState local_rotate(const TwoQubitState& s, const Mat2& u1,
                                  const Mat2& u2) {
  const Mat4 u = kron(u1, u2);
  return TwoQubitState::from_matrix(u * s.rho() * u.adjoint());
}

}  // namespace qdi::testing
