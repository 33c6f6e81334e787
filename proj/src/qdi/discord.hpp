#pragma once

#include <optional>

#include "qdi/state.hpp"

namespace qdi {

enum class Side { A, B };

// Symmetric PSD 3x3 correlation kernel whose spectrum carries the discord
// indicators for one side.
struct CorrelationMatrixK {
  Mat3 k = Mat3::Zero();
  Side side = Side::A;
};

// First two power sums of the kernel spectrum: m1 = Tr K, m2 = Tr K^2.
struct Moments {
  double m1 = 0.0;
  double m2 = 0.0;
  Side side = Side::A;
};

// Four-copy measurement operators on two qubit copies: the singlet projector
// P, U = I - 4P and V = U + I = 2 SWAP.
struct MultiCopyOperators {
  Mat4 singlet_projector;
  Mat4 u_op;
  Mat4 v_op;
};

struct DiscordReport {
  double d_a = 0.0, d_b = 0.0;
  double q_a = 0.0, q_b = 0.0;
  std::optional<double> v_a, v_b;
  double q_s = 0.0;  // q_a + q_b
};

// Side A: K = x x^T + T T^T over the first-qubit marginal; side B uses the
// exchanged decomposition, K = y y^T + T^T T.
CorrelationMatrixK k_matrix(const BlochForm& b, Side side);

// Kernel spectrum, descending.
Vec3 k_eigenvalues(const CorrelationMatrixK& k);

// Geometric discord: with descending eigenvalues, (lam1 + lam2) / 4.
double geometric_discord(const CorrelationMatrixK& k);

Moments moments_from_k(const CorrelationMatrixK& k);

// Q = (2 m1 - sqrt(6 m2 - 2 m1^2)) / 12.  The radicand is clamped to zero
// when it is negative by no more than 1e-10; beyond that the moments are
// rejected as inconsistent.
double q_indicator(const Moments& m);

// V = sqrt(m2 - m1^2) taken literally; undefined (nullopt) whenever the
// radicand is negative, which is the case for every physical spectrum with
// more than one nonzero eigenvalue.
std::optional<double> v_indicator(const Moments& m);

MultiCopyOperators build_multicopy_operators();

// m1 as a single trace over two state copies, m2 over four; interleaved copy
// ordering A1 B1 A2 B2 (A3 B3 A4 B4), with the U box on the measured side
// and the V box on the opposite side.
double m1_multicopy(const TwoQubitState& s, Side side);
double m2_multicopy(const TwoQubitState& s, Side side);

// The lifted box operators behind the two traces (16x16 and 256x256).
const MatX& multicopy_m1_operator(Side side);
const MatX& multicopy_m2_operator(Side side);

// Tr[op w] for Hermitian-by-construction products; rejects imaginary residue
// above 1e-9.
double real_trace_product(const MatX& op, const MatX& w);

DiscordReport discord_report(const TwoQubitState& s);

}  // namespace qdi
