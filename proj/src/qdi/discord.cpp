#include "qdi/discord.hpp"

#include <algorithm>
#include <cmath>

#include "qdi/errors.hpp"

namespace qdi {

namespace {

constexpr double kRadicandTol = 1e-10;
constexpr double kSymTol = 1e-12;
constexpr double kImagTol = 1e-9;

void check_kernel(const Mat3& k) {
  if ((k - k.transpose()).cwiseAbs().maxCoeff() > kSymTol)
    raise(ErrorKind::Internal, "correlation kernel lost symmetry");
}

}  // namespace

double real_trace_product(const MatX& op, const MatX& w) {
  // Tr[op * w] without forming the product matrix
  const Complex tr = (op.transpose().cwiseProduct(w)).sum();
  if (std::abs(tr.imag()) > kImagTol)
    raise(ErrorKind::Internal, "copy trace has imaginary residue");
  return tr.real();
}

const MatX& multicopy_m1_operator(Side side) {
  static const MatX op_a = [] {
    const MultiCopyOperators ops = build_multicopy_operators();
    return embedded_pair_product({{ops.u_op, 0, 2}, {ops.v_op, 1, 3}}, 4);
  }();
  static const MatX op_b = [] {
    const MultiCopyOperators ops = build_multicopy_operators();
    return embedded_pair_product({{ops.v_op, 0, 2}, {ops.u_op, 1, 3}}, 4);
  }();
  return side == Side::A ? op_a : op_b;
}

const MatX& multicopy_m2_operator(Side side) {
  static const MatX op_a = [] {
    const MultiCopyOperators ops = build_multicopy_operators();
    return embedded_pair_product({{ops.u_op, 0, 6},
                                  {ops.u_op, 2, 4},
                                  {ops.v_op, 1, 3},
                                  {ops.v_op, 5, 7}},
                                 8);
  }();
  static const MatX op_b = [] {
    const MultiCopyOperators ops = build_multicopy_operators();
    return embedded_pair_product({{ops.v_op, 0, 6},
                                  {ops.v_op, 2, 4},
                                  {ops.u_op, 1, 3},
                                  {ops.u_op, 5, 7}},
                                 8);
  }();
  return side == Side::A ? op_a : op_b;
}

CorrelationMatrixK k_matrix(const BlochForm& b, Side side) {
  CorrelationMatrixK out;
  out.side = side;
  if (side == Side::A)
    out.k = b.x * b.x.transpose() + b.t * b.t.transpose();
  else
    out.k = b.y * b.y.transpose() + b.t.transpose() * b.t;
  out.k = 0.5 * (out.k + out.k.transpose());
  check_kernel(out.k);
  return out;
}

Vec3 k_eigenvalues(const CorrelationMatrixK& k) {
  check_kernel(k.k);
  return jacobi_eigenvalues_descending(k.k);
}

double geometric_discord(const CorrelationMatrixK& k) {
  const Vec3 ev = k_eigenvalues(k);
  return std::max(0.0, 0.25 * (ev(1) + ev(2)));
}

Moments moments_from_k(const CorrelationMatrixK& k) {
  check_kernel(k.k);
  Moments m;
  m.side = k.side;
  m.m1 = k.k.trace();
  m.m2 = (k.k * k.k).trace();
  return m;
}

double q_indicator(const Moments& m) {
  const double radicand = 6.0 * m.m2 - 2.0 * m.m1 * m.m1;
  if (radicand < -kRadicandTol)
    raise(ErrorKind::InvalidMoments,
          "moment pair is inconsistent with a PSD 3x3 spectrum");
  const double root = std::sqrt(std::max(0.0, radicand));
  return std::max(0.0, (2.0 * m.m1 - root) / 12.0);
}

std::optional<double> v_indicator(const Moments& m) {
  const double radicand = m.m2 - m.m1 * m.m1;
  if (radicand < 0.0) return std::nullopt;
  return std::sqrt(radicand);
}

MultiCopyOperators build_multicopy_operators() {
  MultiCopyOperators ops;
  Eigen::Vector4cd psi;
  psi << 0.0, 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0), 0.0;
  ops.singlet_projector = psi * psi.adjoint();
  ops.u_op = Mat4::Identity() - 4.0 * ops.singlet_projector;
  ops.v_op = ops.u_op + Mat4::Identity();
  return ops;
}

double m1_multicopy(const TwoQubitState& s, Side side) {
  const MatX w = kron(s.rho(), s.rho());
  return real_trace_product(multicopy_m1_operator(side), w);
}

double m2_multicopy(const TwoQubitState& s, Side side) {
  const MatX w2 = kron(s.rho(), s.rho());
  const MatX w4 = kron(w2, w2);
  return real_trace_product(multicopy_m2_operator(side), w4);
}

DiscordReport discord_report(const TwoQubitState& s) {
  const BlochForm b = s.bloch();
  DiscordReport rep;
  const CorrelationMatrixK ka = k_matrix(b, Side::A);
  const CorrelationMatrixK kb = k_matrix(b, Side::B);
  rep.d_a = geometric_discord(ka);
  rep.d_b = geometric_discord(kb);
  const Moments ma = moments_from_k(ka);
  const Moments mb = moments_from_k(kb);
  rep.q_a = q_indicator(ma);
  rep.q_b = q_indicator(mb);
  rep.v_a = v_indicator(ma);
  rep.v_b = v_indicator(mb);
  rep.q_s = rep.q_a + rep.q_b;
  if (rep.q_a > rep.d_a + 1e-9 || rep.q_b > rep.d_b + 1e-9)
    raise(ErrorKind::Internal, "indicator exceeded its discord bound");
  return rep;
}

}  // namespace qdi
