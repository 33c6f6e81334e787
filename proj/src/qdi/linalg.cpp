#include "qdi/linalg.hpp"

#include <cmath>

#include "qdi/errors.hpp"

namespace qdi {

namespace {
const Complex kI{0.0, 1.0};
}

const Mat2& pauli(int i) {
  static const Mat2 sx = (Mat2() << 0, 1, 1, 0).finished();
  static const Mat2 sy = (Mat2() << 0, -kI, kI, 0).finished();
  static const Mat2 sz = (Mat2() << 1, 0, 0, -1).finished();
  switch (i) {
    case 0: return sx;
    case 1: return sy;
    case 2: return sz;
    default: raise(ErrorKind::InvalidArgument, "pauli index must be 0, 1 or 2");
  }
}

const Mat2& identity2() {
  static const Mat2 id = Mat2::Identity();
  return id;
}

MatX kron(const MatX& a, const MatX& b) {
  MatX out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

MatX embed_pair_operator(const Mat4& op, int q1, int q2, int n_qubits) {
  return embedded_pair_product({{op, q1, q2}}, n_qubits);
}

MatX embedded_pair_product(const std::vector<std::tuple<Mat4, int, int>>& factors,
                           int n_qubits) {
  if (n_qubits < 1 || n_qubits > 16)
    raise(ErrorKind::InvalidArgument, "register size out of range");
  unsigned covered = 0;
  for (const auto& [op, q1, q2] : factors) {
    (void)op;
    if (q1 < 0 || q1 >= n_qubits || q2 < 0 || q2 >= n_qubits || q1 == q2)
      raise(ErrorKind::InvalidArgument, "factor qubits out of range");
    const unsigned mask = (1u << q1) | (1u << q2);
    if (covered & mask)
      raise(ErrorKind::InvalidArgument, "factor supports must be disjoint");
    covered |= mask;
  }

  const std::size_t dim = std::size_t{1} << n_qubits;
  const int top = n_qubits - 1;  // qubit 0 is the most significant bit
  std::size_t touched = 0;
  struct Slot {
    const Mat4* op;
    int b1, b2;
  };
  std::vector<Slot> slots;
  slots.reserve(factors.size());
  for (const auto& [op, q1, q2] : factors) {
    slots.push_back({&op, top - q1, top - q2});
    touched |= (std::size_t{1} << (top - q1)) | (std::size_t{1} << (top - q2));
  }

  MatX out(dim, dim);
  for (std::size_t row = 0; row < dim; ++row) {
    for (std::size_t col = 0; col < dim; ++col) {
      // bits on qubits untouched by any factor must agree between row and col
      if ((row ^ col) & ~touched) {
        out(row, col) = 0.0;
        continue;
      }
      Complex v{1.0, 0.0};
      for (const Slot& s : slots) {
        const int r = static_cast<int>((((row >> s.b1) & 1u) << 1) | ((row >> s.b2) & 1u));
        const int c = static_cast<int>((((col >> s.b1) & 1u) << 1) | ((col >> s.b2) & 1u));
        v *= (*s.op)(r, c);
        if (v == Complex{0.0, 0.0}) break;
      }
      out(row, col) = v;
    }
  }
  return out;
}

Mat4 partial_transpose_b(const Mat4& rho) {
  Mat4 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
          out(2 * i + l, 2 * j + k) = rho(2 * i + k, 2 * j + l);
  return out;
}

Vec3 jacobi_eigenvalues_descending(const Mat3& sym) {
  Mat3 a = 0.5 * (sym + sym.transpose());
  constexpr double kTol = 1e-14;
  constexpr int kMaxSweeps = 64;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    const double off = std::sqrt(a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) +
                                 a(1, 2) * a(1, 2));
    if (off <= kTol) break;
    for (int p = 0; p < 2; ++p) {
      for (int q = p + 1; q < 3; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < 3; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < 3; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  Vec3 ev(a(0, 0), a(1, 1), a(2, 2));
  if (ev(0) < ev(1)) std::swap(ev(0), ev(1));
  if (ev(1) < ev(2)) std::swap(ev(1), ev(2));
  if (ev(0) < ev(1)) std::swap(ev(0), ev(1));
  return ev;
}

Mat4 hermitian_sqrt_clipped(const Mat4& m, double clip_tol) {
  Eigen::SelfAdjointEigenSolver<Mat4> es(m);
  Eigen::Vector4d ev = es.eigenvalues();
  // Eigenvalues below the solver's resolution are exact zeros that came back
  // as O(eps * ||m||) residue; without flooring them the square root would
  // amplify that residue to sqrt(eps), visible in rank-deficient inputs.
  const double floor = 1e-13 * std::max(0.0, ev.maxCoeff());
  for (int i = 0; i < 4; ++i) {
    if (ev(i) < -clip_tol)
      raise(ErrorKind::InvalidState, "matrix is not positive semidefinite");
    if (ev(i) <= floor) ev(i) = 0.0;
  }
  const Eigen::Vector4d root = ev.cwiseSqrt();
  return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace qdi
