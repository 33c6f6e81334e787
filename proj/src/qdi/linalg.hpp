#pragma once

#include <Eigen/Dense>
#include <complex>
#include <tuple>
#include <vector>

namespace qdi {

using Complex = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;
using MatX = Eigen::MatrixXcd;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// Pauli matrices; index 0 -> x, 1 -> y, 2 -> z.  Basis ordering everywhere is
// |HH>, |HV>, |VH>, |VV> with H as the +z eigenstate.
const Mat2& pauli(int i);
const Mat2& identity2();

MatX kron(const MatX& a, const MatX& b);

// Lifts a two-qubit operator onto qubits (q1, q2) of an n_qubit register.
// Qubit 0 is the most significant bit of the basis index.
MatX embed_pair_operator(const Mat4& op, int q1, int q2, int n_qubits);

// Product of several lifted two-qubit operators with pairwise disjoint qubit
// supports, built entrywise (cheaper than dense multiplication and exact).
// Every qubit of the register must be covered by exactly one factor.
MatX embedded_pair_product(const std::vector<std::tuple<Mat4, int, int>>& factors,
                           int n_qubits);

// Partial transpose over the second qubit.
Mat4 partial_transpose_b(const Mat4& rho);

// Eigenvalues of a symmetric 3x3 matrix by cyclic Jacobi rotations, iterated
// until the off-diagonal norm falls below 1e-14; returned in descending order.
Vec3 jacobi_eigenvalues_descending(const Mat3& sym);

// Principal square root of a Hermitian PSD matrix; eigenvalues in
// [-clip_tol, 0) are clipped to zero before the root.
Mat4 hermitian_sqrt_clipped(const Mat4& m, double clip_tol = 1e-10);

}  // namespace qdi
