#include <doctest.h>

#include <atomic>
#include <cmath>
#include <set>
#include <stdexcept>
#include <vector>

#include "qdi/errors.hpp"
#include "qdi/linalg.hpp"
#include "qdi/parallel.hpp"
#include "qdi/rng.hpp"
#include "qdi/serialize.hpp"

using namespace qdi;

TEST_CASE("rng streams are reproducible and substreams are distinct") {
  Rng a = Rng::substream(42, 7);
  Rng b = Rng::substream(42, 7);
  for (int i = 0; i < 32; ++i) CHECK(a.next() == b.next());

  Rng c = Rng::substream(42, 8);
  Rng d = Rng::substream(43, 7);
  std::set<std::uint64_t> firsts{Rng::substream(42, 7).next(), c.next(),
                                 d.next()};
  CHECK(firsts.size() == 3);
}

TEST_CASE("uniform draws live in [0,1) with the right mean") {
  Rng rng = Rng::substream(5, 0);
  const int n = 100000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  const double sigma = 1.0 / std::sqrt(12.0 * n);
  CHECK(std::abs(sum / n - 0.5) < 3.0 * sigma);
}

TEST_CASE("gaussian draws have unit variance and zero mean") {
  Rng rng = Rng::substream(6, 0);
  const int n = 200000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double g = rng.gaussian();
    sum += g;
    sum2 += g * g;
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  CHECK(std::abs(mean) < 3.0 / std::sqrt(static_cast<double>(n)));
  // var of the sample variance of a normal is 2/n
  CHECK(std::abs(var - 1.0) < 3.0 * std::sqrt(2.0 / n));
}

TEST_CASE("binomial sampler matches moments and exact edge cases") {
  Rng rng = Rng::substream(7, 0);
  CHECK(rng.binomial(50, 0.0) == 0);
  CHECK(rng.binomial(50, 1.0) == 50);
  CHECK(rng.binomial(0, 0.7) == 0);

  const int n_draws = 200000;
  const std::uint64_t n = 20;
  const double p = 0.3;
  double sum = 0.0;
  for (int i = 0; i < n_draws; ++i) {
    const std::uint64_t k = rng.binomial(n, p);
    REQUIRE(k <= n);
    sum += static_cast<double>(k);
  }
  const double mean = sum / n_draws;
  const double sem = std::sqrt(n * p * (1.0 - p) / n_draws);
  CHECK(std::abs(mean - n * p) < 3.0 * sem);

  // complement branch: p > 1/2 must keep the same law
  double sum_hi = 0.0;
  for (int i = 0; i < n_draws; ++i)
    sum_hi += static_cast<double>(rng.binomial(n, 0.7));
  CHECK(std::abs(sum_hi / n_draws - n * 0.7) < 3.0 * sem);
}

TEST_CASE("pauli matrices square to identity and are traceless") {
  for (int i = 0; i < 3; ++i) {
    const Mat2& s = pauli(i);
    CHECK((s * s - Mat2::Identity()).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(std::abs(s.trace()) < 1e-15);
    CHECK((s - s.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
  }
  // the standard commutation sign: pauli_x pauli_y = i pauli_z
  const MatX xy = pauli(0) * pauli(1);
  CHECK((xy - Complex(0, 1) * pauli(2)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("kron follows the row-major block convention") {
  MatX a(2, 2), b(2, 2);
  a << 1, 2, 3, 4;
  b << 0, 5, 6, 7;
  const MatX k = kron(a, b);
  REQUIRE(k.rows() == 4);
  CHECK(k(0, 1) == Complex(5));
  CHECK(k(1, 0) == Complex(6));
  CHECK(k(0, 3) == Complex(10));
  CHECK(k(2, 1) == Complex(15));
  CHECK(k(3, 3) == Complex(28));
}

namespace {

// Reference embedding: distributes the bits of a basis index so that the
// operator's first qubit lands at register position q1 and its second at q2,
// with identity elsewhere.  Built by explicit index permutation, the long
// way, to pin the production convention (qubit 0 = most significant bit).
MatX embed_by_permutation(const Mat4& op, int q1, int q2, int n_qubits) {
  const int dim = 1 << n_qubits;
  MatX out = MatX::Zero(dim, dim);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) {
      auto bit = [&](int idx, int q) { return (idx >> (n_qubits - 1 - q)) & 1; };
      bool identity_ok = true;
      for (int q = 0; q < n_qubits; ++q) {
        if (q != q1 && q != q2 && bit(r, q) != bit(c, q)) identity_ok = false;
      }
      if (!identity_ok) continue;
      const int opr = 2 * bit(r, q1) + bit(r, q2);
      const int opc = 2 * bit(c, q1) + bit(c, q2);
      out(r, c) = op(opr, opc);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("pair-operator embedding matches the brute-force permutation") {
  Rng rng = Rng::substream(8, 0);
  Mat4 op;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) op(r, c) = rng.complex_gaussian();

  SUBCASE("two qubits, natural order is the operator itself") {
    const MatX e = embed_pair_operator(op, 0, 1, 2);
    CHECK((e - MatX(op)).cwiseAbs().maxCoeff() < 1e-15);
  }
  SUBCASE("two qubits, swapped order") {
    const MatX e = embed_pair_operator(op, 1, 0, 2);
    CHECK((e - embed_by_permutation(op, 1, 0, 2)).cwiseAbs().maxCoeff() < 1e-15);
  }
  SUBCASE("four qubits, straddled support") {
    const MatX e = embed_pair_operator(op, 0, 2, 4);
    CHECK((e - embed_by_permutation(op, 0, 2, 4)).cwiseAbs().maxCoeff() < 1e-15);
  }
}

TEST_CASE("products of disjoint embedded pairs multiply out exactly") {
  Rng rng = Rng::substream(9, 0);
  Mat4 a, b;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      a(r, c) = rng.complex_gaussian();
      b(r, c) = rng.complex_gaussian();
    }
  const MatX combined = embedded_pair_product({{a, 0, 2}, {b, 1, 3}}, 4);
  const MatX reference =
      embed_by_permutation(a, 0, 2, 4) * embed_by_permutation(b, 1, 3, 4);
  CHECK((combined - reference).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("partial transpose flips only the second-qubit indices") {
  Rng rng = Rng::substream(10, 0);
  Mat4 m;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) m(r, c) = rng.complex_gaussian();
  const Mat4 pt = partial_transpose_b(m);
  // block (a, a') keeps its row/column block but transposes within it
  for (int a1 = 0; a1 < 2; ++a1)
    for (int a2 = 0; a2 < 2; ++a2)
      for (int b1 = 0; b1 < 2; ++b1)
        for (int b2 = 0; b2 < 2; ++b2)
          CHECK(pt(2 * a1 + b1, 2 * a2 + b2) == m(2 * a1 + b2, 2 * a2 + b1));
  CHECK((partial_transpose_b(pt) - m).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("jacobi eigenvalues agree with Eigen's solver, descending") {
  Rng rng = Rng::substream(11, 0);
  for (int trial = 0; trial < 1000; ++trial) {
    Mat3 s;
    if (trial % 3 == 2) {
      // nearly degenerate: rank-one plus a small multiple of the identity
      Vec3 v;
      for (int i = 0; i < 3; ++i) v(i) = rng.gaussian();
      s = v * v.transpose() + 1e-9 * rng.uniform() * Mat3::Identity();
    } else {
      for (int r = 0; r < 3; ++r)
        for (int c = r; c < 3; ++c) s(r, c) = s(c, r) = rng.gaussian();
    }
    const Vec3 mine = jacobi_eigenvalues_descending(s);
    Eigen::SelfAdjointEigenSolver<Mat3> es(s);
    const Vec3 ref = es.eigenvalues().reverse();
    CHECK(mine(0) >= mine(1));
    CHECK(mine(1) >= mine(2));
    for (int i = 0; i < 3; ++i) CHECK(std::abs(mine(i) - ref(i)) < 1e-12);
  }
}

TEST_CASE("hermitian square root squares back and clips tiny negatives") {
  Rng rng = Rng::substream(12, 0);
  Mat4 g;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) g(r, c) = rng.complex_gaussian();
  const Mat4 psd = g * g.adjoint();
  const Mat4 root = hermitian_sqrt_clipped(psd);
  CHECK((root * root - psd).cwiseAbs().maxCoeff() < 1e-9 * psd.norm());

  // a -5e-11 eigenvalue is inside the clip band
  Mat4 nearly = psd;
  Eigen::SelfAdjointEigenSolver<Mat4> es(psd);
  const Mat4 vecs = es.eigenvectors();
  nearly -= (es.eigenvalues()(0) + 5e-11) * vecs.col(0) * vecs.col(0).adjoint();
  CHECK_NOTHROW(hermitian_sqrt_clipped(nearly));

  // a decisively negative eigenvalue is rejected
  Mat4 bad = Mat4::Identity();
  bad(3, 3) = -0.5;
  CHECK_THROWS_AS(hermitian_sqrt_clipped(bad), Error);
}

TEST_CASE("parallel_for covers every index once for any worker count") {
  for (unsigned workers : {1u, 2u, 3u, 8u}) {
    std::vector<std::atomic<int>> hits(257);
    for (auto& h : hits) h = 0;
    parallel_for(hits.size(), [&](std::uint64_t i) { hits[i]++; }, workers);
    for (auto& h : hits) CHECK(h == 1);
  }
}

TEST_CASE("parallel_for propagates worker exceptions") {
  CHECK_THROWS_AS(parallel_for(
                      100,
                      [](std::uint64_t i) {
                        if (i == 57) throw std::runtime_error("boom");
                      },
                      4),
                  std::runtime_error);
}

TEST_CASE("format_double round-trips doubles exactly") {
  Rng rng = Rng::substream(13, 0);
  std::vector<double> values{0.0, 1.0, -1.0, 0.1, 6.25705718994140625,
                             15820.3125, 1e-300, 1e300};
  for (int i = 0; i < 200; ++i) values.push_back(rng.gaussian() * 1e3);
  for (double v : values) {
    const std::string s = format_double(v);
    CHECK(std::stod(s) == v);
  }
}
