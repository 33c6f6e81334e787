#include "qdi/state.hpp"

#include <algorithm>
#include <cmath>

#include "qdi/errors.hpp"
#include "qdi/parallel.hpp"
#include "qdi/rng.hpp"

namespace qdi {

namespace {

constexpr double kHermTol = 1e-12;
constexpr double kTraceTol = 1e-12;
constexpr double kPsdTol = 1e-10;

// substream tags keep independent sampling purposes on disjoint streams
constexpr std::uint64_t kTagPairLeft = 0x706c6674ull;
constexpr std::uint64_t kTagPairRight = 0x72676874ull;

double min_eigenvalue(const Mat4& h) {
  Eigen::SelfAdjointEigenSolver<Mat4> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

Mat4 pauli_product(int i, int j) {
  // index 3 stands for the identity
  const Mat2& a = (i == 3) ? identity2() : pauli(i);
  const Mat2& b = (j == 3) ? identity2() : pauli(j);
  return kron(a, b);
}

}  // namespace

TwoQubitState TwoQubitState::from_matrix(const Mat4& rho) {
  const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  if (herm > kHermTol)
    raise(ErrorKind::InvalidState,
          "density matrix is not Hermitian (max asymmetry " +
              std::to_string(herm) + ")");
  const double tr_err = std::abs(rho.trace() - Complex{1.0, 0.0});
  if (tr_err > kTraceTol)
    raise(ErrorKind::InvalidState,
          "density matrix trace differs from 1 by " + std::to_string(tr_err));
  const Mat4 sym = 0.5 * (rho + rho.adjoint());
  const double lo = min_eigenvalue(sym);
  if (lo < -kPsdTol)
    raise(ErrorKind::InvalidState,
          "density matrix has negative eigenvalue " + std::to_string(lo));
  return TwoQubitState(sym);
}

TwoQubitState TwoQubitState::from_bloch(const BlochForm& b) {
  Mat4 rho = Mat4::Identity();
  for (int i = 0; i < 3; ++i) {
    rho += b.x(i) * pauli_product(i, 3);
    rho += b.y(i) * pauli_product(3, i);
    for (int j = 0; j < 3; ++j) rho += b.t(i, j) * pauli_product(i, j);
  }
  rho *= 0.25;
  const Mat4 sym = 0.5 * (rho + rho.adjoint());
  const double lo = min_eigenvalue(sym);
  if (lo < -kPsdTol)
    raise(ErrorKind::NotAState,
          "Bloch parameters give a non-positive operator (eigenvalue " +
              std::to_string(lo) + ")");
  return TwoQubitState(sym);
}

BlochForm TwoQubitState::bloch() const {
  BlochForm b;
  auto component = [&](int i, int j) {
    const Complex tr = (rho_ * pauli_product(i, j)).trace();
    if (std::abs(tr.imag()) > kHermTol)
      raise(ErrorKind::Internal, "Bloch component has imaginary residue");
    return tr.real();
  };
  for (int i = 0; i < 3; ++i) {
    b.x(i) = component(i, 3);
    b.y(i) = component(3, i);
    for (int j = 0; j < 3; ++j) b.t(i, j) = component(i, j);
  }
  return b;
}

double TwoQubitState::purity() const { return (rho_ * rho_).trace().real(); }

TwoQubitState TwoQubitState::singlet() {
  Mat4 rho = Mat4::Zero();
  const double h = 0.5;
  rho(1, 1) = h;
  rho(2, 2) = h;
  rho(1, 2) = -h;
  rho(2, 1) = -h;
  return TwoQubitState(rho);
}

TwoQubitState TwoQubitState::product_hh() {
  Mat4 rho = Mat4::Zero();
  rho(0, 0) = 1.0;
  return TwoQubitState(rho);
}

TwoQubitState TwoQubitState::maximally_mixed() {
  return TwoQubitState(Mat4::Identity() * 0.25);
}

TwoQubitState TwoQubitState::werner(double p) {
  if (p < 0.0 || p > 1.0)
    raise(ErrorKind::InvalidArgument, "Werner weight must lie in [0, 1]");
  const Mat4 rho =
      p * singlet().rho() + (1.0 - p) * Mat4::Identity() * 0.25;
  return TwoQubitState(rho);
}

double fidelity(const TwoQubitState& a, const TwoQubitState& b) {
  const Mat4 ra = hermitian_sqrt_clipped(a.rho());
  const Mat4 inner = ra * b.rho() * ra;
  Eigen::SelfAdjointEigenSolver<Mat4> es(inner, Eigen::EigenvaluesOnly);
  // Skip eigenvalues at the solver's noise level: for rank-deficient inputs
  // they are exact zeros whose sqrt would otherwise contribute O(1e-8).
  const double floor = 1e-13 * std::max(0.0, es.eigenvalues().maxCoeff());
  double sum = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double ev = es.eigenvalues()(i);
    if (ev > floor) sum += std::sqrt(ev);
  }
  return std::clamp(sum * sum, 0.0, 1.0);
}

double ppt_min_eigenvalue(const TwoQubitState& s) {
  return min_eigenvalue(partial_transpose_b(s.rho()));
}

TwoQubitState random_state(EnsembleMeasure measure, std::uint64_t seed,
                           std::uint64_t index) {
  Rng rng = Rng::substream(seed, index);
  if (measure == EnsembleMeasure::PureHaar) {
    Eigen::Vector4cd psi;
    for (int i = 0; i < 4; ++i) psi(i) = rng.complex_gaussian();
    psi.normalize();
    const Mat4 rho = psi * psi.adjoint();
    return TwoQubitState::from_matrix(0.5 * (rho + rho.adjoint()));
  }
  // Hilbert-Schmidt: normalized G G^dagger with Ginibre G
  Mat4 g;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) g(r, c) = rng.complex_gaussian();
  Mat4 w = g * g.adjoint();
  w /= w.trace().real();
  return TwoQubitState::from_matrix(0.5 * (w + w.adjoint()));
}

std::vector<TwoQubitState> random_states(const RandomEnsembleSpec& spec,
                                         unsigned n_threads) {
  std::vector<TwoQubitState> out(spec.count, TwoQubitState::maximally_mixed());
  parallel_for(
      spec.count,
      [&](std::uint64_t i) { out[i] = random_state(spec.measure, spec.seed, i); },
      n_threads);
  return out;
}

std::pair<TwoQubitState, TwoQubitState> random_state_pair_with_fidelity(
    std::uint64_t seed, std::uint64_t index, double f_min) {
  if (!(f_min > 0.0 && f_min < 1.0))
    raise(ErrorKind::InvalidArgument, "f_min must lie strictly inside (0, 1)");

  constexpr int kMaxAttempts = 256;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    const std::uint64_t k = index * kMaxAttempts + attempt;
    const TwoQubitState left =
        random_state(EnsembleMeasure::HilbertSchmidt, seed ^ kTagPairLeft, k);
    const TwoQubitState probe =
        random_state(EnsembleMeasure::HilbertSchmidt, seed ^ kTagPairRight, k);
    Rng rng = Rng::substream(seed ^ (kTagPairLeft * kTagPairRight), k);
    const double target = f_min + (1.0 - f_min) * rng.uniform();

    auto blend = [&](double eps) {
      const Mat4 rho = (1.0 - eps) * left.rho() + eps * probe.rho();
      return TwoQubitState::from_matrix(rho);
    };
    if (fidelity(left, probe) >= target) return {left, blend(1.0)};

    // g(eps) = fidelity(left, blend(eps)) falls from 1; bisect to the target,
    // keeping lo on the g >= target side so the bound f_min is guaranteed
    double lo = 0.0, hi = 1.0;
    for (int iter = 0; iter < 200 && hi - lo > 1e-15; ++iter) {
      const double mid = 0.5 * (lo + hi);
      if (fidelity(left, blend(mid)) >= target)
        lo = mid;
      else
        hi = mid;
    }
    const TwoQubitState right = blend(lo);
    const double f = fidelity(left, right);
    if (f >= f_min && f < 1.0) return {left, right};
  }
  raise(ErrorKind::SamplingExhausted,
        "could not realize the requested fidelity bound");
}

}  // namespace qdi
