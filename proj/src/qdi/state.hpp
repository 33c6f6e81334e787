#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "qdi/linalg.hpp"

namespace qdi {

// Bloch-vector form of a two-qubit density operator: local vectors x (first
// qubit), y (second qubit) and the 3x3 correlation matrix T, all real.
struct BlochForm {
  Vec3 x = Vec3::Zero();
  Vec3 y = Vec3::Zero();
  Mat3 t = Mat3::Zero();
};

// Validated two-qubit density matrix in the |HH>,|HV>,|VH>,|VV> basis.
// Construction enforces hermiticity (1e-12), unit trace (1e-12) and
// positivity (smallest eigenvalue >= -1e-10).
class TwoQubitState {
public:
  static TwoQubitState from_matrix(const Mat4& rho);
  static TwoQubitState from_bloch(const BlochForm& b);

  const Mat4& rho() const noexcept { return rho_; }
  BlochForm bloch() const;
  double purity() const;

  static TwoQubitState singlet();
  static TwoQubitState product_hh();
  static TwoQubitState maximally_mixed();
  static TwoQubitState werner(double p);

private:
  explicit TwoQubitState(const Mat4& rho) : rho_(rho) {}
  Mat4 rho_;
};

// Uhlmann fidelity, clamped to [0, 1].
double fidelity(const TwoQubitState& a, const TwoQubitState& b);

// Smallest eigenvalue of the partial transpose; negative only for entangled
// states.
double ppt_min_eigenvalue(const TwoQubitState& s);

enum class EnsembleMeasure { HilbertSchmidt, PureHaar };

struct RandomEnsembleSpec {
  EnsembleMeasure measure = EnsembleMeasure::HilbertSchmidt;
  std::uint64_t seed = 1;
  std::uint64_t count = 0;
};

// Element `index` of the ensemble stream for `seed`; a pure function of its
// arguments.
TwoQubitState random_state(EnsembleMeasure measure, std::uint64_t seed,
                           std::uint64_t index);

// Generates spec.count states in parallel; identical to calling
// random_state(spec.measure, spec.seed, i) for each i.
std::vector<TwoQubitState> random_states(const RandomEnsembleSpec& spec,
                                         unsigned n_threads = 0);

// Draws a pair (left, right) with fidelity(left, right) in [f_min, 1).
// Left is Hilbert-Schmidt distributed; right interpolates toward a second
// independent draw, with the interpolation weight bisected so the pair
// fidelity lands on a target drawn uniformly from [f_min, 1).
std::pair<TwoQubitState, TwoQubitState> random_state_pair_with_fidelity(
    std::uint64_t seed, std::uint64_t index, double f_min);

}  // namespace qdi
