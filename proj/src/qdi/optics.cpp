#include "qdi/optics.hpp"

#include <array>
#include <cmath>

#include "qdi/errors.hpp"

namespace qdi {

namespace {

constexpr double kAmpTol = 1e-15;

double factorial(int n) {
  static const std::array<double, 16> table = [] {
    std::array<double, 16> t{};
    t[0] = 1.0;
    for (int i = 1; i < 16; ++i) t[i] = t[i - 1] * static_cast<double>(i);
    return t;
  }();
  return table[static_cast<std::size_t>(n)];
}

double binom(int n, int k) {
  return factorial(n) / (factorial(k) * factorial(n - k));
}

}  // namespace

PolarizedFockState::PolarizedFockState(int n_spatial_modes)
    : n_modes_(n_spatial_modes) {
  if (n_spatial_modes < 1 || n_spatial_modes > 8)
    raise(ErrorKind::InvalidArgument, "spatial mode count out of range");
}

PolarizedFockState::Key PolarizedFockState::with_slot_count(Key key, int mode,
                                                            int pol, int count) {
  const int shift = 4 * (2 * mode + pol);
  return (key & ~(Key{0xF} << shift)) |
         (static_cast<Key>(count & 0xF) << shift);
}

int PolarizedFockState::total_photons(Key key, int n_modes) {
  int total = 0;
  for (int slot = 0; slot < 2 * n_modes; ++slot)
    total += static_cast<int>((key >> (4 * slot)) & 0xFull);
  return total;
}

void PolarizedFockState::add_amplitude(Key key, Complex amp) {
  auto it = amps_.find(key);
  if (it == amps_.end()) {
    if (std::abs(amp) > 0.0) amps_.emplace(key, amp);
    return;
  }
  it->second += amp;
  if (std::abs(it->second) < kAmpTol) amps_.erase(it);
}

double PolarizedFockState::norm_squared() const {
  double total = 0.0;
  for (const auto& [key, amp] : amps_) total += std::norm(amp);
  return total;
}

void PolarizedFockState::apply_beam_splitter(int mode_a, int mode_b) {
  if (mode_a < 0 || mode_a >= n_modes_ || mode_b < 0 || mode_b >= n_modes_ ||
      mode_a == mode_b)
    raise(ErrorKind::UnknownMode, "beam splitter modes must be two distinct "
                                  "modes of the register");

  // (a^+)^n (b^+)^m expands over output operators via
  //   a^+ -> (a^+ + b^+)/sqrt(2),  b^+ -> (a^+ - b^+)/sqrt(2);
  // amplitudes pick up sqrt(n!) normalization factors per slot.
  AmplitudeMap next;
  for (const auto& [key, amp] : amps_) {
    struct Term {
      int na, nb;
      double coef;
    };
    // expansion per polarization, then combined as a product
    std::array<std::vector<Term>, 2> pol_terms;
    for (int pol = 0; pol < 2; ++pol) {
      const int na = slot_count(key, mode_a, pol);
      const int nb = slot_count(key, mode_b, pol);
      const double scale =
          std::pow(0.5, 0.5 * (na + nb)) / std::sqrt(factorial(na) * factorial(nb));
      std::map<std::pair<int, int>, double> acc;
      for (int j = 0; j <= na; ++j) {
        for (int k = 0; k <= nb; ++k) {
          const int out_a = j + k;
          const int out_b = na + nb - out_a;
          const double sign = ((nb - k) % 2 == 0) ? 1.0 : -1.0;
          acc[{out_a, out_b}] += sign * binom(na, j) * binom(nb, k) * scale;
        }
      }
      for (const auto& [occ, c] : acc) {
        const double norm =
            std::sqrt(factorial(occ.first) * factorial(occ.second));
        pol_terms[pol].push_back({occ.first, occ.second, c * norm});
      }
    }
    for (const Term& h : pol_terms[0]) {
      for (const Term& v : pol_terms[1]) {
        Key out = key;
        out = with_slot_count(out, mode_a, 0, h.na);
        out = with_slot_count(out, mode_b, 0, h.nb);
        out = with_slot_count(out, mode_a, 1, v.na);
        out = with_slot_count(out, mode_b, 1, v.nb);
        const Complex add = amp * h.coef * v.coef;
        auto [it, inserted] = next.try_emplace(out, add);
        if (!inserted) it->second += add;
      }
    }
  }
  for (auto it = next.begin(); it != next.end();) {
    if (std::abs(it->second) < kAmpTol)
      it = next.erase(it);
    else
      ++it;
  }
  amps_ = std::move(next);
}

namespace {

// spatial layout of the box: 0 -> D1, 1 -> D2, 2 -> D3, 3 -> D4;
// the photon pair enters modes 1 and 2
constexpr int kModeD1 = 0;
constexpr int kModeD2 = 1;
constexpr int kModeD3 = 2;
constexpr int kModeD4 = 3;

std::map<PolarizedFockState::Key, double> box_output_probabilities(
    const TwoQubitState& s) {
  std::map<PolarizedFockState::Key, double> prob;
  Eigen::SelfAdjointEigenSolver<Mat4> es(s.rho());
  for (int k = 0; k < 4; ++k) {
    const double weight = es.eigenvalues()(k);
    if (weight < 1e-15) continue;
    PolarizedFockState fock(4);
    for (int basis = 0; basis < 4; ++basis) {
      const Complex amp = es.eigenvectors()(basis, k);
      if (std::abs(amp) < kAmpTol) continue;
      const int pol_first = (basis >> 1) & 1;   // 0 -> H
      const int pol_second = basis & 1;
      PolarizedFockState::Key key = 0;
      key = PolarizedFockState::with_slot_count(key, kModeD2, pol_first, 1);
      key = PolarizedFockState::with_slot_count(key, kModeD3, pol_second, 1);
      fock.add_amplitude(key, amp);
    }
    for (const auto& [key, amp] : fock.amplitudes()) {
      (void)amp;
      if (PolarizedFockState::slot_count(key, kModeD1, 0) ||
          PolarizedFockState::slot_count(key, kModeD1, 1) ||
          PolarizedFockState::slot_count(key, kModeD4, 0) ||
          PolarizedFockState::slot_count(key, kModeD4, 1))
        raise(ErrorKind::Internal, "outer box modes must start in vacuum");
      if (PolarizedFockState::total_photons(key, 4) != 2)
        raise(ErrorKind::Internal, "box input must carry exactly two photons");
    }
    fock.apply_beam_splitter(kModeD1, kModeD2);
    fock.apply_beam_splitter(kModeD3, kModeD4);
    fock.apply_beam_splitter(kModeD2, kModeD3);
    for (const auto& [key, amp] : fock.amplitudes()) {
      if (PolarizedFockState::total_photons(key, 4) != 2)
        raise(ErrorKind::Internal, "box lost or created photons");
      prob[key] += weight * std::norm(amp);
    }
  }
  return prob;
}

}  // namespace

BoxOutcomeDistribution uv_box_distribution(const TwoQubitState& s,
                                           const DetectorModel& det) {
  if (!(det.eta >= 0.0 && det.eta <= 1.0))
    raise(ErrorKind::InvalidArgument, "detector efficiency must lie in [0, 1]");

  const auto prob = box_output_probabilities(s);
  BoxOutcomeDistribution dist;
  double p14 = 0.0, p23 = 0.0;
  for (const auto& [key, p] : prob) {
    // click probability of a bucket detector seeing n photons: 1 - (1-eta)^n
    std::array<double, 4> click{};
    for (int mode = 0; mode < 4; ++mode) {
      const int n = PolarizedFockState::slot_count(key, mode, 0) +
                    PolarizedFockState::slot_count(key, mode, 1);
      click[static_cast<std::size_t>(mode)] =
          n > 0 ? 1.0 - std::pow(1.0 - det.eta, n) : 0.0;
    }
    p14 += p * click[kModeD1] * (1.0 - click[kModeD2]) *
           (1.0 - click[kModeD3]) * click[kModeD4];
    p23 += p * (1.0 - click[kModeD1]) * click[kModeD2] * click[kModeD3] *
           (1.0 - click[kModeD4]);
  }
  dist.p14 = p14;
  dist.p23 = p23;
  dist.p_other = std::max(0.0, 1.0 - p14 - p23);
  return dist;
}

std::pair<Mat4, Mat4> reconstruct_coincidence_operators(const DetectorModel& det) {
  // informationally complete single-qubit frame: H, V, diagonal, circular
  const Complex kI{0.0, 1.0};
  std::array<Eigen::Vector2cd, 4> kets;
  kets[0] << 1.0, 0.0;
  kets[1] << 0.0, 1.0;
  kets[2] << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  kets[3] << 1.0 / std::sqrt(2.0), kI / std::sqrt(2.0);

  Eigen::MatrixXcd design(16, 16);
  Eigen::VectorXcd rhs14(16), rhs23(16);
  int row = 0;
  for (const auto& ka : kets) {
    for (const auto& kb : kets) {
      const Eigen::Vector4cd psi = kron(ka, kb);
      const Mat4 rho = psi * psi.adjoint();
      const auto dist =
          uv_box_distribution(TwoQubitState::from_matrix(rho), det);
      // Tr[E rho] = sum_ab E(a,b) rho(b,a)
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) design(row, 4 * a + b) = rho(b, a);
      rhs14(row) = dist.p14;
      rhs23(row) = dist.p23;
      ++row;
    }
  }
  const Eigen::VectorXcd e14 = design.colPivHouseholderQr().solve(rhs14);
  const Eigen::VectorXcd e23 = design.colPivHouseholderQr().solve(rhs23);
  Mat4 out14, out23;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      out14(a, b) = e14(4 * a + b);
      out23(a, b) = e23(4 * a + b);
    }
  }
  out14 = 0.5 * (out14 + out14.adjoint()).eval();
  out23 = 0.5 * (out23 + out23.adjoint()).eval();
  return {out14, out23};
}

int sample_uv_outcome(Rng& rng, const BoxOutcomeDistribution& dist, BoxKind kind) {
  const double u = rng.uniform();
  if (u < dist.p23) return -4;
  if (u < dist.p23 + dist.p14) return kind == BoxKind::U ? 1 : 2;
  return 0;
}

int sample_uv_outcome(Rng& rng, const TwoQubitState& s, const DetectorModel& det,
                      BoxKind kind) {
  return sample_uv_outcome(rng, uv_box_distribution(s, det), kind);
}

}  // namespace qdi
