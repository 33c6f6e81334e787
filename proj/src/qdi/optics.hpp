#pragma once

#include <cstdint>
#include <map>
#include <utility>

#include "qdi/rng.hpp"
#include "qdi/state.hpp"

namespace qdi {

// Sparse pure state of photons over spatial modes, each carrying an H/V
// polarization slot.  Occupations are packed 4 bits per (mode, polarization)
// slot into the key, so counts up to 15 per slot are representable; the box
// circuits here never exceed 4 photons total.
class PolarizedFockState {
public:
  using Key = std::uint64_t;
  // std::map keeps amplitude iteration order deterministic
  using AmplitudeMap = std::map<Key, Complex>;

  explicit PolarizedFockState(int n_spatial_modes);

  static PolarizedFockState vacuum(int n_spatial_modes) {
    return PolarizedFockState(n_spatial_modes);
  }

  int n_modes() const noexcept { return n_modes_; }
  const AmplitudeMap& amplitudes() const noexcept { return amps_; }

  static int slot_count(Key key, int mode, int pol) {
    return static_cast<int>((key >> (4 * (2 * mode + pol))) & 0xFull);
  }
  static Key with_slot_count(Key key, int mode, int pol, int count);
  static int total_photons(Key key, int n_modes);

  void add_amplitude(Key key, Complex amp);
  double norm_squared() const;

  // Symmetric 50/50 splitter on spatial modes (a, b), acting identically on
  // both polarizations: a' = (a + b)/sqrt(2), b' = (a - b)/sqrt(2).
  // Applying it twice restores the input state.
  void apply_beam_splitter(int mode_a, int mode_b);

private:
  int n_modes_;
  AmplitudeMap amps_;
};

struct DetectorModel {
  double eta = 1.0;  // per-photon detection probability, in [0, 1]
};

// Probabilities of the two accepted coincidence patterns of the four-detector
// box: p14 (outer detector pair) and p23 (inner pair), everything else
// lumped into p_other.  Detectors are non-number-resolving and each photon
// is detected independently with probability eta.
struct BoxOutcomeDistribution {
  double p14 = 0.0;
  double p23 = 0.0;
  double p_other = 1.0;
};

BoxOutcomeDistribution uv_box_distribution(const TwoQubitState& s,
                                           const DetectorModel& det);

// Coincidence POVM elements (E14, E23) on the two-qubit polarization input,
// recovered by running the box over an informationally complete set of
// product inputs and inverting the Born rule linearly.
std::pair<Mat4, Mat4> reconstruct_coincidence_operators(const DetectorModel& det);

enum class BoxKind { U, V };

// One sampled box reading: +1 (U) or +2 (V) for an outer coincidence,
// -4 for an inner coincidence, 0 otherwise.
int sample_uv_outcome(Rng& rng, const BoxOutcomeDistribution& dist, BoxKind kind);
int sample_uv_outcome(Rng& rng, const TwoQubitState& s, const DetectorModel& det,
                      BoxKind kind);

}  // namespace qdi
