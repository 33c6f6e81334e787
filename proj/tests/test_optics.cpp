#include <doctest.h>

#include <cmath>
#include <vector>

#include "qdi/errors.hpp"
#include "qdi/optics.hpp"
#include "qdi/state.hpp"

using namespace qdi;
using PFS = PolarizedFockState;

namespace {

constexpr int kH = 0;
constexpr int kV = 1;

PFS::Key slot(PFS::Key key, int mode, int pol, int count) {
  return PFS::with_slot_count(key, mode, pol, count);
}

Complex amplitude_of(const PFS& state, PFS::Key key) {
  const auto it = state.amplitudes().find(key);
  return it == state.amplitudes().end() ? Complex{0.0, 0.0} : it->second;
}

// Bell states in the |HH>,|HV>,|VH>,|VV> basis: 0 phi+, 1 phi-, 2 psi+, 3 psi-.
TwoQubitState bell(int which) {
  Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
  const double s = 1.0 / std::sqrt(2.0);
  switch (which) {
    case 0: v(0) = s; v(3) = s; break;
    case 1: v(0) = s; v(3) = -s; break;
    case 2: v(1) = s; v(2) = s; break;
    default: v(1) = s; v(2) = -s; break;
  }
  return TwoQubitState::from_matrix(v * v.adjoint());
}

// total photons sitting in `mode` regardless of polarization
int photons_in_mode(PFS::Key key, int mode) {
  return PFS::slot_count(key, mode, kH) + PFS::slot_count(key, mode, kV);
}

}  // namespace

TEST_CASE("two identical photons bunch at a balanced splitter") {
  PFS state(2);
  state.add_amplitude(slot(slot(0, 0, kH, 1), 1, kH, 1), 1.0);
  state.apply_beam_splitter(0, 1);

  // no coincidence across the two output ports
  CHECK(std::abs(amplitude_of(state, slot(slot(0, 0, kH, 1), 1, kH, 1))) <
        1e-12);
  // the photons leave together, with opposite signs for the two bunches
  const Complex two_zero = amplitude_of(state, slot(0, 0, kH, 2));
  const Complex zero_two = amplitude_of(state, slot(0, 1, kH, 2));
  CHECK(std::abs(two_zero - Complex(1.0 / std::sqrt(2.0))) < 1e-12);
  CHECK(std::abs(zero_two + Complex(1.0 / std::sqrt(2.0))) < 1e-12);
  CHECK(state.norm_squared() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("the antisymmetric polarization pair only changes sign") {
  PFS state(2);
  const PFS::Key hv = slot(slot(0, 0, kH, 1), 1, kV, 1);
  const PFS::Key vh = slot(slot(0, 0, kV, 1), 1, kH, 1);
  const double s = 1.0 / std::sqrt(2.0);
  state.add_amplitude(hv, s);
  state.add_amplitude(vh, -s);
  state.apply_beam_splitter(0, 1);

  CHECK(std::abs(amplitude_of(state, hv) - Complex(-s)) < 1e-12);
  CHECK(std::abs(amplitude_of(state, vh) - Complex(s)) < 1e-12);
  CHECK(state.norm_squared() == doctest::Approx(1.0).epsilon(1e-12));
  // nothing but the two original patterns survives
  for (const auto& [key, amp] : state.amplitudes()) {
    if (key != hv && key != vh) CHECK(std::abs(amp) < 1e-12);
  }
}

TEST_CASE("symmetric two-photon polarization states bunch completely") {
  const double s = 1.0 / std::sqrt(2.0);
  struct Pair {
    PFS::Key first, second;
    double sign;
  };
  const PFS::Key hh = slot(slot(0, 0, kH, 1), 1, kH, 1);
  const PFS::Key vv = slot(slot(0, 0, kV, 1), 1, kV, 1);
  const PFS::Key hv = slot(slot(0, 0, kH, 1), 1, kV, 1);
  const PFS::Key vh = slot(slot(0, 0, kV, 1), 1, kH, 1);
  const std::vector<Pair> symmetric = {
      {hh, vv, 1.0},   // phi+
      {hh, vv, -1.0},  // phi-
      {hv, vh, 1.0},   // psi+
  };
  for (const Pair& p : symmetric) {
    PFS state(2);
    state.add_amplitude(p.first, s);
    state.add_amplitude(p.second, p.sign * s);
    state.apply_beam_splitter(0, 1);
    for (const auto& [key, amp] : state.amplitudes()) {
      const bool coincidence =
          photons_in_mode(key, 0) == 1 && photons_in_mode(key, 1) == 1;
      if (coincidence) CHECK(std::abs(amp) < 1e-12);
    }
  }
}

TEST_CASE("the splitter is unitary, photon-conserving and its own inverse") {
  // every basis state of up to four photons over two modes
  for (int nah = 0; nah <= 4; ++nah) {
    for (int nav = 0; nav + nah <= 4; ++nav) {
      for (int nbh = 0; nbh + nav + nah <= 4; ++nbh) {
        for (int nbv = 0; nbv + nbh + nav + nah <= 4; ++nbv) {
          const int total = nah + nav + nbh + nbv;
          PFS::Key key = 0;
          key = slot(key, 0, kH, nah);
          key = slot(key, 0, kV, nav);
          key = slot(key, 1, kH, nbh);
          key = slot(key, 1, kV, nbv);
          PFS state(2);
          state.add_amplitude(key, 1.0);

          state.apply_beam_splitter(0, 1);
          CHECK(state.norm_squared() == doctest::Approx(1.0).epsilon(1e-12));
          for (const auto& [k, amp] : state.amplitudes()) {
            (void)amp;
            CHECK(PFS::total_photons(k, 2) == total);
          }

          state.apply_beam_splitter(0, 1);
          CHECK(std::abs(amplitude_of(state, key) - Complex(1.0)) < 1e-12);
          CHECK(state.norm_squared() == doctest::Approx(1.0).epsilon(1e-12));
        }
      }
    }
  }
}

TEST_CASE("splitter modes must be two distinct register modes") {
  PFS state(2);
  state.add_amplitude(slot(0, 0, kH, 1), 1.0);
  CHECK_THROWS_AS(state.apply_beam_splitter(0, 5), Error);
  CHECK_THROWS_AS(state.apply_beam_splitter(1, 1), Error);
  CHECK_THROWS_AS(state.apply_beam_splitter(-1, 1), Error);
}

TEST_CASE("box outcome distribution of the benchmark states") {
  const DetectorModel perfect{1.0};
  const BoxOutcomeDistribution singlet =
      uv_box_distribution(TwoQubitState::singlet(), perfect);
  CHECK(singlet.p14 == doctest::Approx(0.25).epsilon(1e-10));
  CHECK(singlet.p23 == doctest::Approx(0.25).epsilon(1e-10));
  CHECK(singlet.p_other == doctest::Approx(0.5).epsilon(1e-10));

  const BoxOutcomeDistribution hh =
      uv_box_distribution(TwoQubitState::product_hh(), perfect);
  CHECK(hh.p14 == doctest::Approx(0.25).epsilon(1e-10));
  CHECK(hh.p23 < 1e-12);

  const BoxOutcomeDistribution blind =
      uv_box_distribution(TwoQubitState::singlet(), DetectorModel{0.0});
  CHECK(blind.p14 == 0.0);
  CHECK(blind.p23 == 0.0);
  CHECK(blind.p_other == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("the outer coincidence probability ignores the input state") {
  const DetectorModel det{0.6};
  const double r = det.eta * det.eta / 4.0;
  for (std::uint64_t i = 0; i < 20; ++i) {
    const TwoQubitState s = random_state(EnsembleMeasure::HilbertSchmidt, 91, i);
    const BoxOutcomeDistribution dist = uv_box_distribution(s, det);
    CHECK(std::abs(dist.p14 - r) < 1e-10);
    CHECK(dist.p14 + dist.p23 + dist.p_other ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(dist.p23 >= 0.0);
    CHECK(dist.p_other >= 0.0);
  }
}

TEST_CASE("the inner coincidence probability is affine in the state") {
  const DetectorModel det{0.85};
  for (std::uint64_t i = 0; i < 10; ++i) {
    const TwoQubitState a = random_state(EnsembleMeasure::HilbertSchmidt, 92, 2 * i);
    const TwoQubitState b =
        random_state(EnsembleMeasure::HilbertSchmidt, 92, 2 * i + 1);
    const double lam = 0.3 + 0.05 * static_cast<double>(i);
    const TwoQubitState mix =
        TwoQubitState::from_matrix(lam * a.rho() + (1.0 - lam) * b.rho());
    const double mixed = uv_box_distribution(mix, det).p23;
    const double combined = lam * uv_box_distribution(a, det).p23 +
                            (1.0 - lam) * uv_box_distribution(b, det).p23;
    CHECK(std::abs(mixed - combined) < 1e-10);
  }
}

TEST_CASE("only the antisymmetric Bell state triggers the inner coincidence") {
  const DetectorModel det{1.0};
  for (int which = 0; which < 4; ++which) {
    const double p23 = uv_box_distribution(bell(which), det).p23;
    if (which == 3) {
      CHECK(p23 == doctest::Approx(0.25).epsilon(1e-10));
    } else {
      CHECK(p23 < 1e-12);
    }
  }
}

TEST_CASE("reconstructed coincidence operators are the identity and singlet projector") {
  Mat4 p_minus = Mat4::Zero();
  p_minus(1, 1) = 0.5;
  p_minus(2, 2) = 0.5;
  p_minus(1, 2) = -0.5;
  p_minus(2, 1) = -0.5;

  for (double eta : {1.0, 0.75, 0.3}) {
    const double r = eta * eta / 4.0;
    const auto [e14, e23] = reconstruct_coincidence_operators(DetectorModel{eta});
    CHECK((e14 - r * Mat4::Identity()).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((e23 - r * p_minus).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("sampled box readings follow the exact distribution") {
  const DetectorModel det{1.0};
  const TwoQubitState singlet = TwoQubitState::singlet();
  Rng rng = Rng::substream(93, 0);

  const int n = 100000;
  int inner = 0, outer = 0;
  for (int i = 0; i < n; ++i) {
    const int v = sample_uv_outcome(rng, singlet, det, BoxKind::U);
    REQUIRE((v == -4 || v == 0 || v == 1));
    if (v == -4) ++inner;
    if (v == 1) ++outer;
  }
  const double sigma = std::sqrt(0.25 * 0.75 / n);
  CHECK(std::abs(inner / static_cast<double>(n) - 0.25) < 3.0 * sigma);
  CHECK(std::abs(outer / static_cast<double>(n) - 0.25) < 3.0 * sigma);

  // the V flavor of the box relabels the outer coincidence value
  const BoxOutcomeDistribution dist = uv_box_distribution(singlet, det);
  Rng rng_v = Rng::substream(93, 1);
  bool saw_two = false;
  for (int i = 0; i < 1000; ++i) {
    const int v = sample_uv_outcome(rng_v, dist, BoxKind::V);
    REQUIRE((v == -4 || v == 0 || v == 2));
    saw_two = saw_two || (v == 2);
  }
  CHECK(saw_two);

  // a symmetric product state never fires the inner pair
  Rng rng_hh = Rng::substream(93, 2);
  const TwoQubitState hh = TwoQubitState::product_hh();
  for (int i = 0; i < 100000; ++i) {
    CHECK(sample_uv_outcome(rng_hh, hh, det, BoxKind::U) != -4);
  }
}

TEST_CASE("count-ratio readings converge to the known expectations") {
  // ratio estimate 1 - 4 N_inner / N_outer tends to 1 - 4 <P-> regardless of
  // detector efficiency, because the efficiency cancels in the ratio
  struct Case {
    TwoQubitState state;
    double eta;
    double expected;  // 1 - 4 <P->
  };
  const std::vector<Case> cases = {
      {TwoQubitState::singlet(), 1.0, -3.0},
      {TwoQubitState::werner(0.7), 0.8, 1.0 - 4.0 * (3.0 * 0.7 + 1.0) / 4.0},
  };
  int case_index = 0;
  for (const Case& c : cases) {
    const BoxOutcomeDistribution dist =
        uv_box_distribution(c.state, DetectorModel{c.eta});
    Rng rng = Rng::substream(94, static_cast<std::uint64_t>(case_index++));
    const int n = 1000000;
    double n_inner = 0.0, n_outer = 0.0;
    for (int i = 0; i < n; ++i) {
      const int v = sample_uv_outcome(rng, dist, BoxKind::U);
      if (v == -4) n_inner += 1.0;
      if (v == 1) n_outer += 1.0;
    }
    REQUIRE(n_outer > 0.0);
    const double estimate = 1.0 - 4.0 * n_inner / n_outer;
    CHECK(std::abs(estimate - c.expected) < 0.05);
  }
}
