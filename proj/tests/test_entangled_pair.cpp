#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "bellsim/entangled_pair.hpp"
#include "oracles.hpp"

using namespace bellsim;

namespace {

constexpr double kPi = std::numbers::pi;
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

bool complex_close(Complex a, Complex b, double tol = 1e-12) {
  return std::abs(a - b) <= tol;
}

}  // namespace

TEST_CASE("singlet amplitudes") {
  const TwoQubitState s = singlet();
  CHECK(complex_close(s.amplitude(0), 0.0));
  CHECK(complex_close(s.amplitude(1), kInvSqrt2));
  CHECK(complex_close(s.amplitude(2), -kInvSqrt2));
  CHECK(complex_close(s.amplitude(3), 0.0));

  // Assembled from product states: (|+z,-z> - |-z,+z>)/sqrt(2).
  const TwoQubitState up_down =
      tensor(QubitState::plus_z(), QubitState::minus_z());
  const TwoQubitState down_up =
      tensor(QubitState::minus_z(), QubitState::plus_z());
  for (int k = 0; k < 4; ++k) {
    CHECK(complex_close(
        s.amplitude(k),
        (up_down.amplitude(k) - down_up.amplitude(k)) * kInvSqrt2));
  }
}

TEST_CASE("tensor products") {
  const TwoQubitState up_down =
      tensor(QubitState::plus_z(), QubitState::minus_z());
  CHECK(complex_close(up_down.amplitude(0), 0.0));
  CHECK(complex_close(up_down.amplitude(1), 1.0));
  CHECK(complex_close(up_down.amplitude(2), 0.0));
  CHECK(complex_close(up_down.amplitude(3), 0.0));

  const QubitState plus_x(kInvSqrt2, kInvSqrt2);
  const TwoQubitState xx = tensor(plus_x, plus_x);
  for (int k = 0; k < 4; ++k) {
    CHECK(complex_close(xx.amplitude(k), 0.5));
  }
}

TEST_CASE("singlet keeps its form in the x and y bases exactly") {
  const TwoQubitState s = singlet();
  for (const Axis& axis : {Axis::x(), Axis::y()}) {
    const auto d = expand_in_bases(s, axis, axis);
    CHECK(complex_close(d[0], 0.0));
    CHECK(complex_close(d[1], kInvSqrt2));
    CHECK(complex_close(d[2], -kInvSqrt2));
    CHECK(complex_close(d[3], 0.0));
  }
}

TEST_CASE("singlet keeps its form along any axis up to a global phase") {
  const TwoQubitState s = singlet();
  std::mt19937 gen(555);
  for (int i = 0; i < 100; ++i) {
    const Axis axis = oracle::random_axis(gen);
    const auto d = expand_in_bases(s, axis, axis);
    CHECK(std::norm(d[0]) <= 1e-12);
    CHECK(std::norm(d[3]) <= 1e-12);
    CHECK(std::norm(d[1]) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::norm(d[2]) == doctest::Approx(0.5).epsilon(1e-12));
    // Antisymmetric pair: d(+,-) = -d(-,+).
    CHECK(complex_close(d[1], -d[2]));
  }
}

TEST_CASE("mixed-basis expansion of the singlet matches the closed form") {
  const TwoQubitState s = singlet();
  const double alpha = 1.1;
  const double beta = 2.4;
  const auto d = expand_in_bases(s, Axis::z(), Axis(alpha, beta));

  // d(+,+) = sin(a/2) e^{-i b}/sqrt(2), d(+,-) = cos(a/2)/sqrt(2),
  // d(-,+) = -cos(a/2)/sqrt(2),        d(-,-) = sin(a/2) e^{i b}/sqrt(2).
  const double sh = std::sin(alpha / 2.0);
  const double ch = std::cos(alpha / 2.0);
  CHECK(complex_close(d[0], sh * std::polar(1.0, -beta) * kInvSqrt2));
  CHECK(complex_close(d[1], ch * kInvSqrt2));
  CHECK(complex_close(d[2], -ch * kInvSqrt2));
  CHECK(complex_close(d[3], sh * std::polar(1.0, beta) * kInvSqrt2));

  double total = 0.0;
  for (const auto& coeff : d) total += std::norm(coeff);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("joint probabilities at reference axis pairs") {
  const TwoQubitState s = singlet();

  const auto both_z = joint_probabilities(s, Axis::z(), Axis::z());
  CHECK(both_z.p[0] <= 1e-12);
  CHECK(both_z.p[1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(both_z.p[2] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(both_z.p[3] <= 1e-12);

  const auto z_x = joint_probabilities(s, Axis::z(), Axis::x());
  for (int k = 0; k < 4; ++k) {
    CHECK(z_x.p[k] == doctest::Approx(0.25).epsilon(1e-12));
  }

  const auto z_n = joint_probabilities(s, Axis::z(), Axis(kPi / 3.0, 0.0));
  CHECK(z_n.p[0] == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(z_n.p[1] == doctest::Approx(0.375).epsilon(1e-12));
  CHECK(z_n.p[2] == doctest::Approx(0.375).epsilon(1e-12));
  CHECK(z_n.p[3] == doctest::Approx(0.125).epsilon(1e-12));
}

TEST_CASE("joint probability marginals of the singlet are uniform") {
  const TwoQubitState s = singlet();
  std::mt19937 gen(808);
  for (int i = 0; i < 100; ++i) {
    const auto dist = joint_probabilities(s, oracle::random_axis(gen),
                                          oracle::random_axis(gen));
    CHECK(dist.p[0] + dist.p[1] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(dist.p[0] + dist.p[2] == doctest::Approx(0.5).epsilon(1e-12));
  }
}

TEST_CASE("joint expectation equals -cos(angle) for the singlet") {
  const TwoQubitState s = singlet();
  CHECK(joint_expectation(s, Axis::z(), Axis::z()) ==
        doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(std::abs(joint_expectation(s, Axis::z(), Axis(kPi / 2.0, 0.7))) <=
        1e-12);
  CHECK(joint_expectation(s, Axis::z(), Axis(kPi / 3.0, 5.0)) ==
        doctest::Approx(-0.5).epsilon(1e-12));

  std::mt19937 gen(1903);
  for (int i = 0; i < 100; ++i) {
    const Axis a = oracle::random_axis(gen);
    const Axis b = oracle::random_axis(gen);
    const double expected = -std::cos(angle_between(a, b));
    CHECK(joint_expectation(s, a, b) ==
          doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("joint expectation agrees with the dense operator route") {
  // Probability-weighted sum vs <psi| sigma_a (x) sigma_b |psi>, for
  // arbitrary states, not just the singlet.
  std::mt19937 gen(60601);
  for (int i = 0; i < 100; ++i) {
    const TwoQubitState state = oracle::random_two_qubit_state(gen);
    const Axis a = oracle::random_axis(gen);
    const Axis b = oracle::random_axis(gen);
    const Complex dense = oracle::product_observable_expectation(
        state, pauli_component(a), pauli_component(b));
    CHECK(std::abs(dense.imag()) <= 1e-12);
    CHECK(joint_expectation(state, a, b) ==
          doctest::Approx(dense.real()).epsilon(1e-11));
  }
}

TEST_CASE("bell quantity at reference axis triples") {
  const TwoQubitState s = singlet();
  const BellAxes canonical{theta_axis(0.0), theta_axis(kPi / 4.0),
                           theta_axis(kPi / 2.0)};
  CHECK(bell_quantity(s, canonical) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

  const BellAxes degenerate{Axis::z(), Axis::z(), Axis::z()};
  CHECK(bell_quantity(s, degenerate) == doctest::Approx(1.0).epsilon(1e-12));

  const BellAxes wide{theta_axis(0.0), theta_axis(kPi / 3.0),
                      theta_axis(2.0 * kPi / 3.0)};
  CHECK(bell_quantity(s, wide) == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("bell quantity is invariant under common rotations") {
  const TwoQubitState s = singlet();
  std::mt19937 gen(24824);
  const BellAxes base{theta_axis(0.0), theta_axis(kPi / 4.0),
                      theta_axis(kPi / 2.0)};
  const double reference = bell_quantity(s, base);
  for (int i = 0; i < 100; ++i) {
    const oracle::Mat3d rotation = oracle::random_rotation(gen);
    const BellAxes rotated{oracle::rotate_axis(base.axis1, rotation),
                           oracle::rotate_axis(base.axis2, rotation),
                           oracle::rotate_axis(base.axis3, rotation)};
    CHECK(bell_quantity(s, rotated) ==
          doctest::Approx(reference).epsilon(1e-12));
  }
}

TEST_CASE("reduced density matrices") {
  const DensityMatrix2 singlet_a = reduce(singlet(), Particle::a);
  CHECK(complex_close(singlet_a.entry(0, 0), 0.5));
  CHECK(complex_close(singlet_a.entry(0, 1), 0.0));
  CHECK(complex_close(singlet_a.entry(1, 0), 0.0));
  CHECK(complex_close(singlet_a.entry(1, 1), 0.5));

  const DensityMatrix2 product_a =
      reduce(tensor(QubitState::plus_z(), QubitState::minus_z()), Particle::a);
  CHECK(complex_close(product_a.entry(0, 0), 1.0));
  CHECK(complex_close(product_a.entry(1, 1), 0.0));

  // Both partial traces match the explicit-summation oracle on random
  // states.
  std::mt19937 gen(111213);
  for (int i = 0; i < 100; ++i) {
    const TwoQubitState state = oracle::random_two_qubit_state(gen);
    const auto psi = oracle::state_vec(state);
    const oracle::Mat2 rho_a = oracle::partial_trace_keep_a(psi);
    const oracle::Mat2 rho_b = oracle::partial_trace_keep_b(psi);
    const DensityMatrix2 lib_a = reduce(state, Particle::a);
    const DensityMatrix2 lib_b = reduce(state, Particle::b);
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) {
        CHECK(complex_close(lib_a.entry(r, c), rho_a[2 * r + c]));
        CHECK(complex_close(lib_b.entry(r, c), rho_b[2 * r + c]));
      }
    }
  }
}

TEST_CASE("density product expectation for the fully mixed state") {
  const DensityMatrix2 mixed = DensityMatrix2::maximally_mixed();

  CHECK(density_product_expectation(mixed, Axis::z(), Axis(kPi / 4.0, 0.0)) ==
        doctest::Approx(0.7071067812).epsilon(1e-9));
  CHECK(density_product_expectation(mixed, Axis::z(), Axis::z()) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(density_product_expectation(mixed, Axis::z(),
                                             Axis(kPi / 2.0, 0.0))) <= 1e-12);
}

TEST_CASE("sign-weighted overlap sum equals the trace route everywhere") {
  const DensityMatrix2 mixed = DensityMatrix2::maximally_mixed();
  CHECK(sign_weighted_overlap_sum(Axis::z(), Axis::z()) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sign_weighted_overlap_sum(Axis::z(), Axis(kPi / 3.0, 0.0)) ==
        doctest::Approx(0.5).epsilon(1e-12));

  std::mt19937 gen(987);
  for (int i = 0; i < 200; ++i) {
    const Axis a = oracle::random_axis(gen);
    const Axis b = oracle::random_axis(gen);
    const double cosine = std::cos(angle_between(a, b));
    const double from_overlaps = sign_weighted_overlap_sum(a, b);
    const Complex from_trace =
        density_product_expectation_complex(mixed, a, b);
    CHECK(from_overlaps == doctest::Approx(cosine).epsilon(1e-12));
    CHECK(from_trace.real() ==
          doctest::Approx(from_overlaps).epsilon(1e-12));
    CHECK(std::abs(from_trace.imag()) <= 1e-12);
  }
}

TEST_CASE("type invariants reject malformed inputs") {
  CHECK_THROWS_AS(TwoQubitState({1.0, 1.0, 0.0, 0.0}), std::invalid_argument);

  // Not Hermitian.
  CHECK_THROWS_AS(DensityMatrix2({Complex(0.5), Complex(0.1), Complex(0.3),
                                  Complex(0.5)}),
                  std::invalid_argument);
  // Trace != 1.
  CHECK_THROWS_AS(DensityMatrix2({Complex(0.7), 0.0, 0.0, Complex(0.7)}),
                  std::invalid_argument);
  // Negative eigenvalue.
  CHECK_THROWS_AS(DensityMatrix2({Complex(1.2), 0.0, 0.0, Complex(-0.2)}),
                  std::invalid_argument);
}
