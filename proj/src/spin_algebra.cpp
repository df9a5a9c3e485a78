#include "bellsim/spin_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace bellsim {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

Axis::Axis(double polar, double azimuth) {
  if (!(polar >= 0.0 && polar <= kPi)) {
    throw std::invalid_argument("Axis: polar angle " + std::to_string(polar) +
                                " outside [0, pi]");
  }
  if (!std::isfinite(azimuth)) {
    throw std::invalid_argument("Axis: azimuth must be finite");
  }
  polar_ = polar;
  azimuth_ = std::fmod(azimuth, kTwoPi);
  if (azimuth_ < 0.0) azimuth_ += kTwoPi;
  if (azimuth_ >= kTwoPi) azimuth_ = 0.0;  // fmod rounding at the seam
  if (polar_ == 0.0 || polar_ == kPi) azimuth_ = 0.0;
}

std::array<double, 3> Axis::unit_vector() const {
  const double s = std::sin(polar_);
  return {s * std::cos(azimuth_), s * std::sin(azimuth_), std::cos(polar_)};
}

Axis Axis::z() { return Axis(0.0, 0.0); }
Axis Axis::x() { return Axis(kPi / 2.0, 0.0); }
Axis Axis::y() { return Axis(kPi / 2.0, kPi / 2.0); }

double angle_between(const Axis& a, const Axis& b) {
  const auto u = a.unit_vector();
  const auto v = b.unit_vector();
  double dot = u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
  dot = std::clamp(dot, -1.0, 1.0);
  return std::acos(dot);
}

Axis theta_axis(double theta) {
  // Direction (0, sin(theta), cos(theta)) in the yz-plane; recovering the
  // spherical angles folds any real theta into polar in [0, pi] with the
  // azimuth picking the +y or -y half-plane.
  const double y = std::sin(theta);
  const double z = std::cos(theta);
  const double polar = std::acos(std::clamp(z, -1.0, 1.0));
  double azimuth;
  if (y > 0.0) {
    azimuth = kPi / 2.0;
  } else if (y < 0.0) {
    azimuth = 3.0 * kPi / 2.0;
  } else {
    azimuth = kPi / 2.0;  // pole; constructor canonicalizes to 0
  }
  return Axis(polar, azimuth);
}

QubitState::QubitState(Complex amp_plus_z, Complex amp_minus_z)
    : amp_plus_z_(amp_plus_z), amp_minus_z_(amp_minus_z) {
  const double norm2 = std::norm(amp_plus_z_) + std::norm(amp_minus_z_);
  if (std::abs(norm2 - 1.0) > kAlgebraTol) {
    throw std::invalid_argument("QubitState: squared norm " +
                                std::to_string(norm2) + " is not 1");
  }
}

Operator2 Operator2::identity() { return {{Complex(1), 0, 0, Complex(1)}}; }
Operator2 Operator2::pauli_x() { return {{0, Complex(1), Complex(1), 0}}; }
Operator2 Operator2::pauli_y() {
  return {{0, Complex(0, -1), Complex(0, 1), 0}};
}
Operator2 Operator2::pauli_z() { return {{Complex(1), 0, 0, Complex(-1)}}; }

Operator2 operator*(const Operator2& lhs, const Operator2& rhs) {
  Operator2 out;
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      out.at(r, c) =
          lhs.at(r, 0) * rhs.at(0, c) + lhs.at(r, 1) * rhs.at(1, c);
    }
  }
  return out;
}

Operator2 operator+(const Operator2& lhs, const Operator2& rhs) {
  Operator2 out;
  for (int i = 0; i < 4; ++i) out.m[i] = lhs.m[i] + rhs.m[i];
  return out;
}

Operator2 operator-(const Operator2& lhs, const Operator2& rhs) {
  Operator2 out;
  for (int i = 0; i < 4; ++i) out.m[i] = lhs.m[i] - rhs.m[i];
  return out;
}

Operator2 scale(Complex factor, const Operator2& op) {
  Operator2 out;
  for (int i = 0; i < 4; ++i) out.m[i] = factor * op.m[i];
  return out;
}

std::array<Complex, 2> apply(const Operator2& op, const QubitState& state) {
  return {op.at(0, 0) * state.amp_plus_z() + op.at(0, 1) * state.amp_minus_z(),
          op.at(1, 0) * state.amp_plus_z() +
              op.at(1, 1) * state.amp_minus_z()};
}

EigenBasis axis_eigenstates(const Axis& axis) {
  const double half = axis.polar() / 2.0;
  const double c = std::cos(half);
  const double s = std::sin(half);
  const Complex phase = std::polar(1.0, axis.azimuth());
  return {QubitState(c, s * phase), QubitState(-s * std::conj(phase), c)};
}

Operator2 pauli_component(const Axis& axis) {
  const auto n = axis.unit_vector();
  return scale(n[0], Operator2::pauli_x()) +
         scale(n[1], Operator2::pauli_y()) +
         scale(n[2], Operator2::pauli_z());
}

Complex inner(const QubitState& bra, const QubitState& ket) {
  return std::conj(bra.amp_plus_z()) * ket.amp_plus_z() +
         std::conj(bra.amp_minus_z()) * ket.amp_minus_z();
}

double overlap_prob(const QubitState& a, const QubitState& b) {
  return std::norm(inner(a, b));
}

bool equal_up_to_global_phase(const QubitState& a, const QubitState& b,
                              double tol) {
  return std::abs(inner(a, b)) >= 1.0 - tol;
}

ProjectionResult project(const QubitState& state, const QubitState& onto) {
  const double prob = overlap_prob(onto, state);
  if (prob < kImpossibleProb) {
    throw std::domain_error(
        "project: target state is orthogonal to the input (probability " +
        std::to_string(prob) + ")");
  }
  return {prob, onto};
}

}  // namespace bellsim
