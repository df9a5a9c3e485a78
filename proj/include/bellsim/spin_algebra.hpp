#pragma once

#include <array>
#include <complex>

namespace bellsim {

using Complex = std::complex<double>;

/// Tolerance for exact-algebra checks (normalization, hermiticity,
/// orthogonality). Statistical quantities carry their own sigma-based
/// tolerances instead.
inline constexpr double kAlgebraTol = 1e-12;

/// Probability below which a requested projection is treated as impossible.
inline constexpr double kImpossibleProb = 1e-15;

/// Measurement direction on the unit sphere, parameterized by the polar
/// angle in [0, pi] and the azimuth normalized into [0, 2*pi). At the poles
/// the azimuth carries no information and is canonicalized to 0 so that two
/// representations of the same direction serialize identically.
class Axis {
 public:
  Axis(double polar, double azimuth);

  double polar() const { return polar_; }
  double azimuth() const { return azimuth_; }

  /// Cartesian unit vector (x, y, z) of the direction.
  std::array<double, 3> unit_vector() const;

  static Axis z();
  static Axis x();
  static Axis y();

 private:
  double polar_;
  double azimuth_;
};

/// Angle in [0, pi] between two directions, from the 3D unit-vector dot
/// product.
double angle_between(const Axis& a, const Axis& b);

/// Axis in the yz-plane at angle theta from the z-axis. Nonnegative theta
/// tilts toward +y (azimuth pi/2), negative theta toward -y (azimuth 3*pi/2).
/// Angles beyond pi wrap around the sphere.
Axis theta_axis(double theta);

/// Normalized single-qubit state, amplitudes stored in the |+z>, |-z> basis.
/// States equal up to a global phase are physically identical; comparisons
/// go through equal_up_to_global_phase, never through raw amplitudes.
class QubitState {
 public:
  /// Throws std::invalid_argument unless |amp_plus|^2 + |amp_minus|^2 is 1
  /// within kAlgebraTol.
  QubitState(Complex amp_plus_z, Complex amp_minus_z);

  Complex amp_plus_z() const { return amp_plus_z_; }
  Complex amp_minus_z() const { return amp_minus_z_; }

  static QubitState plus_z() { return QubitState(1.0, 0.0); }
  static QubitState minus_z() { return QubitState(0.0, 1.0); }

 private:
  Complex amp_plus_z_;
  Complex amp_minus_z_;
};

/// 2x2 complex matrix, row-major.
struct Operator2 {
  std::array<Complex, 4> m{};

  Complex at(int row, int col) const { return m[2 * row + col]; }
  Complex& at(int row, int col) { return m[2 * row + col]; }

  Complex trace() const { return m[0] + m[3]; }

  static Operator2 identity();
  static Operator2 pauli_x();
  static Operator2 pauli_y();
  static Operator2 pauli_z();
};

Operator2 operator*(const Operator2& lhs, const Operator2& rhs);
Operator2 operator+(const Operator2& lhs, const Operator2& rhs);
Operator2 operator-(const Operator2& lhs, const Operator2& rhs);
Operator2 scale(Complex factor, const Operator2& op);

/// Matrix-vector product; result is generally unnormalized.
std::array<Complex, 2> apply(const Operator2& op, const QubitState& state);

/// Eigenstates of the Pauli component along one axis.
struct EigenBasis {
  QubitState plus;
  QubitState minus;

  const QubitState& get(int sign) const { return sign > 0 ? plus : minus; }
};

/// |+n> = (cos(a/2), sin(a/2) e^{i b}), |-n> = (-sin(a/2) e^{-i b}, cos(a/2))
/// for polar a and azimuth b. Orthonormal by construction.
EigenBasis axis_eigenstates(const Axis& axis);

/// Pauli component sin(a)cos(b) sx + sin(a)sin(b) sy + cos(a) sz along the
/// axis; its eigenvectors are axis_eigenstates(axis) with eigenvalues +1/-1.
Operator2 pauli_component(const Axis& axis);

/// <bra|ket>, conjugate-linear in the bra.
Complex inner(const QubitState& bra, const QubitState& ket);

/// |<a|b>|^2, the Born-rule projection probability between two pure states.
double overlap_prob(const QubitState& a, const QubitState& b);

/// True iff the two states differ by at most a global phase:
/// |<a|b>| >= 1 - tol.
bool equal_up_to_global_phase(const QubitState& a, const QubitState& b,
                              double tol = kAlgebraTol);

struct ProjectionResult {
  double prob;
  QubitState post_state;
};

/// Projective measurement outcome: the state lands on |onto> with
/// probability |<onto|state>|^2. Throws std::domain_error when that
/// probability is below kImpossibleProb (orthogonal states cannot be the
/// measured outcome).
ProjectionResult project(const QubitState& state, const QubitState& onto);

}  // namespace bellsim
