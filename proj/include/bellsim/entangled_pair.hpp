#pragma once

#include <array>

#include "bellsim/spin_algebra.hpp"

namespace bellsim {

/// Binary measurement outcome along some axis.
enum class Sign : int { plus = +1, minus = -1 };

inline int sign_value(Sign s) { return static_cast<int>(s); }
inline Sign opposite(Sign s) { return s == Sign::plus ? Sign::minus : Sign::plus; }

/// Pair of outcomes from a joint measurement on particles a and b.
struct JointOutcome {
  Sign s_a;
  Sign s_b;

  friend bool operator==(const JointOutcome&, const JointOutcome&) = default;
};

/// Fixed outcome order (+,+), (+,-), (-,+), (-,-). Sampling, count tables
/// and serialized channels all index in this order.
inline constexpr std::array<JointOutcome, 4> kOutcomeOrder = {{
    {Sign::plus, Sign::plus},
    {Sign::plus, Sign::minus},
    {Sign::minus, Sign::plus},
    {Sign::minus, Sign::minus},
}};

inline int outcome_index(JointOutcome o) {
  return (o.s_a == Sign::minus ? 2 : 0) + (o.s_b == Sign::minus ? 1 : 0);
}

/// Normalized two-particle state. Amplitude order matches kOutcomeOrder for
/// the z-basis product states: |+z>_a|+z>_b, |+z>_a|-z>_b, |-z>_a|+z>_b,
/// |-z>_a|-z>_b.
class TwoQubitState {
 public:
  /// Throws std::invalid_argument unless the amplitudes have unit norm
  /// within kAlgebraTol.
  explicit TwoQubitState(std::array<Complex, 4> amplitudes);

  const std::array<Complex, 4>& amplitudes() const { return amps_; }
  Complex amplitude(int index) const { return amps_[index]; }

 private:
  std::array<Complex, 4> amps_;
};

/// The spin singlet (|+z>_a|-z>_b - |-z>_a|+z>_b)/sqrt(2). Its expansion
/// keeps the same form along every axis, up to a global phase.
TwoQubitState singlet();

/// Product state |a> (x) |b>.
TwoQubitState tensor(const QubitState& a, const QubitState& b);

/// Probabilities of the four joint outcomes for measurements along
/// (axis_a, axis_b), in kOutcomeOrder.
struct JointDistribution {
  Axis axis_a;
  Axis axis_b;
  std::array<double, 4> p;

  double probability(JointOutcome o) const { return p[outcome_index(o)]; }
};

/// Expansion coefficients d(s_a, s_b) = <s_a-eigenstate| <s_b-eigenstate|
/// state, in kOutcomeOrder. The squared magnitudes sum to 1.
std::array<Complex, 4> expand_in_bases(const TwoQubitState& state,
                                       const Axis& axis_a, const Axis& axis_b);

/// Born-rule probabilities |d(s_a, s_b)|^2 of the final joint projection.
JointDistribution joint_probabilities(const TwoQubitState& state,
                                      const Axis& axis_a, const Axis& axis_b);

/// Expectation of the product of the two outcome signs,
/// sum of sign(s_a s_b) P(s_a, s_b). For the singlet this is
/// -cos(angle_between(axis_a, axis_b)).
double joint_expectation(const TwoQubitState& state, const Axis& axis_a,
                         const Axis& axis_b);

/// Three measurement axes for the three-correlator inequality.
struct BellAxes {
  Axis axis1;
  Axis axis2;
  Axis axis3;
};

/// |E(1,2) - E(1,3)| - E(2,3) with E = joint_expectation. Values above 1
/// are impossible for local hidden-variable statistics; the singlet reaches
/// sqrt(2) at coplanar axes 0/45/90 degrees.
double bell_quantity(const TwoQubitState& state, const BellAxes& axes);

enum class Particle { a, b };

/// Single-particle density matrix with unit trace.
class DensityMatrix2 {
 public:
  /// Throws std::invalid_argument unless the matrix is Hermitian with
  /// trace 1 and eigenvalues >= -kAlgebraTol.
  explicit DensityMatrix2(std::array<Complex, 4> entries);

  Complex entry(int row, int col) const { return m_[2 * row + col]; }
  Operator2 as_operator() const { return {m_}; }

  /// The fully mixed state I/2.
  static DensityMatrix2 maximally_mixed();

 private:
  std::array<Complex, 4> m_;
};

/// Partial trace over the other particle.
DensityMatrix2 reduce(const TwoQubitState& state, Particle which);

/// Re Tr(rho sigma_1 sigma_2). The operator product is not Hermitian in
/// general; for rho = I/2 the trace is real and equals the cosine of the
/// angle between the axes. density_product_expectation_complex exposes the
/// raw trace so callers can check the imaginary part.
double density_product_expectation(const DensityMatrix2& rho,
                                   const Axis& axis_1, const Axis& axis_2);
Complex density_product_expectation_complex(const DensityMatrix2& rho,
                                            const Axis& axis_1,
                                            const Axis& axis_2);

/// (1/2) sum over sign pairs of sign(s_1 s_2) |<s_1-eigenstate of axis_1 |
/// s_2-eigenstate of axis_2>|^2. Equals density_product_expectation of the
/// fully mixed state for the same axes.
double sign_weighted_overlap_sum(const Axis& axis_1, const Axis& axis_2);

}  // namespace bellsim
