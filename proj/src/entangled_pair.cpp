#include "bellsim/entangled_pair.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace bellsim {

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

Complex eigen_amp(const QubitState& s, int z_index) {
  return z_index == 0 ? s.amp_plus_z() : s.amp_minus_z();
}

}  // namespace

TwoQubitState::TwoQubitState(std::array<Complex, 4> amplitudes)
    : amps_(amplitudes) {
  double norm2 = 0.0;
  for (const auto& a : amps_) norm2 += std::norm(a);
  if (std::abs(norm2 - 1.0) > kAlgebraTol) {
    throw std::invalid_argument("TwoQubitState: squared norm " +
                                std::to_string(norm2) + " is not 1");
  }
}

TwoQubitState singlet() {
  return TwoQubitState({0.0, kInvSqrt2, -kInvSqrt2, 0.0});
}

TwoQubitState tensor(const QubitState& a, const QubitState& b) {
  return TwoQubitState({a.amp_plus_z() * b.amp_plus_z(),
                        a.amp_plus_z() * b.amp_minus_z(),
                        a.amp_minus_z() * b.amp_plus_z(),
                        a.amp_minus_z() * b.amp_minus_z()});
}

std::array<Complex, 4> expand_in_bases(const TwoQubitState& state,
                                       const Axis& axis_a,
                                       const Axis& axis_b) {
  const EigenBasis basis_a = axis_eigenstates(axis_a);
  const EigenBasis basis_b = axis_eigenstates(axis_b);
  std::array<Complex, 4> d{};
  for (int k = 0; k < 4; ++k) {
    const JointOutcome o = kOutcomeOrder[k];
    const QubitState& ea = basis_a.get(sign_value(o.s_a));
    const QubitState& eb = basis_b.get(sign_value(o.s_b));
    Complex coeff = 0.0;
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        coeff += std::conj(eigen_amp(ea, i) * eigen_amp(eb, j)) *
                 state.amplitude(2 * i + j);
      }
    }
    d[k] = coeff;
  }
  return d;
}

JointDistribution joint_probabilities(const TwoQubitState& state,
                                      const Axis& axis_a, const Axis& axis_b) {
  const auto d = expand_in_bases(state, axis_a, axis_b);
  JointDistribution dist{axis_a, axis_b, {}};
  for (int k = 0; k < 4; ++k) dist.p[k] = std::norm(d[k]);
  return dist;
}

double joint_expectation(const TwoQubitState& state, const Axis& axis_a,
                         const Axis& axis_b) {
  const JointDistribution dist = joint_probabilities(state, axis_a, axis_b);
  double e = 0.0;
  for (int k = 0; k < 4; ++k) {
    const JointOutcome o = kOutcomeOrder[k];
    e += sign_value(o.s_a) * sign_value(o.s_b) * dist.p[k];
  }
  return e;
}

double bell_quantity(const TwoQubitState& state, const BellAxes& axes) {
  const double e12 = joint_expectation(state, axes.axis1, axes.axis2);
  const double e13 = joint_expectation(state, axes.axis1, axes.axis3);
  const double e23 = joint_expectation(state, axes.axis2, axes.axis3);
  return std::abs(e12 - e13) - e23;
}

DensityMatrix2::DensityMatrix2(std::array<Complex, 4> entries) : m_(entries) {
  if (std::abs(m_[1] - std::conj(m_[2])) > kAlgebraTol ||
      std::abs(m_[0].imag()) > kAlgebraTol ||
      std::abs(m_[3].imag()) > kAlgebraTol) {
    throw std::invalid_argument("DensityMatrix2: matrix is not Hermitian");
  }
  const double tr = m_[0].real() + m_[3].real();
  if (std::abs(tr - 1.0) > kAlgebraTol) {
    throw std::invalid_argument("DensityMatrix2: trace " + std::to_string(tr) +
                                " is not 1");
  }
  // Hermitian 2x2 eigenvalues in closed form.
  const double half_tr = tr / 2.0;
  const double det =
      (m_[0] * m_[3] - m_[1] * m_[2]).real();
  const double disc = std::sqrt(std::max(0.0, half_tr * half_tr - det));
  if (half_tr - disc < -kAlgebraTol) {
    throw std::invalid_argument("DensityMatrix2: negative eigenvalue " +
                                std::to_string(half_tr - disc));
  }
}

DensityMatrix2 DensityMatrix2::maximally_mixed() {
  return DensityMatrix2({Complex(0.5), 0.0, 0.0, Complex(0.5)});
}

DensityMatrix2 reduce(const TwoQubitState& state, Particle which) {
  std::array<Complex, 4> rho{};
  if (which == Particle::a) {
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        for (int k = 0; k < 2; ++k) {
          rho[2 * i + j] += state.amplitude(2 * i + k) *
                            std::conj(state.amplitude(2 * j + k));
        }
      }
    }
  } else {
    for (int k = 0; k < 2; ++k) {
      for (int l = 0; l < 2; ++l) {
        for (int i = 0; i < 2; ++i) {
          rho[2 * k + l] += state.amplitude(2 * i + k) *
                            std::conj(state.amplitude(2 * i + l));
        }
      }
    }
  }
  return DensityMatrix2(rho);
}

Complex density_product_expectation_complex(const DensityMatrix2& rho,
                                            const Axis& axis_1,
                                            const Axis& axis_2) {
  const Operator2 product =
      rho.as_operator() * pauli_component(axis_1) * pauli_component(axis_2);
  return product.trace();
}

double density_product_expectation(const DensityMatrix2& rho,
                                   const Axis& axis_1, const Axis& axis_2) {
  return density_product_expectation_complex(rho, axis_1, axis_2).real();
}

double sign_weighted_overlap_sum(const Axis& axis_1, const Axis& axis_2) {
  const EigenBasis basis_1 = axis_eigenstates(axis_1);
  const EigenBasis basis_2 = axis_eigenstates(axis_2);
  double sum = 0.0;
  for (const JointOutcome& o : kOutcomeOrder) {
    const double overlap = overlap_prob(basis_1.get(sign_value(o.s_a)),
                                        basis_2.get(sign_value(o.s_b)));
    sum += sign_value(o.s_a) * sign_value(o.s_b) * overlap;
  }
  return sum / 2.0;
}

}  // namespace bellsim
