#pragma once

// Test-only oracles. Everything here recomputes quantities through dense
// matrix algebra and explicit index summation, independent of the library's
// own computation paths, so the two routes can be checked against each
// other.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "bellsim/entangled_pair.hpp"
#include "bellsim/spin_algebra.hpp"

namespace oracle {

using bellsim::Complex;

using Vec2 = std::array<Complex, 2>;
using Vec4 = std::array<Complex, 4>;
using Mat2 = std::array<Complex, 4>;    // row-major 2x2
using Mat4 = std::array<Complex, 16>;   // row-major 4x4
using Mat3d = std::array<double, 9>;    // row-major 3x3, real

inline Vec2 state_vec(const bellsim::QubitState& s) {
  return {s.amp_plus_z(), s.amp_minus_z()};
}

inline Vec4 state_vec(const bellsim::TwoQubitState& s) {
  return {s.amplitude(0), s.amplitude(1), s.amplitude(2), s.amplitude(3)};
}

inline Mat2 op_mat(const bellsim::Operator2& op) { return op.m; }

inline Mat2 mat2_mul(const Mat2& a, const Mat2& b) {
  Mat2 out{};
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      out[2 * r + c] = a[2 * r] * b[c] + a[2 * r + 1] * b[2 + c];
    }
  }
  return out;
}

inline Vec2 mat2_apply(const Mat2& m, const Vec2& v) {
  return {m[0] * v[0] + m[1] * v[1], m[2] * v[0] + m[3] * v[1]};
}

inline Mat2 outer(const Vec2& ket, const Vec2& bra) {
  Mat2 out{};
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      out[2 * r + c] = ket[r] * std::conj(bra[c]);
    }
  }
  return out;
}

inline Mat4 kron(const Mat2& a, const Mat2& b) {
  Mat4 out{};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      for (int k = 0; k < 2; ++k) {
        for (int l = 0; l < 2; ++l) {
          out[4 * (2 * i + k) + (2 * j + l)] = a[2 * i + j] * b[2 * k + l];
        }
      }
    }
  }
  return out;
}

inline Vec4 kron_vec(const Vec2& a, const Vec2& b) {
  return {a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]};
}

inline Vec4 mat4_apply(const Mat4& m, const Vec4& v) {
  Vec4 out{};
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      out[r] += m[4 * r + c] * v[c];
    }
  }
  return out;
}

inline Complex vec_inner(const Vec2& bra, const Vec2& ket) {
  return std::conj(bra[0]) * ket[0] + std::conj(bra[1]) * ket[1];
}

inline Complex vec_inner(const Vec4& bra, const Vec4& ket) {
  Complex sum = 0.0;
  for (int i = 0; i < 4; ++i) sum += std::conj(bra[i]) * ket[i];
  return sum;
}

// Partial traces by explicit index summation over psi[2*i + k] with i the
// index of particle a and k the index of particle b.
inline Mat2 partial_trace_keep_a(const Vec4& psi) {
  Mat2 rho{};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      for (int k = 0; k < 2; ++k) {
        rho[2 * i + j] += psi[2 * i + k] * std::conj(psi[2 * j + k]);
      }
    }
  }
  return rho;
}

inline Mat2 partial_trace_keep_b(const Vec4& psi) {
  Mat2 rho{};
  for (int k = 0; k < 2; ++k) {
    for (int l = 0; l < 2; ++l) {
      for (int i = 0; i < 2; ++i) {
        rho[2 * k + l] += psi[2 * i + k] * std::conj(psi[2 * i + l]);
      }
    }
  }
  return rho;
}

// <psi| A (x) B |psi> evaluated through the dense 4x4 product.
inline Complex product_observable_expectation(const bellsim::TwoQubitState& s,
                                              const bellsim::Operator2& a,
                                              const bellsim::Operator2& b) {
  const Mat4 joint = kron(op_mat(a), op_mat(b));
  const Vec4 psi = state_vec(s);
  return vec_inner(psi, mat4_apply(joint, psi));
}

// ---------------------------------------------------------------------------
// Random inputs for property tests. Fixed seeds at the call sites keep the
// suites deterministic.

inline bellsim::Axis random_axis(std::mt19937& gen) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  const double z = unit(gen);
  return bellsim::Axis(std::acos(z), angle(gen));
}

inline bellsim::QubitState random_qubit_state(std::mt19937& gen) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Complex a(normal(gen), normal(gen));
  Complex b(normal(gen), normal(gen));
  const double norm = std::sqrt(std::norm(a) + std::norm(b));
  return bellsim::QubitState(a / norm, b / norm);
}

inline bellsim::TwoQubitState random_two_qubit_state(std::mt19937& gen) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::array<Complex, 4> amps;
  double norm2 = 0.0;
  for (auto& amp : amps) {
    amp = Complex(normal(gen), normal(gen));
    norm2 += std::norm(amp);
  }
  const double norm = std::sqrt(norm2);
  for (auto& amp : amps) amp /= norm;
  return bellsim::TwoQubitState(amps);
}

// Rodrigues rotation matrix about a random axis by a random angle.
inline Mat3d random_rotation(std::mt19937& gen) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  const double z = unit(gen);
  const double phi = angle(gen);
  const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
  const std::array<double, 3> k = {s * std::cos(phi), s * std::sin(phi), z};
  const double theta = angle(gen);
  const double c = std::cos(theta);
  const double sn = std::sin(theta);
  Mat3d r{};
  const std::array<std::array<double, 3>, 3> cross = {{{0, -k[2], k[1]},
                                                       {k[2], 0, -k[0]},
                                                       {-k[1], k[0], 0}}};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const double outer_ij = k[i] * k[j];
      r[3 * i + j] = c * (i == j ? 1.0 : 0.0) + sn * cross[i][j] +
                     (1.0 - c) * outer_ij;
    }
  }
  return r;
}

inline bellsim::Axis axis_from_unit_vector(double x, double y, double z) {
  const double polar = std::acos(std::clamp(z, -1.0, 1.0));
  double azimuth = std::atan2(y, x);
  if (azimuth < 0.0) azimuth += 2.0 * std::numbers::pi;
  return bellsim::Axis(polar, azimuth);
}

inline bellsim::Axis rotate_axis(const bellsim::Axis& axis, const Mat3d& r) {
  const auto u = axis.unit_vector();
  std::array<double, 3> v{};
  for (int i = 0; i < 3; ++i) {
    v[i] = r[3 * i] * u[0] + r[3 * i + 1] * u[1] + r[3 * i + 2] * u[2];
  }
  const double norm = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  return axis_from_unit_vector(v[0] / norm, v[1] / norm, v[2] / norm);
}

}  // namespace oracle
