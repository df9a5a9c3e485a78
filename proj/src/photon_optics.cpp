#include "bellsim/photon_optics.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

namespace bellsim {

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

void append_double(std::string& out, double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

}  // namespace

const char* path_mode_name(PathMode mode) {
  return mode == PathMode::upper ? "u" : "l";
}

ModePairState tem01_state(double gamma) {
  const Complex phase = std::polar(1.0, gamma);
  return {TwoQubitState({kInvSqrt2, 0.0, 0.0, phase * kInvSqrt2}), gamma};
}

SlitGeometry::SlitGeometry(double slit_separation, double wavelength,
                           double screen_scale)
    : slit_separation(slit_separation),
      wavelength(wavelength),
      screen_scale(screen_scale) {
  if (!(slit_separation > 0.0) || !(wavelength > 0.0) ||
      !(screen_scale > 0.0)) {
    throw std::invalid_argument(
        "SlitGeometry: all lengths must be strictly positive");
  }
}

SlitAmplitudes signal_amplitudes_after_idler(const ModePairState& state,
                                             PathMode idler_outcome,
                                             MeasurementModel model) {
  if (model == MeasurementModel::local_independent) {
    // The signal keeps the coherent superposition it was created with; the
    // idler detection changes nothing at the slits.
    return {state.state.amplitude(0), state.state.amplitude(3)};
  }
  const int idler_index = idler_outcome == PathMode::upper ? 0 : 1;
  Complex a_u = state.state.amplitude(0 + idler_index);
  Complex a_l = state.state.amplitude(2 + idler_index);
  const double norm = std::sqrt(std::norm(a_u) + std::norm(a_l));
  if (norm < 1e-150) {
    throw std::domain_error(
        "signal_amplitudes_after_idler: idler outcome has zero probability");
  }
  return {a_u / norm, a_l / norm};
}

FringePattern far_field_pattern(const SlitAmplitudes& amps,
                                const SlitGeometry& geom, int n_points,
                                double span) {
  if (n_points < 2) {
    throw std::invalid_argument("far_field_pattern: need at least 2 points");
  }
  if (!(span > 0.0)) {
    throw std::invalid_argument("far_field_pattern: span must be positive");
  }
  FringePattern pattern;
  pattern.positions.reserve(n_points);
  pattern.intensities.reserve(n_points);
  const double k = std::numbers::pi * geom.slit_separation /
                   (geom.wavelength * geom.screen_scale);
  const double step = span / (n_points - 1);
  for (int i = 0; i < n_points; ++i) {
    const double x = -span / 2.0 + i * step;
    const Complex field = amps.upper * std::polar(1.0, k * x) +
                          amps.lower * std::polar(1.0, -k * x);
    pattern.positions.push_back(x);
    pattern.intensities.push_back(std::norm(field));
  }
  return pattern;
}

double visibility(const SlitAmplitudes& amps) {
  const double iu = std::norm(amps.upper);
  const double il = std::norm(amps.lower);
  const double total = iu + il;
  if (total <= 0.0) {
    throw std::invalid_argument("visibility: both slit amplitudes are zero");
  }
  return 2.0 * std::sqrt(iu) * std::sqrt(il) / total;
}

double visibility_bound(double which_path_info) {
  if (!(which_path_info >= 0.0 && which_path_info <= 1.0)) {
    throw std::invalid_argument(
        "visibility_bound: which-path information must lie in [0, 1]");
  }
  return 1.0 - which_path_info;
}

TwoQubitState polarization_state() {
  return TwoQubitState({kInvSqrt2, 0.0, 0.0, kInvSqrt2});
}

bool cp_rewrite_matches(const TwoQubitState& source) {
  // Circular basis states in H/V amplitudes.
  const QubitState left(kInvSqrt2, Complex(0.0, -kInvSqrt2));
  const QubitState right(kInvSqrt2, Complex(0.0, kInvSqrt2));

  const TwoQubitState target({0.0,                        // R_s R_i
                              kInvSqrt2,                   // R_s L_i
                              kInvSqrt2,                   // L_s R_i
                              0.0});                       // L_s L_i

  // Coefficients of the source in the (R, L) x (R, L) product basis.
  const QubitState cp_states[2] = {right, left};
  Complex overlap = 0.0;
  double norm2 = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const TwoQubitState basis_vec = tensor(cp_states[i], cp_states[j]);
      Complex coeff = 0.0;
      for (int k = 0; k < 4; ++k) {
        coeff += std::conj(basis_vec.amplitude(k)) * source.amplitude(k);
      }
      overlap += std::conj(target.amplitude(2 * i + j)) * coeff;
      norm2 += std::norm(coeff);
    }
  }
  // Up-to-phase equality of the coefficient vectors.
  return std::abs(std::abs(overlap) - 1.0) <= kAlgebraTol &&
         std::abs(norm2 - 1.0) <= kAlgebraTol;
}

bool cp_rewrite_check() { return cp_rewrite_matches(polarization_state()); }

const char* circular_polarization_name(CircularPolarization cp) {
  return cp == CircularPolarization::left ? "L" : "R";
}

AngularMomentumPrediction predicted_signal_angular_momentum(
    CircularPolarization idler_outcome, MeasurementModel model) {
  if (model == MeasurementModel::nonlocal_collapse) {
    // Idler L pairs with signal R (+1 hbar) and vice versa.
    const double value =
        idler_outcome == CircularPolarization::left ? +1.0 : -1.0;
    return {{{value, 1.0}}, value};
  }
  return {{{+1.0, 0.5}, {-1.0, 0.5}}, 0.0};
}

void write_fringe_csv(std::ostream& out, const FringePattern& pattern) {
  out << "x_m,intensity\n";
  std::string line;
  for (std::size_t i = 0; i < pattern.positions.size(); ++i) {
    line.clear();
    append_double(line, pattern.positions[i]);
    line += ',';
    append_double(line, pattern.intensities[i]);
    line += '\n';
    out << line;
  }
}

nlohmann::ordered_json visibility_report(MeasurementModel model,
                                         PathMode idler_outcome,
                                         double visibility_value,
                                         double gamma) {
  return nlohmann::ordered_json{
      {"model", std::string(model_name(model))},
      {"idler_outcome", path_mode_name(idler_outcome)},
      {"visibility", visibility_value},
      {"gamma", gamma},
  };
}

}  // namespace bellsim
