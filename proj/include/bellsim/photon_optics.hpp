#pragma once

#include <iosfwd>
#include <vector>

#include <json.hpp>

#include "bellsim/entangled_pair.hpp"
#include "bellsim/measurement_sim.hpp"
#include "bellsim/spin_algebra.hpp"

namespace bellsim {

/// Which intensity maximum of the two-hump beam mode a photon occupies;
/// doubles as the slit label.
enum class PathMode { upper, lower };

const char* path_mode_name(PathMode mode);  // "u" / "l"

/// Signal-idler pair entangled over the upper/lower path modes,
/// amplitudes (1/sqrt2, 0, 0, e^{i gamma}/sqrt2) in the order uu, ul, lu,
/// ll (signal first). gamma is the pump-process phase.
struct ModePairState {
  TwoQubitState state;
  double gamma;
};

ModePairState tem01_state(double gamma);

/// Coherent amplitudes at the two slits. Sub-normalized after
/// conditioning.
struct SlitAmplitudes {
  Complex upper;
  Complex lower;
};

/// Two-slit far-field scaling: separation d, wavelength, and the lens
/// focal length mapping angle to screen position. All strictly positive.
struct SlitGeometry {
  SlitGeometry(double slit_separation, double wavelength,
               double screen_scale);

  double slit_separation;
  double wavelength;
  double screen_scale;
};

struct FringePattern {
  std::vector<double> positions;    // meters on the detection screen
  std::vector<double> intensities;  // nonnegative, same length
};

/// Signal state reaching the double slit after the idler was detected in
/// the given path mode. Collapse semantics condition the signal on the
/// idler outcome, killing one slit amplitude; local semantics leave the
/// signal's own coherent superposition untouched.
SlitAmplitudes signal_amplitudes_after_idler(const ModePairState& state,
                                             PathMode idler_outcome,
                                             MeasurementModel model);

/// I(x) = |a_u e^{i pi d x / (lambda F)} + a_l e^{-i pi d x / (lambda F)}|^2
/// on a uniform n_points grid spanning [-span/2, +span/2]. Point slits: no
/// single-slit envelope.
FringePattern far_field_pattern(const SlitAmplitudes& amps,
                                const SlitGeometry& geom, int n_points,
                                double span);

/// Fringe contrast 2|a_u||a_l| / (|a_u|^2 + |a_l|^2), identical to
/// (Imax - Imin)/(Imax + Imin) of the far-field pattern. Throws
/// std::invalid_argument when both amplitudes vanish.
double visibility(const SlitAmplitudes& amps);

/// Linear visibility bound 1 - D for which-path information D in [0, 1].
double visibility_bound(double which_path_info);

/// (|H>_s|H>_i + |V>_s|V>_i)/sqrt(2) over the H/V polarization basis.
TwoQubitState polarization_state();

/// True iff rewriting polarization_state() in the circular basis
/// |L> = (|H> - i|V>)/sqrt(2), |R> = (|H> + i|V>)/sqrt(2) gives
/// (|R>_s|L>_i + |L>_s|R>_i)/sqrt(2) up to a global phase.
bool cp_rewrite_check();

/// Same check against an arbitrary H/V-basis pair state.
bool cp_rewrite_matches(const TwoQubitState& source);

enum class CircularPolarization { left, right };

const char* circular_polarization_name(CircularPolarization cp);  // "L"/"R"

/// One point of the per-photon angular momentum distribution, in units of
/// hbar (|R> carries +1, |L> carries -1).
struct AngularMomentumOutcome {
  double value_hbar;
  double probability;
};

/// Analytic per-shot distribution and mean of the signal photon's angular
/// momentum once it meets the wave plate, conditioned on the idler's
/// circular-polarization outcome. Collapse semantics pin the signal to the
/// partner circular state (mean +-1 hbar); local semantics leave it
/// unpolarized until its own measurement (mean 0).
struct AngularMomentumPrediction {
  std::vector<AngularMomentumOutcome> per_shot;
  double mean_hbar;
};

AngularMomentumPrediction predicted_signal_angular_momentum(
    CircularPolarization idler_outcome, MeasurementModel model);

/// CSV with header x_m,intensity.
void write_fringe_csv(std::ostream& out, const FringePattern& pattern);

/// {model, idler_outcome, visibility, gamma} with gamma in radians.
nlohmann::ordered_json visibility_report(MeasurementModel model,
                                         PathMode idler_outcome,
                                         double visibility_value,
                                         double gamma);

}  // namespace bellsim
