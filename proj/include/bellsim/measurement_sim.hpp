#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "bellsim/entangled_pair.hpp"
#include "bellsim/rng.hpp"
#include "bellsim/spin_algebra.hpp"

namespace bellsim {

/// The two measurement semantics under comparison. NonlocalCollapse draws
/// particle a's outcome from its marginal and conditions particle b on the
/// projected composite state; LocalIndependent draws the joint outcome in a
/// single step from the final joint projection, with no intermediate
/// conditional state for the unmeasured particle. Both produce the same
/// joint distribution.
enum class MeasurementModel { nonlocal_collapse, local_independent };

std::string_view model_name(MeasurementModel model);  // "collapse" / "local"
std::optional<MeasurementModel> parse_model(std::string_view name);

/// One simulated joint measurement.
struct TrialRecord {
  std::uint64_t trial_index;
  JointOutcome outcome;
  Axis axis_a;
  Axis axis_b;
  MeasurementModel model;
};

/// Per-outcome detector counts. Single-detector counts partition the trial
/// count on each side, and coincidences partition it across the four
/// channels.
struct CountTable {
  std::uint64_t n_trials = 0;
  std::uint64_t n_a_plus = 0;
  std::uint64_t n_a_minus = 0;
  std::uint64_t n_b_plus = 0;
  std::uint64_t n_b_minus = 0;
  std::array<std::uint64_t, 4> coincidences{};  // kOutcomeOrder

  std::uint64_t coincidence(JointOutcome o) const {
    return coincidences[outcome_index(o)];
  }
  std::uint64_t single_a(Sign s) const {
    return s == Sign::plus ? n_a_plus : n_a_minus;
  }
  std::uint64_t single_b(Sign s) const {
    return s == Sign::plus ? n_b_plus : n_b_minus;
  }

  void add(JointOutcome o);
  void merge(const CountTable& other);

  /// Throws std::invalid_argument when a partition sum rule is broken.
  void validate() const;
};

/// Point estimate with a binomial-approximation standard error. std_error
/// is zero exactly when the underlying channel fraction is 0 or 1.
struct EstimatorResult {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t n_trials = 0;
};

struct RunConfig {
  std::uint64_t seed = 0;
  std::uint64_t n_trials = 1;
  MeasurementModel model = MeasurementModel::local_independent;
  Axis axis_a = Axis::z();
  Axis axis_b = Axis::z();
};

/// A coincidence channel has no single-detector counts to normalize by.
class undefined_estimate_error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Draw one joint outcome under the given semantics. The collapse model
/// consumes two uniforms per trial (marginal, then conditional), the local
/// model one.
JointOutcome sample_joint(const TwoQubitState& state, const Axis& axis_a,
                          const Axis& axis_b, MeasurementModel model,
                          Rng& rng);

struct RunResult {
  std::vector<TrialRecord> records;
  CountTable table;
};

/// Seeded trial loop. Trials are generated in fixed-size chunks, each with
/// its own derived RNG stream, so the output is byte-identical for any
/// worker count. Throws std::invalid_argument for n_trials = 0.
RunResult run_trials(const RunConfig& config, const TwoQubitState& state,
                     unsigned n_workers = 1);

/// Same sampling path as run_trials without materializing records.
CountTable run_counts(const RunConfig& config, const TwoQubitState& state,
                      unsigned n_workers = 1);

/// Normalized coincidence rate C(s_a, s_b) / sqrt(N_a(s_a) N_b(s_b)), the
/// geometric-mean normalization. Estimates the projection probability
/// |<s_a|s_b>|^2 between the two measured eigenstates when both marginals
/// are uniform (true for the singlet); for biased marginals the value is
/// reported as-is. Throws undefined_estimate_error on a zero denominator.
EstimatorResult coincidence_estimate(const CountTable& table, Sign s_a,
                                     Sign s_b);

/// Local product-measurement expectation reconstructed from the partner's
/// counts used as a replica: -(1/2) sum of sign(s_a s_b) times the channel
/// coincidence estimates. For singlet runs this converges to
/// -joint_expectation, i.e. +cos(angle between the axes).
EstimatorResult replica_local_expectation(const CountTable& table);

/// Plain Monte Carlo mean of the product s_a * s_b.
EstimatorResult empirical_mean(const CountTable& table);

/// (1/2) sum |P_collapse - P_local| over the four outcomes, both routes
/// computed analytically. Zero (up to rounding) for every state and axis
/// pair: the two semantics are observationally identical.
double model_total_variation(const TwoQubitState& state, const Axis& axis_a,
                             const Axis& axis_b);

struct ChiSquareResult {
  double statistic = 0.0;
  unsigned dof = 0;
  double p_value = 1.0;
};

/// Pearson chi-square homogeneity test of two coincidence tables over the
/// four outcome channels. Channels empty in both tables drop out of the
/// statistic and the degrees of freedom.
ChiSquareResult two_table_chi_square(const CountTable& lhs,
                                     const CountTable& rhs);

/// CSV with header trial,sa,sb,alpha_a_deg,beta_a_deg,alpha_b_deg,
/// beta_b_deg,model,seed; angles in degrees with 9 decimals, signs as
/// +1/-1.
void write_trials_csv(std::ostream& out,
                      const std::vector<TrialRecord>& records,
                      std::uint64_t seed);

nlohmann::ordered_json count_table_to_json(const CountTable& table);

/// Parses and validates a count table; error messages name the offending
/// field.
CountTable count_table_from_json(const nlohmann::json& j);

}  // namespace bellsim
