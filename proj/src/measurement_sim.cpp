#include "bellsim/measurement_sim.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <thread>

#include <boost/math/distributions/chi_squared.hpp>

namespace bellsim {

namespace {

// Chunk granularity for RNG stream splitting. Fixed so that trial sequences
// do not depend on the worker count.
constexpr std::uint64_t kChunkTrials = 8192;

constexpr double kDegPerRad = 180.0 / std::numbers::pi;

Complex qubit_amp(const QubitState& s, int z_index) {
  return z_index == 0 ? s.amp_plus_z() : s.amp_minus_z();
}

// Distributions precomputed once per (state, axes, model) so the trial loop
// only draws uniforms and walks a CDF.
struct TrialSampler {
  MeasurementModel model;
  std::array<double, 4> joint{};                    // local route
  std::array<double, 2> marginal_a{};               // collapse route
  std::array<std::array<double, 2>, 2> cond_b{};    // [a outcome][b outcome]

  JointOutcome sample(Rng& rng) const {
    if (model == MeasurementModel::local_independent) {
      const std::size_t k = sample_categorical(rng, joint);
      return kOutcomeOrder[k];
    }
    const std::size_t ia = sample_categorical(rng, marginal_a);
    const std::size_t ib = sample_categorical(rng, cond_b[ia]);
    return {ia == 0 ? Sign::plus : Sign::minus,
            ib == 0 ? Sign::plus : Sign::minus};
  }
};

TrialSampler make_sampler(const TwoQubitState& state, const Axis& axis_a,
                          const Axis& axis_b, MeasurementModel model) {
  TrialSampler sampler;
  sampler.model = model;
  sampler.joint = joint_probabilities(state, axis_a, axis_b).p;

  const EigenBasis basis_a = axis_eigenstates(axis_a);
  const EigenBasis basis_b = axis_eigenstates(axis_b);
  const DensityMatrix2 rho_a = reduce(state, Particle::a);
  for (int ia = 0; ia < 2; ++ia) {
    const QubitState& ea = ia == 0 ? basis_a.plus : basis_a.minus;
    // Born rule on the reduced state of a.
    Complex marg = 0.0;
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) {
        marg += std::conj(qubit_amp(ea, r)) * rho_a.entry(r, c) *
                qubit_amp(ea, c);
      }
    }
    sampler.marginal_a[ia] = std::max(0.0, marg.real());

    // Conditional state of b after projecting the composite on a's outcome.
    const Complex cb0 = std::conj(ea.amp_plus_z()) * state.amplitude(0) +
                        std::conj(ea.amp_minus_z()) * state.amplitude(2);
    const Complex cb1 = std::conj(ea.amp_plus_z()) * state.amplitude(1) +
                        std::conj(ea.amp_minus_z()) * state.amplitude(3);
    const double norm_b = std::norm(cb0) + std::norm(cb1);
    if (norm_b < 1e-300) {
      // Outcome ia has zero marginal and is never drawn.
      sampler.cond_b[ia] = {0.5, 0.5};
      continue;
    }
    for (int ib = 0; ib < 2; ++ib) {
      const QubitState& fb = ib == 0 ? basis_b.plus : basis_b.minus;
      const Complex amp =
          std::conj(fb.amp_plus_z()) * cb0 + std::conj(fb.amp_minus_z()) * cb1;
      sampler.cond_b[ia][ib] = std::norm(amp) / norm_b;
    }
  }
  return sampler;
}

std::string channel_name(Sign s_a, Sign s_b) {
  std::string name = "(";
  name += s_a == Sign::plus ? '+' : '-';
  name += ',';
  name += s_b == Sign::plus ? '+' : '-';
  name += ')';
  return name;
}

void run_chunk(const TrialSampler& sampler, const RunConfig& config,
               std::uint64_t chunk_index, std::uint64_t begin,
               std::uint64_t end, CountTable& table, TrialRecord* records) {
  Rng rng(derive_stream_seed(config.seed, chunk_index));
  for (std::uint64_t i = begin; i < end; ++i) {
    const JointOutcome outcome = sampler.sample(rng);
    table.add(outcome);
    if (records != nullptr) {
      records[i] = {i, outcome, config.axis_a, config.axis_b, config.model};
    }
  }
}

CountTable run_impl(const RunConfig& config, const TwoQubitState& state,
                    unsigned n_workers, TrialRecord* records) {
  if (config.n_trials == 0) {
    throw std::invalid_argument("run_trials: n_trials must be at least 1");
  }
  const TrialSampler sampler =
      make_sampler(state, config.axis_a, config.axis_b, config.model);
  const std::uint64_t n_chunks =
      (config.n_trials + kChunkTrials - 1) / kChunkTrials;
  std::vector<CountTable> chunk_tables(n_chunks);

  const auto worker = [&](std::uint64_t first_chunk, std::uint64_t stride) {
    for (std::uint64_t c = first_chunk; c < n_chunks; c += stride) {
      const std::uint64_t begin = c * kChunkTrials;
      const std::uint64_t end =
          std::min(begin + kChunkTrials, config.n_trials);
      run_chunk(sampler, config, c, begin, end, chunk_tables[c], records);
    }
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(
      n_workers, static_cast<unsigned>(std::min<std::uint64_t>(n_chunks, 64))));
  if (workers == 1) {
    worker(0, 1);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back(worker, w, workers);
    }
    for (auto& t : pool) t.join();
  }

  CountTable total;
  for (const CountTable& t : chunk_tables) total.merge(t);
  return total;
}

std::uint64_t u64_field(const nlohmann::json& j, const char* name) {
  if (!j.contains(name)) {
    throw std::invalid_argument(std::string("counts JSON: missing field '") +
                                name + "'");
  }
  const auto& v = j.at(name);
  if (!v.is_number_integer() && !v.is_number_unsigned()) {
    throw std::invalid_argument(std::string("counts JSON: field '") + name +
                                "' is not an integer");
  }
  if (v.is_number_integer() && v.get<std::int64_t>() < 0) {
    throw std::invalid_argument(std::string("counts JSON: field '") + name +
                                "' is negative");
  }
  return v.get<std::uint64_t>();
}

}  // namespace

std::string_view model_name(MeasurementModel model) {
  return model == MeasurementModel::local_independent ? "local" : "collapse";
}

std::optional<MeasurementModel> parse_model(std::string_view name) {
  if (name == "local") return MeasurementModel::local_independent;
  if (name == "collapse") return MeasurementModel::nonlocal_collapse;
  return std::nullopt;
}

void CountTable::add(JointOutcome o) {
  ++n_trials;
  (o.s_a == Sign::plus ? n_a_plus : n_a_minus) += 1;
  (o.s_b == Sign::plus ? n_b_plus : n_b_minus) += 1;
  ++coincidences[outcome_index(o)];
}

void CountTable::merge(const CountTable& other) {
  n_trials += other.n_trials;
  n_a_plus += other.n_a_plus;
  n_a_minus += other.n_a_minus;
  n_b_plus += other.n_b_plus;
  n_b_minus += other.n_b_minus;
  for (int k = 0; k < 4; ++k) coincidences[k] += other.coincidences[k];
}

void CountTable::validate() const {
  if (n_trials == 0) {
    throw std::invalid_argument("CountTable: n_trials must be positive");
  }
  if (n_a_plus + n_a_minus != n_trials) {
    throw std::invalid_argument(
        "CountTable: n_a_plus + n_a_minus does not equal n_trials");
  }
  if (n_b_plus + n_b_minus != n_trials) {
    throw std::invalid_argument(
        "CountTable: n_b_plus + n_b_minus does not equal n_trials");
  }
  std::uint64_t total = 0;
  for (const auto c : coincidences) total += c;
  if (total != n_trials) {
    throw std::invalid_argument(
        "CountTable: coincidence counts do not sum to n_trials");
  }
}

JointOutcome sample_joint(const TwoQubitState& state, const Axis& axis_a,
                          const Axis& axis_b, MeasurementModel model,
                          Rng& rng) {
  return make_sampler(state, axis_a, axis_b, model).sample(rng);
}

RunResult run_trials(const RunConfig& config, const TwoQubitState& state,
                     unsigned n_workers) {
  RunResult result;
  result.records.resize(config.n_trials,
                        TrialRecord{0, kOutcomeOrder[0], config.axis_a,
                                    config.axis_b, config.model});
  result.table = run_impl(config, state, n_workers, result.records.data());
  return result;
}

CountTable run_counts(const RunConfig& config, const TwoQubitState& state,
                      unsigned n_workers) {
  return run_impl(config, state, n_workers, nullptr);
}

EstimatorResult coincidence_estimate(const CountTable& table, Sign s_a,
                                     Sign s_b) {
  const std::uint64_t n_a = table.single_a(s_a);
  const std::uint64_t n_b = table.single_b(s_b);
  if (n_a == 0 || n_b == 0) {
    throw undefined_estimate_error(
        "coincidence channel " + channel_name(s_a, s_b) +
        ": zero denominator (" +
        (n_a == 0 ? std::string("n_a_") + (s_a == Sign::plus ? "plus" : "minus")
                  : std::string("n_b_") +
                        (s_b == Sign::plus ? "plus" : "minus")) +
        " = 0)");
  }
  const std::uint64_t c = table.coincidence({s_a, s_b});
  const double denom =
      std::sqrt(static_cast<double>(n_a) * static_cast<double>(n_b));
  const double n = static_cast<double>(table.n_trials);
  const double fraction = static_cast<double>(c) / n;
  const double sd_c = std::sqrt(static_cast<double>(c) * (1.0 - fraction));
  return {static_cast<double>(c) / denom, sd_c / denom, table.n_trials};
}

EstimatorResult replica_local_expectation(const CountTable& table) {
  double value = 0.0;
  double var = 0.0;
  for (const JointOutcome& o : kOutcomeOrder) {
    const EstimatorResult channel = coincidence_estimate(table, o.s_a, o.s_b);
    const int sign = sign_value(o.s_a) * sign_value(o.s_b);
    value += sign * channel.value;
    var += channel.std_error * channel.std_error;
  }
  return {-0.5 * value, 0.5 * std::sqrt(var), table.n_trials};
}

EstimatorResult empirical_mean(const CountTable& table) {
  if (table.n_trials == 0) {
    throw std::invalid_argument("empirical_mean: empty count table");
  }
  const double n = static_cast<double>(table.n_trials);
  double sum = 0.0;
  for (int k = 0; k < 4; ++k) {
    const JointOutcome o = kOutcomeOrder[k];
    sum += sign_value(o.s_a) * sign_value(o.s_b) *
           static_cast<double>(table.coincidences[k]);
  }
  const double mean = sum / n;
  const double var = std::max(0.0, 1.0 - mean * mean);
  return {mean, std::sqrt(var / n), table.n_trials};
}

double model_total_variation(const TwoQubitState& state, const Axis& axis_a,
                             const Axis& axis_b) {
  const std::array<double, 4> local =
      joint_probabilities(state, axis_a, axis_b).p;
  const TrialSampler chain = make_sampler(
      state, axis_a, axis_b, MeasurementModel::nonlocal_collapse);
  double tv = 0.0;
  for (int ia = 0; ia < 2; ++ia) {
    for (int ib = 0; ib < 2; ++ib) {
      const double chained = chain.marginal_a[ia] * chain.cond_b[ia][ib];
      tv += std::abs(local[2 * ia + ib] - chained);
    }
  }
  return tv / 2.0;
}

ChiSquareResult two_table_chi_square(const CountTable& lhs,
                                     const CountTable& rhs) {
  if (lhs.n_trials == 0 || rhs.n_trials == 0) {
    throw std::invalid_argument("two_table_chi_square: empty count table");
  }
  const double row_l = static_cast<double>(lhs.n_trials);
  const double row_r = static_cast<double>(rhs.n_trials);
  const double grand = row_l + row_r;
  double stat = 0.0;
  unsigned used = 0;
  for (int k = 0; k < 4; ++k) {
    const double o_l = static_cast<double>(lhs.coincidences[k]);
    const double o_r = static_cast<double>(rhs.coincidences[k]);
    const double col = o_l + o_r;
    if (col == 0.0) continue;
    ++used;
    const double e_l = row_l * col / grand;
    const double e_r = row_r * col / grand;
    stat += (o_l - e_l) * (o_l - e_l) / e_l;
    stat += (o_r - e_r) * (o_r - e_r) / e_r;
  }
  if (used <= 1) return {0.0, 0, 1.0};
  const unsigned dof = used - 1;
  const boost::math::chi_squared dist(dof);
  const double p = boost::math::cdf(boost::math::complement(dist, stat));
  return {stat, dof, p};
}

void write_trials_csv(std::ostream& out,
                      const std::vector<TrialRecord>& records,
                      std::uint64_t seed) {
  out << "trial,sa,sb,alpha_a_deg,beta_a_deg,alpha_b_deg,beta_b_deg,model,"
         "seed\n";
  char line[256];
  for (const TrialRecord& r : records) {
    const char* model =
        r.model == MeasurementModel::local_independent ? "local" : "collapse";
    std::snprintf(line, sizeof(line),
                  "%" PRIu64 ",%+d,%+d,%.9f,%.9f,%.9f,%.9f,%s,%" PRIu64 "\n",
                  r.trial_index, sign_value(r.outcome.s_a),
                  sign_value(r.outcome.s_b), r.axis_a.polar() * kDegPerRad,
                  r.axis_a.azimuth() * kDegPerRad,
                  r.axis_b.polar() * kDegPerRad,
                  r.axis_b.azimuth() * kDegPerRad, model, seed);
    out << line;
  }
}

nlohmann::ordered_json count_table_to_json(const CountTable& table) {
  return nlohmann::ordered_json{
      {"n_trials", table.n_trials},   {"n_a_plus", table.n_a_plus},
      {"n_a_minus", table.n_a_minus}, {"n_b_plus", table.n_b_plus},
      {"n_b_minus", table.n_b_minus}, {"c_pp", table.coincidences[0]},
      {"c_pm", table.coincidences[1]}, {"c_mp", table.coincidences[2]},
      {"c_mm", table.coincidences[3]},
  };
}

CountTable count_table_from_json(const nlohmann::json& j) {
  if (!j.is_object()) {
    throw std::invalid_argument("counts JSON: top level is not an object");
  }
  CountTable table;
  table.n_trials = u64_field(j, "n_trials");
  table.n_a_plus = u64_field(j, "n_a_plus");
  table.n_a_minus = u64_field(j, "n_a_minus");
  table.n_b_plus = u64_field(j, "n_b_plus");
  table.n_b_minus = u64_field(j, "n_b_minus");
  table.coincidences[0] = u64_field(j, "c_pp");
  table.coincidences[1] = u64_field(j, "c_pm");
  table.coincidences[2] = u64_field(j, "c_mp");
  table.coincidences[3] = u64_field(j, "c_mm");
  table.validate();
  return table;
}

}  // namespace bellsim
