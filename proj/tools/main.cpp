// Command-line front end: analytic correlations, Bell quantities, seeded
// Monte Carlo runs, coincidence-estimator pipelines and photon-experiment
// predictions, all reproducible from the flag set alone.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bellsim/entangled_pair.hpp"
#include "bellsim/measurement_sim.hpp"
#include "bellsim/photon_optics.hpp"
#include "bellsim/spin_algebra.hpp"
#include "bellsim/version.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr double kRadPerDeg = std::numbers::pi / 180.0;

// Stream index offsets keep per-pair / per-row seeds clear of the chunk
// index space used inside run_trials.
constexpr std::uint64_t kPairStreamBase = 1ULL << 32;
constexpr std::uint64_t kRowStreamBase = 1ULL << 33;

struct CommonOptions {
  std::uint64_t seed = 0;
  std::uint64_t trials = 100000;
  std::string model = "local";
  std::string out_path;
  std::string format = "json";
  unsigned threads = 1;
};

bellsim::MeasurementModel required_model(const std::string& name) {
  const auto model = bellsim::parse_model(name);
  if (!model) {
    throw std::invalid_argument("--model must be 'local' or 'collapse', got '" +
                                name + "'");
  }
  return *model;
}

ordered_json make_envelope(const std::string& command, ordered_json params) {
  return ordered_json{{"command", command},
                      {"parameters", std::move(params)},
                      {"values", ordered_json::object()},
                      {"tool_version", bellsim::kVersion}};
}

void flatten_json(const ordered_json& node, const std::string& prefix,
                  std::string& out) {
  if (node.is_object()) {
    for (const auto& [key, value] : node.items()) {
      flatten_json(value, prefix.empty() ? key : prefix + "." + key, out);
    }
  } else if (node.is_array()) {
    for (std::size_t i = 0; i < node.size(); ++i) {
      flatten_json(node[i], prefix + "[" + std::to_string(i) + "]", out);
    }
  } else {
    out += prefix;
    out += ',';
    out += node.is_string() ? node.get<std::string>() : node.dump();
    out += '\n';
  }
}

std::string render_envelope(const ordered_json& envelope,
                            const std::string& format) {
  if (format == "csv") {
    std::string out = "key,value\n";
    flatten_json(envelope, "", out);
    return out;
  }
  return envelope.dump(2) + "\n";
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open '" + path.string() +
                             "' for writing");
  }
  out << content;
  if (!out) {
    throw std::runtime_error("failed writing '" + path.string() + "'");
  }
}

void emit_envelope(const ordered_json& envelope, const std::string& out_path,
                   const std::string& format) {
  const std::string rendered = render_envelope(envelope, format);
  if (out_path.empty()) {
    std::cout << rendered;
  } else {
    write_file(out_path, rendered);
  }
}

ordered_json estimator_json(const bellsim::EstimatorResult& r) {
  return ordered_json{{"value", r.value}, {"std_error", r.std_error}};
}

std::string format_degrees(double deg) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9f", deg);
  return buf;
}

std::string format_shortest(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// ---------------------------------------------------------------------------
// correlate

int run_correlate(double alpha_deg, double beta_deg,
                  const CommonOptions& opts) {
  const bellsim::Axis axis_b(alpha_deg * kRadPerDeg, beta_deg * kRadPerDeg);
  const bellsim::TwoQubitState state = bellsim::singlet();
  const auto dist =
      bellsim::joint_probabilities(state, bellsim::Axis::z(), axis_b);
  const double expectation =
      bellsim::joint_expectation(state, bellsim::Axis::z(), axis_b);

  ordered_json envelope = make_envelope(
      "correlate",
      ordered_json{{"alpha_deg", alpha_deg}, {"beta_deg", beta_deg}});
  envelope["values"] = ordered_json{
      {"expectation", expectation},
      {"probabilities",
       ordered_json{{"pp", dist.p[0]},
                    {"pm", dist.p[1]},
                    {"mp", dist.p[2]},
                    {"mm", dist.p[3]}}},
  };
  emit_envelope(envelope, opts.out_path, opts.format);
  return 0;
}

// ---------------------------------------------------------------------------
// bell

int run_bell(const std::vector<double>& angles_deg, std::uint64_t trials,
             const CommonOptions& opts) {
  const bellsim::BellAxes axes{bellsim::theta_axis(angles_deg[0] * kRadPerDeg),
                               bellsim::theta_axis(angles_deg[1] * kRadPerDeg),
                               bellsim::theta_axis(angles_deg[2] * kRadPerDeg)};
  const bellsim::TwoQubitState state = bellsim::singlet();
  const bellsim::MeasurementModel model = required_model(opts.model);

  const double e12 = bellsim::joint_expectation(state, axes.axis1, axes.axis2);
  const double e13 = bellsim::joint_expectation(state, axes.axis1, axes.axis3);
  const double e23 = bellsim::joint_expectation(state, axes.axis2, axes.axis3);
  const double analytic = bellsim::bell_quantity(state, axes);

  ordered_json envelope = make_envelope(
      "bell", ordered_json{{"angles_deg", angles_deg},
                           {"trials", trials},
                           {"seed", opts.seed},
                           {"model", opts.model}});
  envelope["values"]["analytic"] =
      ordered_json{{"e12", e12},
                   {"e13", e13},
                   {"e23", e23},
                   {"bell_quantity", analytic},
                   {"violated", analytic > 1.0}};

  if (trials > 0) {
    const std::array<std::pair<const bellsim::Axis*, const bellsim::Axis*>, 3>
        pairs = {{{&axes.axis1, &axes.axis2},
                  {&axes.axis1, &axes.axis3},
                  {&axes.axis2, &axes.axis3}}};
    std::array<bellsim::EstimatorResult, 3> estimates;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      bellsim::RunConfig config;
      config.seed = bellsim::derive_stream_seed(opts.seed, kPairStreamBase + k);
      config.n_trials = trials;
      config.model = model;
      config.axis_a = *pairs[k].first;
      config.axis_b = *pairs[k].second;
      estimates[k] =
          bellsim::empirical_mean(bellsim::run_counts(config, state,
                                                      opts.threads));
    }
    const double mc_bell =
        std::abs(estimates[0].value - estimates[1].value) - estimates[2].value;
    const double mc_se = std::sqrt(
        estimates[0].std_error * estimates[0].std_error +
        estimates[1].std_error * estimates[1].std_error +
        estimates[2].std_error * estimates[2].std_error);
    envelope["values"]["monte_carlo"] =
        ordered_json{{"e12", estimator_json(estimates[0])},
                     {"e13", estimator_json(estimates[1])},
                     {"e23", estimator_json(estimates[2])},
                     {"bell_quantity", mc_bell},
                     {"std_error", mc_se},
                     {"violated", mc_bell > 1.0},
                     {"n_trials_per_pair", trials}};
  }
  emit_envelope(envelope, opts.out_path, opts.format);
  return 0;
}

// ---------------------------------------------------------------------------
// simulate

int run_simulate(double alpha_a_deg, double beta_a_deg, double alpha_b_deg,
                 double beta_b_deg, const std::string& compare_path,
                 const CommonOptions& opts) {
  if (opts.out_path.empty()) {
    throw std::invalid_argument("simulate requires --out <directory>");
  }
  bellsim::RunConfig config;
  config.seed = opts.seed;
  config.n_trials = opts.trials;
  config.model = required_model(opts.model);
  config.axis_a =
      bellsim::Axis(alpha_a_deg * kRadPerDeg, beta_a_deg * kRadPerDeg);
  config.axis_b =
      bellsim::Axis(alpha_b_deg * kRadPerDeg, beta_b_deg * kRadPerDeg);

  const bellsim::RunResult result =
      bellsim::run_trials(config, bellsim::singlet(), opts.threads);
  result.table.validate();

  const fs::path out_dir(opts.out_path);
  fs::create_directories(out_dir);

  std::string trials_csv;
  {
    std::ostringstream stream;
    bellsim::write_trials_csv(stream, result.records, config.seed);
    trials_csv = stream.str();
  }
  write_file(out_dir / "trials.csv", trials_csv);
  write_file(out_dir / "counts.json",
             bellsim::count_table_to_json(result.table).dump(2) + "\n");

  ordered_json envelope = make_envelope(
      "simulate", ordered_json{{"seed", opts.seed},
                               {"trials", opts.trials},
                               {"model", opts.model},
                               {"alpha_a_deg", alpha_a_deg},
                               {"beta_a_deg", beta_a_deg},
                               {"alpha_b_deg", alpha_b_deg},
                               {"beta_b_deg", beta_b_deg},
                               {"out", opts.out_path},
                               {"compare", compare_path}});
  envelope["values"]["counts"] = bellsim::count_table_to_json(result.table);
  envelope["values"]["empirical_mean"] =
      estimator_json(bellsim::empirical_mean(result.table));
  envelope["values"]["files"] = ordered_json{{"trials_csv", "trials.csv"},
                                             {"counts_json", "counts.json"}};

  if (!compare_path.empty()) {
    std::ifstream in(compare_path);
    if (!in) {
      throw std::runtime_error("cannot open comparison table '" +
                               compare_path + "'");
    }
    nlohmann::json other_json;
    in >> other_json;
    const bellsim::CountTable other =
        bellsim::count_table_from_json(other_json);
    const bellsim::ChiSquareResult chi =
        bellsim::two_table_chi_square(result.table, other);
    envelope["values"]["chi_square"] = ordered_json{
        {"statistic", chi.statistic}, {"dof", chi.dof}, {"p_value", chi.p_value}};
  }

  write_file(out_dir / "envelope.json", envelope.dump(2) + "\n");
  return 0;
}

// ---------------------------------------------------------------------------
// estimate

int run_estimate(const std::string& counts_path, const CommonOptions& opts) {
  std::ifstream in(counts_path);
  if (!in) {
    throw std::runtime_error("cannot open counts file '" + counts_path + "'");
  }
  nlohmann::json counts_json;
  try {
    in >> counts_json;
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error("counts JSON: parse error in '" + counts_path +
                             "': " + e.what());
  }
  const bellsim::CountTable table =
      bellsim::count_table_from_json(counts_json);

  ordered_json channels = ordered_json::object();
  static constexpr const char* kChannelKeys[4] = {"pp", "pm", "mp", "mm"};
  for (int k = 0; k < 4; ++k) {
    const bellsim::JointOutcome o = bellsim::kOutcomeOrder[k];
    channels[kChannelKeys[k]] =
        estimator_json(bellsim::coincidence_estimate(table, o.s_a, o.s_b));
  }
  const bellsim::EstimatorResult replica =
      bellsim::replica_local_expectation(table);
  const bellsim::EstimatorResult mean = bellsim::empirical_mean(table);

  // Replica reconstruction should equal minus the direct mean up to
  // statistical error.
  const double difference = replica.value + mean.value;
  const double combined = std::sqrt(replica.std_error * replica.std_error +
                                    mean.std_error * mean.std_error);
  const bool agrees =
      std::abs(difference) <= std::max(4.0 * combined, 1e-12);

  const double n = static_cast<double>(table.n_trials);
  ordered_json envelope =
      make_envelope("estimate", ordered_json{{"counts", counts_path}});
  envelope["values"] = ordered_json{
      {"channels", channels},
      {"replica_local_expectation", estimator_json(replica)},
      {"empirical_mean", estimator_json(mean)},
      {"agreement",
       ordered_json{{"difference", difference},
                    {"combined_std_error", combined},
                    {"within_4_sigma", agrees}}},
      {"marginals",
       ordered_json{{"a_plus", static_cast<double>(table.n_a_plus) / n},
                    {"b_plus", static_cast<double>(table.n_b_plus) / n}}},
      {"n_trials", table.n_trials},
  };
  emit_envelope(envelope, opts.out_path, opts.format);
  return 0;
}

// ---------------------------------------------------------------------------
// fringe

int run_fringe(const std::string& idler, double gamma_deg, double slit_sep,
               double wavelength, double screen_scale, int points, double span,
               std::optional<double> which_path, const CommonOptions& opts) {
  const bellsim::MeasurementModel model = required_model(opts.model);
  bellsim::PathMode idler_outcome;
  if (idler == "u") {
    idler_outcome = bellsim::PathMode::upper;
  } else if (idler == "l") {
    idler_outcome = bellsim::PathMode::lower;
  } else {
    throw std::invalid_argument("--idler must be 'u' or 'l', got '" + idler +
                                "'");
  }

  const double gamma = gamma_deg * kRadPerDeg;
  const bellsim::ModePairState state = bellsim::tem01_state(gamma);
  const bellsim::SlitGeometry geom(slit_sep, wavelength, screen_scale);
  const bellsim::SlitAmplitudes amps =
      bellsim::signal_amplitudes_after_idler(state, idler_outcome, model);
  const double vis = bellsim::visibility(amps);

  // Default span covers four fringe periods of the given geometry.
  const double fringe_period =
      geom.wavelength * geom.screen_scale / geom.slit_separation;
  const double used_span = span > 0.0 ? span : 4.0 * fringe_period;
  const bellsim::FringePattern pattern =
      bellsim::far_field_pattern(amps, geom, points, used_span);

  ordered_json envelope = make_envelope(
      "fringe", ordered_json{{"model", opts.model},
                             {"idler", idler},
                             {"gamma_deg", gamma_deg},
                             {"slit_separation_m", slit_sep},
                             {"wavelength_m", wavelength},
                             {"screen_scale_m", screen_scale},
                             {"points", points},
                             {"span_m", used_span},
                             {"out", opts.out_path}});
  const ordered_json report =
      bellsim::visibility_report(model, idler_outcome, vis, gamma);
  envelope["values"]["report"] = report;
  if (which_path) {
    envelope["values"]["visibility_bound"] =
        bellsim::visibility_bound(*which_path);
    envelope["parameters"]["which_path"] = *which_path;
  }

  if (!opts.out_path.empty()) {
    const fs::path out_dir(opts.out_path);
    fs::create_directories(out_dir);
    std::ostringstream stream;
    bellsim::write_fringe_csv(stream, pattern);
    write_file(out_dir / "fringe.csv", stream.str());
    write_file(out_dir / "visibility.json", report.dump(2) + "\n");
    write_file(out_dir / "envelope.json", envelope.dump(2) + "\n");
  } else {
    std::cout << render_envelope(envelope, opts.format);
  }
  return 0;
}

// ---------------------------------------------------------------------------
// sweep

int run_sweep(double alpha_min, double alpha_max, int steps,
              const CommonOptions& opts) {
  if (steps < 2) {
    throw std::invalid_argument("sweep: --steps must be at least 2");
  }
  if (!(alpha_min < alpha_max)) {
    throw std::invalid_argument(
        "sweep: --alpha-min must be strictly below --alpha-max");
  }
  if (opts.trials == 0) {
    throw std::invalid_argument("sweep: --trials must be at least 1");
  }
  const bellsim::MeasurementModel model = required_model(opts.model);
  const bellsim::TwoQubitState state = bellsim::singlet();

  std::string csv = "alpha_deg,analytic_E,mc_E,mc_stderr\n";
  for (int row = 0; row < steps; ++row) {
    const double alpha_deg =
        alpha_min + (alpha_max - alpha_min) * row / (steps - 1);
    const bellsim::Axis axis_b = bellsim::theta_axis(alpha_deg * kRadPerDeg);
    const double analytic =
        bellsim::joint_expectation(state, bellsim::Axis::z(), axis_b);

    bellsim::RunConfig config;
    config.seed = bellsim::derive_stream_seed(
        opts.seed, kRowStreamBase + static_cast<std::uint64_t>(row));
    config.n_trials = opts.trials;
    config.model = model;
    config.axis_a = bellsim::Axis::z();
    config.axis_b = axis_b;
    const bellsim::EstimatorResult mc =
        bellsim::empirical_mean(bellsim::run_counts(config, state,
                                                    opts.threads));

    csv += format_degrees(alpha_deg);
    csv += ',';
    csv += format_shortest(analytic);
    csv += ',';
    csv += format_shortest(mc.value);
    csv += ',';
    csv += format_shortest(mc.std_error);
    csv += '\n';
  }

  if (opts.out_path.empty()) {
    std::cout << csv;
  } else {
    write_file(opts.out_path, csv);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-qubit measurement-semantics simulator"};
  app.set_version_flag("--version", bellsim::kVersion);
  app.require_subcommand(1);

  CommonOptions opts;

  // correlate
  double alpha_deg = 0.0;
  double beta_deg = 0.0;
  auto* correlate =
      app.add_subcommand("correlate",
                         "Analytic singlet correlation for one axis pair");
  correlate->add_option("--alpha", alpha_deg,
                        "Polar angle of the second axis, degrees")
      ->required();
  correlate->add_option("--beta", beta_deg,
                        "Azimuth of the second axis, degrees");
  correlate->add_option("--out", opts.out_path, "Output file (default stdout)");
  correlate->add_option("--format", opts.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));

  // bell
  std::vector<double> bell_angles;
  std::uint64_t bell_trials = 0;
  auto* bell = app.add_subcommand(
      "bell", "Three-axis Bell quantity, analytic and Monte Carlo");
  bell->add_option("--angles", bell_angles,
                   "Three coplanar axis angles in degrees")
      ->expected(3)
      ->required();
  bell->add_option("--trials", bell_trials,
                   "Monte Carlo trials per axis pair (0 = analytic only)");
  bell->add_option("--seed", opts.seed, "Base RNG seed");
  bell->add_option("--model", opts.model, "local or collapse");
  bell->add_option("--threads", opts.threads, "Worker threads");
  bell->add_option("--out", opts.out_path, "Output file (default stdout)");
  bell->add_option("--format", opts.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));

  // simulate
  double alpha_a_deg = 0.0, beta_a_deg = 0.0;
  double alpha_b_deg = 0.0, beta_b_deg = 0.0;
  std::string compare_path;
  auto* simulate = app.add_subcommand(
      "simulate", "Seeded trial run emitting trials.csv and counts.json");
  simulate->add_option("--seed", opts.seed, "RNG seed");
  simulate->add_option("--trials", opts.trials, "Number of trials");
  simulate->add_option("--model", opts.model, "local or collapse");
  simulate->add_option("--alpha-a", alpha_a_deg, "Polar of axis a, degrees");
  simulate->add_option("--beta-a", beta_a_deg, "Azimuth of axis a, degrees");
  simulate->add_option("--alpha-b", alpha_b_deg, "Polar of axis b, degrees");
  simulate->add_option("--beta-b", beta_b_deg, "Azimuth of axis b, degrees");
  simulate->add_option("--out", opts.out_path, "Output directory")->required();
  simulate->add_option("--compare", compare_path,
                       "counts.json of another run; adds a chi-square "
                       "homogeneity comparison");
  simulate->add_option("--threads", opts.threads, "Worker threads");

  // estimate
  std::string counts_path;
  auto* estimate = app.add_subcommand(
      "estimate", "Coincidence estimators from a counts.json table");
  estimate->add_option("--counts", counts_path, "counts.json path")
      ->required();
  estimate->add_option("--out", opts.out_path, "Output file (default stdout)");
  estimate->add_option("--format", opts.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));

  // fringe
  std::string idler = "l";
  double gamma_deg = 0.0;
  double slit_sep = 1e-3;
  double wavelength = 810e-9;
  double screen_scale = 0.1;
  int points = 1001;
  double span = 0.0;
  double which_path_value = -1.0;
  auto* fringe = app.add_subcommand(
      "fringe", "Far-field fringe pattern and visibility per model");
  fringe->add_option("--model", opts.model, "local or collapse");
  fringe->add_option("--idler", idler, "Idler detection mode: u or l");
  fringe->add_option("--gamma-deg", gamma_deg, "Pump phase gamma, degrees");
  fringe->add_option("--slit-sep", slit_sep, "Slit separation, meters");
  fringe->add_option("--wavelength", wavelength, "Wavelength, meters");
  fringe->add_option("--screen-scale", screen_scale,
                     "Far-field mapping constant (lens focal length), meters");
  fringe->add_option("--points", points, "Grid points");
  fringe->add_option("--span", span,
                     "Screen span in meters (default: 4 fringe periods)");
  auto* which_path_opt = fringe->add_option(
      "--which-path", which_path_value,
      "Report the visibility bound for this which-path information");
  fringe->add_option("--out", opts.out_path,
                     "Output directory (default: envelope to stdout)");
  fringe->add_option("--format", opts.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));

  // sweep
  double alpha_min = 0.0;
  double alpha_max = 180.0;
  int steps = 19;
  auto* sweep = app.add_subcommand(
      "sweep", "CSV of analytic and Monte Carlo correlation over alpha");
  sweep->add_option("--alpha-min", alpha_min, "Grid start, degrees");
  sweep->add_option("--alpha-max", alpha_max, "Grid end, degrees");
  sweep->add_option("--steps", steps, "Grid size (>= 2)");
  sweep->add_option("--trials", opts.trials, "Trials per grid point");
  sweep->add_option("--seed", opts.seed, "Base RNG seed");
  sweep->add_option("--model", opts.model, "local or collapse");
  sweep->add_option("--threads", opts.threads, "Worker threads");
  sweep->add_option("--out", opts.out_path, "Output CSV file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (correlate->parsed()) {
      return run_correlate(alpha_deg, beta_deg, opts);
    }
    if (bell->parsed()) {
      return run_bell(bell_angles, bell_trials, opts);
    }
    if (simulate->parsed()) {
      return run_simulate(alpha_a_deg, beta_a_deg, alpha_b_deg, beta_b_deg,
                          compare_path, opts);
    }
    if (estimate->parsed()) {
      return run_estimate(counts_path, opts);
    }
    if (fringe->parsed()) {
      std::optional<double> which_path;
      if (which_path_opt->count() > 0) which_path = which_path_value;
      return run_fringe(idler, gamma_deg, slit_sep, wavelength, screen_scale,
                        points, span, which_path, opts);
    }
    if (sweep->parsed()) {
      return run_sweep(alpha_min, alpha_max, steps, opts);
    }
  } catch (const std::exception& e) {
    std::cerr << "bellsim: error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
