#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "wip/acceptance.hpp"
#include "wip/elastic.hpp"
#include "wip/harness.hpp"
#include "wip/io.hpp"
#include "wip/speed.hpp"

namespace wip::cli {

namespace {

using Json = nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;

enum class Format { Json, Csv };

// Thrown for bad input that is not an engine error (missing files, bad flags).
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Settings: built-in defaults, then the scenario file, then flags.

enum class Experiment { Chase, Elastic, Adjustment };

std::string_view to_string(Experiment e) {
  switch (e) {
    case Experiment::Chase: return "chase";
    case Experiment::Elastic: return "elastic";
    case Experiment::Adjustment: return "adjustment";
  }
  return "chase";
}

struct Settings {
  Experiment experiment = Experiment::Chase;
  std::vector<Variant> variants{Variant::Shef};
  std::vector<double> targets{1.5};
  double user_height = WipParams::kRefUserHeight;
  double gain = 1.0;
  std::optional<double> natural_gain;
  std::optional<ElasticRig> rig;
  std::uint64_t seed = 1;
  int runs = 1;
  double noise = 0.0;
  double jitter = 0.0;
  AgentKind agent = AgentKind::Walker;
  ChaseScenario scenario;
  AgentCaps caps;
  std::vector<Slope> slopes{Slope::Uphill, Slope::Downhill};

  double effective_natural_gain() const {
    if (natural_gain) return *natural_gain;
    return experiment == Experiment::Adjustment ? WipParams::kNaturalVisualGain : 1.0;
  }

  WipParams params(Variant variant) const {
    return WipParams(variant, user_height, gain, effective_natural_gain());
  }

  AgentConfig agent_config(int run) const {
    AgentConfig config;
    config.kind = agent;
    config.caps = caps;
    config.noise_sd = noise;
    config.cadence_jitter = jitter;
    config.seed = seed + static_cast<std::uint64_t>(run);
    return config;
  }
};

// Optional flag values; set ones override the scenario file.
struct Overrides {
  std::optional<std::string> variant;
  std::optional<double> target;
  std::optional<double> gain;
  std::optional<double> natural_gain;
  std::optional<std::string> rig;
  std::optional<std::uint64_t> seed;
  std::optional<double> timestep;
  std::optional<double> user_height;
  std::optional<int> runs;
  std::optional<double> noise;
  std::optional<double> jitter;
  std::optional<std::string> agent;
};

AgentKind parse_agent(std::string_view text) {
  if (text == "walker") return AgentKind::Walker;
  if (text == "perfect") return AgentKind::Perfect;
  throw Error(ErrorCode::ParseError, "agent must be walker or perfect, got '" +
                                         std::string(text) + "'");
}

std::string_view to_string(AgentKind kind) {
  return kind == AgentKind::Walker ? "walker" : "perfect";
}

Experiment parse_experiment(std::string_view text) {
  if (text == "chase") return Experiment::Chase;
  if (text == "elastic") return Experiment::Elastic;
  if (text == "adjustment") return Experiment::Adjustment;
  throw Error(ErrorCode::ParseError,
              "experiment must be chase, elastic or adjustment, got '" + std::string(text) + "'");
}

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in{std::string(text)};
  while (std::getline(in, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    out.push_back(item.substr(first, item.find_last_not_of(" \t") - first + 1));
  }
  return out;
}

double number_value(const KeyValue& kv) {
  const auto value = parse_double(kv.value);
  if (!value || !std::isfinite(*value)) {
    throw Error(ErrorCode::ParseError, "'" + kv.value + "' is not a number");
  }
  return *value;
}

void apply_key(Settings& s, const KeyValue& kv) {
  const std::string& k = kv.key;
  const std::string& v = kv.value;
  if (k == "experiment") {
    s.experiment = parse_experiment(v);
  } else if (k == "variant" || k == "variants") {
    s.variants.clear();
    for (const auto& item : split_list(v)) s.variants.push_back(parse_variant(item));
    if (s.variants.empty()) throw Error(ErrorCode::ParseError, "empty variant list");
  } else if (k == "target" || k == "targets") {
    auto list = parse_number_list(v);
    if (!list) throw Error(ErrorCode::ParseError, "'" + v + "' is not a list of numbers");
    s.targets = *list;
  } else if (k == "slope" || k == "slopes") {
    s.slopes.clear();
    for (const auto& item : split_list(v)) s.slopes.push_back(parse_slope(item));
    if (s.slopes.empty()) throw Error(ErrorCode::ParseError, "empty slope list");
  } else if (k == "user_height") {
    s.user_height = number_value(kv);
  } else if (k == "gain") {
    s.gain = number_value(kv);
  } else if (k == "natural_gain") {
    s.natural_gain = number_value(kv);
  } else if (k == "rig") {
    s.rig = ElasticRig::parse(v);
  } else if (k == "seed") {
    const double seed = number_value(kv);
    if (seed < 0 || seed != std::floor(seed)) {
      throw Error(ErrorCode::ParseError, "seed must be a non-negative integer");
    }
    s.seed = static_cast<std::uint64_t>(seed);
  } else if (k == "runs") {
    const double runs = number_value(kv);
    if (runs < 1 || runs != std::floor(runs)) {
      throw Error(ErrorCode::ParseError, "runs must be a positive integer");
    }
    s.runs = static_cast<int>(runs);
  } else if (k == "noise") {
    s.noise = number_value(kv);
  } else if (k == "jitter") {
    s.jitter = number_value(kv);
  } else if (k == "agent") {
    s.agent = parse_agent(v);
  } else if (k == "timestep") {
    s.scenario.timestep = number_value(kv);
  } else if (k == "prep_distance") {
    s.scenario.prep_distance = number_value(kv);
  } else if (k == "prep_duration") {
    s.scenario.prep_duration = number_value(kv);
  } else if (k == "countdown") {
    s.scenario.countdown = number_value(kv);
  } else if (k == "chase_duration") {
    s.scenario.chase_duration = number_value(kv);
  } else if (k == "circle_lead") {
    s.scenario.circle_lead = number_value(kv);
  } else if (k == "max_frequency") {
    s.caps.max_frequency = number_value(kv);
  } else if (k == "max_step_height") {
    s.caps.max_step_height = number_value(kv);
  } else if (k == "comfort_low") {
    s.caps.comfort_low = number_value(kv);
  } else if (k == "comfort_high") {
    s.caps.comfort_high = number_value(kv);
  } else {
    throw Error(ErrorCode::ParseError, "unknown key '" + k + "'");
  }
}

void load_scenario_file(Settings& s, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open scenario file '" + path + "'");
  for (const KeyValue& kv : read_key_values(in)) {
    try {
      apply_key(s, kv);
    } catch (const Error& e) {
      throw Error(e.code(), path + ": line " + std::to_string(kv.line) + ": " + e.what());
    }
  }
}

void apply_overrides(Settings& s, const Overrides& o) {
  if (o.variant) s.variants = {parse_variant(*o.variant)};
  if (o.target) s.targets = {*o.target};
  if (o.gain) s.gain = *o.gain;
  if (o.natural_gain) s.natural_gain = *o.natural_gain;
  if (o.rig) s.rig = ElasticRig::parse(*o.rig);
  if (o.seed) s.seed = *o.seed;
  if (o.timestep) s.scenario.timestep = *o.timestep;
  if (o.user_height) s.user_height = *o.user_height;
  if (o.runs) s.runs = *o.runs;
  if (o.noise) s.noise = *o.noise;
  if (o.jitter) s.jitter = *o.jitter;
  if (o.agent) s.agent = parse_agent(*o.agent);
}

void check_settings(const Settings& s) {
  for (double target : s.targets) {
    if (!(target >= 0.0)) throw Error(ErrorCode::InvalidParams, "target speed must be >= 0");
  }
  if (s.runs < 1) throw Error(ErrorCode::InvalidParams, "runs must be >= 1");
  if (!(s.noise >= 0.0) || !(s.jitter >= 0.0)) {
    throw Error(ErrorCode::InvalidParams, "noise and jitter must be >= 0");
  }
  validate(s.scenario);
  validate(s.caps);
  (void)s.params(Variant::Shef);  // validates height and gains
}

// ---------------------------------------------------------------------------
// Reports

Json metrics_json(const MetricsReport& m) {
  return Json{{"avg_step_height", m.avg_step_height},
              {"avg_step_frequency", m.avg_step_frequency},
              {"avg_target_distance", m.avg_target_distance},
              {"avg_speed", m.avg_speed},
              {"speed_sd", m.speed_sd}};
}

Json scenario_json(const Settings& s) {
  Json variants = Json::array();
  for (Variant v : s.variants) variants.push_back(to_string(v));
  Json slopes = Json::array();
  for (Slope v : s.slopes) slopes.push_back(to_string(v));
  return Json{{"experiment", to_string(s.experiment)},
              {"variants", variants},
              {"targets", s.targets},
              {"slopes", slopes},
              {"user_height", s.user_height},
              {"gain", s.gain},
              {"natural_gain", s.effective_natural_gain()},
              {"rig", s.rig ? s.rig->describe() : "none"},
              {"seed", s.seed},
              {"runs", s.runs},
              {"noise", s.noise},
              {"jitter", s.jitter},
              {"agent", to_string(s.agent)},
              {"timestep", s.scenario.timestep},
              {"prep_distance", s.scenario.prep_distance},
              {"prep_duration", s.scenario.prep_duration},
              {"countdown", s.scenario.countdown},
              {"chase_duration", s.scenario.chase_duration},
              {"circle_lead", s.scenario.circle_lead},
              {"max_frequency", s.caps.max_frequency},
              {"max_step_height", s.caps.max_step_height},
              {"comfort_low", s.caps.comfort_low},
              {"comfort_high", s.caps.comfort_high}};
}

void require_finite(const Json& j, const std::string& path) {
  if (j.is_number_float() && !std::isfinite(j.get<double>())) {
    throw Error(ErrorCode::DivergedSimulation, "non-finite value at " + path);
  }
  if (j.is_object()) {
    for (const auto& [key, value] : j.items()) require_finite(value, path + "." + key);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) {
      require_finite(j[i], path + "[" + std::to_string(i) + "]");
    }
  }
}

std::string csv_cell(const Json& value) {
  if (value.is_string()) {
    const auto text = value.get<std::string>();
    if (text.find_first_of(",\"\n") == std::string::npos) return text;
    std::string quoted = "\"";
    for (char c : text) quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
    return quoted + "\"";
  }
  if (value.is_number_float()) return format_double(value.get<double>());
  if (value.is_array()) {
    std::string joined;
    for (const auto& item : value) joined += (joined.empty() ? "" : " ") + csv_cell(item);
    return joined;
  }
  return value.dump();
}

// One CSV line per row; the first row's keys are the header.
void write_csv(std::ostream& out, const Json& rows) {
  if (rows.empty()) return;
  bool first = true;
  for (const auto& [key, value] : rows.front().items()) {
    out << (first ? "" : ",") << key;
    first = false;
  }
  out << '\n';
  for (const auto& row : rows) {
    first = true;
    for (const auto& [key, value] : row.items()) {
      out << (first ? "" : ",") << csv_cell(value);
      first = false;
    }
    out << '\n';
  }
}

struct Output {
  std::string path;  // empty: the command's output stream
  Format format = Format::Json;
};

// `csv_rows` is what a spreadsheet gets; JSON gets the whole report.
void emit(const Json& report, const Json& csv_rows, const Output& output, std::ostream& out) {
  require_finite(report, "report");
  std::ostringstream text;
  if (output.format == Format::Json) {
    text << report.dump(2) << '\n';
  } else {
    write_csv(text, csv_rows);
  }
  if (output.path.empty()) {
    out << text.str();
    return;
  }
  std::ofstream file(output.path);
  if (!file) throw InputError("cannot write '" + output.path + "'");
  file << text.str();
}

Json report_header(std::string_view command) {
  return Json{{"schema_version", kSchemaVersion}, {"command", command}};
}

// ---------------------------------------------------------------------------
// simulate

Json chase_row(std::string_view condition, Variant variant, double target, const ElasticRig& rig,
               std::uint64_t seed, int run, const MetricsReport& m) {
  Json row{{"condition", condition}, {"variant", to_string(variant)},
           {"target", target},       {"rig", rig.describe()},
           {"seed", seed},           {"run", run}};
  row.update(metrics_json(m));
  return row;
}

Json simulate_chase(const Settings& s, const std::vector<ForceCondition>& conditions) {
  struct Meta {
    std::string condition;
    Variant variant;
    double target;
    ElasticRig rig;
    int run;
  };
  std::vector<ChaseJob> jobs;
  std::vector<Meta> meta;
  for (const ForceCondition& condition : conditions) {
    for (Variant variant : s.variants) {
      for (double target : s.targets) {
        for (int run = 0; run < s.runs; ++run) {
          ChaseJob job{s.scenario, s.agent_config(run), s.params(variant), condition.rig};
          job.scenario.target_speed = target;
          jobs.push_back(job);
          meta.push_back({condition.name, variant, target, condition.rig, run});
        }
      }
    }
  }
  const auto reports = run_chase_suite(jobs);
  Json rows = Json::array();
  for (std::size_t i = 0; i < reports.size(); ++i) {
    rows.push_back(chase_row(meta[i].condition, meta[i].variant, meta[i].target, meta[i].rig,
                             jobs[i].agent.seed, meta[i].run, reports[i]));
  }
  return rows;
}

Json simulate_adjustment(const Settings& s, const std::vector<ForceCondition>& conditions) {
  Json rows = Json::array();
  for (const ForceCondition& condition : conditions) {
    for (Slope slope : s.slopes) {
      for (Variant variant : s.variants) {
        const GainStat reference = reference_gain(slope, condition.rig.direction());
        std::vector<double> gains;
        int bouts = 0;
        int run = 0;
        for (Series series : {Series::Ascending, Series::Descending}) {
          for (int rep = 0; rep < 2; ++rep, ++run) {
            const double interval =
                AdjustmentProtocol::standard(slope, series, nullptr).interval;
            const auto protocol = AdjustmentProtocol::standard(
                slope, series, band_judge(reference.mean, interval));
            const auto result = run_adjustment(protocol, s.params(variant), condition.rig,
                                               s.agent_config(run), 1.0, s.scenario.timestep);
            gains.push_back(result.gain);
            bouts += static_cast<int>(result.bouts.size());
          }
        }
        rows.push_back(Json{{"condition", condition.name},
                            {"variant", to_string(variant)},
                            {"slope", to_string(slope)},
                            {"rig", condition.rig.describe()},
                            {"gains", gains},
                            {"mean_gain", aggregate_adjustments(gains)},
                            {"reference_mean", reference.mean},
                            {"reference_sd", reference.sd},
                            {"bouts", bouts}});
      }
    }
  }
  return rows;
}

std::vector<ForceCondition> conditions_for(const Settings& s) {
  if (s.experiment == Experiment::Elastic && !s.rig) return force_conditions();
  const ElasticRig rig = s.rig.value_or(ElasticRig::none());
  return {ForceCondition{rig.describe(), rig, 0.0}};
}

int cmd_simulate(const Settings& s, const Output& output, std::ostream& out) {
  const auto conditions = conditions_for(s);
  Json rows = s.experiment == Experiment::Adjustment ? simulate_adjustment(s, conditions)
                                                     : simulate_chase(s, conditions);
  Json report = report_header("simulate");
  report["scenario"] = scenario_json(s);
  if (rows.size() == 1 && s.experiment != Experiment::Adjustment) {
    report["metrics"] = metrics_json(MetricsReport{
        rows[0]["avg_step_height"], rows[0]["avg_step_frequency"],
        rows[0]["avg_target_distance"], rows[0]["avg_speed"], rows[0]["speed_sd"]});
  }
  report["rows"] = rows;
  emit(report, rows, output, out);
  return kOk;
}

// ---------------------------------------------------------------------------
// record / replay

std::map<std::string, std::string> trace_metadata(const Settings& s, Variant variant,
                                                  double target, const ElasticRig& rig) {
  const ChaseScenario& c = s.scenario;
  return {{"experiment", "chase"},
          {"variant", std::string(to_string(variant))},
          {"target", format_double(target)},
          {"gain", format_double(s.gain)},
          {"natural_gain", format_double(s.effective_natural_gain())},
          {"rig", rig.describe()},
          {"seed", std::to_string(s.seed)},
          {"agent", std::string(to_string(s.agent))},
          {"noise", format_double(s.noise)},
          {"jitter", format_double(s.jitter)},
          {"timestep", format_double(c.timestep)},
          {"prep_distance", format_double(c.prep_distance)},
          {"prep_duration", format_double(c.prep_duration)},
          {"countdown", format_double(c.countdown)},
          {"chase_duration", format_double(c.chase_duration)},
          {"circle_lead", format_double(c.circle_lead)},
          {"prep_timeout", format_double(c.prep_timeout)},
          {"sphere_radius", format_double(c.sphere_radius)}};
}

int cmd_record(const Settings& s, const std::string& trace_path, const Output& report_output,
               std::ostream& out) {
  const Variant variant = s.variants.front();
  const double target = s.targets.front();
  const ElasticRig rig = s.rig.value_or(ElasticRig::none());
  ChaseScenario scenario = s.scenario;
  scenario.target_speed = target;
  const ChaseRun run = run_chase(scenario, s.agent_config(0), s.params(variant), rig);

  TraceFile trace;
  trace.sample_rate = 1.0 / scenario.timestep;
  trace.user_height = s.user_height;
  trace.metadata = trace_metadata(s, variant, target, rig);
  trace.samples = run.trace;
  std::ofstream file(trace_path);
  if (!file) throw InputError("cannot write '" + trace_path + "'");
  write_trace(file, trace);

  Json report = report_header("record");
  report["trace"] = trace_path;
  report["samples"] = run.trace.size();
  report["metrics"] = metrics_json(run.metrics);
  Json row = chase_row(rig.describe(), variant, target, rig, s.seed, 0, run.metrics);
  emit(report, Json::array({row}), report_output, out);
  return kOk;
}

std::optional<double> meta_number(const TraceFile& trace, const std::string& key) {
  const auto it = trace.metadata.find(key);
  if (it == trace.metadata.end()) return std::nullopt;
  const auto value = parse_double(it->second);
  if (!value) {
    throw Error(ErrorCode::ParseError, "trace header '" + key + "' is not a number");
  }
  return value;
}

int cmd_replay(const std::string& trace_path, const Overrides& o, const Output& output,
               std::ostream& out) {
  std::ifstream file(trace_path);
  if (!file) throw InputError("cannot open trace '" + trace_path + "'");
  TraceFile trace;
  try {
    trace = read_trace(file);
  } catch (const Error& e) {
    throw Error(e.code(), trace_path + ": " + e.what());
  }

  WipParams params;
  if (const auto it = trace.metadata.find("variant"); it != trace.metadata.end()) {
    params.set_variant(parse_variant(it->second));
  }
  if (trace.user_height) params.set_user_height(*trace.user_height);
  if (const auto g = meta_number(trace, "gain")) params.set_speed_gain(*g);
  if (const auto n = meta_number(trace, "natural_gain")) params.set_natural_visual_gain(*n);
  if (o.variant) params.set_variant(parse_variant(*o.variant));
  if (o.user_height) params.set_user_height(*o.user_height);
  if (o.gain) params.set_speed_gain(*o.gain);
  if (o.natural_gain) params.set_natural_visual_gain(*o.natural_gain);

  ChaseRun run;
  const auto target = o.target ? o.target : meta_number(trace, "target");
  if (target) {
    ChaseScenario scenario;
    scenario.target_speed = *target;
    const std::pair<const char*, double*> fields[] = {
        {"timestep", &scenario.timestep},
        {"prep_distance", &scenario.prep_distance},
        {"prep_duration", &scenario.prep_duration},
        {"countdown", &scenario.countdown},
        {"chase_duration", &scenario.chase_duration},
        {"circle_lead", &scenario.circle_lead},
        {"prep_timeout", &scenario.prep_timeout},
        {"sphere_radius", &scenario.sphere_radius}};
    for (const auto& [key, slot] : fields) {
      if (const auto value = meta_number(trace, key)) *slot = *value;
    }
    if (o.timestep) scenario.timestep = *o.timestep;
    run = replay_chase(scenario, params, trace.samples);
  } else {
    run = replay_free(params, trace.samples);
  }

  Json series = Json::array();
  for (const Frame& f : run.log.frames) {
    if (!f.in_window()) continue;
    series.push_back(Json{{"time", f.time},
                          {"raw_speed", f.raw_speed},
                          {"output_speed", f.output_speed},
                          {"step_frequency", f.step_frequency},
                          {"step_height", f.step_height},
                          {"stale", f.stale}});
  }
  Json report = report_header("replay");
  report["trace"] = trace_path;
  report["mode"] = target ? "chase" : "free";
  report["variant"] = to_string(params.variant());
  report["user_height"] = params.user_height();
  report["samples"] = trace.samples.size();
  report["metrics"] = metrics_json(run.metrics);
  report["steps"] = run.log.steps.size();
  report["speed_series"] = series;
  emit(report, series, output, out);
  return kOk;
}

// ---------------------------------------------------------------------------
// calibrate-bands / acceptance

int cmd_calibrate(const std::string& direction_text, const std::vector<double>& forces,
                  const Output& output, std::ostream& out) {
  const BandDirection direction = parse_direction(direction_text);
  if (direction == BandDirection::None) {
    throw Error(ErrorCode::InvalidDirection, "direction must be up or down");
  }
  Json rows = Json::array();
  for (const BandCalibration& c : calibrate_bands(direction, forces)) {
    rows.push_back(Json{{"direction", to_string(direction)},
                        {"target_kgf", c.target_kgf},
                        {"foot_height", c.foot_height},
                        {"bands", c.bands},
                        {"achieved_kgf", c.achieved_kgf}});
  }
  Json report = report_header("calibrate-bands");
  report["rows"] = rows;
  emit(report, rows, output, out);
  return kOk;
}

AcceptanceOptions load_acceptance_config(const std::string& path, std::ostream& err) {
  AcceptanceOptions options;
  if (path.empty()) return options;
  std::ifstream in(path);
  if (!in) {
    err << "note: config '" << path << "' not found; using built-in defaults\n";
    return options;
  }
  for (const KeyValue& kv : read_key_values(in)) {
    const auto value = parse_double(kv.value);
    const auto fail = [&](const std::string& what) {
      throw Error(ErrorCode::ParseError, path + ": line " + std::to_string(kv.line) + ": " + what);
    };
    if (!value || *value < 0 || *value != std::floor(*value)) {
      fail("'" + kv.value + "' is not a non-negative integer");
    }
    if (kv.key == "seed") {
      options.seed = static_cast<std::uint64_t>(*value);
    } else if (kv.key == "stability_runs") {
      options.stability_runs = static_cast<int>(*value);
    } else if (kv.key == "oracle_traces") {
      options.oracle_traces = static_cast<int>(*value);
    } else {
      fail("unknown key '" + kv.key + "'");
    }
  }
  return options;
}

int cmd_acceptance(AcceptanceOptions options, const Output& output, std::ostream& out) {
  const auto results = run_acceptance(options);
  int failed = 0;
  Json rows = Json::array();
  for (const CriterionResult& r : results) {
    if (!r.passed) ++failed;
    rows.push_back(Json{{"id", r.id},
                        {"passed", r.passed},
                        {"seconds", r.seconds},
                        {"detail", r.detail}});
  }
  if (output.path.empty() && output.format == Format::Json) {
    // Human-readable summary on the terminal.
    for (const CriterionResult& r : results) {
      out << (r.passed ? "PASS " : "FAIL ") << r.id << ": " << r.detail << '\n';
    }
    out << results.size() - failed << "/" << results.size() << " criteria passed\n";
  } else {
    Json report = report_header("acceptance");
    report["seed"] = options.seed;
    report["passed"] = failed == 0;
    report["criteria"] = rows;
    emit(report, rows, output, out);
  }
  return failed == 0 ? kOk : kAcceptanceFailed;
}

// ---------------------------------------------------------------------------

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::DivergedSimulation:
    case ErrorCode::EmptyWindow:
    case ErrorCode::NonTermination:
      return kRuntimeError;
    default:
      return kInputError;
  }
}

template <typename T>
void add_override(CLI::App* app, const std::string& name, std::optional<T>& slot,
                  const std::string& help) {
  app->add_option_function<T>(name, [&slot](const T& v) { slot = v; }, help);
}

void add_param_flags(CLI::App* app, Overrides& o) {
  add_override(app, "--variant", o.variant, "gud or shef");
  add_override(app, "--gain", o.gain, "speed gain g");
  add_override(app, "--natural-gain", o.natural_gain, "natural visual gain");
  add_override(app, "--user-height", o.user_height, "user height H in m");
  add_override(app, "--target", o.target, "target speed in m/s");
  add_override(app, "--timestep", o.timestep, "simulation timestep in s");
}

void add_sim_flags(CLI::App* app, Overrides& o, std::string& scenario_path) {
  app->add_option("--scenario", scenario_path, "scenario definition file (key = value)");
  add_param_flags(app, o);
  add_override(app, "--rig", o.rig, "none, up:<bands> or down:<bands>");
  add_override(app, "--seed", o.seed, "base seed; run i uses seed + i");
  add_override(app, "--runs", o.runs, "seeded runs per condition");
  add_override(app, "--noise", o.noise, "foot height noise SD in m");
  add_override(app, "--jitter", o.jitter, "relative cadence jitter at max cadence");
  add_override(app, "--agent", o.agent, "walker or perfect");
}

void add_format(CLI::App* app, Format& format) {
  app->add_option("--format", format, "report format")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, Format>{{"json", Format::Json}, {"csv", Format::Csv}}));
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Walking-in-place speed engine: simulation, trace replay and checks", "wip"};
  app.require_subcommand(1);

  Overrides overrides;
  std::string scenario_path;
  Output output;
  std::string trace_path;
  std::string direction;
  std::vector<double> forces;
  std::string config_path;
  double perturb_anchor = 0.0;

  auto* simulate = app.add_subcommand("simulate", "run a scenario and write a report");
  add_sim_flags(simulate, overrides, scenario_path);
  simulate->add_option("--out", output.path, "report path (default stdout)");
  add_format(simulate, output.format);

  Output record_report;
  auto* record = app.add_subcommand("record", "run one chase and save the foot trace");
  add_sim_flags(record, overrides, scenario_path);
  record->add_option("--out", trace_path, "trace path")->required();
  record->add_option("--report", record_report.path, "report path (default stdout)");
  add_format(record, record_report.format);

  auto* replay = app.add_subcommand("replay", "feed a recorded trace through the engine");
  replay->add_option("trace", trace_path, "trace file")->required();
  add_param_flags(replay, overrides);
  replay->add_option("--out", output.path, "report path (default stdout)");
  add_format(replay, output.format);

  auto* calibrate = app.add_subcommand("calibrate-bands", "band counts for target forces");
  calibrate->add_option("direction", direction, "up or down")->required();
  calibrate->add_option("forces", forces, "target forces in kgf")->required();
  calibrate->add_option("--out", output.path, "report path (default stdout)");
  add_format(calibrate, output.format);

  auto* acceptance = app.add_subcommand("acceptance", "run the acceptance suite");
  acceptance->add_option("--config", config_path, "key = value file: seed, stability_runs, oracle_traces");
  std::optional<std::uint64_t> acceptance_seed;
  add_override(acceptance, "--seed", acceptance_seed, "seed for randomized criteria");
  acceptance->add_option("--perturb-cadence-anchor", perturb_anchor)->group("");
  acceptance->add_option("--out", output.path, "report path (default: summary on stdout)");
  add_format(acceptance, output.format);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream help, diag;
    const int code = app.exit(e, help, diag);
    out << help.str();
    err << diag.str();
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*simulate || *record) {
      Settings settings;
      if (!scenario_path.empty()) load_scenario_file(settings, scenario_path);
      apply_overrides(settings, overrides);
      check_settings(settings);
      return *simulate ? cmd_simulate(settings, output, out)
                       : cmd_record(settings, trace_path, record_report, out);
    }
    if (*replay) return cmd_replay(trace_path, overrides, output, out);
    if (*calibrate) return cmd_calibrate(direction, forces, output, out);
    AcceptanceOptions options = load_acceptance_config(config_path, err);
    if (acceptance_seed) options.seed = *acceptance_seed;
    options.anchor_perturbation = perturb_anchor;
    const int code = cmd_acceptance(options, output, out);
    if (code != kOk) err << "acceptance failed\n";
    return code;
  } catch (const Error& e) {
    err << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
}

}  // namespace wip::cli
