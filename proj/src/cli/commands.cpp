#include "fbt/cli/commands.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "fbt/batch.hpp"
#include "fbt/cli/report.hpp"
#include "fbt/cli/service.hpp"
#include "fbt/geometry.hpp"
#include "fbt/layout.hpp"
#include "fbt/phrases.hpp"
#include "fbt/session.hpp"
#include "httplib.h"
#include "json.hpp"

namespace fbt::cli {

namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

// Missing files, malformed documents and failed validation map to exit 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << content;
}

MethodKind require_method(const std::string& name) {
  auto m = parse_method(name);
  if (!m) {
    throw DataError("unknown method \"" + name +
                    "\" (expected single_digit_fdi, double_digit_fdi or fti)");
  }
  return *m;
}

// A builtin method name or a layout file.
Layout resolve_layout(const std::string& spec) {
  if (auto m = parse_method(spec)) return builtin_layout(*m);
  return load_layout(read_file(spec));
}

CalibrationInput resolve_calibration(const SessionHeader& header,
                                     const fs::path& log_path,
                                     const std::string& profile_arg) {
  if (!profile_arg.empty()) return parse_calibration(read_file(profile_arg));
  if (const auto* in = std::get_if<CalibrationInput>(&header.calibration)) {
    return *in;
  }
  if (const auto* ref = std::get_if<CalibrationRef>(&header.calibration)) {
    fs::path p = ref->path;
    if (p.is_relative()) p = log_path.parent_path() / p;
    return parse_calibration(read_file(p));
  }
  return {default_fingertips(), GeometryParams{}};
}

std::vector<fs::path> expand_logs(const std::vector<std::string>& inputs) {
  std::vector<fs::path> out;
  for (const auto& in : inputs) {
    const fs::path p = in;
    if (fs::is_directory(p)) {
      std::vector<fs::path> found;
      for (const auto& entry : fs::directory_iterator(p)) {
        if (entry.is_regular_file() && entry.path().extension() == ".jsonl") {
          found.push_back(entry.path());
        }
      }
      std::sort(found.begin(), found.end());
      out.insert(out.end(), found.begin(), found.end());
    } else {
      out.push_back(p);
    }
  }
  return out;
}

ordered_json feedback_json(const std::vector<FeedbackEvent>& events) {
  ordered_json arr = ordered_json::array();
  for (const auto& e : events) {
    arr.push_back({{"kind", feedback_kind_name(e.kind)}, {"utterance", e.utterance}});
  }
  return arr;
}

// ---------------------------------------------------------------------------

int cmd_layout_validate(const std::string& file, std::ostream& out) {
  const std::string text = read_file(file);
  ordered_json j;
  try {
    const Layout layout = load_layout(text);
    j["ok"] = true;
    j["method"] = method_name(layout.method());
    j["id"] = layout.id();
    j["violations"] = ordered_json::array();
    out << j.dump() << '\n';
    return kExitOk;
  } catch (const LayoutValidationError& e) {
    j["ok"] = false;
    ordered_json v = ordered_json::array();
    for (const auto& x : e.violations()) v.push_back({{"region", x.slot}, {"rule", x.rule}});
    j["violations"] = std::move(v);
    out << j.dump() << '\n';
    return kExitData;
  }
}

int cmd_calibrate(const std::string& input, const std::string& output,
                  const std::string& layout_spec, std::ostream& out) {
  const CalibrationInput in = parse_calibration(read_file(input));
  const Layout layout = resolve_layout(layout_spec);
  const CalibrationProfile profile =
      derive_anchors(in.fingertips, in.params, layout);
  const std::string doc = serialize_profile(profile);
  if (output.empty() || output == "-") {
    out << doc;
  } else {
    write_file(output, doc);
    out << ordered_json{{"profile", output}, {"anchors", profile.anchors().size()}}.dump()
        << '\n';
  }
  return kExitOk;
}

struct SimulateArgs {
  std::string method;
  std::string phrases;
  std::size_t count = 8;
  std::string latency = "fixed:1000";
  std::uint64_t seed = 1;
  std::string out_dir;
  std::string layout;
  std::string calibration;
  bool touch = false;
  std::string participant;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  const MethodKind method = require_method(a.method);
  const Layout layout = a.layout.empty() ? builtin_layout(method) : resolve_layout(a.layout);
  if (layout.method() != method) throw DataError("layout method does not match --method");
  const CalibrationInput cal = a.calibration.empty()
                                   ? CalibrationInput{default_fingertips(), GeometryParams{}}
                                   : parse_calibration(read_file(a.calibration));
  const CalibrationProfile profile = derive_anchors(cal.fingertips, cal.params, layout);
  const std::vector<std::string> phrases =
      a.phrases.empty() ? generate_phrases(method, a.count, a.seed)
                        : parse_phrase_set(read_file(a.phrases));
  if (phrases.empty()) throw DataError("no phrases to simulate");

  fs::create_directories(a.out_dir);
  ordered_json files = ordered_json::array();
  for (std::size_t i = 0; i < phrases.size(); ++i) {
    // Per-trial seed keeps each log reproducible on its own.
    const LatencyModel lat = parse_latency(a.latency, a.seed * 1000003ULL + i);
    SynthesisOptions opts;
    opts.touch_payloads = a.touch;
    if (!a.participant.empty()) opts.participant_id = a.participant;
    const SessionLog log = synthesize_session(phrases[i], layout, profile, lat, opts);
    std::ostringstream name;
    name << method_name(method) << '-' << std::setw(4) << std::setfill('0') << i
         << ".jsonl";
    const fs::path path = fs::path(a.out_dir) / name.str();
    write_file(path, serialize_session_log(log));
    files.push_back(path.string());
  }
  out << ordered_json{{"method", method_name(method)},
                      {"written", phrases.size()},
                      {"files", files}}
             .dump()
      << '\n';
  return kExitOk;
}

int cmd_replay(const std::string& log_path, const std::string& layout_spec,
               const std::string& profile_arg, bool pretty, bool with_trace,
               std::ostream& out) {
  const SessionLog log = parse_session_log(read_file(log_path));
  const Layout layout = layout_spec.empty() ? builtin_layout(log.header.method)
                                            : resolve_layout(layout_spec);
  const CalibrationInput cal = resolve_calibration(log.header, log_path, profile_arg);
  const CalibrationProfile profile = derive_anchors(cal.fingertips, cal.params, layout);
  const ReplayResult result = replay_session(log, layout, profile);

  ordered_json j;
  j["transcript"] = result.transcript;
  j["prescribed"] = result.record.prescribed;
  j["terminated"] = result.terminated;
  j["skipped"] = result.skipped;
  ordered_json notes = ordered_json::array();
  for (const auto& t : result.trace) {
    if (!t.note.empty()) notes.push_back({{"event", t.event_index}, {"note", t.note}});
  }
  j["notes"] = std::move(notes);
  if (with_trace) {
    ordered_json trace = ordered_json::array();
    for (const auto& t : result.trace) {
      trace.push_back({{"t", t.t_ms},
                       {"region", t.slot ? ordered_json(*t.slot) : ordered_json(nullptr)},
                       {"feedback", feedback_json(t.feedback)}});
    }
    j["trace"] = std::move(trace);
  }
  int code = kExitOk;
  try {
    const MetricsReport m = trial_metrics(result.record);
    j["metrics"] = ordered_json::parse(metrics_to_json(m));
  } catch (const MetricsError& e) {
    j["metrics"] = nullptr;
    j["metrics_error"] = e.what();
    code = kExitData;
  }

  if (pretty) {
    out << "transcript  " << result.transcript << '\n'
        << "prescribed  " << result.record.prescribed << '\n';
    for (const auto& t : result.trace) {
      out << std::setw(8) << t.t_ms << "  " << std::left << std::setw(14)
          << t.slot.value_or("-") << std::right;
      for (const auto& f : t.feedback) {
        out << " [" << feedback_kind_name(f.kind) << ": " << f.utterance << "]";
      }
      if (!t.note.empty()) out << " (" << t.note << ")";
      out << '\n';
    }
    if (!j["metrics"].is_null()) {
      const auto& m = j["metrics"];
      out << std::fixed << std::setprecision(4) << "wpm " << m["wpm"].get<double>()
          << "  duration_s " << m["duration_s"].get<double>() << "  msd "
          << m["msd"].get<int>() << "  corrections " << m["corrections"].get<int>()
          << "  kspc " << m["kspc"].get<double>() << '\n';
    }
  } else {
    out << j.dump() << '\n';
  }
  return code;
}

struct CompareArgs {
  std::vector<std::string> logs;
  std::string group_by = "method";
  double threshold = 0.90;
  std::vector<std::string> layouts;
  bool pretty = false;
};

int cmd_compare(const CompareArgs& a, std::ostream& out) {
  if (a.group_by != "method" && a.group_by != "participant") {
    throw DataError("--group-by must be method or participant");
  }
  std::map<MethodKind, Layout> layouts;
  for (auto m : kAllMethods) layouts.emplace(m, builtin_layout(m));
  for (const auto& spec : a.layouts) {
    Layout l = resolve_layout(spec);
    layouts.insert_or_assign(l.method(), std::move(l));
  }

  const auto paths = expand_logs(a.logs);
  if (paths.empty()) throw DataError("no session logs given");
  std::vector<SessionLog> logs;
  std::vector<CalibrationProfile> profiles;
  logs.reserve(paths.size());
  profiles.reserve(paths.size());
  for (const auto& p : paths) {
    logs.push_back(parse_session_log(read_file(p)));
    const Layout& layout = layouts.at(logs.back().header.method);
    const auto cal = resolve_calibration(logs.back().header, p, "");
    profiles.push_back(derive_anchors(cal.fingertips, cal.params, layout));
  }
  std::vector<batch::Job> jobs;
  jobs.reserve(logs.size());
  for (std::size_t i = 0; i < logs.size(); ++i) {
    jobs.push_back({&logs[i], &layouts.at(logs[i].header.method), &profiles[i]});
  }
  const auto outcomes = batch::replay_jobs_parallel(jobs);

  std::map<std::string, std::vector<MetricsReport>> groups;
  ordered_json failures = ordered_json::array();
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (!outcomes[i].metrics) {
      failures.push_back({{"log", paths[i].string()}, {"error", outcomes[i].error}});
      continue;
    }
    const std::string key =
        a.group_by == "method"
            ? std::string(method_name(logs[i].header.method))
            : logs[i].header.participant_id.value_or("(none)");
    groups[key].push_back(*outcomes[i].metrics);
  }

  ComparisonOptions opts;
  opts.group_by = a.group_by;
  opts.normality_threshold = a.threshold;
  ordered_json report = comparison_report(groups, opts);
  report["failures"] = std::move(failures);
  if (a.pretty) {
    out << comparison_table(report);
  } else {
    out << report.dump() << '\n';
  }
  return report["failures"].empty() ? kExitOk : kExitData;
}

int cmd_serve(const std::string& host, int port, std::ostream& err) {
  SessionService service;
  httplib::Server server;
  mount_routes(server, service);
  err << "serving on http://" << host << ':' << port << "/v1\n";
  if (!server.listen(host, port)) {
    throw DataError("cannot listen on " + host + ":" + std::to_string(port));
  }
  return kExitOk;
}

}  // namespace

int execute(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Finger-anchored non-visual text entry: layouts, simulation, "
               "replay and analysis",
               "fbt"};
  app.require_subcommand(1);

  auto* layout_cmd = app.add_subcommand("layout", "Layout files");
  layout_cmd->require_subcommand(1);
  std::string layout_file;
  auto* validate_cmd = layout_cmd->add_subcommand("validate", "Validate a layout file");
  validate_cmd->add_option("file", layout_file, "Layout JSON")->required();
  std::string show_method;
  auto* show_cmd = layout_cmd->add_subcommand("show", "Print a builtin layout");
  show_cmd->add_option("method", show_method, "single_digit_fdi | double_digit_fdi | fti")
      ->required();

  std::string cal_in;
  std::string cal_out;
  std::string cal_layout = "single_digit_fdi";
  auto* calibrate_cmd =
      app.add_subcommand("calibrate", "Derive region anchors from fingertips");
  calibrate_cmd->add_option("fingertips", cal_in, "Calibration JSON")->required();
  calibrate_cmd->add_option("-o,--output", cal_out, "Profile output file");
  calibrate_cmd->add_option("--layout", cal_layout,
                            "Builtin method or layout file supplying synthetic anchors");

  SimulateArgs sim;
  auto* simulate_cmd = app.add_subcommand("simulate", "Synthesize session logs");
  simulate_cmd->add_option("--method", sim.method, "Entry method")->required();
  simulate_cmd->add_option("--phrases", sim.phrases, "Phrase file, one per line");
  simulate_cmd->add_option("--count", sim.count, "Generated phrases when --phrases is absent");
  simulate_cmd->add_option("--latency", sim.latency, "fixed:MS or uniform:LO:HI");
  simulate_cmd->add_option("--seed", sim.seed, "Random seed");
  simulate_cmd->add_option("-o,--output", sim.out_dir, "Output directory")->required();
  simulate_cmd->add_option("--layout", sim.layout, "Layout file");
  simulate_cmd->add_option("--calibration", sim.calibration, "Calibration JSON");
  simulate_cmd->add_flag("--touch", sim.touch, "Record anchor touches instead of region names");
  simulate_cmd->add_option("--participant", sim.participant, "Participant id for headers");

  std::string replay_log;
  std::string replay_layout;
  std::string replay_profile;
  bool replay_pretty = false;
  bool replay_trace = false;
  auto* replay_cmd = app.add_subcommand("replay", "Replay one session log");
  replay_cmd->add_option("log", replay_log, "Session log (JSON Lines)")->required();
  replay_cmd->add_option("--layout", replay_layout, "Builtin method or layout file");
  replay_cmd->add_option("--profile", replay_profile, "Calibration or profile JSON");
  replay_cmd->add_flag("--pretty", replay_pretty, "Human-readable output");
  replay_cmd->add_flag("--trace", replay_trace, "Include the per-event feedback trace");

  CompareArgs cmp;
  auto* compare_cmd = app.add_subcommand("compare", "Compare methods across logs");
  compare_cmd->add_option("logs", cmp.logs, "Session logs or directories")->required();
  compare_cmd->add_option("--group-by", cmp.group_by, "method | participant");
  compare_cmd->add_option("--threshold", cmp.threshold, "Shapiro-Wilk W normality gate");
  compare_cmd->add_option("--layout", cmp.layouts, "Layout file overriding a builtin");
  compare_cmd->add_flag("--pretty", cmp.pretty, "Human-readable table");

  std::string host = "127.0.0.1";
  int port = 8080;
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP session service");
  serve_cmd->add_option("--port", port, "TCP port");
  serve_cmd->add_option("--host", host, "Bind address");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*layout_cmd) {
      if (*validate_cmd) return cmd_layout_validate(layout_file, out);
      out << serialize_layout(builtin_layout(require_method(show_method)));
      return kExitOk;
    }
    if (*calibrate_cmd) return cmd_calibrate(cal_in, cal_out, cal_layout, out);
    if (*simulate_cmd) return cmd_simulate(sim, out);
    if (*replay_cmd) {
      return cmd_replay(replay_log, replay_layout, replay_profile, replay_pretty,
                        replay_trace, out);
    }
    if (*compare_cmd) return cmd_compare(cmp, out);
    if (*serve_cmd) return cmd_serve(host, port, err);
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const LayoutValidationError& e) {
    err << "error: " << e.what();
    return kExitData;
  } catch (const std::runtime_error& e) {
    // parse, geometry, session and metrics failures
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace fbt::cli
