#include "fbt/cli/report.hpp"

#include <cmath>
#include <functional>
#include <iomanip>
#include <numeric>
#include <sstream>

namespace fbt::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

struct MetricSpec {
  const char* name;
  std::function<double(const MetricsReport&)> get;
};

const std::vector<MetricSpec>& tested_metrics() {
  static const std::vector<MetricSpec> specs = {
      {"wpm", [](const MetricsReport& m) { return m.wpm; }},
      {"duration_s", [](const MetricsReport& m) { return m.duration_s; }},
      {"errors",
       [](const MetricsReport& m) {
         return static_cast<double>(m.msd + m.corrections);
       }},
  };
  return specs;
}

ordered_json summary_json(const std::vector<double>& v) {
  const Summary s = summarize(v);
  ordered_json j;
  j["mean"] = s.mean;
  j["sd"] = s.sd ? ordered_json(*s.sd) : ordered_json(nullptr);
  return j;
}

ordered_json result_json(const stats::TestResult& r) {
  return ordered_json::parse(stats::to_json(r));
}

}  // namespace

Summary summarize(const std::vector<double>& values) {
  Summary s;
  if (values.empty()) return s;
  const double n = static_cast<double>(values.size());
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() >= 2) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.sd = std::sqrt(ss / (n - 1.0));
  }
  return s;
}

ordered_json comparison_report(
    const std::map<std::string, std::vector<MetricsReport>>& groups,
    const ComparisonOptions& options) {
  ordered_json report;
  report["group_by"] = options.group_by;

  auto column = [&](const std::vector<MetricsReport>& rows,
                    const std::function<double(const MetricsReport&)>& get) {
    std::vector<double> v;
    v.reserve(rows.size());
    for (const auto& r : rows) v.push_back(get(r));
    return v;
  };

  ordered_json group_rows = ordered_json::array();
  for (const auto& [name, rows] : groups) {
    ordered_json g;
    g["name"] = name;
    g["n"] = rows.size();
    g["wpm"] = summary_json(column(rows, [](auto& m) { return m.wpm; }));
    g["duration_s"] = summary_json(column(rows, [](auto& m) { return m.duration_s; }));
    g["errors"] = summary_json(column(
        rows, [](auto& m) { return static_cast<double>(m.msd + m.corrections); }));
    g["msd"] = summary_json(
        column(rows, [](auto& m) { return static_cast<double>(m.msd); }));
    g["corrections"] = summary_json(
        column(rows, [](auto& m) { return static_cast<double>(m.corrections); }));
    g["kspc"] = summary_json(column(rows, [](auto& m) { return m.kspc; }));
    group_rows.push_back(std::move(g));
  }
  report["groups"] = std::move(group_rows);

  std::ostringstream rule;
  rule << "anova when every group has Shapiro-Wilk W >= "
       << options.normality_threshold
       << ", otherwise pairwise mann_whitney; W unavailable counts as non-normal";
  ordered_json st;
  st["selection_rule"] = rule.str();
  st["normality_threshold"] = options.normality_threshold;
  ordered_json metrics = ordered_json::array();

  for (const auto& spec : tested_metrics()) {
    ordered_json m;
    m["metric"] = spec.name;
    std::vector<std::string> names;
    std::vector<std::vector<double>> samples;
    for (const auto& [name, rows] : groups) {
      names.push_back(name);
      samples.push_back(column(rows, spec.get));
    }

    bool all_normal = true;
    ordered_json normality = ordered_json::array();
    for (std::size_t i = 0; i < samples.size(); ++i) {
      ordered_json n;
      n["group"] = names[i];
      try {
        const auto w = stats::shapiro_wilk(samples[i]);
        n["W"] = w.value;
        if (w.value < options.normality_threshold) all_normal = false;
      } catch (const stats::StatsError& e) {
        n["W"] = nullptr;
        n["note"] = e.what();
        all_normal = false;
      }
      normality.push_back(std::move(n));
    }
    m["normality"] = std::move(normality);

    ordered_json results = ordered_json::array();
    if (samples.size() < 2) {
      m["test"] = "none";
    } else if (all_normal) {
      m["test"] = "anova";
      ordered_json r;
      r["groups"] = names;
      try {
        r["result"] = result_json(stats::anova_oneway(samples));
      } catch (const stats::StatsError& e) {
        r["result"] = nullptr;
        r["error"] = e.what();
      }
      results.push_back(std::move(r));
    } else {
      m["test"] = "mann_whitney";
      for (std::size_t i = 0; i < samples.size(); ++i) {
        for (std::size_t j = i + 1; j < samples.size(); ++j) {
          ordered_json r;
          r["groups"] = {names[i], names[j]};
          try {
            r["result"] = result_json(stats::mann_whitney(samples[i], samples[j]));
          } catch (const stats::StatsError& e) {
            r["result"] = nullptr;
            r["error"] = e.what();
          }
          results.push_back(std::move(r));
        }
      }
    }
    m["results"] = std::move(results);
    metrics.push_back(std::move(m));
  }
  st["metrics"] = std::move(metrics);
  report["stats"] = std::move(st);
  return report;
}

std::string comparison_table(const ordered_json& report) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(3);
  auto cell = [&](const ordered_json& s) {
    std::ostringstream c;
    c << std::fixed << std::setprecision(3) << s["mean"].get<double>();
    if (!s["sd"].is_null()) c << " (" << s["sd"].get<double>() << ")";
    return c.str();
  };
  os << std::left << std::setw(20) << "group" << std::setw(6) << "n"
     << std::setw(22) << "wpm mean (sd)" << std::setw(22) << "duration s"
     << std::setw(18) << "errors" << "kspc\n";
  for (const auto& g : report["groups"]) {
    os << std::left << std::setw(20) << g["name"].get<std::string>()
       << std::setw(6) << g["n"].get<std::size_t>() << std::setw(22)
       << cell(g["wpm"]) << std::setw(22) << cell(g["duration_s"])
       << std::setw(18) << cell(g["errors"]) << cell(g["kspc"]) << '\n';
  }
  os << '\n' << report["stats"]["selection_rule"].get<std::string>() << '\n';
  for (const auto& m : report["stats"]["metrics"]) {
    os << "  " << std::setw(12) << m["metric"].get<std::string>()
       << m["test"].get<std::string>();
    for (const auto& r : m["results"]) {
      if (r["result"].is_null()) {
        os << "  [" << r["error"].get<std::string>() << "]";
        continue;
      }
      const auto& res = r["result"];
      os << "  " << res["statistic"].get<std::string>() << "="
         << res["value"].get<double>();
      if (!res["p_value"].is_null()) os << " p=" << res["p_value"].get<double>();
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace fbt::cli
