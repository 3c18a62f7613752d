// edgesim: deterministic edge-vs-centralized reservation system simulator.
//
//   edgesim validate --config scenario.json
//   edgesim run      --config scenario.json --out results/ [--seed N] [--arch A] [--trace]
//   edgesim compare  baseline.report.txt edge.report.txt [--out results/]
//   edgesim sweep    --config scenario.json --param workload.base_rate_per_s \
//                    --values 400,800,1600 --out results/ [--jobs N]

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <vector>

#include "edgesim/config.hpp"
#include "edgesim/report_io.hpp"
#include "edgesim/runner.hpp"

namespace fs = std::filesystem;
using namespace edgesim;

namespace {

void print_diagnostics(const std::vector<Diagnostic>& diags) {
  for (const auto& d : diags) std::cerr << "  " << d.path << ": " << d.message << "\n";
}

std::optional<ScenarioConfig> load_checked(const std::string& path) {
  auto res = load_scenario_file(path);
  if (!res.ok()) {
    std::cerr << "invalid scenario " << path << ":\n";
    print_diagnostics(res.diagnostics);
    return std::nullopt;
  }
  return res.config;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + p.string());
}

int run_command(const std::string& config_path, const std::string& out_dir,
                std::optional<std::uint64_t> seed, const std::string& arch_flag, bool trace) {
  auto cfg = load_checked(config_path);
  if (!cfg) return 2;
  if (seed) cfg->seed = *seed;

  Architecture arch = cfg->architecture;
  if (!arch_flag.empty()) {
    auto a = architecture_from(arch_flag);
    if (!a) {
      std::cerr << "--arch must be edge|centralized|both\n";
      return 2;
    }
    arch = *a;
  }

  fs::create_directories(out_dir);
  std::vector<Architecture> to_run;
  if (arch == Architecture::BOTH) {
    to_run = {Architecture::CENTRALIZED, Architecture::EDGE};
  } else {
    to_run = {arch};
  }

  RunOptions opts;
  opts.trace = trace;

  std::vector<ScenarioReport> reports;
  bool violations = false;
  for (Architecture a : to_run) {
    RunOutput out = run_scenario(*cfg, a, opts);
    const std::string arch_name(to_string(a));
    const fs::path report_path = fs::path(out_dir) / (cfg->name + "." + arch_name + ".report.txt");
    write_file(report_path, report_to_text(out.report));
    std::cout << "wrote " << report_path.string() << "\n";
    if (trace) {
      const fs::path trace_path = fs::path(out_dir) / (cfg->name + "." + arch_name + ".trace.txt");
      write_file(trace_path, out.trace_text);
      std::cout << "wrote " << trace_path.string() << "\n";
    }
    if (!out.audit_violations.empty()) {
      violations = true;
      std::cerr << "invariant violations in the " << arch_name << " run:\n";
      for (const auto& v : out.audit_violations) std::cerr << "  " << v << "\n";
      std::cerr << (trace ? "  see the trace file above\n"
                          : "  rerun with --trace for the event trace\n");
    }
    reports.push_back(std::move(out.report));
  }

  const fs::path csv_path = fs::path(out_dir) / (cfg->name + ".metrics.csv");
  write_file(csv_path, reports_to_csv(reports));
  std::cout << "wrote " << csv_path.string() << "\n";

  if (reports.size() == 2) {
    const auto cmp = compare_reports(reports[0], reports[1]);
    const fs::path cmp_path = fs::path(out_dir) / (cfg->name + ".compare.txt");
    write_file(cmp_path, comparison_to_text(cmp));
    std::cout << "wrote " << cmp_path.string() << "\n";
    std::printf("latency reduction: %.1f%%  throughput gain: %.1f%%", cmp.latency_reduction_pct,
                cmp.throughput_gain_pct);
    if (cmp.satisfaction_gain_pct) {
      std::printf("  satisfaction gain: %.1f%%\n", *cmp.satisfaction_gain_pct);
    } else {
      std::printf("  satisfaction gain: absent\n");
    }
  }
  return violations ? 1 : 0;
}

int compare_command(const std::string& base_path, const std::string& edge_path,
                    const std::string& out_dir) {
  auto read = [](const std::string& p) -> std::optional<ScenarioReport> {
    std::ifstream in(p, std::ios::binary);
    if (!in) {
      std::cerr << "cannot open " << p << "\n";
      return std::nullopt;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    std::string err;
    auto rep = report_from_text(ss.str(), &err);
    if (!rep) std::cerr << p << ": " << err << "\n";
    return rep;
  };
  auto base = read(base_path);
  auto edge = read(edge_path);
  if (!base || !edge) return 2;
  ComparisonReport cmp;
  try {
    cmp = compare_reports(*base, *edge);
  } catch (const std::invalid_argument& e) {
    std::cerr << "refusing to compare: " << e.what() << "\n";
    return 2;
  }
  const std::string text = comparison_to_text(cmp);
  std::cout << text;
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    write_file(fs::path(out_dir) / (cmp.scenario + ".compare.txt"), text);
  }
  return 0;
}

int sweep_command(const std::string& config_path, const std::string& param,
                  const std::string& values_csv, const std::string& out_dir, unsigned jobs) {
  std::ifstream in(config_path, std::ios::binary);
  if (!in) {
    std::cerr << "cannot open " << config_path << "\n";
    return 2;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(ss.str(), nullptr, true, true);
  } catch (const nlohmann::json::parse_error& e) {
    std::cerr << config_path << ": " << e.what() << "\n";
    return 2;
  }

  std::string pointer = "/" + param;
  for (auto& c : pointer) {
    if (c == '.') c = '/';
  }

  std::vector<std::string> values;
  {
    std::stringstream vs(values_csv);
    std::string v;
    while (std::getline(vs, v, ',')) values.push_back(v);
  }
  if (values.empty()) {
    std::cerr << "--values is empty\n";
    return 2;
  }

  struct Point {
    std::string value;
    ComparisonReport cmp;
    bool ok = false;
    std::string error;
  };

  auto run_point = [&root, &pointer, &param](std::string value) -> Point {
    Point pt;
    pt.value = value;
    nlohmann::json j = root;
    try {
      nlohmann::json parsed_value = nlohmann::json::parse(value, nullptr, false);
      if (parsed_value.is_discarded()) parsed_value = value;  // plain string
      j[nlohmann::json::json_pointer(pointer)] = parsed_value;
    } catch (const std::exception& e) {
      pt.error = std::string("cannot set ") + param + ": " + e.what();
      return pt;
    }
    auto res = load_scenario(j.dump(2), "sweep point");
    if (!res.ok()) {
      std::string msg = "invalid point:";
      for (const auto& d : res.diagnostics) msg += " [" + d.path + "] " + d.message;
      pt.error = msg;
      return pt;
    }
    try {
      auto base = run_scenario(*res.config, Architecture::CENTRALIZED);
      auto edge = run_scenario(*res.config, Architecture::EDGE);
      pt.cmp = compare_reports(base.report, edge.report);
      pt.ok = base.audit_violations.empty() && edge.audit_violations.empty();
      if (!pt.ok) pt.error = "invariant violations";
    } catch (const std::exception& e) {
      pt.error = e.what();
    }
    return pt;
  };

  // Points run in parallel on isolated engines; rows are emitted in point
  // order, not completion order.
  unsigned inflight_limit = jobs == 0 ? std::thread::hardware_concurrency() : jobs;
  if (inflight_limit == 0) inflight_limit = 2;
  std::vector<std::future<Point>> futures;
  futures.reserve(values.size());
  for (const auto& v : values) {
    if (futures.size() >= inflight_limit) {
      futures[futures.size() - inflight_limit].wait();
    }
    futures.push_back(std::async(std::launch::async, run_point, v));
  }

  std::ostringstream csv;
  csv << "param,value,latency_reduction_pct,throughput_gain_pct,satisfaction_gain_pct,"
         "baseline_latency_ms,edge_latency_ms,baseline_throughput_per_s,edge_throughput_per_s\n";
  int rc = 0;
  for (auto& f : futures) {
    Point pt = f.get();
    if (!pt.error.empty()) {
      std::cerr << "point " << pt.value << ": " << pt.error << "\n";
      rc = 1;
      continue;
    }
    char row[512];
    std::snprintf(row, sizeof row, "%s,%s,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f\n", param.c_str(),
                  pt.value.c_str(), pt.cmp.latency_reduction_pct, pt.cmp.throughput_gain_pct,
                  pt.cmp.satisfaction_gain_pct.value_or(0.0), pt.cmp.baseline_latency_ms,
                  pt.cmp.edge_latency_ms, pt.cmp.baseline_throughput_per_s,
                  pt.cmp.edge_throughput_per_s);
    csv << row;
    std::cout << row;
  }

  const std::string name = root.value("name", std::string("sweep"));
  fs::create_directories(out_dir);
  const fs::path csv_path = fs::path(out_dir) / (name + ".sweep.csv");
  write_file(csv_path, csv.str());
  std::cout << "wrote " << csv_path.string() << "\n";
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"edge-enabled reservation system simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "results";
  std::string arch_flag;
  std::string param;
  std::string values;
  std::optional<std::uint64_t> seed;
  bool trace = false;
  unsigned jobs = 0;

  auto* validate = app.add_subcommand("validate", "check a scenario config");
  validate->add_option("--config", config_path, "scenario file")->required();

  auto* run = app.add_subcommand("run", "run a scenario and write reports");
  run->add_option("--config", config_path, "scenario file")->required();
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--seed", seed, "seed override");
  run->add_option("--arch", arch_flag, "edge|centralized|both (overrides the config)");
  run->add_flag("--trace", trace, "emit the event trace alongside reports");

  std::string base_report, edge_report;
  auto* compare = app.add_subcommand("compare", "re-compare two existing report files");
  compare->add_option("baseline", base_report, "centralized report file")->required();
  compare->add_option("edge", edge_report, "edge report file")->required();
  compare->add_option("--out", out_dir, "optional output directory");

  auto* sweep =
      app.add_subcommand("sweep", "grid over one parameter, one comparison row per point");
  sweep->add_option("--config", config_path, "scenario file")->required();
  sweep->add_option("--param", param, "dotted config path, e.g. workload.base_rate_per_s")
      ->required();
  sweep->add_option("--values", values, "comma-separated values")->required();
  sweep->add_option("--out", out_dir, "output directory");
  sweep->add_option("--jobs", jobs, "max parallel points (default: hardware)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) {
      auto res = load_scenario_file(config_path);
      if (!res.ok()) {
        std::cerr << config_path << " is invalid:\n";
        print_diagnostics(res.diagnostics);
        return 2;
      }
      std::cout << config_path << " ok (hash " << res.config->config_hash << ")\n";
      return 0;
    }
    if (run->parsed()) return run_command(config_path, out_dir, seed, arch_flag, trace);
    if (compare->parsed()) {
      return compare_command(base_report, edge_report, compare->count("--out") ? out_dir : "");
    }
    if (sweep->parsed()) return sweep_command(config_path, param, values, out_dir, jobs);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
