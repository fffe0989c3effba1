#include "fdnet/cli.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace fdnet;
using namespace fdnet::cli;
namespace fs = std::filesystem;

namespace {

fs::path temp_path(const std::string& name) {
  return fs::temp_directory_path() / ("fdnet_test_" + std::to_string(::getpid()) + "_" + name);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string usage_message(const std::vector<std::string>& args) {
  try {
    parse_config(args);
  } catch (const UsageError& e) {
    return e.what();
  }
  return "";
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    out.push_back(cell);
  }
  return out;
}

int run_tool(const std::string& args) {
  const int status = std::system((std::string(FDNET_TOOL_PATH) + " " + args).c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("no arguments gives the default single point") {
  const auto spec = parse_config({});
  CHECK(spec.command == Command::eval);
  CHECK(spec.metric == Metric::outage_uplink);
  CHECK(spec.method == MethodChoice::analytic);
  CHECK(spec.variable == SweepVariable::none);
  CHECK(spec.rate == 0.1);
  CHECK(spec.params.lambda == 0.01);
  CHECK(spec.params.mu == 1.0);
  CHECK(spec.params.gamma_b == 0.2);
  CHECK(spec.params.gamma_u == 0.2);
  CHECK(spec.params.alpha1 == 4.0);
  CHECK(spec.params.alpha2 == 4.0);
  CHECK(spec.params.p_b == 1.0);
  CHECK(spec.params.p_u == 1.0);
  CHECK(spec.params.sigma_n2 == 0.0);
  CHECK(spec.params.sigma_l2 == doctest::Approx(1e-3).epsilon(1e-15));
  CHECK(spec.sim.architecture == Architecture::three_node);
  CHECK(spec.format == OutputFormat::csv);
}

TEST_CASE("flags map directly") {
  const auto spec = parse_config(
      {"--sigma-l2-db", "-30", "--rate", "0.1", "--m", "4", "--metric", "outage-uplink", "--method", "both"});
  CHECK(spec.method == MethodChoice::both);
  CHECK(spec.params.m_b == 4);
  CHECK(spec.params.m_u == 4);
  CHECK(spec.sigma_l2_db == -30.0);

  const auto s2 = parse_config({"sweep", "--sweep", "sigma_l2_db", "--from", "-60", "--to", "0", "--step", "10",
                                "--arch", "two-node", "--method", "montecarlo", "--suppression", "off",
                                "--nearest-bs-mode", "all-other", "--seed", "42", "--trials", "1000",
                                "--sigma-n2-db", "off", "--m-b", "8", "--format", "json"});
  CHECK(s2.command == Command::sweep);
  CHECK(s2.values == std::vector<double>{-60, -50, -40, -30, -20, -10, 0});
  CHECK(s2.sim.architecture == Architecture::two_node);
  CHECK_FALSE(s2.sim.suppression);
  CHECK(s2.sim.nearest_bs_mode == NearestBsMode::all_other);
  CHECK(s2.sim.seed == 42);
  CHECK(s2.sim.trials == 1000);
  CHECK(s2.params.sigma_n2 == 0.0);
  CHECK(s2.params.m_b == 8);
  CHECK(s2.params.m_u == 4);
  CHECK(s2.format == OutputFormat::json);
}

TEST_CASE("usage errors name the offending field") {
  CHECK(usage_message({"--alpha1", "1.5"}).find("alpha1") != std::string::npos);
  CHECK(usage_message({"--alpha1", "1.5"}).find("> 2") != std::string::npos);
  CHECK(usage_message({"--bogus", "1"}).find("bogus") != std::string::npos);
  CHECK(usage_message({"--metric", "latency"}).find("metric") != std::string::npos);
  CHECK(usage_message({"--rate", "abc"}).find("rate") != std::string::npos);
  CHECK(usage_message({"--rate", "0"}).find("rate") != std::string::npos);
  CHECK(usage_message({"--suppression", "maybe"}).find("suppression") != std::string::npos);
  CHECK(usage_message({"--arch", "two-node"}).find("method") != std::string::npos);
  CHECK(usage_message({"--arch", "two-node", "--method", "asymptotic"}).find("method") != std::string::npos);
  CHECK(usage_message({"--metric", "sum-rate", "--method", "asymptotic"}).find("method") != std::string::npos);
  CHECK(usage_message({"--method", "asymptotic", "--alpha2", "3"}).find("alpha") != std::string::npos);
  CHECK(usage_message({"sweep", "--sweep", "R", "--from", "1", "--to", "2", "--step", "0"}).find("step") !=
        std::string::npos);
  CHECK(usage_message({"sweep", "--sweep", "R", "--from", "2", "--to", "1", "--step", "0.1"}).find("from") !=
        std::string::npos);
  CHECK(usage_message({"sweep", "--sweep", "m", "--values", "1,2.5"}).find("m") != std::string::npos);
  CHECK(usage_message({"sweep", "--values", "1,2"}).find("sweep") != std::string::npos);
  CHECK(usage_message({"--sweep", "R", "--values", "1,2"}).find("sweep") != std::string::npos);
  CHECK(usage_message({"--gamma", "2"}).find("gamma") != std::string::npos);
  CHECK(usage_message({"--trials", "0"}).find("trials") != std::string::npos);
}

TEST_CASE("help is reported, not treated as an error") {
  CHECK_THROWS_AS(parse_config({"--help"}), HelpRequested);
}

TEST_CASE("configuration echo round-trips") {
  const std::vector<std::vector<std::string>> cases = {
      {},
      {"--sigma-l2-db", "-17.3", "--rate", "0.3333333333333333", "--lambda", "0.0123", "--m-b", "6", "--m-u", "3",
       "--gamma", "0.15", "--p-b", "2.5", "--sigma-n2-db", "-95.5", "--seed", "18446744073709551615"},
      {"sweep", "--sweep", "R", "--values", "0.01,0.1,1", "--method", "both", "--output", "x.csv"},
      {"eval", "--arch", "two-node", "--method", "montecarlo", "--metric", "sum-rate", "--nearest-bs-mode",
       "all-other", "--suppression", "off", "--format", "json", "--threads", "3"},
  };
  for (const auto& args : cases) {
    const auto spec = parse_config(args);
    const auto text = to_config_text(spec);
    const auto path = temp_path("roundtrip.conf");
    std::ofstream(path) << text;
    std::vector<std::string> again_args;
    if (spec.command == Command::sweep) {
      again_args.push_back("sweep");
    }
    again_args.push_back("--config");
    again_args.push_back(path.string());
    const auto again = parse_config(again_args);
    fs::remove(path);
    INFO(text);
    CHECK(again == spec);
    CHECK(to_config_text(again) == text);
  }
}

TEST_CASE("config files reject unknown keys and accept overrides") {
  const auto path = temp_path("bad.conf");
  std::ofstream(path) << "rate = 0.5\nwidget = 3\n";
  CHECK_THROWS_AS(parse_config({"--config", path.string()}), UsageError);
  std::ofstream(path) << "rate = 0.5\nm = 8\n";
  const auto spec = parse_config({"--config", path.string(), "--rate", "0.25"});
  CHECK(spec.rate == 0.25);
  CHECK(spec.params.m_b == 8);
  fs::remove(path);
}

TEST_CASE("point specs") {
  auto spec = parse_config({"sweep", "--sweep", "m", "--values", "2,8"});
  CHECK(point_spec(spec, 8).params.m_b == 8);
  CHECK(point_spec(spec, 8).params.m_u == 8);
  spec = parse_config({"sweep", "--sweep", "sigma_l2_db", "--values", "-20"});
  CHECK(point_spec(spec, -20).params.sigma_l2 == doctest::Approx(0.01).epsilon(1e-15));
  CHECK(point_spec(spec, -20).sigma_l2_db == -20.0);
  spec = parse_config({"sweep", "--sweep", "lambda", "--values", "0.001"});
  CHECK(point_spec(spec, 0.001).params.lambda == 0.001);
}

TEST_CASE("rate sweep gives one nondecreasing row per point") {
  const auto rows = run_sweep(parse_config({"sweep", "--sweep", "R", "--values", "0.01,0.1,1"}));
  REQUIRE(rows.size() == 3);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].error.empty());
    CHECK(rows[i].method == Method::analytic);
    CHECK(rows[i].swept_value == rows[i].rate);
    if (i > 0) {
      CHECK(rows[i].value >= rows[i - 1].value);
    }
  }
}

TEST_CASE("paired sigma_l2 sweep agrees between engines") {
  const auto rows = run_sweep(parse_config({"sweep", "--sweep", "sigma_l2_db", "--from", "-60", "--to", "0", "--step",
                                            "10", "--method", "both", "--trials", "20000"}));
  REQUIRE(rows.size() == 14);
  for (std::size_t i = 0; i < rows.size(); i += 2) {
    CHECK(rows[i].method == Method::analytic);
    CHECK(rows[i + 1].method == Method::montecarlo);
    CHECK(rows[i].swept_value == rows[i + 1].swept_value);
    CHECK(rows[i + 1].trials == 20000);
    CHECK(std::abs(rows[i].value - rows[i + 1].value) <= std::max(3 * rows[i + 1].uncertainty, 0.01));
  }
}

TEST_CASE("suppression on never loses to off") {
  const auto on = run_sweep(parse_config({"--sigma-l2-db", "-20"}));
  const auto off = run_sweep(parse_config({"--sigma-l2-db", "-20", "--suppression", "off"}));
  CHECK(on.at(0).value <= off.at(0).value);
  CHECK(on.at(0).suppression);
  CHECK_FALSE(off.at(0).suppression);
}

TEST_CASE("sum-rate rows") {
  const auto rows = run_sweep(parse_config({"--metric", "sum-rate"}));
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].link == "uplink");
  CHECK(rows[1].link == "downlink");
  CHECK(rows[2].link == "sum");
  CHECK(rows[2].value == doctest::Approx(rows[0].value + rows[1].value));
}

TEST_CASE("engine errors become error rows and the run continues") {
  auto spec = parse_config({"sweep", "--sweep", "R", "--values", "0.1,1", "--method", "asymptotic"});
  spec.params.alpha1 = 3.0; // outside the asymptotic regime, bypassing validation
  const auto rows = run_sweep(spec);
  REQUIRE(rows.size() == 2);
  for (const auto& r : rows) {
    CHECK_FALSE(r.error.empty());
    CHECK(std::isnan(r.value));
  }
  std::ostringstream csv;
  emit(rows, OutputFormat::csv, csv);
  CHECK(csv.str().find("nan") != std::string::npos);
  std::ostringstream js;
  emit(rows, OutputFormat::json, js);
  const auto doc = nlohmann::json::parse(js.str());
  CHECK(doc[0].contains("error"));
}

TEST_CASE("number formatting is shortest round-trip") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(-30.0) == "-30");
  CHECK(format_number(1e-300) == "1e-300");
  CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(format_number(std::numeric_limits<double>::quiet_NaN()) == "nan");
  for (double v : {0.07115482655957894, 1.0 / 3.0, 6.02e23, 5e-324}) {
    CHECK(std::strtod(format_number(v).c_str(), nullptr) == v);
  }
}

TEST_CASE("CSV layout") {
  const auto rows = run_sweep(parse_config({}));
  std::ostringstream out;
  emit(rows, OutputFormat::csv, out);
  std::stringstream ss(out.str());
  std::string header, line, extra;
  std::getline(ss, header);
  std::getline(ss, line);
  CHECK_FALSE(std::getline(ss, extra));
  CHECK(split(header) == csv_columns());
  CHECK(header ==
        "arch,link,metric,method,swept_var,swept_value,R,lambda,m_b,m_u,gamma,alpha1,alpha2,p_b,p_u,sigma_n2_db,"
        "sigma_l2_db,suppression,nearest_bs_mode,value,uncertainty,trials,seed");
  const auto cells = split(line);
  CHECK(cells.size() == csv_columns().size());
  CHECK(cells[0] == "three-node");
  CHECK(cells[6] == "0.1");
  CHECK(cells[16] == "-30");
}

TEST_CASE("JSON mirrors the CSV") {
  const auto rows = run_sweep(parse_config({"sweep", "--sweep", "R", "--values", "0.01,1", "--method", "both",
                                            "--trials", "2000", "--sigma-n2-db", "-inf"}));
  std::ostringstream csv, js;
  emit(rows, OutputFormat::csv, csv);
  emit(rows, OutputFormat::json, js);
  const auto doc = nlohmann::json::parse(js.str());
  std::stringstream ss(csv.str());
  std::string line;
  std::getline(ss, line);
  const auto cols = split(line);
  std::size_t i = 0;
  while (std::getline(ss, line)) {
    const auto cells = split(line);
    const auto& obj = doc.at(i++);
    REQUIRE(obj.size() == cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c) {
      const auto& v = obj.at(cols[c]);
      if (cols[c] == "m_b" || cols[c] == "m_u" || cols[c] == "trials" || cols[c] == "seed") {
        REQUIRE(v.is_number_unsigned());
        CHECK(std::to_string(v.get<std::uint64_t>()) == cells[c]);
      } else if (v.is_string()) {
        CHECK(v.get<std::string>() == cells[c]);
      } else {
        CHECK(v.get<double>() == std::stod(cells[c]));
      }
    }
  }
  CHECK(i == doc.size());
}

TEST_CASE("unwritable destination") {
  const auto rows = run_sweep(parse_config({}));
  CHECK_THROWS_AS(emit(rows, OutputFormat::csv, std::string("/nonexistent-dir/x/out.csv")), IoError);
}

TEST_CASE("rows carry enough to rerun them") {
  const auto spec = parse_config({"--method", "montecarlo", "--trials", "3000", "--seed", "99", "--m", "2",
                                  "--sigma-l2-db", "-25", "--rate", "0.4"});
  const auto row = run_sweep(spec).at(0);
  std::vector<std::string> args = {"--method",      "montecarlo",
                                   "--trials",      std::to_string(row.trials),
                                   "--seed",        std::to_string(row.seed),
                                   "--m-b",         std::to_string(row.params.m_b),
                                   "--m-u",         std::to_string(row.params.m_u),
                                   "--gamma",       format_number(row.params.gamma_b),
                                   "--lambda",      format_number(row.params.lambda),
                                   "--alpha1",      format_number(row.params.alpha1),
                                   "--alpha2",      format_number(row.params.alpha2),
                                   "--p-b",         format_number(row.params.p_b),
                                   "--p-u",         format_number(row.params.p_u),
                                   "--sigma-n2-db", format_number(row.sigma_n2_db),
                                   "--sigma-l2-db", format_number(row.sigma_l2_db),
                                   "--rate",        format_number(row.rate),
                                   "--suppression", row.suppression ? "on" : "off",
                                   "--nearest-bs-mode", to_string(row.nearest_bs_mode),
                                   "--arch",        to_string(row.arch)};
  const auto again = run_sweep(parse_config(args)).at(0);
  CHECK(again.value == row.value);
  CHECK(again.uncertainty == row.uncertainty);
}

TEST_CASE("the tool: exit codes and byte-identical reruns") {
  const auto a = temp_path("a.csv");
  const auto b = temp_path("b.csv");
  const std::string common = " sweep --sweep R --values 0.1,1 --method both --trials 3000 --seed 5 2>/dev/null";
  CHECK(run_tool("--output " + a.string() + common) == 0);
  CHECK(run_tool("--output " + b.string() + common + " --threads 1") == 0);
  CHECK_FALSE(slurp(a).empty());
  CHECK(slurp(a) == slurp(b));
  fs::remove(a);
  fs::remove(b);

  CHECK(run_tool("--alpha1 1.5 2>/dev/null") == 2);
  CHECK(run_tool("--help >/dev/null") == 0);
  CHECK(run_tool("--output /nonexistent-dir/x/out.csv 2>/dev/null") == 3);
}

} // TEST_SUITE
