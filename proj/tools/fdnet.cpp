// fdnet: outage and sum-rate tables for full-duplex cellular networks.
//
//   fdnet [eval] [options]      one point
//   fdnet sweep --sweep R --values 0.01,0.1,1 [options]
//   fdnet validate [--trials N] analytic vs Monte Carlo cross-check
//
// Exit codes: 0 success, 1 failed rows or validation checks, 2 usage error,
// 3 I/O error.

#include "fdnet/cli.hpp"

#include <algorithm>
#include <iostream>

namespace {

using namespace fdnet::cli;

int run(const std::vector<std::string>& args) {
  const SweepSpec spec = parse_config(args);

  if (spec.command == Command::validate) {
    const auto checks = run_validation(spec, &std::cerr);
    std::vector<ResultRow> rows;
    for (const auto& c : checks) {
      rows.push_back(c.analytic);
      rows.push_back(c.montecarlo);
    }
    emit(rows, spec.format, spec.output);
    const auto failed = std::count_if(checks.begin(), checks.end(), [](const auto& c) { return !c.pass; });
    std::cerr << (failed ? "FAIL" : "PASS") << ": " << checks.size() - failed << '/' << checks.size()
              << " checks agree\n";
    return failed ? 1 : 0;
  }

  if (spec.command == Command::eval) {
    std::cerr << to_config_text(spec);
  }
  const auto rows = run_sweep(spec);
  emit(rows, spec.format, spec.output);
  int status = 0;
  for (const auto& row : rows) {
    if (!row.error.empty()) {
      std::cerr << "error: " << row.link << ' ' << to_string(row.method) << ": " << row.error << '\n';
      status = 1;
    }
  }
  return status;
}

} // namespace

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  try {
    return run(args);
  } catch (const HelpRequested& h) {
    std::cout << h.what();
    return 0;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\nrun 'fdnet --help' for options\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
