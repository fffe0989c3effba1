#include "fdnet/cli.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>

namespace fdnet::cli {

namespace {

// Column values of one row, in csv_columns() order. Numbers are already
// formatted; `numeric` tells JSON which ones to emit as numbers.
struct Cell {
  std::string text;
  bool numeric = false;
  double number = 0.0;
  bool integral = false;
  std::uint64_t integer = 0;
};

Cell text(std::string s) {
  return {std::move(s), false, 0.0, false, 0};
}

Cell num(double v) {
  return {format_number(v), true, v, false, 0};
}

Cell count(std::uint64_t v) {
  return {std::to_string(v), true, static_cast<double>(v), true, v};
}

std::vector<Cell> cells(const ResultRow& r) {
  const auto& p = r.params;
  return {text(to_string(r.arch)),
          text(r.link),
          text(to_string(r.metric)),
          text(to_string(r.method)),
          text(to_string(r.swept_var)),
          num(r.swept_value),
          num(r.rate),
          num(p.lambda),
          count(static_cast<std::uint64_t>(p.m_b)),
          count(static_cast<std::uint64_t>(p.m_u)),
          num(p.gamma_b),
          num(p.alpha1),
          num(p.alpha2),
          num(p.p_b),
          num(p.p_u),
          num(r.sigma_n2_db),
          num(r.sigma_l2_db),
          text(r.suppression ? "on" : "off"),
          text(to_string(r.nearest_bs_mode)),
          num(r.value),
          num(r.uncertainty),
          count(r.trials),
          count(r.seed)};
}

void write_csv(const std::vector<ResultRow>& rows, std::ostream& out) {
  const auto& cols = csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) {
    out << (i ? "," : "") << cols[i];
  }
  out << '\n';
  for (const auto& row : rows) {
    const auto cs = cells(row);
    for (std::size_t i = 0; i < cs.size(); ++i) {
      out << (i ? "," : "") << cs[i].text;
    }
    out << '\n';
  }
}

void write_json(const std::vector<ResultRow>& rows, std::ostream& out) {
  const auto& cols = csv_columns();
  auto doc = nlohmann::ordered_json::array();
  for (const auto& row : rows) {
    auto obj = nlohmann::ordered_json::object();
    const auto cs = cells(row);
    for (std::size_t i = 0; i < cs.size(); ++i) {
      // JSON has no inf or nan; those stay strings, spelled as in the CSV.
      if (cs[i].integral) {
        obj[cols[i]] = cs[i].integer;
      } else if (cs[i].numeric && std::isfinite(cs[i].number)) {
        obj[cols[i]] = cs[i].number;
      } else {
        obj[cols[i]] = cs[i].text;
      }
    }
    if (!row.error.empty()) {
      obj["error"] = row.error;
    }
    doc.push_back(std::move(obj));
  }
  out << doc.dump(2) << '\n';
}

} // namespace

std::string format_number(double v) {
  if (std::isnan(v)) {
    return "nan";
  }
  if (std::isinf(v)) {
    return v > 0 ? "inf" : "-inf";
  }
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void emit(const std::vector<ResultRow>& rows, OutputFormat format, std::ostream& out) {
  if (format == OutputFormat::json) {
    write_json(rows, out);
  } else {
    write_csv(rows, out);
  }
  if (!out) {
    throw IoError("failed to write results");
  }
}

void emit(const std::vector<ResultRow>& rows, OutputFormat format, const std::string& destination) {
  if (destination.empty()) {
    emit(rows, format, std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream file(destination, std::ios::binary | std::ios::trunc);
  if (!file) {
    throw IoError("cannot open output file '" + destination + "'");
  }
  emit(rows, format, file);
  file.close();
  if (!file) {
    throw IoError("failed to write output file '" + destination + "'");
  }
}

} // namespace fdnet::cli
