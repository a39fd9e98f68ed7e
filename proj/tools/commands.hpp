#pragma once

#include "run_config.hpp"

#include <array>
#include <string>
#include <utility>
#include <vector>

namespace cli {

/// One table row: ordered (column, value) pairs; values are numbers, strings,
/// null or complex objects {re, im}.
using Row = std::vector<std::pair<std::string, json>>;

struct Output {
  json values = json::object();
  json error_estimates = json::object();
  std::string method;
  std::vector<Row> table;
};

Output run_sum(const RunConfig& c);
Output run_single(const RunConfig& c);
Output run_solve(const RunConfig& c);
Output run_reflect(const RunConfig& c);
Output run_field(const RunConfig& c);
Output run_limits(const RunConfig& c);

Output dispatch(const RunConfig& c);

json rows_json(const std::vector<Row>& rows);
/// Complex columns split into name_re, name_im; numbers written with the same
/// shortest round-trip formatting as the JSON output.
std::string rows_csv(const std::vector<Row>& rows);

std::vector<std::array<double, 3>> read_centers_csv(const std::string& path);

/// Worker count: DIRAC_LATTICE_THREADS if set, else hardware concurrency.
unsigned thread_count();

}  // namespace cli
