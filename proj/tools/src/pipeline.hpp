#pragma once

#include <string>
#include <vector>

#include "run_config.hpp"

namespace dimercorr::app {

// Column names carry their unit as a suffix; dimensionless columns have none.
struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> data;  // one vector per column
  Json extra = Json::object();            // peaks, sample counts, ...
};

struct RunResult {
  std::vector<Table> tables;
  Json derived;  // renormalized parameters of the base configuration
};

// Nothing is written here; numerical failures propagate as std::runtime_error.
RunResult execute(const RunConfig& config);

// Resolved parameters of a system (omega', J, J', kappa0, rates).
Json derived_parameters(const liouvillian::SystemConfig& system);

// Writers throw std::runtime_error on I/O failure.
void write_csv(const Table& table, const std::string& path);
void write_json_table(const Table& table, const std::string& path);

}  // namespace dimercorr::app
