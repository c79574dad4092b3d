#pragma once

#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "netprice/network.hpp"
#include "netprice/optimizer.hpp"
#include "netprice/simulator.hpp"
#include "netprice/types.hpp"

namespace netprice {

/** Formats with 12 significant digits. */
std::string format_number(double value);

/** Header row plus string cells; rendered as comma-separated text. */
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> cells);
  /** `comment`, when present, is written first as a `# ` line. */
  std::string render(const std::optional<std::string>& comment = std::nullopt) const;
};

/** round, t_remaining, price (or price_g*), adoption_g*. */
CsvTable policy_table(const PolicyReport& report);
/** t, group, v. */
CsvTable threshold_table(const ThresholdSchedule& sched);
/** n, mean, stderr, closed_form, abs_error, rmse, welfare_mean, welfare_closed_form, welfare_abs_error. */
CsvTable convergence_table(const std::vector<ConvergenceRow>& rows);
/** round, group, count. */
CsvTable counts_table(const SimulationReport& report);

nlohmann::json to_json(const ValidationReport& report);
nlohmann::json to_json(const PolicyReport& report);
nlohmann::json to_json(const ThresholdSchedule& sched);
nlohmann::json to_json(const SimulationReport& report);
nlohmann::json to_json(const OptResult& result);
nlohmann::json to_json(const HessianReport& report);
nlohmann::json to_json(const KktReport& report);
nlohmann::json to_json(const TwoBuyerReport& report);

/** Parses {"alpha": [...], "E": [[...], ...]}. */
BlockNetwork network_from_json(const nlohmann::json& doc);
BlockNetwork load_network(const std::string& path);

/** Writes through a temporary file in the same directory and renames it into place. */
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace netprice
