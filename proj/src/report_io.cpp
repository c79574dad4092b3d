#include "netprice/report_io.hpp"

#include <filesystem>
#include <fmt/format.h>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "netprice/error.hpp"

namespace netprice {

using nlohmann::json;

std::string format_number(double value) { return fmt::format("{:.12g}", value); }

void CsvTable::add_row(std::vector<std::string> cells) {
  if (cells.size() != header.size()) {
    throw Error(ErrorKind::ShapeMismatch,
                fmt::format("CSV row has {} cells but the header has {}", cells.size(), header.size()));
  }
  rows.push_back(std::move(cells));
}

std::string CsvTable::render(const std::optional<std::string>& comment) const {
  std::ostringstream out;
  if (comment) out << "# " << *comment << '\n';
  auto write_row = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i == 0 ? "" : ",") << cells[i];
    out << '\n';
  };
  write_row(header);
  for (const auto& row : rows) write_row(row);
  return out.str();
}

CsvTable policy_table(const PolicyReport& report) {
  const PricePath& path = report.path;
  const int T = path.T();
  const int price_columns = path.columns();
  const int groups = report.adoption ? static_cast<int>(report.adoption->cols()) : 0;
  CsvTable table;
  table.header = {"round", "t_remaining"};
  if (path.is_per_group()) {
    for (int i = 1; i <= price_columns; ++i) table.header.push_back(fmt::format("price_g{}", i));
  } else {
    table.header.push_back("price");
  }
  for (int i = 1; i <= groups; ++i) table.header.push_back(fmt::format("adoption_g{}", i));
  for (int r = 1; r <= T; ++r) {
    std::vector<std::string> row = {std::to_string(r), std::to_string(T + 1 - r)};
    for (int c = 0; c < price_columns; ++c) row.push_back(format_number(path.prices()(r - 1, c)));
    for (int i = 0; i < groups; ++i) row.push_back(format_number((*report.adoption)(r - 1, i)));
    table.add_row(std::move(row));
  }
  return table;
}

CsvTable threshold_table(const ThresholdSchedule& sched) {
  CsvTable table;
  table.header = {"t", "group", "v"};
  for (int t = 1; t <= sched.T() + 1; ++t) {
    for (int i = 0; i < sched.m(); ++i) {
      table.add_row({std::to_string(t), std::to_string(i + 1), format_number(sched.at(t, i))});
    }
  }
  return table;
}

CsvTable convergence_table(const std::vector<ConvergenceRow>& rows) {
  CsvTable table;
  table.header = {"n",    "mean",         "stderr",          "closed_form",        "abs_error",
                  "rmse", "welfare_mean", "welfare_closed_form", "welfare_abs_error"};
  for (const auto& row : rows) {
    table.add_row({std::to_string(row.n), format_number(row.mean), format_number(row.standard_error),
                   format_number(row.closed_form), format_number(row.abs_error), format_number(row.rmse),
                   format_number(row.welfare_mean), format_number(row.welfare_closed_form),
                   format_number(row.welfare_abs_error)});
  }
  return table;
}

CsvTable counts_table(const SimulationReport& report) {
  CsvTable table;
  table.header = {"round", "group", "count"};
  for (int r = 0; r < report.per_round_counts.rows(); ++r) {
    for (int i = 0; i < report.per_round_counts.cols(); ++i) {
      table.add_row({std::to_string(r + 1), std::to_string(i + 1), std::to_string(report.per_round_counts(r, i))});
    }
  }
  return table;
}

namespace {

json matrix_json(const Mat& M) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < M.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < M.cols(); ++c) row.push_back(M(r, c));
    rows.push_back(row);
  }
  return rows;
}

json vector_json(const Vec& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

json path_json(const PricePath& path) {
  if (path.T() == 0) return json::array();
  if (path.is_per_group()) return matrix_json(path.prices());
  return vector_json(path.prices().col(0));
}

}  // namespace

json to_json(const ValidationReport& report) {
  json conditions = json::object();
  for (const auto& c : report.conditions) {
    json entry = {{"passed", c.passed}};
    if (!c.detail.empty()) entry["detail"] = c.detail;
    if (c.value) entry["value"] = *c.value;
    if (c.at) entry["at"] = *c.at;
    conditions[c.name] = entry;
  }
  return {{"check", report.check}, {"passed", report.passed()}, {"conditions", conditions}};
}

json to_json(const ThresholdSchedule& sched) {
  return {{"v", matrix_json(sched.v)}, {"clamped", sched.clamped}};
}

json to_json(const PolicyReport& report) {
  json out = {{"rounds", report.path.T()},
              {"prices", path_json(report.path)},
              {"normalized_revenue", report.normalized_revenue}};
  if (report.thresholds) out["thresholds"] = to_json(*report.thresholds);
  if (report.welfare) out["welfare"] = *report.welfare;
  if (report.adoption) out["adoption"] = matrix_json(*report.adoption);
  if (!report.warnings.empty()) out["warnings"] = report.warnings;
  if (!report.extras.empty()) out["extras"] = report.extras;
  return out;
}

json to_json(const SimulationReport& report) {
  json counts = json::array();
  for (int r = 0; r < report.per_round_counts.rows(); ++r) {
    json row = json::array();
    for (int i = 0; i < report.per_round_counts.cols(); ++i) row.push_back(report.per_round_counts(r, i));
    counts.push_back(row);
  }
  return {{"per_round_counts", counts},
          {"never_buyers", report.never_buyers},
          {"realized_revenue", report.realized_revenue},
          {"realized_welfare", report.realized_welfare},
          {"stats",
           {{"mean", report.stats.mean},
            {"standard_error", report.stats.standard_error},
            {"welfare_mean", report.stats.welfare_mean},
            {"welfare_standard_error", report.stats.welfare_standard_error},
            {"replications", report.stats.replications},
            {"seed", report.stats.seed}}}};
}

json to_json(const OptResult& result) {
  return {{"argmax", path_json(result.argmax)},
          {"value", result.value},
          {"iterations", result.iterations},
          {"gradient_norm", result.gradient_norm},
          {"converged", result.converged}};
}

json to_json(const HessianReport& report) {
  return {{"hessian", matrix_json(report.hessian)},
          {"max_eigenvalue", report.max_eigenvalue},
          {"passed", report.passed}};
}

json to_json(const KktReport& report) {
  return {{"multipliers", vector_json(report.multipliers)},
          {"multipliers_nonnegative", report.multipliers_nonnegative},
          {"stationarity_residual", report.stationarity_residual},
          {"curvature", report.curvature},
          {"passed", report.passed}};
}

json to_json(const TwoBuyerReport& report) {
  return {{"best_revenue", report.best_revenue},
          {"best_path", path_json(report.best_path)},
          {"regime", report.regime},
          {"nondecreasing_revenue", report.nondecreasing_revenue},
          {"nondecreasing_path", path_json(report.nondecreasing_path)},
          {"nondecreasing_closed_form", report.nondecreasing_closed_form},
          {"nonincreasing_revenue", report.nonincreasing_revenue},
          {"nonincreasing_path", path_json(report.nonincreasing_path)},
          {"nonincreasing_case", report.nonincreasing_case},
          {"nonincreasing_closed_form", report.nonincreasing_closed_form}};
}

BlockNetwork network_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("alpha") || !doc.contains("E")) {
    throw Error(ErrorKind::InvalidParameter, "network JSON needs \"alpha\" and \"E\" fields");
  }
  const auto& alpha_doc = doc.at("alpha");
  const auto& e_doc = doc.at("E");
  if (!alpha_doc.is_array() || !e_doc.is_array()) {
    throw Error(ErrorKind::InvalidParameter, "\"alpha\" and \"E\" must be arrays");
  }
  const auto m = static_cast<Eigen::Index>(alpha_doc.size());
  Vec alpha(m);
  Mat E(static_cast<Eigen::Index>(e_doc.size()), m);
  try {
    for (Eigen::Index i = 0; i < m; ++i) alpha[i] = alpha_doc.at(static_cast<std::size_t>(i)).get<double>();
    for (Eigen::Index r = 0; r < E.rows(); ++r) {
      const auto& row = e_doc.at(static_cast<std::size_t>(r));
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != m) {
        throw Error(ErrorKind::ShapeMismatch, fmt::format("row {} of E does not have {} entries", r, m));
      }
      for (Eigen::Index c = 0; c < m; ++c) E(r, c) = row.at(static_cast<std::size_t>(c)).get<double>();
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidParameter, std::string("malformed network JSON: ") + e.what());
  }
  return BlockNetwork(alpha, E);
}

BlockNetwork load_network(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidParameter, "cannot open network file " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidParameter, fmt::format("cannot parse {}: {}", path, e.what()));
  }
  return network_from_json(doc);
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path dir = target.has_parent_path() ? target.parent_path() : fs::path(".");
  const fs::path temp = dir / fmt::format(".{}.tmp.{}", target.filename().string(), ::getpid());
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + temp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) {
      out.close();
      fs::remove(temp);
      throw std::runtime_error("failed while writing " + temp.string());
    }
  }
  std::error_code ec;
  fs::rename(temp, target, ec);
  if (ec) {
    fs::remove(temp);
    throw std::runtime_error("cannot move output into place at " + path + ": " + ec.message());
  }
}

}  // namespace netprice
