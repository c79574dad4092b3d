#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace netprice::cli {

/** Parameters of one CLI invocation; `command` names the subcommand. */
struct RunConfig {
  std::string command;
  /** uniform | block | nonuniform | discriminate | static | nocommit | allsales, or an oracle kind. */
  std::string mode;
  std::vector<double> gammas;
  std::optional<std::string> network_path;
  std::string distribution = "uniform";
  std::vector<int> rounds;
  int n = 100000;
  std::vector<int> n_list;
  int reps = 20;
  std::uint64_t seed = 0;
  std::optional<std::string> out;
  std::optional<std::string> json_out;
  std::optional<std::string> thresholds_out;
  std::optional<std::string> counts_out;
  bool no_header = false;
  bool with_limit = false;
  std::vector<std::string> families;
  int family_nodes = 10;
  double delta = 0.29;
  double weight_sum = 30.0;
  std::string orientation = "directed";
  std::string final_round = "scheduled";
  int grid = 1001;
  unsigned threads = 0;
};

/** Executes a parsed configuration. Returns 0 on success, 2 on validation failure, 1 otherwise. */
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/** Parses argv (including NETPRICE_THREADS) and runs it. */
int main_entry(int argc, char** argv);

/** Parses "13", "1..20" or "1,2,5". */
std::vector<int> parse_int_list(const std::string& text);
/** Parses "0.2,0.5,0.8". */
std::vector<double> parse_double_list(const std::string& text);

}  // namespace netprice::cli
