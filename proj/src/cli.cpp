#include "netprice/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fmt/chrono.h>
#include <fmt/format.h>
#include <iostream>
#include <thread>

#include "netprice/distribution.hpp"
#include "netprice/equilibrium.hpp"
#include "netprice/error.hpp"
#include "netprice/network.hpp"
#include "netprice/optimizer.hpp"
#include "netprice/pricing.hpp"
#include "netprice/report_io.hpp"
#include "netprice/simulator.hpp"

namespace netprice::cli {

using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string current;
  for (char c : text) {
    if (c == sep) {
      parts.push_back(trim(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  parts.push_back(trim(current));
  return parts;
}

int parse_int(const std::string& text) {
  std::size_t used = 0;
  int value = 0;
  try {
    value = std::stoi(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw Error(ErrorKind::InvalidParameter, "not an integer: '" + text + "'");
  return value;
}

double parse_double(const std::string& text) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw Error(ErrorKind::InvalidParameter, "not a number: '" + text + "'");
  return value;
}

std::string timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(now));
}

void emit(const RunConfig& config, const CsvTable& table, std::ostream& out) {
  std::optional<std::string> comment;
  if (!config.no_header) comment = fmt::format("netprice {} generated {}", config.command, timestamp());
  const std::string text = table.render(comment);
  if (config.out) {
    write_file_atomic(*config.out, text);
  } else {
    out << text;
  }
}

void emit_json(const std::optional<std::string>& path, const json& doc) {
  if (path) write_file_atomic(*path, doc.dump(2) + "\n");
}

double single_gamma(const RunConfig& config) {
  if (config.gammas.size() != 1) throw Error(ErrorKind::InvalidParameter, "this command needs exactly one --gamma value");
  return config.gammas.front();
}

int single_rounds(const RunConfig& config) {
  if (config.rounds.size() != 1) throw Error(ErrorKind::InvalidParameter, "this command needs a single --rounds value");
  return config.rounds.front();
}

BlockNetwork resolve_network(const RunConfig& config) {
  if (config.network_path) return load_network(*config.network_path);
  if (config.gammas.size() == 1) return BlockNetwork::uniform(config.gammas.front());
  throw Error(ErrorKind::InvalidParameter, "pass --network FILE or a single --gamma value");
}

PolicyReport policy_for(const std::string& mode, const RunConfig& config, const BlockNetwork* net,
                        double gamma, int T) {
  if (mode == "uniform") return uniform_policy(gamma, T);
  if (mode == "nocommit") return no_commitment_two_period(gamma);
  if (mode == "block") return block_policy(*net, T);
  if (mode == "nonuniform") return nonuniform_policy(*net, *make_distribution(config.distribution), T);
  if (mode == "discriminate") return discrimination_policy(*net, T);
  if (mode == "static") return static_policy(*net);
  if (mode == "allsales") return all_sales_policy(*net, T, config.with_limit);
  throw Error(ErrorKind::InvalidParameter, "unknown mode '" + mode + "'");
}

int run_price_path(const RunConfig& config, std::ostream& out) {
  const bool scalar_mode = config.mode == "uniform" || config.mode == "nocommit";
  const bool needs_rounds = config.mode != "static" && config.mode != "nocommit";
  std::optional<BlockNetwork> net;
  double gamma = 0.0;
  if (scalar_mode) {
    gamma = single_gamma(config);
  } else {
    net = resolve_network(config);
  }
  const int T = needs_rounds ? single_rounds(config) : 2;
  const PolicyReport report = policy_for(config.mode, config, net ? &*net : nullptr, gamma, T);
  emit(config, policy_table(report), out);
  json doc = to_json(report);
  doc["mode"] = config.mode;
  emit_json(config.json_out, doc);
  if (config.thresholds_out) {
    if (!report.thresholds) throw Error(ErrorKind::InvalidParameter, "this mode has no threshold schedule");
    RunConfig threshold_config = config;
    threshold_config.out = config.thresholds_out;
    emit(threshold_config, threshold_table(*report.thresholds), out);
  }
  return 0;
}

int run_sweep(const RunConfig& config, std::ostream& out) {
  static const std::vector<std::string> allowed = {"uniform", "block", "nonuniform", "allsales"};
  if (std::find(allowed.begin(), allowed.end(), config.mode) == allowed.end()) {
    throw Error(ErrorKind::InvalidParameter, "sweep supports modes uniform, block, nonuniform and allsales");
  }
  if (config.rounds.empty()) throw Error(ErrorKind::InvalidParameter, "--rounds is required");
  CsvTable table;
  table.header = {"gamma", "T", "revenue", "welfare", "first_price", "last_price", "price_step"};
  auto add_rows = [&](double gamma_column, const BlockNetwork* net, double gamma) {
    for (int T : config.rounds) {
      const PolicyReport report = policy_for(config.mode, config, net, gamma, T);
      const PricePath& path = report.path;
      const double step = T >= 2 ? path.at_round(T) - path.at_round(T - 1) : 0.0;
      table.add_row({format_number(gamma_column), std::to_string(T), format_number(report.normalized_revenue),
                     report.welfare ? format_number(*report.welfare) : "", format_number(path.at_round(1)),
                     format_number(path.at_round(T)), format_number(step)});
    }
  };
  if (config.network_path) {
    const BlockNetwork net = load_network(*config.network_path);
    add_rows(compute_measures(net).network_effect, &net, 0.0);
  } else {
    if (config.gammas.empty()) throw Error(ErrorKind::InvalidParameter, "pass --gamma values or --network FILE");
    for (double g : config.gammas) {
      if (config.mode == "uniform") {
        add_rows(g, nullptr, g);
      } else {
        const BlockNetwork net = BlockNetwork::uniform(g);
        add_rows(g, &net, g);
      }
    }
  }
  emit(config, table, out);
  return 0;
}

int run_compare(const RunConfig& config, std::ostream& out) {
  if (config.rounds.empty()) throw Error(ErrorKind::InvalidParameter, "--rounds is required");
  if (config.families.empty()) throw Error(ErrorKind::InvalidParameter, "--family is required");
  EdgeOrientation orientation;
  if (config.orientation == "directed") {
    orientation = EdgeOrientation::Directed;
  } else if (config.orientation == "bidirectional") {
    orientation = EdgeOrientation::Bidirectional;
  } else {
    throw Error(ErrorKind::InvalidParameter, "--orientation must be directed or bidirectional");
  }
  CsvTable table;
  table.header = {"T", "family", "taylor_revenue", "exact_revenue", "asymmetry"};
  const int m = config.family_nodes;
  for (int T : config.rounds) {
    for (const auto& family : config.families) {
      const Mat C = family_matrix(family, m, config.weight_sum, orientation);
      const Mat E = Mat::Identity(m, m) + config.delta * C;
      const double s_sum = solve(E, ones(m)).sum();
      table.add_row({std::to_string(T), family, format_number(taylor_revenue(C, T, config.delta)),
                     format_number(block_revenue(s_sum, T)), format_number(asymmetry(C))});
    }
  }
  emit(config, table, out);
  return 0;
}

int run_simulate(const RunConfig& config, std::ostream& out) {
  const BlockNetwork net = resolve_network(config);
  const DistributionPtr dist = make_distribution(config.distribution);
  const int T = single_rounds(config);
  MonteCarloOptions options;
  options.threads = config.threads;
  if (config.final_round == "scheduled") {
    options.rule = FinalRoundRule::Scheduled;
  } else if (config.final_round == "realized") {
    options.rule = FinalRoundRule::Realized;
  } else {
    throw Error(ErrorKind::InvalidParameter, "--final-round must be scheduled or realized");
  }
  const std::vector<int> n_list = config.n_list.empty() ? std::vector<int>{config.n} : config.n_list;
  const auto rows = convergence_study(net, *dist, T, n_list, config.reps, config.seed, options);
  emit(config, convergence_table(rows), out);

  if (config.counts_out || config.json_out) {
    const bool uniform = dist->name() == "uniform";
    const PolicyReport policy = uniform ? block_policy(net, T) : nonuniform_policy(net, *dist, T);
    const SimulationReport sim = monte_carlo(net, *dist, policy.path, n_list.back(), config.reps, config.seed, options);
    if (config.counts_out) {
      RunConfig counts_config = config;
      counts_config.out = config.counts_out;
      emit(counts_config, counts_table(sim), out);
    }
    json doc = {{"policy", to_json(policy)}, {"simulation", to_json(sim)}, {"n", n_list.back()}};
    emit_json(config.json_out, doc);
  }
  return 0;
}

void add_comparison(CsvTable& table, const std::string& quantity, double closed, double oracle) {
  table.add_row({quantity, format_number(closed), format_number(oracle), format_number(std::abs(closed - oracle))});
}

int run_oracle(const RunConfig& config, std::ostream& out) {
  CsvTable table;
  table.header = {"quantity", "closed_form", "oracle", "abs_diff"};
  json doc = {{"kind", config.mode}};
  OptOptions options;
  options.seed = config.seed;
  auto compare_policy = [&](const PolicyReport& policy, const ObjectiveSpec& spec) {
    const OptResult result = maximize(spec, options);
    add_comparison(table, "revenue", policy.normalized_revenue, result.value);
    const PricePath& path = policy.path;
    for (int r = 1; r <= path.T(); ++r) {
      for (int c = 0; c < path.columns(); ++c) {
        const std::string name = path.is_per_group() ? fmt::format("price_round{}_g{}", r, c + 1)
                                                     : fmt::format("price_round{}", r);
        add_comparison(table, name, path.at_round(r, c), result.argmax.at_round(r, c));
      }
    }
    doc["policy"] = to_json(policy);
    doc["oracle"] = to_json(result);
    doc["hessian"] = to_json(hessian_check(spec));
  };
  if (config.mode == "uniform") {
    const double g = single_gamma(config);
    const int T = single_rounds(config);
    compare_policy(uniform_policy(g, T), ObjectiveSpec::uniform(g, T));
  } else if (config.mode == "block") {
    const BlockNetwork net = resolve_network(config);
    const int T = single_rounds(config);
    compare_policy(block_policy(net, T), ObjectiveSpec::block(net, T));
  } else if (config.mode == "nonuniform") {
    const BlockNetwork net = resolve_network(config);
    const int T = single_rounds(config);
    const DistributionPtr dist = make_distribution(config.distribution);
    compare_policy(nonuniform_policy(net, *dist, T), ObjectiveSpec::nonuniform(net, dist, T));
  } else if (config.mode == "discrimination") {
    const BlockNetwork net = resolve_network(config);
    const int T = single_rounds(config);
    compare_policy(discrimination_policy(net, T), ObjectiveSpec::discrimination(net, T));
  } else if (config.mode == "two-buyer") {
    const TwoBuyerReport report = two_buyer_all_sales_oracle(single_gamma(config), config.grid);
    add_comparison(table, "nondecreasing_revenue", report.nondecreasing_closed_form, report.nondecreasing_revenue);
    add_comparison(table, "nonincreasing_revenue", report.nonincreasing_closed_form, report.nonincreasing_revenue);
    doc["report"] = to_json(report);
  } else if (config.mode == "kkt") {
    const BlockNetwork net = resolve_network(config);
    const int T = single_rounds(config);
    const KktReport report = kkt_check_all_sales(net, T);
    for (Eigen::Index j = 0; j < report.multipliers.size(); ++j) {
      table.add_row({fmt::format("mu_{}", j + 1), format_number(report.multipliers[j]), "", ""});
    }
    table.add_row({"stationarity_residual", "0", format_number(report.stationarity_residual),
                   format_number(report.stationarity_residual)});
    doc["report"] = to_json(report);
  } else {
    throw Error(ErrorKind::InvalidParameter,
                "oracle --kind must be uniform, block, nonuniform, discrimination, two-buyer or kkt");
  }
  emit(config, table, out);
  emit_json(config.json_out, doc);
  return 0;
}

int run_check(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const BlockNetwork net = resolve_network(config);
  const ValidationReport a2 = check_assumption2(net);
  json doc = {{"assumption2", to_json(a2)}};
  bool passed = a2.passed();
  if (a2.conditions[0].passed) {
    const NetworkMeasures measures = compute_measures(net);
    doc["measures"] = {{"s_sum", measures.s_sum},
                       {"network_effect", measures.network_effect},
                       {"asymmetry", measures.asymmetry}};
  }
  if (config.distribution != "uniform") {
    const ValidationReport a3 = check_assumption3(net, *make_distribution(config.distribution), config.grid);
    doc["assumption3"] = to_json(a3);
    passed = passed && a3.passed();
    if (!a3.passed()) err << a3.summary() << '\n';
  }
  if (!a2.passed()) err << a2.summary() << '\n';
  doc["passed"] = passed;
  const std::string text = doc.dump(2) + "\n";
  if (config.out) {
    write_file_atomic(*config.out, text);
  } else {
    out << text;
  }
  return passed ? 0 : 2;
}

void report_assumptions(const RunConfig& config, std::ostream& err) {
  try {
    const BlockNetwork net = resolve_network(config);
    json doc = {{"assumption2", to_json(check_assumption2(net))}};
    if (config.distribution != "uniform") {
      doc["assumption3"] = to_json(check_assumption3(net, *make_distribution(config.distribution), config.grid));
    }
    err << doc.dump(2) << '\n';
  } catch (const std::exception&) {
  }
}

}  // namespace

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> values;
  const auto dots = text.find("..");
  if (dots != std::string::npos) {
    const int lo = parse_int(trim(text.substr(0, dots)));
    const int hi = parse_int(trim(text.substr(dots + 2)));
    if (hi < lo) throw Error(ErrorKind::InvalidParameter, "range '" + text + "' is empty");
    for (int v = lo; v <= hi; ++v) values.push_back(v);
    return values;
  }
  for (const auto& part : split(text, ',')) values.push_back(parse_int(part));
  return values;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> values;
  for (const auto& part : split(text, ',')) values.push_back(parse_double(part));
  return values;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    for (int T : config.rounds) {
      if (T < 1) throw Error(ErrorKind::InvalidParameter, "rounds must be at least 1");
    }
    if (config.command == "price-path") return run_price_path(config, out);
    if (config.command == "sweep") return run_sweep(config, out);
    if (config.command == "compare-networks") return run_compare(config, out);
    if (config.command == "simulate") return run_simulate(config, out);
    if (config.command == "oracle") return run_oracle(config, out);
    if (config.command == "check") return run_check(config, out, err);
    err << "error: unknown command '" << config.command << "'\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    if (e.kind() == ErrorKind::AssumptionViolated) report_assumptions(config, err);
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return 1;
  }
}

namespace {

unsigned thread_cap() {
  const unsigned hardware = std::max(1u, std::thread::hardware_concurrency());
  const char* env = std::getenv("NETPRICE_THREADS");
  if (env == nullptr || *env == '\0') return hardware;
  try {
    const int requested = parse_int(env);
    if (requested >= 1) return std::min(hardware, static_cast<unsigned>(requested));
  } catch (const Error&) {
  }
  return hardware;
}

}  // namespace

int main_entry(int argc, char** argv) {
  CLI::App app{"netprice: committed dynamic pricing with network externalities"};
  app.require_subcommand(1);

  RunConfig config;
  std::string gamma_text, rounds_text, n_list_text, family_text, network, out, json_out, thresholds_out, counts_out;

  auto add_network = [&](CLI::App* sub) {
    sub->add_option("--gamma", gamma_text, "Uniform externality g, or a comma-separated list for sweep");
    sub->add_option("--network", network, "Network JSON file {\"alpha\": [...], \"E\": [[...]]}");
  };
  auto add_output = [&](CLI::App* sub) {
    sub->add_option("--out", out, "Output path (stdout when omitted)");
    sub->add_flag("--no-header", config.no_header, "Omit the timestamp comment line");
  };

  auto* price = app.add_subcommand("price-path", "Optimal price path for one policy");
  price->add_option("--mode", config.mode, "Policy")
      ->required()
      ->check(CLI::IsMember({"uniform", "block", "nonuniform", "discriminate", "static", "nocommit", "allsales"}));
  add_network(price);
  price->add_option("--dist", config.distribution, "uniform, power:k or table:FILE");
  price->add_option("--rounds", rounds_text, "Number of rounds T");
  price->add_option("--json", json_out, "Also write the full report as JSON");
  price->add_option("--thresholds", thresholds_out, "Also write the threshold schedule as CSV");
  price->add_flag("--with-limit", config.with_limit, "allsales: report the infinite-horizon revenue");
  add_output(price);

  auto* sweep = app.add_subcommand("sweep", "Revenue and prices across rounds");
  sweep->add_option("--mode", config.mode, "Policy")
      ->required()
      ->check(CLI::IsMember({"uniform", "block", "nonuniform", "allsales"}));
  add_network(sweep);
  sweep->add_option("--dist", config.distribution, "uniform, power:k or table:FILE");
  sweep->add_option("--rounds", rounds_text, "Range such as 1..20")->required();
  add_output(sweep);

  auto* compare = app.add_subcommand("compare-networks", "Second-order revenue for star, chain and ring networks");
  compare->add_option("--family", family_text, "Comma-separated subset of star,chain,ring")->required();
  compare->add_option("--m", config.family_nodes, "Number of groups")->check(CLI::Range(2, 10000));
  compare->add_option("--delta", config.delta, "Perturbation size");
  compare->add_option("--weight-sum", config.weight_sum, "Total edge weight");
  compare->add_option("--orientation", config.orientation, "directed or bidirectional edges");
  compare->add_option("--rounds", rounds_text, "Range such as 1..12")->required();
  add_output(compare);

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo markets under the optimal policy");
  add_network(simulate);
  simulate->add_option("--dist", config.distribution, "uniform, power:k or table:FILE");
  simulate->add_option("--rounds", rounds_text, "Number of rounds T")->required();
  simulate->add_option("--n", config.n, "Buyers per market")->check(CLI::PositiveNumber);
  simulate->add_option("--convergence", n_list_text, "Ascending market sizes, e.g. 1000,4000,16000");
  simulate->add_option("--reps", config.reps, "Replications")->check(CLI::Range(2, 1000000));
  simulate->add_option("--seed", config.seed, "Random seed");
  simulate->add_option("--final-round", config.final_round, "scheduled or realized");
  simulate->add_option("--counts", counts_out, "Also write per-round purchase counts");
  simulate->add_option("--json", json_out, "Also write the last simulation as JSON");
  add_output(simulate);

  auto* oracle = app.add_subcommand("oracle", "Closed form against numerical optimization");
  oracle->add_option("--kind", config.mode, "uniform, block, nonuniform, discrimination, two-buyer or kkt")->required();
  add_network(oracle);
  oracle->add_option("--dist", config.distribution, "uniform, power:k or table:FILE");
  oracle->add_option("--rounds", rounds_text, "Number of rounds T");
  oracle->add_option("--grid", config.grid, "Grid points per axis for two-buyer");
  oracle->add_option("--seed", config.seed, "Multistart seed");
  oracle->add_option("--json", json_out, "Also write the full reports as JSON");
  add_output(oracle);

  auto* check = app.add_subcommand("check", "Validate a network against the model assumptions");
  add_network(check);
  check->add_option("--dist", config.distribution, "uniform, power:k or table:FILE");
  check->add_option("--grid", config.grid, "Grid points for density conditions")->check(CLI::Range(2, 10000000));
  check->add_option("--out", out, "Output path (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  config.command = app.get_subcommands().front()->get_name();
  try {
    if (!gamma_text.empty()) config.gammas = parse_double_list(gamma_text);
    if (!rounds_text.empty()) config.rounds = parse_int_list(rounds_text);
    if (!n_list_text.empty()) config.n_list = parse_int_list(n_list_text);
    if (!family_text.empty()) {
      for (const auto& f : split(family_text, ',')) config.families.push_back(f);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  if (!network.empty()) config.network_path = network;
  if (!out.empty()) config.out = out;
  if (!json_out.empty()) config.json_out = json_out;
  if (!thresholds_out.empty()) config.thresholds_out = thresholds_out;
  if (!counts_out.empty()) config.counts_out = counts_out;
  config.threads = thread_cap();
  return run(config, std::cout, std::cerr);
}

}  // namespace netprice::cli
