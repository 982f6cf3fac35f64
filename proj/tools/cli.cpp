#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "obmatch/covering.hpp"
#include "obmatch/equilibrium.hpp"
#include "obmatch/errors.hpp"
#include "obmatch/instance.hpp"
#include "obmatch/mechanism.hpp"
#include "obmatch/ranking.hpp"
#include "obmatch/rng.hpp"

namespace obmatch::cli {

using nlohmann::json;

namespace {

struct CommandSpec {
  Command command;
  const char* name;
  const char* description;
  bool takes_input;
};

constexpr CommandSpec kCommands[] = {
    {Command::kGenerate, "generate", "Generate a benchmark instance", false},
    {Command::kSimulate, "simulate", "Run the winner-pays-bid auction once",
     true},
    {Command::kCriticalBids, "critical-bids",
     "Compute per-buyer critical bids", true},
    {Command::kVerifyCovering, "verify-covering",
     "Check mu-revenue covering against the exact matching oracle", true},
    {Command::kVerifyChain, "verify-chain",
     "Check the winning-bids / item-revenue / critical-surplus chain on "
     "every feasible matching",
     true},
    {Command::kRankingRatio, "ranking-ratio",
     "Monte Carlo competitive-ratio estimate for the priority rule", true},
    {Command::kExactRanking, "exact-ranking",
     "Exact expected matched count over all priority orders", true},
    {Command::kGreedy, "greedy", "Non-strategic greedy baseline", true},
    {Command::kEquilibria, "equilibria",
     "Enumerate pure epsilon-equilibria on the bid grid", true},
    {Command::kVerifyPoa, "verify-poa",
     "Check the equilibrium welfare bound over the enumerated equilibria",
     true},
    {Command::kValueCovering, "value-covering",
     "Check the deviation-bid distribution: closed form vs quadrature and "
     "sampler CDF",
     false},
};

const char* command_name(Command c) {
  for (const CommandSpec& spec : kCommands) {
    if (spec.command == c) return spec.name;
  }
  return "?";
}

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

struct LoadedInput {
  Instance inst;
  std::optional<BidProfile> bids;
};

LoadedInput load_input(const RunConfig& cfg) {
  if (!cfg.input_path) {
    throw UsageError(std::string(command_name(cfg.command)) +
                     ": an input instance file is required");
  }
  std::ifstream in(*cfg.input_path);
  if (!in) {
    throw UsageError("cannot read input file " + *cfg.input_path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();

  LoadedInput loaded;
  loaded.inst = parse(text);
  const json j = json::parse(text);
  if (j.contains("bids")) {
    BidProfile bids;
    try {
      bids.bids = j["bids"].get<std::vector<double>>();
    } catch (const json::exception& e) {
      throw ParseError(std::string("bad \"bids\" array: ") + e.what());
    }
    if (static_cast<int>(bids.bids.size()) != loaded.inst.n_buyers) {
      throw ParseError("\"bids\" length does not match n_buyers");
    }
    loaded.bids = std::move(bids);
  }
  return loaded;
}

// Bids for commands that need a profile but whose input has none: each buyer
// draws u in (0, 1] from the seed and bids v_i (1 - e^{-u}).
BidProfile sample_bids(const Instance& inst, std::uint64_t seed) {
  std::mt19937_64 gen(mix_seed(seed, 0));
  BidProfile bids;
  bids.bids.reserve(static_cast<std::size_t>(inst.n_buyers));
  for (int i = 0; i < inst.n_buyers; ++i) {
    const double u = uniform_unit_positive(gen);
    bids.bids.push_back(
        smoothness_bid_sample(inst.values[static_cast<std::size_t>(i)], u));
  }
  return bids;
}

json matching_to_json(const Matching& m) {
  json arr = json::array();
  for (const Edge& e : m.pairs) arr.push_back({e.buyer, e.item});
  return arr;
}

json edges_to_json(const std::vector<Edge>& edges) {
  json arr = json::array();
  for (const Edge& e : edges) arr.push_back({e.buyer, e.item});
  return arr;
}

json criticals_to_json(const CriticalBids& criticals) {
  json arr = json::array();
  for (const MaybeCriticalBid& t : criticals.thresholds) {
    if (!t) {
      arr.push_back(json{{"unmatchable", true}});
    } else {
      arr.push_back(json{{"threshold", t->threshold},
                         {"wins_at_threshold", t->wins_at_threshold}});
    }
  }
  return arr;
}

json outcome_to_json(const Outcome& outcome) {
  return json{{"matching", edges_to_json(outcome.matching)},
              {"item_revenues", outcome.item_revenues},
              {"allocation", outcome.allocation},
              {"payments", outcome.payments},
              {"revenue", outcome.revenue}};
}

// Simpson quadrature of the deviation utility (v - b) f(b) over [t, bmax]
// with f(b) = 1 / (v - b); kept independent of value_covering_lhs.
double integrate_deviation_utility(double v, double t, int panels) {
  const double bmax = kOneMinusInvE * v;
  if (t >= bmax) return 0.0;
  auto integrand = [v](double b) { return (v - b) * (1.0 / (v - b)); };
  const double h = (bmax - t) / (2.0 * panels);
  double sum = integrand(t) + integrand(bmax);
  for (int k = 1; k < 2 * panels; ++k) {
    sum += integrand(t + h * k) * (k % 2 == 1 ? 4.0 : 2.0);
  }
  return sum * h / 3.0;
}

struct CommandOutput {
  json result;
  bool violation = false;
  std::optional<std::string> raw_text;  // overrides the report wrapper
  std::optional<std::string> csv_text;
};

CommandOutput run_generate(const RunConfig& cfg) {
  Instance inst;
  if (cfg.family == "random") {
    inst = gen_random(cfg.gen_buyers, cfg.gen_items, cfg.edge_prob,
                      cfg.value_low, cfg.value_high, cfg.seed);
  } else if (cfg.family == "triangular") {
    inst = gen_triangular(cfg.triangular_n);
  } else {
    throw UsageError("unknown family \"" + cfg.family +
                     "\"; expected random or triangular");
  }
  CommandOutput out;
  out.raw_text = serialize(inst);
  return out;
}

CommandOutput run_simulate(const RunConfig& cfg, const LoadedInput& input) {
  const BidProfile bids =
      input.bids ? *input.bids : sample_bids(input.inst, cfg.seed);
  const Outcome outcome = run_auction(input.inst, bids);
  CommandOutput out;
  out.result = outcome_to_json(outcome);
  out.result["bids"] = bids.bids;
  out.result["bids_source"] = input.bids ? "file" : "sampled";
  return out;
}

CommandOutput run_critical_bids(const RunConfig& cfg,
                                const LoadedInput& input) {
  const BidProfile bids =
      input.bids ? *input.bids : sample_bids(input.inst, cfg.seed);
  const CriticalBids criticals = all_critical_bids(input.inst, bids);
  CommandOutput out;
  out.result["bids"] = bids.bids;
  out.result["bids_source"] = input.bids ? "file" : "sampled";
  out.result["critical_bids"] = criticals_to_json(criticals);
  return out;
}

CommandOutput run_verify_covering(const RunConfig& cfg,
                                  const LoadedInput& input) {
  const BidProfile bids =
      input.bids ? *input.bids : sample_bids(input.inst, cfg.seed);
  const CoveringReport report =
      verify_revenue_covering(input.inst, bids, cfg.mu);
  CommandOutput out;
  out.result = json{{"mu", report.mu},
                    {"lhs", report.lhs},
                    {"rhs", report.rhs},
                    {"slack", report.slack},
                    {"holds", report.holds},
                    {"witness_matching", matching_to_json(report.witness_matching)},
                    {"bids", bids.bids},
                    {"bids_source", input.bids ? "file" : "sampled"}};
  out.violation = !report.holds;
  return out;
}

CommandOutput run_verify_chain(const RunConfig& cfg,
                               const LoadedInput& input) {
  const BidProfile bids =
      input.bids ? *input.bids : sample_bids(input.inst, cfg.seed);
  const Outcome outcome = run_auction(input.inst, bids);
  const CriticalBids criticals = all_critical_bids(input.inst, bids);

  long long checked = 0;
  bool all_hold = true;
  json first_failure;
  for_each_matching(input.inst, [&](const Matching& m) {
    const ChainReport report = verify_chain(input.inst, m, outcome, criticals);
    ++checked;
    if (!report.holds && all_hold) {
      all_hold = false;
      first_failure = json{{"matching", matching_to_json(m)},
                           {"sum_winning_bids", report.sum_winning_bids},
                           {"matched_item_revenue", report.matched_item_revenue},
                           {"critical_surplus", report.critical_surplus}};
    }
  });

  CommandOutput out;
  out.result["bids"] = bids.bids;
  out.result["bids_source"] = input.bids ? "file" : "sampled";
  out.result["matchings_checked"] = checked;
  out.result["all_hold"] = all_hold;
  if (!all_hold) out.result["first_failure"] = first_failure;
  out.violation = !all_hold;
  return out;
}

CommandOutput run_ranking_ratio(const RunConfig& cfg,
                                const LoadedInput& input) {
  const RatioEstimate est =
      estimate_competitive_ratio(input.inst, cfg.trials, cfg.seed);
  CommandOutput out;
  out.result = json{{"mean_matched", est.mean_matched},
                    {"opt", est.opt},
                    {"ratio", est.ratio},
                    {"std_error", est.std_error},
                    {"trials", est.trials},
                    {"rng_seed", est.seed}};
  std::ostringstream csv;
  csv << "instance_id,n,trials,seed,mean_matched,opt,ratio,std_error\n"
      << instance_hash(input.inst) << ',' << input.inst.n_buyers << ','
      << est.trials << ',' << est.seed << ',' << format_double(est.mean_matched)
      << ',' << format_double(est.opt) << ',' << format_double(est.ratio) << ','
      << format_double(est.std_error) << '\n';
  out.csv_text = csv.str();
  return out;
}

CommandOutput run_exact_ranking(const LoadedInput& input) {
  const double expectation = exact_ranking_expectation(input.inst);
  CommandOutput out;
  out.result = json{{"expectation", expectation},
                    {"n_buyers", input.inst.n_buyers},
                    {"opt", optimal_matching_size(input.inst)}};
  return out;
}

CommandOutput run_greedy(const LoadedInput& input) {
  const Matching m = greedy_nonstrategic(input.inst);
  const int opt = optimal_matching_size(input.inst);
  CommandOutput out;
  out.result["matching"] = matching_to_json(m);
  out.result["matched"] = m.pairs.size();
  out.result["opt"] = opt;
  if (!m.pairs.empty()) {
    out.result["approx_ratio"] =
        static_cast<double>(opt) / static_cast<double>(m.pairs.size());
  }
  return out;
}

json equilibria_to_json(const EquilibriumResult& result) {
  json profiles = json::array();
  for (const BidProfile& p : result.profiles) profiles.push_back(p.bids);
  json j{{"profiles", profiles},
         {"welfares", result.welfares},
         {"opt_welfare", result.opt_welfare},
         {"count", result.profiles.size()}};
  if (std::isfinite(result.min_ratio)) {
    j["min_ratio"] = result.min_ratio;
  } else {
    j["min_ratio"] = nullptr;  // no equilibrium found
  }
  return j;
}

CommandOutput run_equilibria(const RunConfig& cfg, const LoadedInput& input) {
  const GameConfig game =
      make_game(input.inst, cfg.grid_step, cfg.epsilon);
  const EquilibriumResult result = find_pure_equilibria(game);
  CommandOutput out;
  out.result = equilibria_to_json(result);
  out.result["grid_step"] = cfg.grid_step;
  out.result["epsilon"] = cfg.epsilon;
  return out;
}

CommandOutput run_verify_poa(const RunConfig& cfg, const LoadedInput& input) {
  const GameConfig game =
      make_game(input.inst, cfg.grid_step, cfg.epsilon);
  const EquilibriumResult result = find_pure_equilibria(game);
  const double slack = default_poa_slack(game);
  const bool holds = verify_poa_bound(result, cfg.mu, slack);
  CommandOutput out;
  out.result = equilibria_to_json(result);
  out.result["grid_step"] = cfg.grid_step;
  out.result["epsilon"] = cfg.epsilon;
  out.result["mu"] = cfg.mu;
  out.result["slack"] = slack;
  out.result["bound"] = kOneMinusInvE / cfg.mu - slack;
  out.result["holds"] = holds;
  out.violation = !holds;
  return out;
}

CommandOutput run_value_covering(const RunConfig& cfg) {
  constexpr double kValue = 1.0;
  constexpr int kThresholds = 100;
  constexpr double kAgreementTolerance = 1e-6;
  constexpr int kKsSamples = 1000000;
  constexpr double kKsThreshold = 0.002;

  double max_abs_error = 0.0;
  const double support_max = kOneMinusInvE * kValue;
  for (int k = 0; k < kThresholds; ++k) {
    const double t =
        support_max * static_cast<double>(k) / (kThresholds - 1);
    const double closed = value_covering_lhs(kValue, t);
    const double quadrature = integrate_deviation_utility(kValue, t, 512);
    max_abs_error = std::max(max_abs_error, std::abs(closed - quadrature));
  }

  std::mt19937_64 gen(mix_seed(cfg.seed, 0));
  std::vector<double> samples(kKsSamples);
  for (double& s : samples) {
    s = smoothness_bid_sample(kValue, uniform_unit(gen));
  }
  std::sort(samples.begin(), samples.end());
  double ks = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double cdf = -std::log1p(-samples[i] / kValue);
    const double lo = static_cast<double>(i) / kKsSamples;
    const double hi = static_cast<double>(i + 1) / kKsSamples;
    ks = std::max({ks, cdf - lo, hi - cdf});
  }

  const bool holds = max_abs_error <= kAgreementTolerance && ks < kKsThreshold;
  CommandOutput out;
  out.result = json{{"lambda", kOneMinusInvE},
                    {"thresholds_checked", kThresholds},
                    {"max_abs_error", max_abs_error},
                    {"agreement_tolerance", kAgreementTolerance},
                    {"ks_statistic", ks},
                    {"ks_samples", kKsSamples},
                    {"ks_threshold", kKsThreshold},
                    {"holds", holds}};
  out.violation = !holds;
  return out;
}

void write_text(const RunConfig& cfg, const std::string& text,
                std::ostream& out) {
  if (cfg.output_path) {
    std::ofstream file(*cfg.output_path, std::ios::binary);
    if (!file) {
      throw UsageError("cannot write output file " + *cfg.output_path);
    }
    file << text;
  } else {
    out << text;
  }
}

}  // namespace

std::optional<RunConfig> parse_args(const std::vector<std::string>& args,
                                    std::ostream& out) {
  RunConfig cfg;
  CLI::App app{"Simulation and verification toolkit for winner-pays-bid "
               "online matching auctions"};
  app.require_subcommand(1);
  std::string format = "json";
  std::string output_path;
  std::string input_path;

  for (const CommandSpec& spec : kCommands) {
    CLI::App* sub = app.add_subcommand(spec.name, spec.description);
    sub->parse_complete_callback(
        [&cfg, command = spec.command] { cfg.command = command; });
    sub->add_option("--seed", cfg.seed, "RNG seed");
    sub->add_option("--trials", cfg.trials, "Monte Carlo trial count");
    sub->add_option("--mu", cfg.mu, "revenue-covering parameter");
    sub->add_option("--grid-step", cfg.grid_step, "bid grid step");
    sub->add_option("--epsilon", cfg.epsilon, "equilibrium tolerance");
    sub->add_option("--format", format, "output format: json or csv");
    sub->add_option("--out", output_path, "output file (default stdout)");
    if (spec.takes_input) {
      sub->add_option("input", input_path, "instance file")->required();
    }
    if (spec.command == Command::kGenerate) {
      sub->add_option("--family", cfg.family,
                      "instance family: random or triangular");
      sub->add_option("--buyers", cfg.gen_buyers, "buyer count (random)");
      sub->add_option("--items", cfg.gen_items, "item count (random)");
      sub->add_option("--edge-prob", cfg.edge_prob,
                      "edge probability (random)");
      sub->add_option("--value-low", cfg.value_low, "value range low (random)");
      sub->add_option("--value-high", cfg.value_high,
                      "value range high (random)");
      sub->add_option("--n", cfg.triangular_n, "size (triangular)");
    }
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    std::ostringstream help;
    app.exit(e, help, help);
    out << help.str();
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  if (!input_path.empty()) cfg.input_path = input_path;
  if (!output_path.empty()) cfg.output_path = output_path;
  if (format == "json") {
    cfg.format = Format::kJson;
  } else if (format == "csv") {
    cfg.format = Format::kCsv;
  } else {
    throw UsageError("unknown format \"" + format + "\"");
  }
  if (cfg.format == Format::kCsv && cfg.command != Command::kRankingRatio) {
    throw UsageError("--format csv is only available for ranking-ratio");
  }
  return cfg;
}

int run(const RunConfig& cfg, std::ostream& out) {
  CommandOutput result;
  std::optional<std::string> hash;

  switch (cfg.command) {
    case Command::kGenerate:
      result = run_generate(cfg);
      break;
    case Command::kValueCovering:
      result = run_value_covering(cfg);
      break;
    default: {
      const LoadedInput input = load_input(cfg);
      hash = instance_hash(input.inst);
      switch (cfg.command) {
        case Command::kSimulate:
          result = run_simulate(cfg, input);
          break;
        case Command::kCriticalBids:
          result = run_critical_bids(cfg, input);
          break;
        case Command::kVerifyCovering:
          result = run_verify_covering(cfg, input);
          break;
        case Command::kVerifyChain:
          result = run_verify_chain(cfg, input);
          break;
        case Command::kRankingRatio:
          result = run_ranking_ratio(cfg, input);
          break;
        case Command::kExactRanking:
          result = run_exact_ranking(input);
          break;
        case Command::kGreedy:
          result = run_greedy(input);
          break;
        case Command::kEquilibria:
          result = run_equilibria(cfg, input);
          break;
        case Command::kVerifyPoa:
          result = run_verify_poa(cfg, input);
          break;
        default:
          throw UsageError("unhandled command");
      }
      break;
    }
  }

  if (result.raw_text) {
    write_text(cfg, *result.raw_text, out);
  } else if (cfg.format == Format::kCsv) {
    write_text(cfg, result.csv_text.value(), out);
  } else {
    json report{{"command", command_name(cfg.command)},
                {"seed", cfg.seed},
                {"tool_version", kToolVersion},
                {"result", result.result}};
    if (hash) report["instance_hash"] = *hash;
    write_text(cfg, report.dump(2) + "\n", out);
  }
  return result.violation ? 1 : 0;
}

int main_impl(const std::vector<std::string>& args, std::ostream& out,
              std::ostream& err) {
  try {
    const std::optional<RunConfig> cfg = parse_args(args, out);
    if (!cfg) return 0;  // help
    return run(*cfg, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    err << "input error: " << e.what() << "\n";
    return 2;
  } catch (const SizeGuardError& e) {
    err << "refused: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace obmatch::cli
