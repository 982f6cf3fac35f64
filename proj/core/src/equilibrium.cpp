#include "obmatch/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "obmatch/covering.hpp"
#include "obmatch/errors.hpp"
#include "obmatch/ranking.hpp"

namespace obmatch {

namespace {

void require_config(const GameConfig& cfg) {
  require_valid(cfg.inst);
  if (!(cfg.grid_step > 0.0) || !std::isfinite(cfg.grid_step)) {
    throw ParameterError("grid_step must be a positive real");
  }
  if (!(cfg.epsilon >= 0.0) || !std::isfinite(cfg.epsilon)) {
    throw ParameterError("epsilon must be >= 0");
  }
  if (static_cast<int>(cfg.values.size()) != cfg.inst.n_buyers) {
    throw ParameterError("values length must equal n_buyers");
  }
  for (double v : cfg.values) {
    if (!std::isfinite(v) || v < 0.0) {
      throw ParameterError("values must be finite non-negative reals");
    }
  }
}

void require_on_grid(const GameConfig& cfg, const BidProfile& bids,
                     const std::vector<double>& grid) {
  for (std::size_t i = 0; i < bids.bids.size(); ++i) {
    const double b = bids.bids[i];
    const double steps = b / cfg.grid_step;
    const double nearest = std::round(steps) * cfg.grid_step;
    if (std::abs(b - nearest) > 1e-9 || b < 0.0 ||
        b > grid.back() + 1e-9) {
      std::ostringstream os;
      os << "bid " << b << " of buyer " << i << " is not on the grid";
      throw ParameterError(os.str());
    }
  }
}

}  // namespace

GameConfig make_game(Instance inst, double grid_step, double epsilon) {
  GameConfig cfg;
  cfg.values = inst.values;
  cfg.inst = std::move(inst);
  cfg.grid_step = grid_step;
  cfg.epsilon = epsilon;
  return cfg;
}

std::vector<double> bid_grid(const GameConfig& cfg) {
  require_config(cfg);
  const double max_value =
      cfg.values.empty() ? 0.0
                         : *std::max_element(cfg.values.begin(), cfg.values.end());
  std::vector<double> grid;
  for (int k = 0;; ++k) {
    const double b = static_cast<double>(k) * cfg.grid_step;
    if (b > max_value + 1e-12) break;
    if (k > 10'000'000) {
      throw SizeGuardError("bid_grid: more than 1e7 grid points; coarsen "
                           "grid_step");
    }
    grid.push_back(b);
  }
  return grid;
}

double utility(const GameConfig& cfg, const BidProfile& bids, int buyer) {
  require_config(cfg);
  if (buyer < 0 || buyer >= cfg.inst.n_buyers) {
    throw ParameterError("utility: buyer index out of range");
  }
  const Outcome outcome = run_auction(cfg.inst, bids);
  if (!outcome.allocation[static_cast<std::size_t>(buyer)]) return 0.0;
  return cfg.values[static_cast<std::size_t>(buyer)] -
         bids.bids[static_cast<std::size_t>(buyer)];
}

BestResponse best_response(const GameConfig& cfg, const BidProfile& bids,
                           int buyer) {
  const std::vector<double> grid = bid_grid(cfg);
  if (buyer < 0 || buyer >= cfg.inst.n_buyers) {
    throw ParameterError("best_response: buyer index out of range");
  }
  BidProfile trial = bids;
  BestResponse best{grid.front(), -std::numeric_limits<double>::infinity()};
  for (double b : grid) {
    trial.bids[static_cast<std::size_t>(buyer)] = b;
    const double u = utility(cfg, trial, buyer);
    if (u > best.utility) best = {b, u};  // strict >: ties keep the lowest bid
  }
  return best;
}

bool verify_epsilon_equilibrium(const GameConfig& cfg,
                                const BidProfile& bids) {
  const std::vector<double> grid = bid_grid(cfg);
  if (static_cast<int>(bids.bids.size()) != cfg.inst.n_buyers) {
    throw ParameterError("bid profile length must equal n_buyers");
  }
  require_on_grid(cfg, bids, grid);
  for (int i = 0; i < cfg.inst.n_buyers; ++i) {
    const double current = utility(cfg, bids, i);
    const BestResponse best = best_response(cfg, bids, i);
    if (current < best.utility - cfg.epsilon) return false;
  }
  return true;
}

EquilibriumResult find_pure_equilibria(const GameConfig& cfg) {
  const std::vector<double> grid = bid_grid(cfg);
  const double profile_count =
      std::pow(static_cast<double>(grid.size()),
               static_cast<double>(cfg.inst.n_buyers));
  if (profile_count > 1e7) {
    std::ostringstream os;
    os << "find_pure_equilibria: " << grid.size() << "^" << cfg.inst.n_buyers
       << " grid profiles exceed the 1e7 guard; coarsen grid_step";
    throw SizeGuardError(os.str());
  }

  EquilibriumResult result;
  result.opt_welfare = max_weight_feasible_matching(cfg.inst, cfg.values).weight;

  const int n = cfg.inst.n_buyers;
  BidProfile profile;
  profile.bids.assign(static_cast<std::size_t>(n), 0.0);
  std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);

  double min_welfare = std::numeric_limits<double>::infinity();
  for (;;) {
    for (int i = 0; i < n; ++i) {
      profile.bids[static_cast<std::size_t>(i)] =
          grid[idx[static_cast<std::size_t>(i)]];
    }
    bool is_equilibrium = true;
    for (int i = 0; i < n && is_equilibrium; ++i) {
      const double current = utility(cfg, profile, i);
      const BestResponse best = best_response(cfg, profile, i);
      if (current < best.utility - cfg.epsilon) is_equilibrium = false;
    }
    if (is_equilibrium) {
      const Outcome outcome = run_auction(cfg.inst, profile);
      double welfare = 0.0;
      for (int i = 0; i < n; ++i) {
        if (outcome.allocation[static_cast<std::size_t>(i)]) {
          welfare += cfg.values[static_cast<std::size_t>(i)];
        }
      }
      result.profiles.push_back(profile);
      result.welfares.push_back(welfare);
      min_welfare = std::min(min_welfare, welfare);
    }

    // Odometer step over grid indices.
    int pos = 0;
    while (pos < n) {
      if (++idx[static_cast<std::size_t>(pos)] < grid.size()) break;
      idx[static_cast<std::size_t>(pos)] = 0;
      ++pos;
    }
    if (pos == n) break;
  }

  if (result.profiles.empty()) {
    result.min_ratio = std::numeric_limits<double>::infinity();
  } else if (result.opt_welfare == 0.0) {
    result.min_ratio = 1.0;  // nothing to gain, every equilibrium is optimal
  } else {
    result.min_ratio = min_welfare / result.opt_welfare;
  }
  return result;
}

bool verify_poa_bound(const EquilibriumResult& result, double mu,
                      double slack) {
  if (!(mu > 0.0) || !(slack >= 0.0)) {
    throw ParameterError("verify_poa_bound: need mu > 0 and slack >= 0");
  }
  return result.min_ratio >= kOneMinusInvE / mu - slack;
}

double default_poa_slack(const GameConfig& cfg) {
  return (cfg.epsilon + cfg.grid_step) *
         static_cast<double>(cfg.inst.n_buyers);
}

bool half_value_deviation_check(const GameConfig& cfg,
                                const BidProfile& bids) {
  require_config(cfg);
  if (static_cast<int>(bids.bids.size()) != cfg.inst.n_buyers) {
    throw ParameterError("bid profile length must equal n_buyers");
  }
  for (int i = 0; i < cfg.inst.n_buyers; ++i) {
    const MaybeCriticalBid t = critical_bid(cfg.inst, bids, i);
    if (!t) continue;  // unmatchable: t_i = +inf, inequality vacuous
    const double v = cfg.values[static_cast<std::size_t>(i)];
    BidProfile deviated = bids;
    deviated.bids[static_cast<std::size_t>(i)] = v / 2.0;
    const double u_dev = utility(cfg, deviated, i);
    if (u_dev < v / 2.0 - t->threshold) return false;
  }
  return true;
}

}  // namespace obmatch
