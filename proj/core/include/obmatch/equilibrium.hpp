#pragma once

#include <vector>

#include "obmatch/instance.hpp"
#include "obmatch/mechanism.hpp"

namespace obmatch {

/// A complete-information bidding game over the winner-pays-bid mechanism,
/// with bids restricted to the grid {0, grid_step, 2 grid_step, ...} up to
/// max(values).
struct GameConfig {
  Instance inst;
  std::vector<double> values;  // defaults to inst.values
  double grid_step = 0.05;
  double epsilon = 0.0;
};

/// Convenience constructor taking values from the instance.
GameConfig make_game(Instance inst, double grid_step, double epsilon);

/// The bid grid: multiples of grid_step from 0 up to max(values).
std::vector<double> bid_grid(const GameConfig& cfg);

/// Quasilinear utility of one buyer: (v_i - b_i) if matched, else exactly 0.
/// Accepts off-grid bids.
double utility(const GameConfig& cfg, const BidProfile& bids, int buyer);

struct BestResponse {
  double bid = 0.0;
  double utility = 0.0;
};

/// Exhaustive argmax of utility over the bid grid for one buyer, the other
/// bids held fixed; ties resolve to the lowest bid.
BestResponse best_response(const GameConfig& cfg, const BidProfile& bids,
                           int buyer);

/// True iff no buyer can gain more than epsilon by a unilateral grid
/// deviation. All bids must lie on the grid.
bool verify_epsilon_equilibrium(const GameConfig& cfg, const BidProfile& bids);

struct EquilibriumResult {
  std::vector<BidProfile> profiles;  // every pure epsilon-equilibrium found
  std::vector<double> welfares;      // sum of v_i over matched buyers
  double opt_welfare = 0.0;
  double min_ratio = 0.0;  // min(welfares) / opt_welfare; +inf if none found
};

/// Enumerates every grid profile and keeps the epsilon-equilibria. Refuses
/// searches beyond 10^7 profiles.
EquilibriumResult find_pure_equilibria(const GameConfig& cfg);

/// True iff min_ratio >= (1 - 1/e) / mu - slack. Vacuously true when no
/// equilibrium was found.
bool verify_poa_bound(const EquilibriumResult& result, double mu,
                      double slack);

/// Discretization allowance used by default when checking the bound:
/// (epsilon + grid_step) * n_buyers.
double default_poa_slack(const GameConfig& cfg);

/// Checks the half-value deviation property for every buyer: the utility of
/// deviating to v_i / 2 is at least v_i / 2 - t_i. Buyers with no edges have
/// t_i = +inf, making the inequality vacuous.
bool half_value_deviation_check(const GameConfig& cfg, const BidProfile& bids);

}  // namespace obmatch
