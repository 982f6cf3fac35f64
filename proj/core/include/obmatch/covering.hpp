#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "obmatch/errors.hpp"
#include "obmatch/instance.hpp"
#include "obmatch/mechanism.hpp"

namespace obmatch {

/// 1 - 1/e, the value-covering constant.
inline const double kOneMinusInvE = -std::expm1(-1.0);

/// Absolute slack tolerance for the revenue-covering verdict.
inline constexpr double kCoveringTolerance = 1e-9;

/// Tolerance for the chain inequalities (finite sums of inputs).
inline constexpr double kChainTolerance = 1e-12;

/// Exhaustive-enumeration guard for enumerate_matchings.
inline constexpr int kMaxEnumerationEdges = 24;

/// A feasible matching: a subset of the instance edges in which each buyer
/// and each item appears at most once. Pairs are kept sorted by buyer index.
struct Matching {
  std::vector<Edge> pairs;
  friend bool operator==(const Matching&, const Matching&) = default;
};

/// Sorts pairs into canonical order. Does not check feasibility.
Matching make_matching(std::vector<Edge> pairs);

/// True iff m.pairs is a subset of inst.edges with no repeated buyer or item.
bool is_feasible(const Instance& inst, const Matching& m);

/// Visits every feasible matching exactly once, including the empty one.
/// Refuses instances with more than kMaxEnumerationEdges edges.
void for_each_matching(const Instance& inst,
                       const std::function<void(const Matching&)>& visit);

/// Collects for_each_matching into a vector.
std::vector<Matching> enumerate_matchings(const Instance& inst);

struct MaxWeightResult {
  Matching matching;
  double weight = 0.0;
};

/// Exact maximum-weight matching where edge (i, j) carries the buyer-local
/// weight buyer_weights[i] >= 0. Buyers are processed in decreasing weight
/// order and inserted via augmenting paths, which is exact for buyer-local
/// weights (the matchable buyer sets form a transversal matroid).
MaxWeightResult max_weight_feasible_matching(
    const Instance& inst, std::span<const double> buyer_weights);

/// Verdict for "mu times the auction revenue covers the best critical-bid
/// surplus over any feasible matching".
struct CoveringReport {
  double mu = 1.0;
  double lhs = 0.0;          // mu * revenue
  double rhs = 0.0;          // max over feasible matchings of sum of t_i
  Matching witness_matching; // attains rhs
  bool holds = false;        // slack >= -kCoveringTolerance
  double slack = 0.0;        // lhs - rhs
};

CoveringReport verify_revenue_covering(const Instance& inst,
                                       const BidProfile& bids, double mu);

/// The two-inequality chain for one feasible matching m:
///   sum of winning bids >= revenue of the items matched in m
///                       >= critical-bid surplus of the buyers matched in m.
struct ChainReport {
  double sum_winning_bids = 0.0;
  double matched_item_revenue = 0.0;
  double critical_surplus = 0.0;
  bool holds = false;
};

ChainReport verify_chain(const Instance& inst, const BidProfile& bids,
                         const Matching& m);

/// Same check against a precomputed outcome and critical bids; used by
/// sweeps that test every matching of one instance.
ChainReport verify_chain(const Instance& inst, const Matching& m,
                         const Outcome& outcome,
                         const CriticalBids& criticals);

/// Inverse-transform sample of the deviation-bid density 1/(v - b) on
/// [0, v(1 - 1/e)]: returns v * (1 - e^{-u}) for u in [0, 1].
double smoothness_bid_sample(double value, double u);

/// Closed form of the expected deviation utility against threshold t:
/// (1 - 1/e) v - t while t is inside the bid support, else 0.
double value_covering_lhs(double value, double threshold);

}  // namespace obmatch
