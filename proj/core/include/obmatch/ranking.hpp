#pragma once

#include <cstdint>
#include <span>

#include "obmatch/covering.hpp"
#include "obmatch/instance.hpp"
#include "obmatch/mechanism.hpp"

namespace obmatch {

/// Buyer indices, highest priority first.
struct PriorityOrder {
  std::vector<int> perm;
};

/// Monte Carlo estimate of (expected matched count) / (optimal matched count).
struct RatioEstimate {
  double mean_matched = 0.0;
  double opt = 0.0;
  double ratio = 0.0;      // mean_matched / opt
  double std_error = 0.0;  // of the ratio
  std::int64_t trials = 0;
  std::uint64_t seed = 0;
};

/// Greedy-by-priority online matching: each arriving item goes to the
/// highest-priority feasible unmatched buyer.
Matching run_ranking(const Instance& inst, const PriorityOrder& order);

/// The bid-based reduction: buyers bid b_i = smoothness_bid_sample(1, u_i)
/// and the winner-pays-bid auction runs; the same u induce a priority order
/// (higher u, higher priority) for a direct ranking run. The two matchings
/// coincide whenever the u are distinct and positive.
struct BidReduction {
  Outcome auction_outcome;
  Matching ranking_matching;
  BidProfile bids;
  PriorityOrder order;
};

/// Throws ResampleRequired on duplicate u values, on u = 0 (a zero bid never
/// wins, breaking the correspondence), or on bids colliding after rounding.
BidReduction ranking_via_bids(const Instance& inst, std::span<const double> u);

/// Expected matched count of run_ranking under a uniform random priority
/// order, by enumerating all n! permutations. Guarded at n_buyers <= 8.
double exact_ranking_expectation(const Instance& inst);

/// Samples `trials` uniform priority orders (derived deterministically from
/// seed and the trial index) and reports mean matched count over the optimal
/// matching size.
RatioEstimate estimate_competitive_ratio(const Instance& inst,
                                         std::int64_t trials,
                                         std::uint64_t seed);

/// The non-strategic greedy baseline: the auction with every bid equal to 1.
Matching greedy_nonstrategic(const Instance& inst);

/// Maximum-cardinality matching size, by augmenting paths.
int optimal_matching_size(const Instance& inst);

/// Maximum of sum v_i over feasible matchings (buyer-weighted optimum).
double optimal_welfare(const Instance& inst);

}  // namespace obmatch
