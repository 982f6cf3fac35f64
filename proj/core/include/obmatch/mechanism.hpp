#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "obmatch/instance.hpp"

namespace obmatch {

/// One bid per buyer; entries must be finite and >= 0.
struct BidProfile {
  std::vector<double> bids;
  friend bool operator==(const BidProfile&, const BidProfile&) = default;
};

/// Result of one run of the winner-pays-bid greedy mechanism.
struct Outcome {
  std::vector<Edge> matching;         // sorted by buyer index
  std::vector<double> item_revenues;  // r_j: winning bid on item j, else 0
  std::vector<int> allocation;        // 0/1 per buyer
  std::vector<double> payments;       // b_i * allocation_i
  double revenue = 0.0;               // sum of item_revenues
};

/// Critical bid of one buyer: the infimum own-bid that wins, holding the
/// other bids fixed. The win region can be left-open or left-closed
/// depending on tie-breaks, so whether bidding exactly the threshold wins
/// is reported separately.
struct CriticalBid {
  double threshold = 0.0;
  bool wins_at_threshold = false;
};

/// nullopt marks a buyer with no edges (UNMATCHABLE); consumers treat the
/// threshold as +infinity.
using MaybeCriticalBid = std::optional<CriticalBid>;

struct CriticalBids {
  std::vector<MaybeCriticalBid> thresholds;  // one per buyer
};

inline double threshold_or_infinity(const MaybeCriticalBid& t) {
  return t ? t->threshold : std::numeric_limits<double>::infinity();
}

/// Runs the online winner-pays-bid greedy mechanism: items are processed in
/// arrival order and each item goes to the unmatched feasible buyer with the
/// highest strictly positive bid, ties broken by lowest buyer index. A zero
/// bid never wins, so b_i = 0 is equivalent to buyer i not participating.
Outcome run_auction(const Instance& inst, const BidProfile& bids);

/// The price item j fetches when buyer i is removed from the market
/// (0 if j then goes unsold). (i, j) need not be an edge.
double counterfactual_price(const Instance& inst, const BidProfile& bids,
                            int buyer, int item);

/// Exact critical bid of one buyer, computed by probing the allocation at
/// every distinct value of the other buyers' bids, at the midpoint of each
/// open interval between consecutive such values, and above the maximum.
/// The allocation is piecewise constant in the own bid with breakpoints only
/// at those values, so this evaluates the whole step function.
///
/// Throws InternalInvariantError if the probes reveal a non-monotone win
/// region (wins at b, loses at some b' > b), which would indicate a
/// tie-breaking bug.
MaybeCriticalBid critical_bid(const Instance& inst, const BidProfile& bids,
                              int buyer);

CriticalBids all_critical_bids(const Instance& inst, const BidProfile& bids);

}  // namespace obmatch
