#include "obmatch/covering.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace obmatch {

Matching make_matching(std::vector<Edge> pairs) {
  std::sort(pairs.begin(), pairs.end());
  return Matching{std::move(pairs)};
}

bool is_feasible(const Instance& inst, const Matching& m) {
  const std::set<Edge> edge_set(inst.edges.begin(), inst.edges.end());
  std::set<int> buyers;
  std::set<int> items;
  for (const Edge& e : m.pairs) {
    if (!edge_set.count(e)) return false;
    if (!buyers.insert(e.buyer).second) return false;
    if (!items.insert(e.item).second) return false;
  }
  return true;
}

namespace {

void enumerate_recurse(const Instance& inst, std::size_t next,
                       std::vector<char>& buyer_used,
                       std::vector<char>& item_used,
                       std::vector<Edge>& current,
                       const std::function<void(const Matching&)>& visit) {
  if (next == inst.edges.size()) {
    visit(make_matching(current));
    return;
  }
  // Every matching is a unique edge subset, so skip/take visits each once.
  enumerate_recurse(inst, next + 1, buyer_used, item_used, current, visit);
  const Edge& e = inst.edges[next];
  if (!buyer_used[static_cast<std::size_t>(e.buyer)] &&
      !item_used[static_cast<std::size_t>(e.item)]) {
    buyer_used[static_cast<std::size_t>(e.buyer)] = 1;
    item_used[static_cast<std::size_t>(e.item)] = 1;
    current.push_back(e);
    enumerate_recurse(inst, next + 1, buyer_used, item_used, current, visit);
    current.pop_back();
    buyer_used[static_cast<std::size_t>(e.buyer)] = 0;
    item_used[static_cast<std::size_t>(e.item)] = 0;
  }
}

}  // namespace

void for_each_matching(const Instance& inst,
                       const std::function<void(const Matching&)>& visit) {
  require_valid(inst);
  if (static_cast<int>(inst.edges.size()) > kMaxEnumerationEdges) {
    std::ostringstream os;
    os << "enumerate_matchings: " << inst.edges.size() << " edges exceeds the "
       << kMaxEnumerationEdges
       << "-edge guard; use max_weight_feasible_matching instead";
    throw SizeGuardError(os.str());
  }
  std::vector<char> buyer_used(static_cast<std::size_t>(inst.n_buyers), 0);
  std::vector<char> item_used(static_cast<std::size_t>(inst.n_items), 0);
  std::vector<Edge> current;
  enumerate_recurse(inst, 0, buyer_used, item_used, current, visit);
}

std::vector<Matching> enumerate_matchings(const Instance& inst) {
  std::vector<Matching> all;
  for_each_matching(inst, [&all](const Matching& m) { all.push_back(m); });
  return all;
}

namespace {

// Kuhn augmenting path: tries to match `buyer`, possibly re-matching
// previously matched buyers along an alternating path.
bool try_augment(int buyer, const std::vector<std::vector<int>>& buyer_adj,
                 std::vector<int>& item_owner, std::vector<char>& visited) {
  for (int j : buyer_adj[static_cast<std::size_t>(buyer)]) {
    if (visited[static_cast<std::size_t>(j)]) continue;
    visited[static_cast<std::size_t>(j)] = 1;
    if (item_owner[static_cast<std::size_t>(j)] < 0 ||
        try_augment(item_owner[static_cast<std::size_t>(j)], buyer_adj,
                    item_owner, visited)) {
      item_owner[static_cast<std::size_t>(j)] = buyer;
      return true;
    }
  }
  return false;
}

}  // namespace

MaxWeightResult max_weight_feasible_matching(
    const Instance& inst, std::span<const double> buyer_weights) {
  require_valid(inst);
  if (static_cast<int>(buyer_weights.size()) != inst.n_buyers) {
    throw ParameterError(
        "max_weight_feasible_matching: weights length must equal n_buyers");
  }
  for (double w : buyer_weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw ParameterError(
          "max_weight_feasible_matching: weights must be finite and >= 0");
    }
  }

  const auto buyer_adj = items_by_buyer(inst);
  std::vector<int> order(static_cast<std::size_t>(inst.n_buyers));
  for (int i = 0; i < inst.n_buyers; ++i) order[static_cast<std::size_t>(i)] = i;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return buyer_weights[static_cast<std::size_t>(a)] >
           buyer_weights[static_cast<std::size_t>(b)];
  });

  std::vector<int> item_owner(static_cast<std::size_t>(inst.n_items), -1);
  std::vector<char> matched(static_cast<std::size_t>(inst.n_buyers), 0);
  for (int i : order) {
    std::vector<char> visited(static_cast<std::size_t>(inst.n_items), 0);
    if (try_augment(i, buyer_adj, item_owner, visited)) {
      matched[static_cast<std::size_t>(i)] = 1;
    }
  }

  MaxWeightResult result;
  std::vector<Edge> pairs;
  for (int j = 0; j < inst.n_items; ++j) {
    if (item_owner[static_cast<std::size_t>(j)] >= 0) {
      pairs.push_back({item_owner[static_cast<std::size_t>(j)], j});
    }
  }
  result.matching = make_matching(std::move(pairs));
  // Sum in ascending buyer order so equal matchings hash to equal sums.
  for (int i = 0; i < inst.n_buyers; ++i) {
    if (matched[static_cast<std::size_t>(i)]) {
      result.weight += buyer_weights[static_cast<std::size_t>(i)];
    }
  }
  return result;
}

CoveringReport verify_revenue_covering(const Instance& inst,
                                       const BidProfile& bids, double mu) {
  if (!(mu > 0.0) || !std::isfinite(mu)) {
    throw ParameterError("verify_revenue_covering: mu must be positive");
  }
  const Outcome outcome = run_auction(inst, bids);
  const CriticalBids criticals = all_critical_bids(inst, bids);

  std::vector<double> weights(static_cast<std::size_t>(inst.n_buyers), 0.0);
  for (int i = 0; i < inst.n_buyers; ++i) {
    const MaybeCriticalBid& t = criticals.thresholds[static_cast<std::size_t>(i)];
    // UNMATCHABLE buyers cannot appear in any feasible matching; weight 0.
    weights[static_cast<std::size_t>(i)] = t ? t->threshold : 0.0;
  }
  const MaxWeightResult best = max_weight_feasible_matching(inst, weights);

  CoveringReport report;
  report.mu = mu;
  report.lhs = mu * outcome.revenue;
  report.rhs = best.weight;
  report.witness_matching = best.matching;
  report.slack = report.lhs - report.rhs;
  report.holds = report.slack >= -kCoveringTolerance;
  return report;
}

ChainReport verify_chain(const Instance& inst, const Matching& m,
                         const Outcome& outcome,
                         const CriticalBids& criticals) {
  if (!is_feasible(inst, m)) {
    throw ParameterError("verify_chain: matching is not feasible");
  }
  ChainReport report;
  report.sum_winning_bids = outcome.revenue;
  for (const Edge& e : m.pairs) {
    report.matched_item_revenue +=
        outcome.item_revenues[static_cast<std::size_t>(e.item)];
    const MaybeCriticalBid& t =
        criticals.thresholds[static_cast<std::size_t>(e.buyer)];
    // Buyers in a feasible matching have an edge, hence a finite threshold.
    report.critical_surplus += t ? t->threshold : 0.0;
  }
  report.holds =
      report.sum_winning_bids >= report.matched_item_revenue - kChainTolerance &&
      report.matched_item_revenue >= report.critical_surplus - kChainTolerance;
  return report;
}

ChainReport verify_chain(const Instance& inst, const BidProfile& bids,
                         const Matching& m) {
  const Outcome outcome = run_auction(inst, bids);
  const CriticalBids criticals = all_critical_bids(inst, bids);
  return verify_chain(inst, m, outcome, criticals);
}

double smoothness_bid_sample(double value, double u) {
  if (!(value >= 0.0) || !std::isfinite(value)) {
    throw ParameterError("smoothness_bid_sample: value must be >= 0");
  }
  if (!(u >= 0.0 && u <= 1.0)) {
    throw ParameterError("smoothness_bid_sample: u must lie in [0, 1]");
  }
  return value * -std::expm1(-u);
}

double value_covering_lhs(double value, double threshold) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw ParameterError("value_covering_lhs: value must be > 0");
  }
  if (!(threshold >= 0.0) || !std::isfinite(threshold)) {
    throw ParameterError("value_covering_lhs: threshold must be >= 0");
  }
  const double support_max = kOneMinusInvE * value;
  return threshold <= support_max ? support_max - threshold : 0.0;
}

}  // namespace obmatch
