#include "obmatch/mechanism.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "obmatch/errors.hpp"

namespace obmatch {

namespace {

void require_bids(const Instance& inst, const BidProfile& bids) {
  if (static_cast<int>(bids.bids.size()) != inst.n_buyers) {
    std::ostringstream os;
    os << "bid profile has " << bids.bids.size() << " entries, expected "
       << inst.n_buyers;
    throw ParameterError(os.str());
  }
  for (std::size_t i = 0; i < bids.bids.size(); ++i) {
    if (!std::isfinite(bids.bids[i]) || bids.bids[i] < 0.0) {
      std::ostringstream os;
      os << "bid of buyer " << i << " is not a finite non-negative real";
      throw ParameterError(os.str());
    }
  }
}

// Core simulation. excluded < 0 means every buyer participates; otherwise
// buyer `excluded` is removed from the market entirely.
Outcome simulate(const Instance& inst, const std::vector<double>& bids,
                 int excluded) {
  const auto item_adj = buyers_by_item(inst);
  Outcome out;
  out.item_revenues.assign(static_cast<std::size_t>(inst.n_items), 0.0);
  out.allocation.assign(static_cast<std::size_t>(inst.n_buyers), 0);
  out.payments.assign(static_cast<std::size_t>(inst.n_buyers), 0.0);

  std::vector<char> taken(static_cast<std::size_t>(inst.n_buyers), 0);
  for (int j : inst.arrival_order) {
    int winner = -1;
    for (int i : item_adj[static_cast<std::size_t>(j)]) {
      if (i == excluded || taken[static_cast<std::size_t>(i)]) continue;
      const double b = bids[static_cast<std::size_t>(i)];
      if (b <= 0.0) continue;  // zero bids never win
      if (winner < 0 || b > bids[static_cast<std::size_t>(winner)]) {
        winner = i;  // ascending scan + strict > keeps the lowest index on ties
      }
    }
    if (winner >= 0) {
      taken[static_cast<std::size_t>(winner)] = 1;
      out.matching.push_back({winner, j});
      const double b = bids[static_cast<std::size_t>(winner)];
      out.item_revenues[static_cast<std::size_t>(j)] = b;
      out.allocation[static_cast<std::size_t>(winner)] = 1;
      out.payments[static_cast<std::size_t>(winner)] = b;
    }
  }
  // Summed in ascending item order so the revenue identity is bit-stable.
  for (double r : out.item_revenues) out.revenue += r;
  std::sort(out.matching.begin(), out.matching.end());
  return out;
}

}  // namespace

Outcome run_auction(const Instance& inst, const BidProfile& bids) {
  require_valid(inst);
  require_bids(inst, bids);
  return simulate(inst, bids.bids, -1);
}

double counterfactual_price(const Instance& inst, const BidProfile& bids,
                            int buyer, int item) {
  require_valid(inst);
  require_bids(inst, bids);
  if (buyer < 0 || buyer >= inst.n_buyers) {
    throw ParameterError("counterfactual_price: buyer index out of range");
  }
  if (item < 0 || item >= inst.n_items) {
    throw ParameterError("counterfactual_price: item index out of range");
  }
  const Outcome without = simulate(inst, bids.bids, buyer);
  return without.item_revenues[static_cast<std::size_t>(item)];
}

MaybeCriticalBid critical_bid(const Instance& inst, const BidProfile& bids,
                              int buyer) {
  require_valid(inst);
  require_bids(inst, bids);
  if (buyer < 0 || buyer >= inst.n_buyers) {
    throw ParameterError("critical_bid: buyer index out of range");
  }

  bool has_edge = false;
  for (const Edge& e : inst.edges) {
    if (e.buyer == buyer) {
      has_edge = true;
      break;
    }
  }
  if (!has_edge) return std::nullopt;  // UNMATCHABLE

  // Breakpoints of the own-bid step function: 0 and the other buyers' bids.
  std::vector<double> breakpoints{0.0};
  for (int k = 0; k < inst.n_buyers; ++k) {
    if (k != buyer) breakpoints.push_back(bids.bids[static_cast<std::size_t>(k)]);
  }
  std::sort(breakpoints.begin(), breakpoints.end());
  breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()),
                    breakpoints.end());

  std::vector<double> probes;
  probes.reserve(2 * breakpoints.size() + 1);
  for (std::size_t t = 0; t < breakpoints.size(); ++t) {
    probes.push_back(breakpoints[t]);
    if (t + 1 < breakpoints.size()) {
      const double mid = std::midpoint(breakpoints[t], breakpoints[t + 1]);
      if (mid > breakpoints[t] && mid < breakpoints[t + 1]) {
        probes.push_back(mid);
      }
    }
  }
  double above = breakpoints.back() + 1.0;
  if (!(above > breakpoints.back())) {
    above = std::nextafter(breakpoints.back(),
                           std::numeric_limits<double>::infinity());
  }
  probes.push_back(above);

  std::vector<double> trial = bids.bids;
  std::vector<char> wins(probes.size(), 0);
  for (std::size_t p = 0; p < probes.size(); ++p) {
    trial[static_cast<std::size_t>(buyer)] = probes[p];
    const Outcome out = simulate(inst, trial, -1);
    wins[p] = static_cast<char>(out.allocation[static_cast<std::size_t>(buyer)]);
  }

  std::size_t first_win = probes.size();
  for (std::size_t p = 0; p < probes.size(); ++p) {
    if (wins[p]) {
      first_win = p;
      break;
    }
  }
  for (std::size_t p = first_win; p < probes.size(); ++p) {
    if (!wins[p]) {
      std::ostringstream os;
      os << "non-monotone win region for buyer " << buyer << ": wins at bid "
         << probes[first_win] << " but loses at bid " << probes[p];
      throw InternalInvariantError(os.str());
    }
  }
  if (first_win == probes.size()) {
    std::ostringstream os;
    os << "buyer " << buyer
       << " has an edge but never wins, even above the highest rival bid";
    throw InternalInvariantError(os.str());
  }

  const double winning_probe = probes[first_win];
  const bool at_breakpoint = std::binary_search(
      breakpoints.begin(), breakpoints.end(), winning_probe);
  if (at_breakpoint) {
    return CriticalBid{winning_probe, true};
  }
  // First win inside an open interval (or above the field): the infimum is
  // the breakpoint below, where the buyer still loses.
  const auto it = std::lower_bound(breakpoints.begin(), breakpoints.end(),
                                   winning_probe);
  return CriticalBid{*std::prev(it), false};
}

CriticalBids all_critical_bids(const Instance& inst, const BidProfile& bids) {
  CriticalBids result;
  result.thresholds.reserve(static_cast<std::size_t>(inst.n_buyers));
  for (int i = 0; i < inst.n_buyers; ++i) {
    result.thresholds.push_back(critical_bid(inst, bids, i));
  }
  return result;
}

}  // namespace obmatch
