#include "obmatch/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "obmatch/errors.hpp"
#include "obmatch/rng.hpp"

namespace obmatch {

namespace {

void require_priority(const Instance& inst, const PriorityOrder& order) {
  if (static_cast<int>(order.perm.size()) != inst.n_buyers) {
    throw ParameterError("priority order length must equal n_buyers");
  }
  std::vector<char> hit(static_cast<std::size_t>(inst.n_buyers), 0);
  for (int i : order.perm) {
    if (i < 0 || i >= inst.n_buyers || hit[static_cast<std::size_t>(i)]) {
      throw ParameterError(
          "priority order is not a permutation of the buyer indices");
    }
    hit[static_cast<std::size_t>(i)] = 1;
  }
}

int ranking_matched_count(const Instance& inst,
                          const std::vector<std::vector<int>>& item_adj,
                          const std::vector<int>& rank,
                          std::vector<char>& taken) {
  std::fill(taken.begin(), taken.end(), 0);
  int matched = 0;
  for (int j : inst.arrival_order) {
    int winner = -1;
    for (int i : item_adj[static_cast<std::size_t>(j)]) {
      if (taken[static_cast<std::size_t>(i)]) continue;
      if (winner < 0 || rank[static_cast<std::size_t>(i)] <
                            rank[static_cast<std::size_t>(winner)]) {
        winner = i;
      }
    }
    if (winner >= 0) {
      taken[static_cast<std::size_t>(winner)] = 1;
      ++matched;
    }
  }
  return matched;
}

}  // namespace

Matching run_ranking(const Instance& inst, const PriorityOrder& order) {
  require_valid(inst);
  require_priority(inst, order);

  std::vector<int> rank(static_cast<std::size_t>(inst.n_buyers), 0);
  for (std::size_t pos = 0; pos < order.perm.size(); ++pos) {
    rank[static_cast<std::size_t>(order.perm[pos])] = static_cast<int>(pos);
  }

  const auto item_adj = buyers_by_item(inst);
  std::vector<char> taken(static_cast<std::size_t>(inst.n_buyers), 0);
  std::vector<Edge> pairs;
  for (int j : inst.arrival_order) {
    int winner = -1;
    for (int i : item_adj[static_cast<std::size_t>(j)]) {
      if (taken[static_cast<std::size_t>(i)]) continue;
      if (winner < 0 || rank[static_cast<std::size_t>(i)] <
                            rank[static_cast<std::size_t>(winner)]) {
        winner = i;
      }
    }
    if (winner >= 0) {
      taken[static_cast<std::size_t>(winner)] = 1;
      pairs.push_back({winner, j});
    }
  }
  return make_matching(std::move(pairs));
}

BidReduction ranking_via_bids(const Instance& inst,
                              std::span<const double> u) {
  require_valid(inst);
  if (static_cast<int>(u.size()) != inst.n_buyers) {
    throw ParameterError("ranking_via_bids: u length must equal n_buyers");
  }
  std::set<double> seen;
  for (double ui : u) {
    if (!(ui > 0.0 && ui <= 1.0)) {
      throw ResampleRequired(
          "ranking_via_bids: u values must lie in (0, 1]; redraw");
    }
    if (!seen.insert(ui).second) {
      throw ResampleRequired("ranking_via_bids: duplicate u value; redraw");
    }
  }

  BidReduction result;
  result.bids.bids.reserve(u.size());
  for (double ui : u) {
    result.bids.bids.push_back(smoothness_bid_sample(1.0, ui));
  }
  std::set<double> bid_set(result.bids.bids.begin(), result.bids.bids.end());
  if (bid_set.size() != result.bids.bids.size()) {
    throw ResampleRequired(
        "ranking_via_bids: distinct u rounded to equal bids; redraw");
  }

  result.order.perm.resize(u.size());
  std::iota(result.order.perm.begin(), result.order.perm.end(), 0);
  std::sort(result.order.perm.begin(), result.order.perm.end(),
            [&u](int a, int b) {
              return u[static_cast<std::size_t>(a)] >
                     u[static_cast<std::size_t>(b)];
            });

  result.auction_outcome = run_auction(inst, result.bids);
  result.ranking_matching = run_ranking(inst, result.order);
  return result;
}

double exact_ranking_expectation(const Instance& inst) {
  require_valid(inst);
  if (inst.n_buyers > 8) {
    std::ostringstream os;
    os << "exact_ranking_expectation: n_buyers = " << inst.n_buyers
       << " exceeds the 8-buyer enumeration guard";
    throw SizeGuardError(os.str());
  }

  const auto item_adj = buyers_by_item(inst);
  std::vector<int> perm(static_cast<std::size_t>(inst.n_buyers));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> rank(perm.size(), 0);
  std::vector<char> taken(perm.size(), 0);

  long long total = 0;
  long long count = 0;
  do {
    for (std::size_t pos = 0; pos < perm.size(); ++pos) {
      rank[static_cast<std::size_t>(perm[pos])] = static_cast<int>(pos);
    }
    total += ranking_matched_count(inst, item_adj, rank, taken);
    ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));

  return static_cast<double>(total) / static_cast<double>(count);
}

RatioEstimate estimate_competitive_ratio(const Instance& inst,
                                         std::int64_t trials,
                                         std::uint64_t seed) {
  require_valid(inst);
  if (trials < 1) {
    throw ParameterError("estimate_competitive_ratio: trials must be >= 1");
  }
  const int opt = optimal_matching_size(inst);
  if (opt == 0) {
    throw UndefinedRatioError(
        "estimate_competitive_ratio: optimal matching is empty");
  }

  const auto item_adj = buyers_by_item(inst);
  std::vector<int> perm(static_cast<std::size_t>(inst.n_buyers));
  std::vector<int> rank(perm.size(), 0);
  std::vector<char> taken(perm.size(), 0);

  // Welford running mean/variance over matched counts; one derived seed per
  // trial so results do not depend on evaluation order.
  double mean = 0.0;
  double m2 = 0.0;
  for (std::int64_t t = 0; t < trials; ++t) {
    std::mt19937_64 gen(mix_seed(seed, static_cast<std::uint64_t>(t)));
    std::iota(perm.begin(), perm.end(), 0);
    shuffle(perm, gen);
    for (std::size_t pos = 0; pos < perm.size(); ++pos) {
      rank[static_cast<std::size_t>(perm[pos])] = static_cast<int>(pos);
    }
    const double matched =
        static_cast<double>(ranking_matched_count(inst, item_adj, rank, taken));
    const double delta = matched - mean;
    mean += delta / static_cast<double>(t + 1);
    m2 += delta * (matched - mean);
  }

  RatioEstimate est;
  est.trials = trials;
  est.seed = seed;
  est.mean_matched = mean;
  est.opt = static_cast<double>(opt);
  est.ratio = mean / est.opt;
  const double variance =
      trials > 1 ? m2 / static_cast<double>(trials - 1) : 0.0;
  est.std_error =
      std::sqrt(variance / static_cast<double>(trials)) / est.opt;
  return est;
}

Matching greedy_nonstrategic(const Instance& inst) {
  require_valid(inst);
  BidProfile ones;
  ones.bids.assign(static_cast<std::size_t>(inst.n_buyers), 1.0);
  Outcome outcome = run_auction(inst, ones);
  return make_matching(std::move(outcome.matching));
}

int optimal_matching_size(const Instance& inst) {
  std::vector<double> unit(static_cast<std::size_t>(inst.n_buyers), 1.0);
  const MaxWeightResult result = max_weight_feasible_matching(inst, unit);
  return static_cast<int>(result.matching.pairs.size());
}

double optimal_welfare(const Instance& inst) {
  require_valid(inst);
  return max_weight_feasible_matching(inst, inst.values).weight;
}

}  // namespace obmatch
