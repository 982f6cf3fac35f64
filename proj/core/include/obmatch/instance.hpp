#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace obmatch {

/// Feasible (buyer, item) pair of a bipartite market.
struct Edge {
  int buyer = 0;
  int item = 0;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// A bipartite market: offline buyers, items arriving in a fixed order.
///
/// Invariants (checked by validate_instance):
///  - every edge references buyer < n_buyers and item < n_items;
///  - arrival_order is a permutation of {0, ..., n_items-1};
///  - values has one finite entry >= 0 per buyer;
///  - no duplicate edges.
///
/// Instances are immutable after construction and safe to share across
/// threads.
struct Instance {
  int n_buyers = 0;
  int n_items = 0;
  std::vector<Edge> edges;
  std::vector<double> values;        // v_i, one per buyer
  std::vector<int> arrival_order;    // item indices in arrival sequence

  friend bool operator==(const Instance&, const Instance&) = default;
};

struct ValidationReport {
  bool ok = true;
  std::vector<std::string> violations;  // ok iff empty
};

ValidationReport validate_instance(const Instance& inst);

/// Throws ParameterError if the instance fails validation.
void require_valid(const Instance& inst);

/// Erdos-Renyi style market: each potential edge kept with edge_prob,
/// values i.i.d. uniform on [value_low, value_high], arrival order a uniform
/// random permutation. Bit-for-bit reproducible for a fixed seed.
Instance gen_random(int n_buyers, int n_items, double edge_prob,
                    double value_low, double value_high, std::uint64_t seed);

/// n buyers, n items, edge (i, j) iff i >= j, unit values, arrival order
/// (0, 1, ..., n-1). The identity matching is perfect, so the optimal
/// matched count is n.
Instance gen_triangular(int n);

/// JSON text with keys "n_buyers", "n_items", "edges" (array of
/// [buyer, item] pairs), "values", "arrival_order".
std::string serialize(const Instance& inst);

/// Inverse of serialize. "values" may be omitted (defaults to all 1.0); a
/// "bids" key is tolerated and ignored (reserved for the CLI file format);
/// any other unknown key is an error. Throws ParseError on malformed text
/// or an invalid instance.
Instance parse(const std::string& text);

/// FNV-1a hash of the canonical serialization, as 16 hex digits. Used to
/// identify instances in reports.
std::string instance_hash(const Instance& inst);

/// Adjacency: for each item, the feasible buyers in increasing index order.
std::vector<std::vector<int>> buyers_by_item(const Instance& inst);

/// Adjacency: for each buyer, the feasible items in increasing index order.
std::vector<std::vector<int>> items_by_buyer(const Instance& inst);

}  // namespace obmatch
