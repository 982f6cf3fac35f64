#include "obmatch/instance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

#include "obmatch/errors.hpp"
#include "obmatch/rng.hpp"

namespace obmatch {

using nlohmann::json;

ValidationReport validate_instance(const Instance& inst) {
  ValidationReport report;
  auto fail = [&report](const std::string& what) {
    report.ok = false;
    report.violations.push_back(what);
  };

  if (inst.n_buyers < 0) fail("n_buyers is negative");
  if (inst.n_items < 0) fail("n_items is negative");

  if (static_cast<int>(inst.values.size()) != inst.n_buyers) {
    std::ostringstream os;
    os << "values has " << inst.values.size() << " entries, expected "
       << inst.n_buyers;
    fail(os.str());
  }
  for (std::size_t i = 0; i < inst.values.size(); ++i) {
    if (!std::isfinite(inst.values[i]) || inst.values[i] < 0.0) {
      std::ostringstream os;
      os << "value of buyer " << i << " is not a finite non-negative real";
      fail(os.str());
    }
  }

  for (const Edge& e : inst.edges) {
    if (e.buyer < 0 || e.buyer >= inst.n_buyers) {
      std::ostringstream os;
      os << "buyer index out of range in edge (" << e.buyer << ", " << e.item
         << ")";
      fail(os.str());
    }
    if (e.item < 0 || e.item >= inst.n_items) {
      std::ostringstream os;
      os << "item index out of range in edge (" << e.buyer << ", " << e.item
         << ")";
      fail(os.str());
    }
  }

  std::vector<Edge> sorted = inst.edges;
  std::sort(sorted.begin(), sorted.end());
  for (auto it = std::adjacent_find(sorted.begin(), sorted.end());
       it != sorted.end(); it = std::adjacent_find(it + 1, sorted.end())) {
    std::ostringstream os;
    os << "duplicate edge (" << it->buyer << ", " << it->item << ")";
    fail(os.str());
  }

  if (static_cast<int>(inst.arrival_order.size()) != inst.n_items) {
    std::ostringstream os;
    os << "arrival_order has " << inst.arrival_order.size()
       << " entries, expected " << inst.n_items;
    fail(os.str());
  } else {
    std::vector<char> hit(static_cast<std::size_t>(std::max(inst.n_items, 0)),
                          0);
    bool perm = true;
    for (int j : inst.arrival_order) {
      if (j < 0 || j >= inst.n_items || hit[static_cast<std::size_t>(j)]) {
        perm = false;
        break;
      }
      hit[static_cast<std::size_t>(j)] = 1;
    }
    if (!perm) fail("arrival_order is not a permutation of the item indices");
  }

  return report;
}

void require_valid(const Instance& inst) {
  const ValidationReport report = validate_instance(inst);
  if (!report.ok) {
    std::string what = "invalid instance:";
    for (const std::string& v : report.violations) what += " " + v + ";";
    throw ParameterError(what);
  }
}

Instance gen_random(int n_buyers, int n_items, double edge_prob,
                    double value_low, double value_high, std::uint64_t seed) {
  if (n_buyers < 0 || n_items < 0) {
    throw ParameterError("gen_random: counts must be non-negative");
  }
  if (!(edge_prob >= 0.0 && edge_prob <= 1.0)) {
    throw ParameterError("gen_random: edge_prob must lie in [0, 1]");
  }
  if (!(value_low >= 0.0) || !(value_low <= value_high) ||
      !std::isfinite(value_high)) {
    throw ParameterError("gen_random: need 0 <= value_low <= value_high");
  }

  std::mt19937_64 gen(seed);
  Instance inst;
  inst.n_buyers = n_buyers;
  inst.n_items = n_items;
  for (int i = 0; i < n_buyers; ++i) {
    for (int j = 0; j < n_items; ++j) {
      if (uniform_unit(gen) < edge_prob) inst.edges.push_back({i, j});
    }
  }
  inst.values.reserve(static_cast<std::size_t>(n_buyers));
  for (int i = 0; i < n_buyers; ++i) {
    inst.values.push_back(uniform_real(gen, value_low, value_high));
  }
  inst.arrival_order.resize(static_cast<std::size_t>(n_items));
  std::iota(inst.arrival_order.begin(), inst.arrival_order.end(), 0);
  shuffle(inst.arrival_order, gen);
  return inst;
}

Instance gen_triangular(int n) {
  if (n < 1) throw ParameterError("gen_triangular: n must be >= 1");
  Instance inst;
  inst.n_buyers = n;
  inst.n_items = n;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) inst.edges.push_back({i, j});
  }
  inst.values.assign(static_cast<std::size_t>(n), 1.0);
  inst.arrival_order.resize(static_cast<std::size_t>(n));
  std::iota(inst.arrival_order.begin(), inst.arrival_order.end(), 0);
  return inst;
}

std::string serialize(const Instance& inst) {
  json j;
  j["n_buyers"] = inst.n_buyers;
  j["n_items"] = inst.n_items;
  json edges = json::array();
  for (const Edge& e : inst.edges) edges.push_back({e.buyer, e.item});
  j["edges"] = std::move(edges);
  j["values"] = inst.values;
  j["arrival_order"] = inst.arrival_order;
  return j.dump(2) + "\n";
}

namespace {

const json& require_key(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) {
    throw ParseError(std::string("missing required key \"") + key + "\"");
  }
  return *it;
}

int get_int(const json& v, const char* what) {
  if (!v.is_number_integer()) {
    throw ParseError(std::string(what) + " must be an integer");
  }
  const auto wide = v.get<std::int64_t>();
  if (wide < std::numeric_limits<int>::min() ||
      wide > std::numeric_limits<int>::max()) {
    throw ParseError(std::string(what) + " is out of range");
  }
  return static_cast<int>(wide);
}

}  // namespace

Instance parse(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed instance text: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("instance text is not an object");

  static const std::set<std::string> known = {
      "n_buyers", "n_items", "edges", "values", "arrival_order", "bids"};
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) {
      throw ParseError("unknown key \"" + key + "\" in instance text");
    }
  }

  Instance inst;
  try {
    inst.n_buyers = get_int(require_key(j, "n_buyers"), "n_buyers");
    inst.n_items = get_int(require_key(j, "n_items"), "n_items");
    const json& edges = require_key(j, "edges");
    if (!edges.is_array()) throw ParseError("edges must be an array");
    for (const json& pair : edges) {
      if (!pair.is_array() || pair.size() != 2) {
        throw ParseError("edge entries must be [buyer, item] pairs");
      }
      inst.edges.push_back(
          {get_int(pair[0], "edge buyer"), get_int(pair[1], "edge item")});
    }
    if (j.contains("values")) {
      inst.values = j["values"].get<std::vector<double>>();
    } else {
      inst.values.assign(static_cast<std::size_t>(std::max(inst.n_buyers, 0)),
                         1.0);
    }
    const json& order = require_key(j, "arrival_order");
    if (!order.is_array()) throw ParseError("arrival_order must be an array");
    for (const json& v : order) {
      inst.arrival_order.push_back(get_int(v, "arrival_order entry"));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad field type in instance text: ") +
                     e.what());
  }

  const ValidationReport report = validate_instance(inst);
  if (!report.ok) {
    std::string what = "instance text fails validation:";
    for (const std::string& v : report.violations) what += " " + v + ";";
    throw ParseError(what);
  }
  return inst;
}

std::string instance_hash(const Instance& inst) {
  const std::string text = serialize(inst);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[h & 0xf];
    h >>= 4;
  }
  return out;
}

std::vector<std::vector<int>> buyers_by_item(const Instance& inst) {
  std::vector<std::vector<int>> adj(
      static_cast<std::size_t>(std::max(inst.n_items, 0)));
  for (const Edge& e : inst.edges) {
    adj[static_cast<std::size_t>(e.item)].push_back(e.buyer);
  }
  for (auto& buyers : adj) std::sort(buyers.begin(), buyers.end());
  return adj;
}

std::vector<std::vector<int>> items_by_buyer(const Instance& inst) {
  std::vector<std::vector<int>> adj(
      static_cast<std::size_t>(std::max(inst.n_buyers, 0)));
  for (const Edge& e : inst.edges) {
    adj[static_cast<std::size_t>(e.buyer)].push_back(e.item);
  }
  for (auto& items : adj) std::sort(items.begin(), items.end());
  return adj;
}

}  // namespace obmatch
