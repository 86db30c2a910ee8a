#include "vne/instance.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <regex>
#include <set>
#include <sstream>

#include "vne/errors.hpp"
#include "vne/rng.hpp"

namespace vne {

std::string to_string(CapacityRegime r) {
  switch (r) {
    case CapacityRegime::Large:
      return "large";
    case CapacityRegime::Medium:
      return "medium";
    case CapacityRegime::Small:
      return "small";
  }
  return "?";
}

CapacityRegime regime_from_string(const std::string& s) {
  if (s == "large") return CapacityRegime::Large;
  if (s == "medium") return CapacityRegime::Medium;
  if (s == "small") return CapacityRegime::Small;
  throw ParseError("unknown capacity regime '" + s + "'");
}

bool operator==(const Instance& x, const Instance& y) {
  auto graph_eq = [](const Graph& a, const Graph& b) {
    return a.node_count() == b.node_count() && a.edges() == b.edges();
  };
  return graph_eq(x.vnet, y.vnet) && graph_eq(x.snet, y.snet) &&
         x.node_demand == y.node_demand && x.edge_demand == y.edge_demand &&
         x.node_capacity == y.node_capacity &&
         x.edge_capacity == y.edge_capacity && x.node_cost == y.node_cost &&
         x.edge_cost == y.edge_cost;
}

void Instance::check() const {
  auto expect = [](bool cond, const std::string& what) {
    if (!cond) throw Error("instance: " + what);
  };
  expect(node_demand.size() == static_cast<size_t>(vnet.node_count()),
         "node_demand size mismatch");
  expect(edge_demand.size() == static_cast<size_t>(vnet.edge_count()),
         "edge_demand size mismatch");
  expect(node_capacity.size() == static_cast<size_t>(snet.node_count()),
         "node_capacity size mismatch");
  expect(edge_capacity.size() == static_cast<size_t>(snet.edge_count()),
         "edge_capacity size mismatch");
  expect(node_cost.size() == static_cast<size_t>(snet.node_count()),
         "node_cost size mismatch");
  expect(edge_cost.size() == static_cast<size_t>(snet.edge_count()),
         "edge_cost size mismatch");
  for (auto d : node_demand) expect(d >= 1, "node demand < 1");
  for (auto d : edge_demand) expect(d >= 1, "edge demand < 1");
  for (auto c : node_capacity) expect(c >= 0, "negative node capacity");
  for (auto c : edge_capacity) expect(c >= 0, "negative edge capacity");
  for (auto w : node_cost) expect(w >= 0, "negative node cost");
  for (auto w : edge_cost) expect(w >= 0, "negative edge cost");
  if (vnet.node_count() > snet.node_count())
    throw VirtualLargerThanSubstrate(
        "virtual network has " + std::to_string(vnet.node_count()) +
        " nodes, substrate only " + std::to_string(snet.node_count()));
}

namespace {

/// Structural route check shared by mapping_cost and validate. Returns an
/// empty string when the route is a contiguous loop-free path from `from`
/// to `to`.
std::string route_problem(const Graph& gs, const std::vector<OrientedEdgeRef>& route,
                          NodeId from, NodeId to) {
  if (route.empty()) return "empty route";
  std::vector<char> visited(static_cast<size_t>(gs.node_count()), 0);
  NodeId cur = from;
  visited[static_cast<size_t>(cur)] = 1;
  for (const auto& arc : route) {
    if (arc.edge < 0 || arc.edge >= gs.edge_count()) return "bad edge id";
    if (gs.arc_from(arc) != cur) return "arcs not contiguous";
    cur = gs.arc_to(arc);
    if (visited[static_cast<size_t>(cur)]) return "route revisits a node";
    visited[static_cast<size_t>(cur)] = 1;
  }
  if (cur != to) return "route ends at wrong node";
  return {};
}

}  // namespace

std::int64_t mapping_cost(const Instance& inst, const Mapping& m) {
  const int nr = inst.virtual_nodes();
  if (m.node_place.size() != static_cast<size_t>(nr) ||
      m.edge_route.size() != static_cast<size_t>(inst.vnet.edge_count()))
    throw StructurallyInvalidMapping("mapping shape mismatch");
  std::vector<char> used(static_cast<size_t>(inst.substrate_nodes()), 0);
  std::int64_t total = 0;
  for (NodeId v = 0; v < nr; ++v) {
    NodeId u = m.node_place[static_cast<size_t>(v)];
    if (u < 0 || u >= inst.substrate_nodes())
      throw StructurallyInvalidMapping("placement out of range");
    if (used[static_cast<size_t>(u)])
      throw StructurallyInvalidMapping("placement not injective");
    used[static_cast<size_t>(u)] = 1;
    total += inst.node_demand[static_cast<size_t>(v)] *
             inst.node_cost[static_cast<size_t>(u)];
  }
  for (EdgeId e = 0; e < inst.vnet.edge_count(); ++e) {
    NodeId from = m.node_place[static_cast<size_t>(inst.vnet.tail(e))];
    NodeId to = m.node_place[static_cast<size_t>(inst.vnet.head(e))];
    const auto& route = m.edge_route[static_cast<size_t>(e)];
    if (auto why = route_problem(inst.snet, route, from, to); !why.empty())
      throw StructurallyInvalidMapping("virtual edge " + std::to_string(e) +
                                       ": " + why);
    for (const auto& arc : route)
      total += inst.edge_demand[static_cast<size_t>(e)] *
               inst.edge_cost[static_cast<size_t>(arc.edge)];
  }
  return total;
}

ValidationReport validate(const Instance& inst, const Mapping& m) {
  ValidationReport report;
  auto add = [&](Violation::Kind k, std::string detail) {
    report.violations.push_back({k, std::move(detail)});
  };
  const int nr = inst.virtual_nodes();
  const int ns = inst.substrate_nodes();
  if (m.node_place.size() != static_cast<size_t>(nr) ||
      m.edge_route.size() != static_cast<size_t>(inst.vnet.edge_count())) {
    add(Violation::Kind::Shape, "mapping vectors do not match instance");
    return report;
  }
  std::vector<std::int64_t> node_load(static_cast<size_t>(ns), 0);
  std::vector<int> host_count(static_cast<size_t>(ns), 0);
  bool placement_ok = true;
  for (NodeId v = 0; v < nr; ++v) {
    NodeId u = m.node_place[static_cast<size_t>(v)];
    if (u < 0 || u >= ns) {
      add(Violation::Kind::Shape,
          "virtual node " + std::to_string(v) + " placed out of range");
      placement_ok = false;
      continue;
    }
    node_load[static_cast<size_t>(u)] += inst.node_demand[static_cast<size_t>(v)];
    if (++host_count[static_cast<size_t>(u)] == 2)
      add(Violation::Kind::Injectivity,
          "substrate node " + std::to_string(u) + " hosts several virtual nodes");
  }
  std::vector<std::int64_t> edge_load(static_cast<size_t>(inst.snet.edge_count()), 0);
  for (EdgeId e = 0; e < inst.vnet.edge_count(); ++e) {
    const auto& route = m.edge_route[static_cast<size_t>(e)];
    if (!placement_ok) break;
    NodeId from = m.node_place[static_cast<size_t>(inst.vnet.tail(e))];
    NodeId to = m.node_place[static_cast<size_t>(inst.vnet.head(e))];
    if (auto why = route_problem(inst.snet, route, from, to); !why.empty()) {
      auto kind = why == "route revisits a node" ? Violation::Kind::RouteLoop
                  : why == "route ends at wrong node" || why == "empty route"
                      ? Violation::Kind::RouteEndpoint
                      : Violation::Kind::RouteBroken;
      add(kind, "virtual edge " + std::to_string(e) + ": " + why);
      continue;
    }
    for (const auto& arc : route)
      edge_load[static_cast<size_t>(arc.edge)] +=
          inst.edge_demand[static_cast<size_t>(e)];
  }
  for (NodeId u = 0; u < ns; ++u)
    if (node_load[static_cast<size_t>(u)] > inst.node_capacity[static_cast<size_t>(u)])
      add(Violation::Kind::NodeCapacity,
          "substrate node " + std::to_string(u) + " load " +
              std::to_string(node_load[static_cast<size_t>(u)]) + " > capacity " +
              std::to_string(inst.node_capacity[static_cast<size_t>(u)]));
  for (EdgeId e = 0; e < inst.snet.edge_count(); ++e)
    if (edge_load[static_cast<size_t>(e)] > inst.edge_capacity[static_cast<size_t>(e)])
      add(Violation::Kind::EdgeCapacity,
          "substrate edge " + std::to_string(e) + " load " +
              std::to_string(edge_load[static_cast<size_t>(e)]) + " > capacity " +
              std::to_string(inst.edge_capacity[static_cast<size_t>(e)]));
  return report;
}

Instance generate(const Graph& topology_virtual,
                  const Graph& topology_substrate, CapacityRegime regime,
                  std::uint64_t seed) {
  if (topology_virtual.node_count() > topology_substrate.node_count())
    throw VirtualLargerThanSubstrate("generate: n_r > n_s");
  Instance inst;
  inst.vnet = topology_virtual;
  inst.snet = topology_substrate;
  const int nr = inst.vnet.node_count();
  const int ns = inst.snet.node_count();
  const int ms = inst.snet.edge_count();
  inst.node_demand.assign(static_cast<size_t>(nr), 1);
  inst.edge_demand.assign(static_cast<size_t>(inst.vnet.edge_count()), 1);

  // Costs: degree-based load balancing, well-connected resources are cheap.
  int max_deg = 0;
  for (NodeId u = 0; u < ns; ++u) max_deg = std::max(max_deg, inst.snet.degree(u));
  auto penalty = [&](NodeId u) {
    return static_cast<std::int64_t>(max_deg - inst.snet.degree(u));
  };
  inst.node_cost.resize(static_cast<size_t>(ns));
  for (NodeId u = 0; u < ns; ++u)
    inst.node_cost[static_cast<size_t>(u)] = 1 + penalty(u);
  inst.edge_cost.resize(static_cast<size_t>(ms));
  for (EdgeId e = 0; e < ms; ++e)
    inst.edge_cost[static_cast<size_t>(e)] =
        1 + std::max(penalty(inst.snet.tail(e)), penalty(inst.snet.head(e)));

  // Capacities. All regime draws happen in one fixed order so that the three
  // regimes produced from the same seed nest element-wise (small <= medium
  // <= large), matching the benchmark's nesting guarantee.
  Rng rng(seed);
  std::vector<std::int64_t> small_edge(static_cast<size_t>(ms));
  std::vector<std::int64_t> medium_edge(static_cast<size_t>(ms));
  for (EdgeId e = 0; e < ms; ++e)
    small_edge[static_cast<size_t>(e)] = rng.next_int(1, 3);
  for (EdgeId e = 0; e < ms; ++e)
    medium_edge[static_cast<size_t>(e)] =
        std::max(rng.next_int(2, 5), small_edge[static_cast<size_t>(e)]);

  // 20% of substrate nodes lose all capacity in the Small regime,
  // lowest degree first, ties by node id.
  std::vector<NodeId> order(static_cast<size_t>(ns));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
    return inst.snet.degree(a) < inst.snet.degree(b);
  });
  std::vector<char> null_cap(static_cast<size_t>(ns), 0);
  for (int i = 0; i < ns / 5; ++i)
    null_cap[static_cast<size_t>(order[static_cast<size_t>(i)])] = 1;

  inst.node_capacity.resize(static_cast<size_t>(ns));
  inst.edge_capacity.resize(static_cast<size_t>(ms));
  const std::int64_t er = inst.vnet.edge_count();
  for (NodeId u = 0; u < ns; ++u) {
    switch (regime) {
      case CapacityRegime::Small:
        inst.node_capacity[static_cast<size_t>(u)] =
            null_cap[static_cast<size_t>(u)] ? 0 : 1;
        break;
      case CapacityRegime::Medium:
      case CapacityRegime::Large:
        inst.node_capacity[static_cast<size_t>(u)] = nr;
        break;
    }
  }
  for (EdgeId e = 0; e < ms; ++e) {
    switch (regime) {
      case CapacityRegime::Small:
        inst.edge_capacity[static_cast<size_t>(e)] = small_edge[static_cast<size_t>(e)];
        break;
      case CapacityRegime::Medium:
        inst.edge_capacity[static_cast<size_t>(e)] = medium_edge[static_cast<size_t>(e)];
        break;
      case CapacityRegime::Large:
        inst.edge_capacity[static_cast<size_t>(e)] =
            std::max(er, medium_edge[static_cast<size_t>(e)]);
        break;
    }
  }
  inst.check();
  return inst;
}

// ---------------------------------------------------------------------------
// File IO

namespace {

struct LineReader {
  std::istream& in;
  std::string origin;
  int lineno = 0;

  /// Next non-comment, non-blank line split into tokens; false at EOF.
  bool next(std::vector<std::string>& tokens) {
    std::string line;
    while (std::getline(in, line)) {
      ++lineno;
      auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      std::istringstream ss(line);
      tokens.clear();
      std::string tok;
      while (ss >> tok) tokens.push_back(tok);
      if (!tokens.empty()) return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(origin + ":" + std::to_string(lineno) + ": " + what);
  }

  std::int64_t to_int(const std::string& tok) const {
    try {
      size_t pos = 0;
      std::int64_t v = std::stoll(tok, &pos);
      if (pos != tok.size()) fail("malformed integer '" + tok + "'");
      return v;
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception&) {
      fail("malformed integer '" + tok + "'");
    }
  }
};

}  // namespace

Instance read_instance(std::istream& in, const std::string& origin) {
  LineReader r{in, origin};
  std::vector<std::string> t;
  if (!r.next(t) || t.size() != 2 || t[0] != "VNE" || t[1] != "1")
    r.fail("expected header 'VNE 1'");

  auto section = [&](const std::string& name) -> int {
    if (!r.next(t) || t.size() != 2 || t[0] != name)
      r.fail("expected section '" + name + " <count>'");
    auto n = r.to_int(t[1]);
    if (n < 0) r.fail("negative count in section " + name);
    return static_cast<int>(n);
  };

  Instance inst;
  const int nv = section("VNODES");
  std::vector<std::int64_t> vdem(static_cast<size_t>(nv), -1);
  for (int i = 0; i < nv; ++i) {
    if (!r.next(t) || t.size() != 2) r.fail("expected 'id demand'");
    auto id = r.to_int(t[0]);
    if (id < 0 || id >= nv || vdem[static_cast<size_t>(id)] != -1)
      r.fail("bad or duplicate virtual node id");
    vdem[static_cast<size_t>(id)] = r.to_int(t[1]);
  }

  const int mv = section("VEDGES");
  std::vector<std::pair<NodeId, NodeId>> vedges(static_cast<size_t>(mv));
  std::vector<std::int64_t> edem(static_cast<size_t>(mv), -1);
  for (int i = 0; i < mv; ++i) {
    if (!r.next(t) || t.size() != 4) r.fail("expected 'id a b demand'");
    auto id = r.to_int(t[0]);
    if (id < 0 || id >= mv || edem[static_cast<size_t>(id)] != -1)
      r.fail("bad or duplicate virtual edge id");
    vedges[static_cast<size_t>(id)] = {static_cast<NodeId>(r.to_int(t[1])),
                                       static_cast<NodeId>(r.to_int(t[2]))};
    edem[static_cast<size_t>(id)] = r.to_int(t[3]);
  }

  const int ns = section("SNODES");
  std::vector<std::int64_t> scap(static_cast<size_t>(ns), -1),
      scost(static_cast<size_t>(ns), -1);
  for (int i = 0; i < ns; ++i) {
    if (!r.next(t) || t.size() != 3) r.fail("expected 'id capacity cost'");
    auto id = r.to_int(t[0]);
    if (id < 0 || id >= ns || scap[static_cast<size_t>(id)] != -1)
      r.fail("bad or duplicate substrate node id");
    scap[static_cast<size_t>(id)] = r.to_int(t[1]);
    scost[static_cast<size_t>(id)] = r.to_int(t[2]);
  }

  const int ms = section("SEDGES");
  std::vector<std::pair<NodeId, NodeId>> sedges(static_cast<size_t>(ms));
  std::vector<std::int64_t> ecap(static_cast<size_t>(ms), -1),
      ecost(static_cast<size_t>(ms), -1);
  for (int i = 0; i < ms; ++i) {
    if (!r.next(t) || t.size() != 5) r.fail("expected 'id a b capacity cost'");
    auto id = r.to_int(t[0]);
    if (id < 0 || id >= ms || ecap[static_cast<size_t>(id)] != -1)
      r.fail("bad or duplicate substrate edge id");
    sedges[static_cast<size_t>(id)] = {static_cast<NodeId>(r.to_int(t[1])),
                                       static_cast<NodeId>(r.to_int(t[2]))};
    ecap[static_cast<size_t>(id)] = r.to_int(t[3]);
    ecost[static_cast<size_t>(id)] = r.to_int(t[4]);
  }
  if (r.next(t)) r.fail("trailing content after SEDGES section");

  try {
    inst.vnet = Graph::build(nv, vedges);
    inst.snet = Graph::build(ns, sedges);
  } catch (const Error& e) {
    throw ParseError(origin + ": " + e.what());
  }
  inst.node_demand = std::move(vdem);
  inst.edge_demand = std::move(edem);
  inst.node_capacity = std::move(scap);
  inst.node_cost = std::move(scost);
  inst.edge_capacity = std::move(ecap);
  inst.edge_cost = std::move(ecost);
  inst.check();
  return inst;
}

void write_instance(const Instance& inst, std::ostream& out) {
  out << "VNE 1\n";
  out << "VNODES " << inst.vnet.node_count() << "\n";
  for (NodeId v = 0; v < inst.vnet.node_count(); ++v)
    out << v << " " << inst.node_demand[static_cast<size_t>(v)] << "\n";
  out << "VEDGES " << inst.vnet.edge_count() << "\n";
  for (EdgeId e = 0; e < inst.vnet.edge_count(); ++e)
    out << e << " " << inst.vnet.tail(e) << " " << inst.vnet.head(e) << " "
        << inst.edge_demand[static_cast<size_t>(e)] << "\n";
  out << "SNODES " << inst.snet.node_count() << "\n";
  for (NodeId u = 0; u < inst.snet.node_count(); ++u)
    out << u << " " << inst.node_capacity[static_cast<size_t>(u)] << " "
        << inst.node_cost[static_cast<size_t>(u)] << "\n";
  out << "SEDGES " << inst.snet.edge_count() << "\n";
  for (EdgeId e = 0; e < inst.snet.edge_count(); ++e)
    out << e << " " << inst.snet.tail(e) << " " << inst.snet.head(e) << " "
        << inst.edge_capacity[static_cast<size_t>(e)] << " "
        << inst.edge_cost[static_cast<size_t>(e)] << "\n";
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open");
  return read_instance(in, path);
}

void store_instance(const Instance& inst, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(path + ": cannot write");
  write_instance(inst, out);
}

Mapping load_mapping(const Instance& inst, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open");
  LineReader r{in, path};
  Mapping m;
  m.node_place.assign(static_cast<size_t>(inst.virtual_nodes()), -1);
  m.edge_route.assign(static_cast<size_t>(inst.vnet.edge_count()), {});

  // Edge lookup by endpoint pair for ROUTE node sequences.
  std::map<std::pair<NodeId, NodeId>, EdgeId> by_pair;
  for (EdgeId e = 0; e < inst.snet.edge_count(); ++e) {
    NodeId a = inst.snet.tail(e), b = inst.snet.head(e);
    if (a > b) std::swap(a, b);
    by_pair[{a, b}] = e;
  }

  std::vector<std::string> t;
  while (r.next(t)) {
    if (t[0] == "PLACE") {
      if (t.size() != 3) r.fail("expected 'PLACE vnode snode'");
      auto v = r.to_int(t[1]);
      auto u = r.to_int(t[2]);
      if (v < 0 || v >= inst.virtual_nodes()) r.fail("virtual node out of range");
      if (u < 0 || u >= inst.substrate_nodes()) r.fail("substrate node out of range");
      m.node_place[static_cast<size_t>(v)] = static_cast<NodeId>(u);
    } else if (t[0] == "ROUTE") {
      if (t.size() < 4) r.fail("expected 'ROUTE vedge u0 u1 ...'");
      auto e = r.to_int(t[1]);
      if (e < 0 || e >= inst.vnet.edge_count()) r.fail("virtual edge out of range");
      std::vector<OrientedEdgeRef> route;
      for (size_t i = 3; i < t.size(); ++i) {
        NodeId a = static_cast<NodeId>(r.to_int(t[i - 1]));
        NodeId b = static_cast<NodeId>(r.to_int(t[i]));
        if (a < 0 || b < 0 || a >= inst.substrate_nodes() ||
            b >= inst.substrate_nodes())
          r.fail("route node out of range");
        auto key = std::minmax(a, b);
        auto it = by_pair.find({key.first, key.second});
        if (it == by_pair.end())
          r.fail("no substrate edge between " + std::to_string(a) + " and " +
                 std::to_string(b));
        route.push_back({it->second, inst.snet.tail(it->second) != a});
      }
      m.edge_route[static_cast<size_t>(e)] = std::move(route);
    } else {
      r.fail("unknown directive '" + t[0] + "'");
    }
  }
  return m;
}

void store_mapping(const Instance& inst, const Mapping& m,
                   const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(path + ": cannot write");
  for (NodeId v = 0; v < inst.virtual_nodes(); ++v)
    out << "PLACE " << v << " " << m.node_place[static_cast<size_t>(v)] << "\n";
  for (EdgeId e = 0; e < inst.vnet.edge_count(); ++e) {
    const auto& route = m.edge_route[static_cast<size_t>(e)];
    if (route.empty()) continue;
    out << "ROUTE " << e << " " << inst.snet.arc_from(route.front());
    for (const auto& arc : route) out << " " << inst.snet.arc_to(arc);
    out << "\n";
  }
}

Graph load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open");
  LineReader r{in, path};
  std::vector<std::string> t;
  std::vector<std::pair<NodeId, NodeId>> edges;
  NodeId max_id = -1;
  while (r.next(t)) {
    if (t.size() != 2) r.fail("expected 'a b'");
    NodeId a = static_cast<NodeId>(r.to_int(t[0]));
    NodeId b = static_cast<NodeId>(r.to_int(t[1]));
    if (a < 0 || b < 0) r.fail("negative node id");
    edges.push_back({a, b});
    max_id = std::max({max_id, a, b});
  }
  try {
    return Graph::build(max_id + 1, edges);
  } catch (const Error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void store_edge_list(const Graph& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(path + ": cannot write");
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    out << g.tail(e) << " " << g.head(e) << "\n";
}

Graph import_graphml(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();

  // Tolerant scrape of <node id=".."> and <edge source=".." target="..">;
  // full XML parsing is not needed for Topology Zoo style exports.
  std::map<std::string, NodeId> ids;
  std::vector<std::pair<NodeId, NodeId>> edges;
  auto intern = [&](const std::string& name) {
    auto [it, fresh] = ids.insert({name, static_cast<NodeId>(ids.size())});
    (void)fresh;
    return it->second;
  };
  std::regex node_re("<node[^>]*\\bid=\"([^\"]*)\"");
  std::regex edge_re(
      "<edge[^>]*\\bsource=\"([^\"]*)\"[^>]*\\btarget=\"([^\"]*)\"");
  for (auto it = std::sregex_iterator(text.begin(), text.end(), node_re);
       it != std::sregex_iterator(); ++it)
    intern((*it)[1].str());
  for (auto it = std::sregex_iterator(text.begin(), text.end(), edge_re);
       it != std::sregex_iterator(); ++it) {
    NodeId a = intern((*it)[1].str());
    NodeId b = intern((*it)[2].str());
    if (a != b) edges.push_back({a, b});
  }
  if (ids.empty()) throw ParseError(path + ": no <node> elements found");

  // Dedupe parallel edges.
  std::set<std::pair<NodeId, NodeId>> dedup;
  std::vector<std::pair<NodeId, NodeId>> simple;
  for (auto [a, b] : edges) {
    auto key = std::minmax(a, b);
    if (dedup.insert({key.first, key.second}).second) simple.push_back({a, b});
  }

  // Keep only the largest connected component, renumber densely.
  const int n = static_cast<int>(ids.size());
  Graph full = Graph::build(n, simple, /*allow_disconnected=*/true);
  std::vector<int> comp(static_cast<size_t>(n), -1);
  int comp_count = 0;
  for (NodeId s = 0; s < n; ++s) {
    if (comp[static_cast<size_t>(s)] != -1) continue;
    std::vector<NodeId> stack{s};
    comp[static_cast<size_t>(s)] = comp_count;
    while (!stack.empty()) {
      NodeId u = stack.back();
      stack.pop_back();
      for (const auto& inc : full.adjacent(u))
        if (comp[static_cast<size_t>(inc.neighbor)] == -1) {
          comp[static_cast<size_t>(inc.neighbor)] = comp_count;
          stack.push_back(inc.neighbor);
        }
    }
    ++comp_count;
  }
  std::vector<int> size(static_cast<size_t>(comp_count), 0);
  for (int c : comp) ++size[static_cast<size_t>(c)];
  int best = static_cast<int>(std::max_element(size.begin(), size.end()) -
                              size.begin());
  std::vector<NodeId> renum(static_cast<size_t>(n), -1);
  NodeId next = 0;
  for (NodeId u = 0; u < n; ++u)
    if (comp[static_cast<size_t>(u)] == best) renum[static_cast<size_t>(u)] = next++;
  std::vector<std::pair<NodeId, NodeId>> kept;
  for (auto [a, b] : simple)
    if (comp[static_cast<size_t>(a)] == best && comp[static_cast<size_t>(b)] == best)
      kept.push_back({renum[static_cast<size_t>(a)], renum[static_cast<size_t>(b)]});
  return Graph::build(next, kept);
}

}  // namespace vne
