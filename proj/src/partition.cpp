#include "vne/partition.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <queue>
#include <sstream>

#include "vne/errors.hpp"
#include "vne/rng.hpp"

namespace vne {

std::vector<std::vector<NodeId>> Partition::members() const {
  std::vector<std::vector<NodeId>> out(static_cast<size_t>(k));
  for (NodeId u = 0; u < static_cast<NodeId>(part_of.size()); ++u)
    out[static_cast<size_t>(part_of[static_cast<size_t>(u)])].push_back(u);
  return out;
}

void check_partition(const Graph& g, const Partition& p) {
  if (p.k < 1) throw Error("partition: k < 1");
  if (p.part_of.size() != static_cast<size_t>(g.node_count()))
    throw Error("partition: label vector size mismatch");
  for (int label : p.part_of)
    if (label < 0 || label >= p.k) throw Error("partition: label out of range");
  auto parts = p.members();
  for (int i = 0; i < p.k; ++i) {
    if (parts[static_cast<size_t>(i)].empty())
      throw Error("partition: part " + std::to_string(i) + " empty");
    if (!g.is_connected_subset(parts[static_cast<size_t>(i)]))
      throw Error("partition: part " + std::to_string(i) + " disconnected");
  }
}

namespace {

struct Grower {
  const Graph& g;
  std::span<const std::int64_t> weights;
  int k;

  std::int64_t weight_of(NodeId u) const {
    return weights.empty() ? 1 : weights[static_cast<size_t>(u)];
  }

  /// Farthest-point seed spreading from a start node: avoids adjacent seeds
  /// that would enclose each other during region growth.
  std::vector<NodeId> spread_seeds(NodeId start,
                                   const std::vector<NodeId>& pool) const {
    std::vector<NodeId> seeds{start};
    std::vector<Weight> best(static_cast<size_t>(g.node_count()), kUnreachable);
    while (static_cast<int>(seeds.size()) < k) {
      auto dist = g.hop_distances(seeds.back());
      for (size_t u = 0; u < best.size(); ++u)
        best[u] = std::min(best[u], dist[u]);
      NodeId next = -1;
      Weight far = -1;
      for (NodeId u : pool) {
        if (std::find(seeds.begin(), seeds.end(), u) != seeds.end()) continue;
        if (best[static_cast<size_t>(u)] > far) {
          far = best[static_cast<size_t>(u)];
          next = u;
        }
      }
      if (next == -1) break;
      seeds.push_back(next);
    }
    return seeds;
  }

  Partition grow(const std::vector<NodeId>& seeds) const {
    const int n = g.node_count();
    Partition p;
    p.k = k;
    p.part_of.assign(static_cast<size_t>(n), -1);
    std::vector<std::int64_t> part_weight(static_cast<size_t>(k), 0);
    std::vector<int> part_count(static_cast<size_t>(k), 0);
    int assigned = 0;
    for (int i = 0; i < k; ++i) {
      p.part_of[static_cast<size_t>(seeds[static_cast<size_t>(i)])] = i;
      part_weight[static_cast<size_t>(i)] += weight_of(seeds[static_cast<size_t>(i)]);
      ++part_count[static_cast<size_t>(i)];
      ++assigned;
    }
    while (assigned < n) {
      // Smallest part with an unassigned neighbor grabs its smallest-id
      // frontier node; keeps regions connected by construction.
      int best_part = -1;
      NodeId best_node = -1;
      for (int i = 0; i < k; ++i) {
        if (best_part != -1 &&
            std::tie(part_weight[static_cast<size_t>(i)], part_count[static_cast<size_t>(i)]) >=
                std::tie(part_weight[static_cast<size_t>(best_part)],
                         part_count[static_cast<size_t>(best_part)]))
          continue;
        NodeId candidate = -1;
        for (NodeId u = 0; u < n && candidate == -1; ++u) {
          if (p.part_of[static_cast<size_t>(u)] != i) continue;
          for (const auto& inc : g.adjacent(u))
            if (p.part_of[static_cast<size_t>(inc.neighbor)] == -1 &&
                (candidate == -1 || inc.neighbor < candidate))
              candidate = inc.neighbor;
        }
        if (candidate != -1) {
          best_part = i;
          best_node = candidate;
        }
      }
      if (best_part == -1) break;  // unreachable for connected graphs
      p.part_of[static_cast<size_t>(best_node)] = best_part;
      part_weight[static_cast<size_t>(best_part)] += weight_of(best_node);
      ++part_count[static_cast<size_t>(best_part)];
      ++assigned;
    }
    return p;
  }
};

int count_cut_edges(const Graph& g, const Partition& p) {
  int cut = 0;
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    if (p.part_of[static_cast<size_t>(g.tail(e))] !=
        p.part_of[static_cast<size_t>(g.head(e))])
      ++cut;
  return cut;
}

}  // namespace

Partition partition_balanced_connected(const Graph& g, int k, std::uint64_t seed,
                                       std::span<const std::int64_t> node_weights) {
  const int n = g.node_count();
  if (k < 1 || k > n)
    throw InfeasibleK("k = " + std::to_string(k) + " outside 1.." +
                      std::to_string(n));
  if (!node_weights.empty() &&
      node_weights.size() != static_cast<size_t>(n))
    throw Error("partition: weight vector size mismatch");

  if (k == 1) {
    Partition p;
    p.k = 1;
    p.part_of.assign(static_cast<size_t>(n), 0);
    return p;
  }
  if (k == n) {
    Partition p;
    p.k = n;
    p.part_of.resize(static_cast<size_t>(n));
    std::iota(p.part_of.begin(), p.part_of.end(), 0);
    return p;
  }

  Grower grower{g, node_weights, k};
  std::int64_t total_weight = 0;
  for (NodeId u = 0; u < n; ++u) total_weight += grower.weight_of(u);
  const std::int64_t cap =
      2 * ((total_weight + k - 1) / k);  // soft balance bound per part

  // Seed pool: prefer positive-weight nodes so every part can host something.
  std::vector<NodeId> positive, rest;
  for (NodeId u = 0; u < n; ++u)
    (grower.weight_of(u) > 0 ? positive : rest).push_back(u);

  Partition best;
  std::tuple<int, int, std::int64_t> best_score{INT32_MAX, INT32_MAX, INT64_MAX};
  const int starts = 12;
  for (int s = 0; s < starts; ++s) {
    Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(s)));
    std::vector<NodeId> pool = positive;
    rng.shuffle(pool);
    if (static_cast<int>(pool.size()) < k) {
      std::vector<NodeId> extra = rest;
      rng.shuffle(extra);
      pool.insert(pool.end(), extra.begin(), extra.end());
    }
    // Even starts spread seeds by hop distance from a random anchor, odd
    // starts take random seeds for diversity.
    std::vector<NodeId> seeds;
    if (s % 2 == 0) {
      std::vector<NodeId> full_pool = pool;
      seeds = grower.spread_seeds(pool[0], full_pool);
      if (static_cast<int>(seeds.size()) < k)
        for (NodeId u : pool) {
          if (static_cast<int>(seeds.size()) >= k) break;
          if (std::find(seeds.begin(), seeds.end(), u) == seeds.end())
            seeds.push_back(u);
        }
    } else {
      seeds.assign(pool.begin(), pool.begin() + k);
    }
    Partition p = grower.grow(seeds);

    auto parts = p.members();
    std::vector<std::int64_t> pw(static_cast<size_t>(k), 0);
    for (NodeId u = 0; u < n; ++u)
      pw[static_cast<size_t>(p.part_of[static_cast<size_t>(u)])] += grower.weight_of(u);

    // Attempts one boundary move; the donor must stay nonempty, weighted and
    // connected. Returns true when the move was applied.
    auto try_move = [&](NodeId u, int to) -> bool {
      int from = p.part_of[static_cast<size_t>(u)];
      auto& donor = parts[static_cast<size_t>(from)];
      if (donor.size() <= 1) return false;
      if (grower.weight_of(u) > 0 &&
          pw[static_cast<size_t>(from)] - grower.weight_of(u) <= 0 &&
          total_weight >= k)
        return false;
      std::vector<NodeId> remaining;
      remaining.reserve(donor.size() - 1);
      for (NodeId v : donor)
        if (v != u) remaining.push_back(v);
      if (!g.is_connected_subset(remaining)) return false;
      donor = std::move(remaining);
      parts[static_cast<size_t>(to)].push_back(u);
      pw[static_cast<size_t>(from)] -= grower.weight_of(u);
      pw[static_cast<size_t>(to)] += grower.weight_of(u);
      p.part_of[static_cast<size_t>(u)] = to;
      return true;
    };

    auto links_toward = [&](NodeId u) {
      std::vector<std::pair<int, int>> toward;  // (part, edge count)
      int internal = 0;
      int from = p.part_of[static_cast<size_t>(u)];
      for (const auto& inc : g.adjacent(u)) {
        int q = p.part_of[static_cast<size_t>(inc.neighbor)];
        if (q == from) {
          ++internal;
          continue;
        }
        auto it = std::find_if(toward.begin(), toward.end(),
                               [&](auto& pr) { return pr.first == q; });
        if (it == toward.end())
          toward.push_back({q, 1});
        else
          ++it->second;
      }
      std::sort(toward.begin(), toward.end());
      return std::pair(toward, internal);
    };

    // Stage 1: cut refinement. Move a node to a neighboring part when it
    // strictly reduces the cut, or keeps the cut while improving balance.
    bool moved = true;
    for (int pass = 0; pass < 2 * n && moved; ++pass) {
      moved = false;
      for (NodeId u = 0; u < n; ++u) {
        int from = p.part_of[static_cast<size_t>(u)];
        auto [toward, internal] = links_toward(u);
        int best_q = -1, best_gain = 0;
        for (auto [q, links] : toward) {
          int gain = links - internal;
          bool balance = pw[static_cast<size_t>(q)] + grower.weight_of(u) <
                         pw[static_cast<size_t>(from)];
          if (pw[static_cast<size_t>(q)] + grower.weight_of(u) > cap) continue;
          if ((gain > 0 || balance) && (best_q == -1 || gain > best_gain)) {
            best_q = q;
            best_gain = gain;
          }
        }
        if (best_q != -1 && try_move(u, best_q)) moved = true;
      }
    }

    // Stage 2: balance repair. Shrink overweight parts toward lighter
    // neighbors, tolerating a small cut regression; each applied move
    // strictly reduces the donor/receiver imbalance, so this terminates.
    const std::int64_t target = (total_weight + k - 1) / k;
    moved = true;
    for (int pass = 0; pass < 2 * n && moved; ++pass) {
      moved = false;
      for (NodeId u = 0; u < n; ++u) {
        int from = p.part_of[static_cast<size_t>(u)];
        if (pw[static_cast<size_t>(from)] <= target) continue;
        auto [toward, internal] = links_toward(u);
        for (auto [q, links] : toward) {
          if (pw[static_cast<size_t>(q)] + grower.weight_of(u) >=
              pw[static_cast<size_t>(from)])
            continue;
          if (links - internal < -2) continue;
          if (try_move(u, q)) {
            moved = true;
            break;
          }
        }
      }
    }

    std::int64_t max_w = *std::max_element(pw.begin(), pw.end());
    std::tuple<int, int, std::int64_t> score{max_w > cap ? 1 : 0,
                                             count_cut_edges(g, p), max_w};
    bool valid = true;
    for (int i = 0; i < k && valid; ++i)
      valid = !parts[static_cast<size_t>(i)].empty();
    if (valid && score < best_score) {
      best_score = score;
      best = p;
    }
  }
  if (best.k == 0) throw Error("partition: region growing failed");
  check_partition(g, best);
  return best;
}

std::vector<EdgeId> cut_edges(const Graph& g, const Partition& p) {
  std::vector<EdgeId> cuts;
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    if (p.part_of[static_cast<size_t>(g.tail(e))] !=
        p.part_of[static_cast<size_t>(g.head(e))])
      cuts.push_back(e);
  return cuts;
}

SubgraphView part_view(const Graph& g, const Partition& p, int part) {
  SubgraphView view;
  for (NodeId u = 0; u < g.node_count(); ++u)
    if (p.part_of[static_cast<size_t>(u)] == part) view.members.push_back(u);
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    int pa = p.part_of[static_cast<size_t>(g.tail(e))];
    int pb = p.part_of[static_cast<size_t>(g.head(e))];
    if (pa == part && pb == part) view.induced_edges.push_back(e);
  }
  for (NodeId u : view.members) {
    for (const auto& inc : g.adjacent(u))
      if (p.part_of[static_cast<size_t>(inc.neighbor)] != part) {
        view.boundary_nodes.push_back(u);
        break;
      }
  }
  return view;
}

std::vector<SubgraphView> expand_substrate_parts(const Graph& gs, const Partition& p,
                                                 int target_size) {
  std::vector<SubgraphView> views;
  views.reserve(static_cast<size_t>(p.k));
  for (int part = 0; part < p.k; ++part) {
    SubgraphView base = part_view(gs, p, part);
    std::vector<char> in(static_cast<size_t>(gs.node_count()), 0);
    for (NodeId u : base.members) in[static_cast<size_t>(u)] = 1;

    // Multi-source BFS layers from the part; add nodes in (layer, id) order
    // until the target is met so the view stays connected even when a layer
    // is only partially taken.
    std::vector<Weight> dist(static_cast<size_t>(gs.node_count()), kUnreachable);
    std::queue<NodeId> q;
    for (NodeId u : base.members) {
      dist[static_cast<size_t>(u)] = 0;
      q.push(u);
    }
    std::vector<std::pair<Weight, NodeId>> frontier;
    while (!q.empty()) {
      NodeId u = q.front();
      q.pop();
      for (const auto& inc : gs.adjacent(u))
        if (dist[static_cast<size_t>(inc.neighbor)] >= kUnreachable) {
          dist[static_cast<size_t>(inc.neighbor)] = dist[static_cast<size_t>(u)] + 1;
          frontier.push_back({dist[static_cast<size_t>(inc.neighbor)], inc.neighbor});
          q.push(inc.neighbor);
        }
    }
    std::sort(frontier.begin(), frontier.end());
    std::vector<NodeId> members = base.members;
    for (auto [layer, u] : frontier) {
      if (static_cast<int>(members.size()) >= target_size) break;
      members.push_back(u);
      in[static_cast<size_t>(u)] = 1;
    }
    std::sort(members.begin(), members.end());

    SubgraphView view;
    view.members = std::move(members);
    for (EdgeId e = 0; e < gs.edge_count(); ++e)
      if (in[static_cast<size_t>(gs.tail(e))] && in[static_cast<size_t>(gs.head(e))])
        view.induced_edges.push_back(e);
    for (NodeId u : view.members)
      for (const auto& inc : gs.adjacent(u))
        if (!in[static_cast<size_t>(inc.neighbor)]) {
          view.boundary_nodes.push_back(u);
          break;
        }
    views.push_back(std::move(view));
  }
  return views;
}

bool is_refinement(const Partition& p_fine, const Partition& p_coarse) {
  if (p_fine.part_of.size() != p_coarse.part_of.size()) return false;
  std::vector<int> image(static_cast<size_t>(p_fine.k), -1);
  for (size_t u = 0; u < p_fine.part_of.size(); ++u) {
    int f = p_fine.part_of[u];
    int c = p_coarse.part_of[u];
    if (image[static_cast<size_t>(f)] == -1)
      image[static_cast<size_t>(f)] = c;
    else if (image[static_cast<size_t>(f)] != c)
      return false;
  }
  return true;
}

Partition load_partition(const Graph& g, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open");
  Partition p;
  p.part_of.assign(static_cast<size_t>(g.node_count()), -1);
  std::string line;
  int lineno = 0;
  int max_label = -1;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    long long u, label;
    if (!(ss >> u)) continue;
    if (!(ss >> label))
      throw ParseError(path + ":" + std::to_string(lineno) + ": expected 'node part'");
    if (u < 0 || u >= g.node_count())
      throw ParseError(path + ":" + std::to_string(lineno) + ": node out of range");
    if (label < 0)
      throw ParseError(path + ":" + std::to_string(lineno) + ": negative part");
    p.part_of[static_cast<size_t>(u)] = static_cast<int>(label);
    max_label = std::max(max_label, static_cast<int>(label));
  }
  for (size_t u = 0; u < p.part_of.size(); ++u)
    if (p.part_of[u] == -1)
      throw ParseError(path + ": node " + std::to_string(u) + " missing");
  p.k = max_label + 1;
  check_partition(g, p);
  return p;
}

void store_partition(const Partition& p, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(path + ": cannot write");
  for (size_t u = 0; u < p.part_of.size(); ++u)
    out << u << " " << p.part_of[u] << "\n";
}

}  // namespace vne
