#include <algorithm>
#include <bit>
#include <cstdint>

#include "uavplan/coverage.hpp"

namespace uavplan {

namespace {

using Mask = std::uint64_t;

bool quick_feasible(std::span<const std::size_t> members, const CoverageGeometry& geometry, const FeasibleBox& box) {
  WitnessOptions quick;
  quick.stop_at_first_feasible = true;
  return minimize_deficit(members, geometry, box, quick).feasible();
}

struct BudgetExceeded {};

// Member regions are convex sets in R^3, so by Helly's theorem a set is
// feasible iff all of its subsets of size <= 4 are. Feasibility then reduces to
// avoiding the minimal infeasible sets ("edges") of size 2 to 4.
class Hypergraph {
 public:
  explicit Hypergraph(std::size_t n) : by_vertex_(n) {}

  void add(Mask edge) {
    const auto id = edges_.size();
    edges_.push_back(edge);
    for (Mask rest = edge; rest != 0; rest &= rest - 1) by_vertex_[static_cast<std::size_t>(std::countr_zero(rest))].push_back(id);
  }

  [[nodiscard]] bool contains_edge(Mask s) const {
    return std::any_of(edges_.begin(), edges_.end(), [&](Mask e) { return (e & s) == e; });
  }

  // Some edge through v lies inside s | v.
  [[nodiscard]] bool blocked(int v, Mask s) const {
    const Mask with = s | (Mask{1} << v);
    for (auto id : by_vertex_[static_cast<std::size_t>(v)]) {
      if ((edges_[id] & with) == edges_[id]) return true;
    }
    return false;
  }

 private:
  std::vector<Mask> edges_;
  std::vector<std::vector<std::size_t>> by_vertex_;
};

Hypergraph infeasible_sets(const std::vector<std::size_t>& ues, const std::vector<std::vector<char>>& pair_ok,
                           const CoverageGeometry& geometry, const FeasibleBox& box) {
  const std::size_t n = ues.size();
  Hypergraph h(n);
  auto bit = [](std::size_t i) { return Mask{1} << i; };
  auto test = [&](std::initializer_list<std::size_t> local) {
    std::vector<std::size_t> members;
    for (auto i : local) members.push_back(ues[i]);
    return quick_feasible(members, geometry, box);
  };
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (!pair_ok[ues[a]][ues[b]]) h.add(bit(a) | bit(b));
    }
  }
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (!pair_ok[ues[a]][ues[b]]) continue;
      for (std::size_t c = b + 1; c < n; ++c) {
        if (!pair_ok[ues[a]][ues[c]] || !pair_ok[ues[b]][ues[c]]) continue;
        if (!test({a, b, c})) h.add(bit(a) | bit(b) | bit(c));
      }
    }
  }
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      for (std::size_t c = b + 1; c < n; ++c) {
        const Mask abc = bit(a) | bit(b) | bit(c);
        if (h.contains_edge(abc)) continue;
        for (std::size_t d = c + 1; d < n; ++d) {
          const Mask all = abc | bit(d);
          if (h.contains_edge(all)) continue;
          if (!test({a, b, c, d})) h.add(all);
        }
      }
    }
  }
  return h;
}

// Include/exclude search over maximal edge-free sets. An excluded element must
// end up blocked by the final set, which prunes branches that could only
// produce non-maximal sets.
class MaximalSets {
 public:
  MaximalSets(const Hypergraph& h, std::size_t budget) : h_(h), budget_(budget) {}

  std::vector<Mask> run(Mask all) {
    found_.clear();
    expand(0, all, 0);
    return found_;
  }

 private:
  void expand(Mask current, Mask candidates, Mask excluded) {
    if (++nodes_ > budget_) throw BudgetExceeded{};
    for (Mask rest = candidates; rest != 0; rest &= rest - 1) {
      const int c = std::countr_zero(rest);
      if (h_.blocked(c, current)) candidates &= ~(Mask{1} << c);
    }
    const Mask reach = current | candidates;
    for (Mask rest = excluded; rest != 0; rest &= rest - 1) {
      if (!h_.blocked(std::countr_zero(rest), reach)) return;
    }
    if (!h_.contains_edge(reach)) {
      found_.push_back(reach);
      return;
    }
    const Mask bit = candidates & (~candidates + 1);
    expand(current | bit, candidates & ~bit, excluded);
    expand(current, candidates & ~bit, excluded | bit);
  }

  const Hypergraph& h_;
  std::size_t budget_;
  std::size_t nodes_ = 0;
  std::vector<Mask> found_;
};

// Grows a set from every member of `pool` by repeatedly adding the
// pairwise-compatible candidate nearest the current witness.
void grow_from_each(const std::vector<std::size_t>& pool, const std::vector<std::vector<char>>& pair_ok,
                    const CoverageGeometry& geometry, const FeasibleBox& box,
                    std::vector<std::vector<std::size_t>>& out) {
  WitnessOptions quick;
  quick.stop_at_first_feasible = true;
  const auto& spheres = geometry.spheres;
  for (std::size_t seed : pool) {
    std::vector<std::size_t> current{seed};
    Point3 anchor = minimize_deficit(current, geometry, box, quick).point;
    std::vector<std::size_t> candidates;
    for (std::size_t j : pool) {
      if (j != seed && pair_ok[seed][j]) candidates.push_back(j);
    }
    while (!candidates.empty()) {
      auto nearest = std::min_element(candidates.begin(), candidates.end(), [&](std::size_t a, std::size_t b) {
        const double da = path_distance(anchor, spheres[a].center);
        const double db = path_distance(anchor, spheres[b].center);
        return da != db ? da < db : a < b;
      });
      const std::size_t pick = *nearest;
      candidates.erase(nearest);
      auto trial = current;
      trial.push_back(pick);
      const auto minimum = minimize_deficit(trial, geometry, box, quick);
      if (!minimum.feasible()) continue;
      current = std::move(trial);
      anchor = minimum.point;
      std::erase_if(candidates, [&](std::size_t c) { return !pair_ok[pick][c]; });
    }
    std::sort(current.begin(), current.end());
    out.push_back(std::move(current));
  }
}

std::vector<std::vector<std::size_t>> keep_maximal(std::vector<std::vector<std::size_t>> sets) {
  std::sort(sets.begin(), sets.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return a < b;
  });
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
  std::vector<std::vector<std::size_t>> kept;
  for (auto& s : sets) {
    const bool dominated = std::any_of(kept.begin(), kept.end(), [&](const auto& big) {
      return std::includes(big.begin(), big.end(), s.begin(), s.end());
    });
    if (!dominated) kept.push_back(std::move(s));
  }
  return kept;
}

}  // namespace

std::vector<CandidateZone> enumerate_zones(const CoverageGeometry& geometry, const FeasibleBox& box,
                                           const EnumerationOptions& options) {
  const auto& spheres = geometry.spheres;
  const std::size_t n = spheres.size();
  if (n == 0) return {};

  // Pairwise feasibility graph; sphere overlap is checked first as a cheap filter.
  std::vector<std::vector<char>> pair_ok(n, std::vector<char>(n, 0));
  std::vector<char> single_ok(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t one[] = {i};
    single_ok[i] = quick_feasible(one, geometry, box) ? 1 : 0;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!single_ok[i]) continue;
    pair_ok[i][i] = 1;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!single_ok[j]) continue;
      if (path_distance(spheres[i].center, spheres[j].center) > spheres[i].radius + spheres[j].radius) continue;
      const std::size_t pair[] = {i, j};
      if (quick_feasible(pair, geometry, box)) pair_ok[i][j] = pair_ok[j][i] = 1;
    }
  }

  std::vector<std::vector<std::size_t>> feasible_sets;
  std::vector<char> seen(n, 0);
  const std::size_t exact_cap = std::min<std::size_t>(options.max_exact_component, 63);
  for (std::size_t root = 0; root < n; ++root) {
    if (seen[root] || !single_ok[root]) continue;
    std::vector<std::size_t> component{root};
    seen[root] = 1;
    for (std::size_t head = 0; head < component.size(); ++head) {
      for (std::size_t j = 0; j < n; ++j) {
        if (!seen[j] && pair_ok[component[head]][j]) {
          seen[j] = 1;
          component.push_back(j);
        }
      }
    }
    std::sort(component.begin(), component.end());
    if (component.size() == 1 || quick_feasible(component, geometry, box)) {
      feasible_sets.push_back(component);
      continue;
    }

    if (component.size() <= exact_cap) {
      const Hypergraph h = infeasible_sets(component, pair_ok, geometry, box);
      MaximalSets search(h, options.max_nodes_per_component);
      try {
        for (Mask m : search.run((Mask{1} << component.size()) - 1)) {
          std::vector<std::size_t> members;
          for (std::size_t b = 0; b < component.size(); ++b) {
            if (m >> b & 1u) members.push_back(component[b]);
          }
          feasible_sets.push_back(std::move(members));
        }
        continue;
      } catch (const BudgetExceeded&) {
      }
    }
    grow_from_each(component, pair_ok, geometry, box, feasible_sets);
  }

  // Certify every set with a full witness search. A set that passed the
  // small-subset tests but fails here is replaced by grown subsets of itself.
  std::vector<CandidateZone> zones;
  std::vector<std::vector<std::size_t>> pending = keep_maximal(std::move(feasible_sets));
  for (int round = 0; round < 2 && !pending.empty(); ++round) {
    std::vector<std::vector<std::size_t>> retry;
    for (auto& members : pending) {
      const auto minimum = minimize_deficit(members, geometry, box);
      if (minimum.feasible()) {
        zones.push_back(make_zone(std::move(members), minimum.point, geometry));
      } else if (round == 0) {
        grow_from_each(members, pair_ok, geometry, box, retry);
      }
    }
    pending = keep_maximal(std::move(retry));
  }
  std::vector<std::vector<std::size_t>> member_lists;
  for (const auto& z : zones) member_lists.push_back(z.members);
  const auto maximal = keep_maximal(member_lists);
  std::erase_if(zones, [&](const CandidateZone& z) {
    return std::find(maximal.begin(), maximal.end(), z.members) == maximal.end();
  });
  std::sort(zones.begin(), zones.end(),
            [](const CandidateZone& a, const CandidateZone& b) { return a.members < b.members; });
  zones.erase(std::unique(zones.begin(), zones.end(),
                          [](const CandidateZone& a, const CandidateZone& b) { return a.members == b.members; }),
              zones.end());
  return zones;
}

}  // namespace uavplan
