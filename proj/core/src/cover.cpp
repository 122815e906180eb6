#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>

#include "uavplan/coverage.hpp"

namespace uavplan {

namespace {

// Fixed-width bitset over UE indices.
class UeSet {
 public:
  explicit UeSet(std::size_t n = 0) : words_((n + 63) / 64, 0) {}

  void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
  [[nodiscard]] bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1U; }
  UeSet& operator|=(const UeSet& other) {
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] |= other.words_[w];
    return *this;
  }
  [[nodiscard]] bool covers(std::size_t n) const {
    for (std::size_t i = 0; i < n; ++i) {
      if (!test(i)) return false;
    }
    return true;
  }

 private:
  std::vector<std::uint64_t> words_;
};

struct ExactBudgetExceeded {};

}  // namespace

std::size_t max_ues_per_uav(std::vector<double> bandwidths_hz, double b_max_hz) {
  std::sort(bandwidths_hz.begin(), bandwidths_hz.end());
  double total = 0.0;
  std::size_t count = 0;
  for (double b : bandwidths_hz) {
    total += b;
    if (total > b_max_hz) break;
    ++count;
  }
  return count;
}

std::optional<std::vector<std::size_t>> assign_to_zones(std::span<const std::size_t> selected,
                                                        std::span<const CandidateZone> zones,
                                                        std::span<const std::size_t> caps, std::size_t n_ues) {
  const std::size_t k = selected.size();
  std::vector<std::vector<char>> contains(k, std::vector<char>(n_ues, 0));
  for (std::size_t s = 0; s < k; ++s) {
    for (auto m : zones[selected[s]].members) contains[s][m] = 1;
  }
  std::vector<std::size_t> owner(n_ues, k);
  std::vector<std::vector<std::size_t>> load(k);
  std::vector<char> visited(k, 0);

  // Capacitated augmenting path search (Kuhn's algorithm with slot loads).
  std::function<bool(std::size_t)> augment = [&](std::size_t ue) -> bool {
    for (std::size_t s = 0; s < k; ++s) {
      if (!contains[s][ue] || visited[s]) continue;
      visited[s] = 1;
      if (load[s].size() < caps[selected[s]]) {
        load[s].push_back(ue);
        owner[ue] = s;
        return true;
      }
      for (std::size_t pos = 0; pos < load[s].size(); ++pos) {
        const std::size_t other = load[s][pos];
        if (augment(other)) {
          load[s][pos] = ue;
          owner[ue] = s;
          return true;
        }
      }
    }
    return false;
  };

  for (std::size_t ue = 0; ue < n_ues; ++ue) {
    std::fill(visited.begin(), visited.end(), 0);
    if (!augment(ue)) return std::nullopt;
  }
  return owner;
}

std::vector<std::size_t> undominated_zones(std::span<const CandidateZone> zones, std::span<const std::size_t> caps) {
  std::vector<std::size_t> kept;
  for (std::size_t a = 0; a < zones.size(); ++a) {
    bool dominated = false;
    for (std::size_t b = 0; b < zones.size() && !dominated; ++b) {
      if (a == b || caps[b] < caps[a]) continue;
      const auto& ma = zones[a].members;
      const auto& mb = zones[b].members;
      if (!std::includes(mb.begin(), mb.end(), ma.begin(), ma.end())) continue;
      // Equal member sets with equal caps: keep the lower index.
      dominated = ma.size() < mb.size() || caps[b] > caps[a] || b < a;
    }
    if (!dominated) kept.push_back(a);
  }
  return kept;
}

ZoneSelection greedy_zone_cover(std::span<const CandidateZone> zones, std::span<const std::size_t> caps,
                                const CoverageGeometry& geometry) {
  const std::size_t n = geometry.spheres.size();
  std::vector<char> covered(n, 0);
  std::size_t remaining = n;
  ZoneSelection selection;
  selection.owner.assign(n, 0);

  while (remaining > 0) {
    std::size_t best = zones.size();
    std::size_t best_gain = 0;
    for (std::size_t z = 0; z < zones.size(); ++z) {
      std::size_t fresh = 0;
      for (auto m : zones[z].members) fresh += covered[m] ? 0 : 1;
      const std::size_t gain = std::min(fresh, caps[z]);
      if (gain == 0) continue;
      if (gain > best_gain || (gain == best_gain && zones[z].slack > zones[best].slack)) {
        best = z;
        best_gain = gain;
      }
    }
    if (best == zones.size()) throw UncoverableError("greedy cover: some UE lies in no zone");

    std::vector<std::size_t> fresh;
    for (auto m : zones[best].members) {
      if (!covered[m]) fresh.push_back(m);
    }
    const Point3 w = zones[best].witness;
    std::stable_sort(fresh.begin(), fresh.end(), [&](std::size_t a, std::size_t b) {
      return path_distance(w, geometry.spheres[a].center) < path_distance(w, geometry.spheres[b].center);
    });
    fresh.resize(best_gain);
    for (auto m : fresh) {
      covered[m] = 1;
      selection.owner[m] = selection.zones.size();
    }
    remaining -= best_gain;
    selection.zones.push_back(best);
  }
  return selection;
}

std::optional<ZoneSelection> exact_zone_cover(std::span<const CandidateZone> zones, std::span<const std::size_t> caps,
                                              std::size_t n_ues, std::size_t max_size) {
  const std::size_t z_count = zones.size();
  if (n_ues == 0) return ZoneSelection{};
  if (z_count == 0) return std::nullopt;

  std::vector<UeSet> member_sets(z_count, UeSet(n_ues));
  std::vector<std::size_t> usable(z_count), max_uses(z_count);
  for (std::size_t z = 0; z < z_count; ++z) {
    for (auto m : zones[z].members) member_sets[z].set(m);
    usable[z] = std::min(caps[z], zones[z].members.size());
    max_uses[z] = usable[z] == 0 ? 0 : (zones[z].members.size() + caps[z] - 1) / caps[z];
  }
  // Suffix unions and suffix best capacity for pruning.
  std::vector<UeSet> suffix_union(z_count + 1, UeSet(n_ues));
  std::vector<std::size_t> suffix_cap(z_count + 1, 0);
  for (std::size_t z = z_count; z-- > 0;) {
    suffix_union[z] = suffix_union[z + 1];
    if (usable[z] > 0) suffix_union[z] |= member_sets[z];
    suffix_cap[z] = std::max(suffix_cap[z + 1], usable[z]);
  }
  if (!suffix_union[0].covers(n_ues)) return std::nullopt;

  const std::size_t best_cap = suffix_cap[0];
  const std::size_t lower = std::max<std::size_t>(1, (n_ues + best_cap - 1) / best_cap);
  std::size_t nodes = 0;
  constexpr std::size_t kNodeBudget = 20'000'000;

  std::vector<std::size_t> chosen;
  std::vector<std::size_t> uses(z_count, 0);
  std::optional<std::vector<std::size_t>> owner;

  // Multisets of zones in nondecreasing index order.
  std::function<bool(std::size_t, std::size_t, const UeSet&, std::size_t)> search =
      [&](std::size_t start, std::size_t target, const UeSet& covered, std::size_t capacity) -> bool {
    if (++nodes > kNodeBudget) throw ExactBudgetExceeded{};
    if (chosen.size() == target) {
      if (!covered.covers(n_ues)) return false;
      owner = assign_to_zones(chosen, zones, caps, n_ues);
      return owner.has_value();
    }
    const std::size_t left = target - chosen.size();
    for (std::size_t z = start; z < z_count; ++z) {
      if (uses[z] >= max_uses[z]) continue;
      UeSet next = covered;
      next |= suffix_union[z];
      if (!next.covers(n_ues)) return false;  // later starts only shrink the suffix
      if (capacity + left * suffix_cap[z] < n_ues) return false;
      UeSet with = covered;
      with |= member_sets[z];
      chosen.push_back(z);
      ++uses[z];
      const bool found = search(z, target, with, capacity + usable[z]);
      if (found) return true;
      --uses[z];
      chosen.pop_back();
    }
    return false;
  };

  try {
    for (std::size_t target = lower; target <= max_size; ++target) {
      chosen.clear();
      std::fill(uses.begin(), uses.end(), 0);
      if (search(0, target, UeSet(n_ues), 0)) {
        ZoneSelection selection;
        selection.zones = chosen;
        selection.owner = std::move(*owner);
        return selection;
      }
    }
  } catch (const ExactBudgetExceeded&) {
    return std::nullopt;
  }
  return std::nullopt;
}

namespace {

std::vector<CandidateZone> materialize(const ZoneSelection& selection, std::span<const CandidateZone> zones,
                                       const CoverageGeometry& geometry) {
  std::vector<std::vector<std::size_t>> members(selection.zones.size());
  for (std::size_t ue = 0; ue < selection.owner.size(); ++ue) members[selection.owner[ue]].push_back(ue);
  std::vector<CandidateZone> groups;
  for (std::size_t s = 0; s < selection.zones.size(); ++s) {
    if (members[s].empty()) continue;
    groups.push_back(make_zone(std::move(members[s]), zones[selection.zones[s]].witness, geometry));
  }
  std::sort(groups.begin(), groups.end(),
            [](const CandidateZone& a, const CandidateZone& b) { return a.members < b.members; });
  return groups;
}

}  // namespace

CoverOutcome minimal_zone_cover(std::span<const CandidateZone> zones, const CoverageGeometry& geometry,
                                std::span<const std::size_t> caps, const CoverOptions& options) {
  const std::size_t n = geometry.spheres.size();
  std::vector<char> reachable(n, 0);
  for (std::size_t z = 0; z < zones.size(); ++z) {
    if (caps[z] == 0) continue;
    for (auto m : zones[z].members) reachable[m] = 1;
  }
  std::vector<std::size_t> missing;
  for (std::size_t i = 0; i < n; ++i) {
    if (!reachable[i]) missing.push_back(i);
  }
  if (!missing.empty()) {
    throw UncoverableError("UE " + std::to_string(missing.front()) + " lies in no usable zone");
  }

  const ZoneSelection greedy = greedy_zone_cover(zones, caps, geometry);
  CoverOutcome outcome;
  outcome.groups = materialize(greedy, zones, geometry);

  const auto kept = undominated_zones(zones, caps);
  if (kept.size() > options.exact_zone_limit) return outcome;

  std::vector<CandidateZone> reduced;
  std::vector<std::size_t> reduced_caps;
  for (auto z : kept) {
    reduced.push_back(zones[z]);
    reduced_caps.push_back(caps[z]);
  }
  const auto exact = exact_zone_cover(reduced, reduced_caps, n, greedy.size());
  if (!exact) return outcome;

  outcome.greedy_groups = std::move(outcome.groups);
  outcome.groups = materialize(*exact, reduced, geometry);
  outcome.exact = true;
  return outcome;
}

}  // namespace uavplan
