#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "kq/group.hpp"

namespace kq {

/**
 * A finite left G-set on points 0..n-1, stored as the full action table.
 */
class FiniteGSet {
 public:
  FiniteGSet() = default;
  FiniteGSet(GroupPtr G, int n, std::vector<int> table) : G_(std::move(G)), n_(n), act_(std::move(table)) {
    if (static_cast<int>(act_.size()) != G_->order() * n_) throw InputError("action table has wrong size");
    for (int g = 0; g < G_->order(); ++g) {
      std::vector<char> seen(n_, 0);
      for (int x = 0; x < n_; ++x) {
        int y = act(g, x);
        if (y < 0 || y >= n_ || seen[y]) throw InputError("element does not act by a permutation");
        seen[y] = 1;
      }
    }
    for (int x = 0; x < n_; ++x)
      if (act(0, x) != x) throw InputError("identity does not act trivially");
    for (int g = 0; g < G_->order(); ++g)
      for (int h = 0; h < G_->order(); ++h)
        for (int x = 0; x < n_; ++x)
          if (act(G_->mul(g, h), x) != act(g, act(h, x))) throw InputError("action is not compatible with the group law");
    build_orbits();
  }

  /// Extends the action of a generating set (element index -> images).
  static FiniteGSet from_generators(GroupPtr G, int n, const std::map<int, std::vector<int>>& gens) {
    std::vector<int> act(static_cast<size_t>(G->order()) * n, -1);
    for (int x = 0; x < n; ++x) act[x] = x;
    std::vector<int> known{0};
    std::vector<char> have(G->order(), 0);
    have[0] = 1;
    for (auto& [g, img] : gens) {
      if (g < 0 || g >= G->order() || static_cast<int>(img.size()) != n) throw InputError("bad G-set generator entry");
      if (have[g]) {
        for (int x = 0; x < n; ++x)
          if (act[g * n + x] != img[x]) throw InputError("inconsistent G-set action");
        continue;
      }
      for (int x = 0; x < n; ++x) act[g * n + x] = img[x];
      have[g] = 1;
      known.push_back(g);
    }
    for (size_t i = 0; i < known.size(); ++i)
      for (auto& [s, img] : gens) {
        (void)img;
        int h = G->mul(s, known[i]);
        std::vector<int> im(n);
        for (int x = 0; x < n; ++x) im[x] = act[s * n + act[known[i] * n + x]];
        if (have[h]) {
          for (int x = 0; x < n; ++x)
            if (act[h * n + x] != im[x]) throw InputError("G-set action does not respect the group law");
          continue;
        }
        have[h] = 1;
        for (int x = 0; x < n; ++x) act[h * n + x] = im[x];
        known.push_back(h);
      }
    if (static_cast<int>(known.size()) != G->order()) throw InputError("listed elements do not generate the group");
    return FiniteGSet(G, n, act);
  }

  const GroupPtr& group() const { return G_; }
  int size() const { return n_; }
  int act(int g, int x) const { return act_[g * n_ + x]; }

  int num_orbits() const { return static_cast<int>(orbit_reps_.size()); }
  const std::vector<int>& orbit_reps() const { return orbit_reps_; }
  int orbit_of(int x) const { return orbit_of_[x]; }
  const std::vector<int>& orbit(int o) const { return orbits_[o]; }
  /// some g with g * rep(orbit(x)) = x
  int transporter(int x) const { return transporter_[x]; }

  Subgroup stabilizer(int x) const {
    Subgroup s;
    for (int g = 0; g < G_->order(); ++g)
      if (act(g, x) == x) s.members.push_back(g);
    return s;
  }

  std::vector<int> fixed_points(int g) const {
    std::vector<int> r;
    for (int x = 0; x < n_; ++x)
      if (act(g, x) == x) r.push_back(x);
    return r;
  }

  /// Fixed points of g as a set for a subgroup H, typically Z_G(g).
  /// Returns the H-set and the list of parent points.
  std::pair<FiniteGSet, std::vector<int>> fixed_points_as(const EmbeddedGroup& H, int g) const {
    auto pts = fixed_points(g);
    std::vector<int> local(n_, -1);
    for (size_t i = 0; i < pts.size(); ++i) local[pts[i]] = static_cast<int>(i);
    int m = static_cast<int>(pts.size());
    std::vector<int> act2(static_cast<size_t>(H.group->order()) * m);
    for (int h = 0; h < H.group->order(); ++h)
      for (int i = 0; i < m; ++i) {
        int y = local[act(H.to_parent[h], pts[i])];
        if (y < 0) throw InputError("subgroup does not preserve the fixed points");
        act2[h * m + i] = y;
      }
    return {FiniteGSet(H.group, m, act2), pts};
  }

  /// Restriction along an embedded subgroup.
  FiniteGSet restrict_to(const EmbeddedGroup& H) const {
    std::vector<int> a(static_cast<size_t>(H.group->order()) * n_);
    for (int h = 0; h < H.group->order(); ++h)
      for (int x = 0; x < n_; ++x) a[h * n_ + x] = act(H.to_parent[h], x);
    return FiniteGSet(H.group, n_, a);
  }

  bool operator==(const FiniteGSet& o) const { return n_ == o.n_ && act_ == o.act_; }

 private:
  void build_orbits() {
    orbit_of_.assign(n_, -1);
    transporter_.assign(n_, -1);
    for (int x = 0; x < n_; ++x) {
      if (orbit_of_[x] >= 0) continue;
      int o = static_cast<int>(orbit_reps_.size());
      orbit_reps_.push_back(x);
      std::vector<int> orb;
      for (int g = 0; g < G_->order(); ++g) {
        int y = act(g, x);
        if (orbit_of_[y] < 0) {
          orbit_of_[y] = o;
          transporter_[y] = g;
          orb.push_back(y);
        }
      }
      std::sort(orb.begin(), orb.end());
      orbits_.push_back(orb);
    }
  }

  GroupPtr G_;
  int n_ = 0;
  std::vector<int> act_;
  std::vector<int> orbit_reps_, orbit_of_, transporter_;
  std::vector<std::vector<int>> orbits_;
};

/// Left cosets G/H; point 0 is the coset H itself.
inline FiniteGSet coset_space(const GroupPtr& G, const Subgroup& H) {
  std::vector<int> coset_of(G->order(), -1);
  std::vector<int> reps;
  for (int g = 0; g < G->order(); ++g) {
    if (coset_of[g] >= 0) continue;
    int idx = static_cast<int>(reps.size());
    reps.push_back(g);
    for (int h : H.members) coset_of[G->mul(g, h)] = idx;
  }
  int n = static_cast<int>(reps.size());
  std::vector<int> act(static_cast<size_t>(G->order()) * n);
  for (int g = 0; g < G->order(); ++g)
    for (int i = 0; i < n; ++i) act[g * n + i] = coset_of[G->mul(g, reps[i])];
  return FiniteGSet(G, n, act);
}

inline FiniteGSet point_gset(const GroupPtr& G) { return coset_space(G, whole_group(*G)); }
inline FiniteGSet regular_gset(const GroupPtr& G) { return coset_space(G, Subgroup{{0}}); }

inline FiniteGSet disjoint_union(const std::vector<FiniteGSet>& parts) {
  if (parts.empty()) throw InputError("empty disjoint union");
  const GroupPtr& G = parts[0].group();
  int n = 0;
  for (auto& p : parts) n += p.size();
  std::vector<int> act(static_cast<size_t>(G->order()) * n);
  int off = 0;
  for (auto& p : parts) {
    for (int g = 0; g < G->order(); ++g)
      for (int x = 0; x < p.size(); ++x) act[g * n + off + x] = off + p.act(g, x);
    off += p.size();
  }
  return FiniteGSet(G, n, act);
}

/// X x Y with point (x, y) at index x * |Y| + y.
inline FiniteGSet product(const FiniteGSet& X, const FiniteGSet& Y) {
  const GroupPtr& G = X.group();
  int n = X.size() * Y.size();
  std::vector<int> act(static_cast<size_t>(G->order()) * n);
  for (int g = 0; g < G->order(); ++g)
    for (int x = 0; x < X.size(); ++x)
      for (int y = 0; y < Y.size(); ++y) act[g * n + x * Y.size() + y] = X.act(g, x) * Y.size() + Y.act(g, y);
  return FiniteGSet(G, n, act);
}

/// The generating object: one coset space per conjugacy class of subgroups.
inline FiniteGSet all_cosets(const GroupPtr& G) {
  std::vector<FiniteGSet> parts;
  for (const auto& H : subgroup_class_reps(*G)) parts.push_back(coset_space(G, H));
  return disjoint_union(parts);
}

}  // namespace kq
