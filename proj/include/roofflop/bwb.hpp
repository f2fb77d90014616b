#pragma once
//
// Borel-Weil-Bott on partial flag varieties G/P.
//
// An irreducible homogeneous bundle on G/P is labelled by a G-weight that is
// dominant for the Levi nodes; its fiber is the Levi irreducible with that
// highest weight. Line bundles are the weights supported off the Levi, and the
// ample generators are the fundamental weights of the non-Levi nodes.
//

#include <map>
#include <optional>
#include <memory>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "roofflop/graded.hpp"
#include "roofflop/rootsys.hpp"

namespace roofflop {

/// G/P for the parabolic P whose Levi contains the simple nodes `levi_nodes`.
/// `picard_nodes` fixes the order of line-bundle coordinates: O(a,b) is
/// a*omega_{picard_nodes[0]} + b*omega_{picard_nodes[1]}.
class HomogeneousSpace {
 public:
  HomogeneousSpace(std::string name, RootSystem rs, NodeSet levi_nodes, NodeSet picard_nodes = {})
      : name_(std::move(name)), rs_(std::move(rs)), levi_(std::move(levi_nodes)), picard_(std::move(picard_nodes)) {
    std::sort(levi_.begin(), levi_.end());
    for (int n : levi_) {
      if (n < 1 || n > rs_.rank()) throw CatalogError(name_ + ": Levi node out of range");
    }
    if (picard_.empty()) {
      for (int n : rs_.all_nodes()) {
        if (!in_levi(n)) picard_.push_back(n);
      }
    }
    for (int n : picard_) {
      if (in_levi(n)) throw CatalogError(name_ + ": Picard node lies in the Levi");
    }
    if (picard_.size() + levi_.size() != static_cast<std::size_t>(rs_.rank()))
      throw CatalogError(name_ + ": Picard nodes must be exactly the nodes outside the Levi");
    dimension_ = static_cast<int>(rs_.positive_roots().size() - rs_.positive_roots_in(levi_).size());
  }

  const std::string& name() const { return name_; }
  const RootSystem& root_system() const { return rs_; }
  const NodeSet& levi_nodes() const { return levi_; }
  const NodeSet& picard_nodes() const { return picard_; }
  int dimension() const { return dimension_; }
  int picard_rank() const { return static_cast<int>(picard_.size()); }

  bool in_levi(int node) const { return std::find(levi_.begin(), levi_.end(), node) != levi_.end(); }

  /// The line bundle O(twist) as a weight.
  Weight line(const std::vector<int>& twist) const {
    if (twist.size() != picard_.size())
      throw CatalogError(name_ + ": line bundle needs " + std::to_string(picard_.size()) + " twist coordinates");
    Weight w = Weight::zero(rs_.rank());
    for (std::size_t i = 0; i < twist.size(); ++i) w[static_cast<std::size_t>(picard_[i] - 1)] = twist[i];
    return w;
  }

  /// Twist coordinates of a weight supported off the Levi; throws otherwise.
  std::vector<int> line_coords(const Weight& w) const {
    for (int n : levi_) {
      if (w[static_cast<std::size_t>(n - 1)] != 0) throw CatalogError(name_ + ": weight " + to_string(w) + " is not a line bundle");
    }
    std::vector<int> c;
    for (int n : picard_) c.push_back(w[static_cast<std::size_t>(n - 1)]);
    return c;
  }

  bool is_line(const Weight& w) const {
    return std::all_of(levi_.begin(), levi_.end(), [&](int n) { return w[static_cast<std::size_t>(n - 1)] == 0; });
  }

  /// Canonical bundle: minus the sum of the positive roots outside the Levi.
  Weight canonical() const {
    Weight w = Weight::zero(rs_.rank());
    const auto inside = rs_.positive_roots_in(levi_);
    for (std::size_t r = 0; r < rs_.positive_roots().size(); ++r) {
      if (std::find(inside.begin(), inside.end(), r) == inside.end()) w -= rs_.positive_roots()[r];
    }
    return w;
  }

 private:
  std::string name_;
  RootSystem rs_;
  NodeSet levi_;
  NodeSet picard_;
  int dimension_ = 0;
};

using SpacePtr = std::shared_ptr<const HomogeneousSpace>;

/// Irreducible homogeneous bundle on a HomogeneousSpace.
struct IrrBundle {
  SpacePtr space;
  Weight levi_weight;

  IrrBundle() = default;
  IrrBundle(SpacePtr s, Weight w) : space(std::move(s)), levi_weight(std::move(w)) {
    require_weight(space->root_system(), levi_weight);
    if (!is_dominant(levi_weight, space->levi_nodes()))
      throw RootSystemError("weight " + to_string(levi_weight) + " is not dominant for the Levi of " + space->name());
  }

  long long rank() const { return weyl_dim(space->root_system(), levi_weight, space->levi_nodes()); }
  bool is_line() const { return space->is_line(levi_weight); }

  friend bool operator==(const IrrBundle& a, const IrrBundle& b) {
    return a.space->name() == b.space->name() && a.levi_weight == b.levi_weight;
  }
};

inline std::string to_string(const IrrBundle& b) { return "E" + to_string(b.levi_weight) + "@" + b.space->name(); }

inline IrrBundle dual(const IrrBundle& b) {
  return IrrBundle(b.space, dual_highest_weight(b.space->root_system(), b.levi_weight, b.space->levi_nodes()));
}

inline IrrBundle twist(const IrrBundle& b, const Weight& line) {
  if (!b.space->is_line(line)) throw CatalogError("twist by a non-line weight " + to_string(line));
  return IrrBundle(b.space, b.levi_weight + line);
}

/// Levi-level tensor product: irreducible summands with multiplicity.
inline std::map<Weight, int> tensor(const IrrBundle& a, const IrrBundle& b) {
  if (a.space->name() != b.space->name()) throw CatalogError("tensor: bundles live on different spaces");
  return tensor_decompose(a.space->root_system(), a.levi_weight, b.levi_weight, a.space->levi_nodes());
}

/// Cohomology of an irreducible bundle by Bott's algorithm: degree -> (G-irreducible
/// highest weight -> multiplicity). Empty when lambda + rho is singular.
inline std::map<int, std::map<Weight, int>> bott_cohomology(const IrrBundle& bundle) {
  const RootSystem& rs = bundle.space->root_system();
  const auto dc = dominant_conjugate(rs, bundle.levi_weight + rs.rho());
  if (dc.singular) return {};
  return {{dc.w_length, {{dc.dominant - rs.rho(), 1}}}};
}

/// Relative Bott along G/P_small -> G/P_big: the pushforward of the P_small-irreducible
/// with highest weight nu is one P_big-irreducible (weight, degree), or zero.
inline std::optional<std::pair<Weight, int>> relative_bott(const RootSystem& rs, const Weight& nu, const NodeSet& big_levi) {
  const auto dc = dominant_conjugate(rs, nu + rs.rho(), big_levi);
  if (dc.singular) return std::nullopt;
  return std::make_pair(dc.dominant - rs.rho(), dc.w_length);
}

/// Graded dimension of H^*(G/P, E).
inline GradedDim cohomology_dims(const IrrBundle& bundle) {
  GradedDim::Dims d;
  for (const auto& [deg, reps] : bott_cohomology(bundle)) {
    for (const auto& [w, m] : reps) d[deg] += m * weyl_dim(bundle.space->root_system(), w);
  }
  return GradedDim::exact(d);
}

/// RHom(a, b) = H^*(a^vee (x) b) for irreducible bundles on the same space. Always exact:
/// a tensor product of irreducible P-modules is completely reducible.
inline GradedDim rhom_irr(const IrrBundle& a, const IrrBundle& b) {
  if (a.space->name() != b.space->name()) throw CatalogError("rhom_irr: bundles live on different spaces");
  GradedDim total;
  for (const auto& [w, m] : tensor(dual(a), b)) total = total + cohomology_dims(IrrBundle(a.space, w)).scaled(m);
  return total;
}

/// Restriction of an irreducible P_big-module (levi weight on `from`) to the smaller
/// parabolic of `to` (same root system, Levi of `to` inside Levi of `from`).
/// Returns the associated graded pieces ordered from the deepest subbundle to the
/// top quotient; each piece lists its irreducible summands.
inline std::vector<std::vector<Weight>> pullback_filtration(const HomogeneousSpace& from, const HomogeneousSpace& to,
                                                            const Weight& lambda) {
  const RootSystem& rs = from.root_system();
  for (int n : to.levi_nodes()) {
    if (!from.in_levi(n)) throw CatalogError("pullback: Levi of " + to.name() + " is not inside Levi of " + from.name());
  }
  NodeSet extra;
  for (int n : from.levi_nodes()) {
    if (!to.in_levi(n)) extra.push_back(n);
  }
  // level = total coefficient of the extra simple roots in lambda - mu
  std::map<int, std::map<Weight, int>> by_level;
  for (const auto& [mu, m] : freudenthal_multiplicities(rs, lambda, from.levi_nodes())) {
    const auto c = rs.simple_root_coords(lambda - mu, from.levi_nodes());
    Rational lev = 0;
    for (std::size_t i = 0; i < from.levi_nodes().size(); ++i) {
      if (std::find(extra.begin(), extra.end(), from.levi_nodes()[i]) != extra.end()) lev += c[i];
    }
    if (lev.denominator() != 1) throw RootSystemError("pullback: fractional level");
    by_level[static_cast<int>(lev.numerator())][mu] += m;
  }
  std::vector<std::vector<Weight>> pieces;
  for (auto it = by_level.rbegin(); it != by_level.rend(); ++it) {
    auto remaining = it->second;
    std::vector<Weight> piece;
    while (!remaining.empty()) {
      // a weight of maximal height is a highest weight of some constituent
      auto best = remaining.begin();
      Rational best_h = rs.inner(best->first, rs.rho());
      for (auto jt = remaining.begin(); jt != remaining.end(); ++jt) {
        const Rational h = rs.inner(jt->first, rs.rho());
        if (h > best_h) {
          best = jt;
          best_h = h;
        }
      }
      const Weight top = best->first;
      const int copies = best->second;
      if (!is_dominant(top, to.levi_nodes())) throw RootSystemError("pullback: peeled weight is not dominant");
      for (const auto& [nu, k] : freudenthal_multiplicities(rs, top, to.levi_nodes())) {
        auto f = remaining.find(nu);
        if (f == remaining.end() || f->second < k * copies) throw RootSystemError("pullback: character does not split");
        f->second -= k * copies;
        if (f->second == 0) remaining.erase(f);
      }
      for (int i = 0; i < copies; ++i) piece.push_back(top);
    }
    std::sort(piece.begin(), piece.end());
    pieces.push_back(std::move(piece));
  }
  return pieces;
}

}  // namespace roofflop
