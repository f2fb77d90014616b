#pragma once
//
// Graded RHom between compound bundle expressions.
//
// An expression expands to a tree of triangles whose leaves are shifted irreducible
// bundles. RHom is assembled through the long exact sequences of those triangles;
// connecting maps are never guessed, so undetermined degrees come back as intervals.
//

#include <functional>
#include <map>
#include <mutex>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "roofflop/spaces.hpp"

namespace roofflop {

/// Triangle tree. Middle(kids[0], kids[1]) is the middle term of kids[0] -> X -> kids[1].
struct Filt {
  enum class Kind { Leaf, Middle, Sum, Pull };
  Kind kind = Kind::Leaf;
  Weight weight;  // Leaf: Levi weight on the host homogeneous space; Pull: Levi weight on src
  int shift = 0;  // Leaf, Pull
  Weight twist;   // Pull: line twist on the host
  SpacePtr src;   // Pull: space the irreducible is pulled back from
  bool nonsplit = false;  // Middle: connecting morphism known to be nonzero
  std::vector<Filt> kids;

  static Filt leaf(Weight w, int s = 0) {
    Filt f;
    f.weight = std::move(w);
    f.shift = s;
    return f;
  }
  static Filt middle(Filt sub, Filt quot) {
    Filt f;
    f.kind = Kind::Middle;
    f.kids = {std::move(sub), std::move(quot)};
    return f;
  }
  static Filt pull(SpacePtr from, Weight w) {
    Filt f;
    f.kind = Kind::Pull;
    f.twist = Weight::zero(from->root_system().rank());
    f.weight = std::move(w);
    f.src = std::move(from);
    return f;
  }
  static Filt sum(std::vector<Filt> parts) {
    if (parts.size() == 1) return std::move(parts.front());
    Filt f;
    f.kind = Kind::Sum;
    f.kids = std::move(parts);
    return f;
  }
};

/// An object of D(space): expression plus shift.
struct SheafObject {
  std::string space;
  Expr expr;
  int shift = 0;
};

/// Where the objects are pushed before taking Homs.
struct AmbientContext {
  enum class Mode { Plain, Blowup, Hyperplane };
  Mode mode = Mode::Plain;
  std::vector<int> line;  // conormal (Blowup) or normal (Hyperplane) class
  int discrepancy = 0;    // k with Serre functor  - (x) O(kD)[n]
  int ambient_dim = 0;

  static AmbientContext plain() { return {}; }
  static AmbientContext blowup(std::vector<int> conormal, int k, int dim) {
    return {Mode::Blowup, std::move(conormal), k, dim};
  }
  static AmbientContext hyperplane(std::vector<int> normal, int k, int dim) {
    return {Mode::Hyperplane, std::move(normal), k, dim};
  }
  bool operator==(const AmbientContext&) const = default;
};

inline std::string to_string(const AmbientContext& c) {
  const auto pair = [](const std::vector<int>& v) { return detail::ints(v); };
  switch (c.mode) {
    case AmbientContext::Mode::Plain:
      return "plain";
    case AmbientContext::Mode::Blowup:
      return "blowup conormal=" + pair(c.line) + " discrepancy=" + std::to_string(c.discrepancy) + " dim=" + std::to_string(c.ambient_dim);
    case AmbientContext::Mode::Hyperplane:
      return "hyperplane normal=" + pair(c.line) + " discrepancy=" + std::to_string(c.discrepancy) + " dim=" + std::to_string(c.ambient_dim);
  }
  return {};
}

// ---------------------------------------------------------------------------
// filtration trees

inline Filt filt_dual(const HomogeneousSpace& h, const Filt& f) {
  switch (f.kind) {
    case Filt::Kind::Leaf:
      return Filt::leaf(dual_highest_weight(h.root_system(), f.weight, h.levi_nodes()), -f.shift);
    case Filt::Kind::Pull: {
      Filt g = f;
      g.weight = dual_highest_weight(h.root_system(), f.weight, f.src->levi_nodes());
      g.twist = Weight::zero(h.root_system().rank()) - f.twist;
      g.shift = -f.shift;
      return g;
    }
    case Filt::Kind::Middle: {
      Filt g = Filt::middle(filt_dual(h, f.kids[1]), filt_dual(h, f.kids[0]));
      g.nonsplit = f.nonsplit;
      return g;
    }
    case Filt::Kind::Sum: {
      std::vector<Filt> parts;
      for (const auto& k : f.kids) parts.push_back(filt_dual(h, k));
      return Filt::sum(std::move(parts));
    }
  }
  return f;
}

inline Filt filt_map(const Filt& f, const Weight& twist, int shift) {
  if (f.kind == Filt::Kind::Leaf) return Filt::leaf(f.weight + twist, f.shift + shift);
  Filt g = f;
  if (f.kind == Filt::Kind::Pull) {
    g.twist = f.twist + twist;
    g.shift = f.shift + shift;
    return g;
  }
  for (auto& k : g.kids) k = filt_map(k, twist, shift);
  return g;
}

/// Leaves in filtration order (sub first) with their layer index.
struct Layer {
  IrrBundle bundle;
  int shift = 0;
  int layer = 0;
};

namespace detail {

inline Filt layers_to_filt(const std::vector<std::vector<Weight>>& pieces) {
  std::optional<Filt> acc;
  for (const auto& piece : pieces) {
    std::vector<Filt> parts;
    for (const auto& w : piece) parts.push_back(Filt::leaf(w));
    Filt p = Filt::sum(std::move(parts));
    acc = acc ? Filt::middle(std::move(*acc), std::move(p)) : std::move(p);
  }
  return *acc;
}

/// s with a = b[s] as trees, if any.
inline std::optional<int> same_up_to_shift(const Filt& a, const Filt& b) {
  if (a.kind != b.kind) return std::nullopt;
  switch (a.kind) {
    case Filt::Kind::Leaf:
      if (!(a.weight == b.weight)) return std::nullopt;
      return a.shift - b.shift;
    case Filt::Kind::Pull:
      if (!(a.weight == b.weight) || !(a.twist == b.twist) || a.src->name() != b.src->name()) return std::nullopt;
      return a.shift - b.shift;
    default:
      break;
  }
  if (a.nonsplit != b.nonsplit || a.kids.size() != b.kids.size()) return std::nullopt;
  std::optional<int> s;
  for (std::size_t i = 0; i < a.kids.size(); ++i) {
    const auto k = same_up_to_shift(a.kids[i], b.kids[i]);
    if (!k || (s && *s != *k)) return std::nullopt;
    s = k;
  }
  return s;
}

/// middle(x, z) when the connecting map z^d -> x^(d+1) is known to be nonzero and z = C in degree d.
inline std::optional<GradedDim> cancel_one(const GradedDim& x, const GradedDim& z, int d) {
  if (!x.is_exact() || !z.is_exact() || z.dims() != GradedDim::Dims{{d, 1}}) return std::nullopt;
  GradedDim::Dims out = x.dims();
  auto it = out.find(d + 1);
  if (it == out.end() || it->second < 1) return std::nullopt;
  if (--it->second == 0) out.erase(it);
  return GradedDim::exact(out);
}

/// A Pull node written out as its filtration on `h`.
inline Filt unfold(const HomogeneousSpace& h, const Filt& f) {
  return filt_map(layers_to_filt(pullback_filtration(*f.src, h, f.weight)), f.twist, f.shift);
}

inline void collect_layers(const SpacePtr& h, const Filt& f, std::vector<Layer>& out, int& layer) {
  switch (f.kind) {
    case Filt::Kind::Leaf:
      out.push_back({IrrBundle(h, f.weight), f.shift, layer++});
      break;
    case Filt::Kind::Pull:
      collect_layers(h, unfold(*h, f), out, layer);
      break;
    case Filt::Kind::Middle:
      collect_layers(h, f.kids[0], out, layer);
      collect_layers(h, f.kids[1], out, layer);
      break;
    case Filt::Kind::Sum: {
      const int start = layer;
      int top = layer;
      for (const auto& k : f.kids) {
        int l = start;
        collect_layers(h, k, out, l);
        top = std::max(top, l);
      }
      layer = top;
      break;
    }
  }
}

}  // namespace detail

/// Expansion of expressions on catalog spaces.
class SheafCalculus {
 public:
  explicit SheafCalculus(const Catalog& cat) : cat_(cat) {}

  const Catalog& catalog() const { return cat_; }

  Expr parse(const std::string& space, const std::string& text) const {
    return normalize(parse_expr(text), static_cast<std::size_t>(cat_.space(space).picard_rank()));
  }

  /// Triangle tree of an expression on `space` (leaves live on the host homogeneous space).
  Filt expand_tree(const std::string& space, const Expr& e, int depth = 0) const {
    using K = Expr::Kind;
    if (depth > 32) throw CatalogError("symbol definitions nest too deeply on " + space);
    const SpaceEntry& s = cat_.space(space);
    const HomogeneousSpace& h = *s.homogeneous;
    switch (e.kind) {
      case K::Atom: {
        if (e.symbol == "O") {
          const std::size_t r = static_cast<std::size_t>(h.picard_rank());
          return Filt::leaf(h.line(detail::padded(e.args, r)));
        }
        if (!e.args.empty()) throw CatalogError("symbol " + e.symbol + " takes no arguments");
        auto it = s.dictionary.find(e.symbol);
        if (it == s.dictionary.end()) throw CatalogError("symbol " + e.symbol + " is not defined on " + space);
        const SymbolDef& d = it->second;
        Filt f;
        switch (d.kind) {
          case SymbolDef::Kind::Irr: {
            Weight w(d.weight);
            require_weight(h.root_system(), w);
            f = Filt::leaf(w);
            break;
          }
          case SymbolDef::Kind::Pullback: {
            const SpaceEntry& src = cat_.space(d.from);
            Weight w(d.weight);
            require_weight(h.root_system(), w);
            pullback_filtration(*src.homogeneous, h, w);  // validates the Levi inclusion
            f = Filt::pull(src.homogeneous, w);
            break;
          }
          case SymbolDef::Kind::Triangle:
            f = Filt::middle(expand_tree(space, parse(space, d.sub), depth + 1), expand_tree(space, parse(space, d.quot), depth + 1));
            f.nonsplit = d.nonsplit;
            break;
        }
        return d.dual ? filt_dual(h, f) : f;
      }
      case K::Dual:
        return filt_dual(h, expand_tree(space, e.kids[0], depth));
      case K::Twist: {
        const std::size_t r = static_cast<std::size_t>(h.picard_rank());
        return filt_map(expand_tree(space, e.kids[0], depth), h.line(detail::padded(e.args, r)), 0);
      }
      case K::Shift:
        return filt_map(expand_tree(space, e.kids[0], depth), Weight::zero(h.root_system().rank()), e.args[0]);
      case K::Sum: {
        std::vector<Filt> parts;
        for (const auto& k : e.kids) parts.push_back(expand_tree(space, k, depth));
        return Filt::sum(std::move(parts));
      }
    }
    return {};
  }

  Filt expand_tree(const SheafObject& o) const {
    Filt f = expand_tree(o.space, o.expr);
    if (o.shift != 0) f = filt_map(f, Weight::zero(cat_.space(o.space).homogeneous->root_system().rank()), o.shift);
    return f;
  }

  /// Filtration into irreducible pieces (bundle, shift, layer), sub first.
  std::vector<Layer> expand(const SheafObject& o) const {
    std::vector<Layer> out;
    int layer = 0;
    detail::collect_layers(cat_.space(o.space).homogeneous, expand_tree(o), out, layer);
    return out;
  }

  long long rank(const SheafObject& o) const {
    long long r = 0;
    for (const auto& l : expand(o)) r += (l.shift % 2 == 0 ? 1 : -1) * l.bundle.rank();
    return r;
  }

  /// First Chern class as twist coordinates (alternating over shifts).
  std::vector<int> det(const SheafObject& o) const {
    const SpaceEntry& s = cat_.space(o.space);
    const HomogeneousSpace& h = *s.homogeneous;
    Weight total = Weight::zero(h.root_system().rank());
    for (const auto& l : expand(o)) {
      const int sign = l.shift % 2 == 0 ? 1 : -1;
      for (const auto& [mu, m] : freudenthal_multiplicities(h.root_system(), l.bundle.levi_weight, h.levi_nodes()))
        total += (sign * m) * mu;
    }
    return h.line_coords(total);
  }

  // -------------------------------------------------------------------------
  // RHom

  /// RHom on the space itself (Koszul through the host for divisors).
  GradedDim rhom_space(const std::string& space, const Filt& a, const Filt& b) const {
    const SpaceEntry& s = cat_.space(space);
    if (s.kind == SpaceEntry::Kind::Homogeneous) return rhom_tree(s.homogeneous, a, b);
    // 0 -> O(-D) -> O -> O_R -> 0 gives RHom_H(A,B) -> RHom_R(A,B) -> RHom_H(A,B(-D))[1]
    const HomogeneousSpace& h = *s.homogeneous;
    std::vector<int> neg = s.divisor_class;
    for (auto& x : neg) x = -x;
    const GradedDim x = rhom_tree(s.homogeneous, a, b);
    const GradedDim z = rhom_tree(s.homogeneous, a, filt_map(b, h.line(neg), 0)).shifted(1);
    return middle(x, z);
  }

  /// RHom between objects of one space under an ambient context.
  GradedDim rhom(const SheafObject& a, const SheafObject& b, const AmbientContext& ctx) const {
    if (a.space != b.space) throw CatalogError("rhom: objects live on " + a.space + " and " + b.space);
    const Filt fa = expand_tree(a);
    const Filt fb = expand_tree(b);
    const GradedDim g = rhom_filt(a.space, fa, fb, ctx);
    if (g.is_exact()) return g;
    // Serre duality on the (proper) support: RHom^i(A,B) = RHom^(n-i)(B, A (x) w)^*
    const HomogeneousSpace& h = *cat_.space(a.space).homogeneous;
    const auto [w, n] = serre_data(a.space, ctx);
    return intersect(g, rhom_filt(a.space, fb, filt_map(fa, h.line(w), 0), ctx).reflected(n));
  }

  /// Canonical twist and dimension of the space the Homs are taken on.
  std::pair<std::vector<int>, int> serre_data(const std::string& space, const AmbientContext& ctx) const {
    const SpaceEntry& s = cat_.space(space);
    std::vector<int> w = s.canonical;
    switch (ctx.mode) {
      case AmbientContext::Mode::Plain:
        return {w, s.dimension()};
      case AmbientContext::Mode::Blowup:
        // S_X(j_*A) = j_*(A (x) O(kE)|_E)[n] with O(E)|_E the conormal dual
        for (std::size_t i = 0; i < w.size(); ++i) w[i] = -ctx.discrepancy * ctx.line[i];
        return {w, ctx.ambient_dim};
      case AmbientContext::Mode::Hyperplane:
        for (std::size_t i = 0; i < w.size(); ++i) w[i] += ctx.line[i];
        return {w, ctx.ambient_dim};
    }
    return {w, s.dimension()};
  }

  /// RHom of expanded objects under an ambient context, without the Serre cross-check.
  GradedDim rhom_filt(const std::string& space, const Filt& fa, const Filt& fb, const AmbientContext& ctx) const {
    const SpaceEntry& s = cat_.space(space);
    const HomogeneousSpace& h = *s.homogeneous;
    const GradedDim base = rhom_space(space, fa, fb);
    if (ctx.mode == AmbientContext::Mode::Plain) return base;
    if (ctx.line.size() != static_cast<std::size_t>(h.picard_rank()))
      throw CatalogError("ambient context line class does not match " + space);
    if (ctx.mode == AmbientContext::Mode::Blowup) {
      // RHom_E(A,B) -> RHom_X(j_*A, j_*B) -> RHom_E(A(c)[1], B)
      const GradedDim z = rhom_space(space, filt_map(fa, h.line(ctx.line), 0), fb).shifted(-1);
      return middle(base, z);
    }
    // RHom_E(A,B(-n)) -> RHom_E(A,B) -> RHom_M(A|_M, B|_M)
    std::vector<int> neg = ctx.line;
    for (auto& x : neg) x = -x;
    const GradedDim x = rhom_space(space, fa, filt_map(fb, h.line(neg), 0)).shifted(1);
    return middle(base, x);
  }

  GradedDim rhom(const std::string& space, const std::string& a, const std::string& b, const AmbientContext& ctx) const {
    return rhom(SheafObject{space, parse(space, a), 0}, SheafObject{space, parse(space, b), 0}, ctx);
  }

  // -------------------------------------------------------------------------
  // fibration route

  /// H^*(E_D4, O(x,y)) computed by pushing forward along p- to S_minus: the (pj) identity
  /// gives p_*O(x,0) = Sym^x(U-(h-)) for x >= 0, the fibers kill -3 <= x <= -1, and
  /// relative duality handles x <= -4.
  GradedDim line_cohomology_via_pminus(int x, int y) const {
    const FibrationEntry& fib = cat_.fibration("p-");
    const SpaceEntry& base = cat_.space(fib.base);
    const SpaceEntry& total = cat_.space(fib.total);
    const HomogeneousSpace& b = *base.homogeneous;
    const RootSystem& rs = b.root_system();
    // U-(h-) = p_*O(1,1) (x) O(-h-)
    std::string pj;
    for (const auto& [line, expr] : fib.pushforward) {
      if (line == std::vector<int>{1, 1}) pj = expr;
    }
    if (pj.empty()) throw CatalogError("fibration p- lacks the O(1,1) pushforward rule");
    const Filt u = filt_map(expand_tree(fib.base, parse(fib.base, pj)), b.line({-1}), 0);
    if (u.kind != Filt::Kind::Leaf) throw CatalogError("p-: pushforward of O(1,1) is not irreducible");
    const auto direct = [&](int xx, int yy) {
      return Filt::leaf(xx * u.weight + b.line({yy}));
    };
    const int n = fib.fiber_dim;
    if (x >= 0) return rhom_tree(base.homogeneous, Filt::leaf(Weight::zero(rs.rank())), direct(x, y));
    if (x >= -n) return GradedDim{};
    // omega_rel = omega_E - p^* omega_S, in (h+, h-) coordinates
    const std::vector<int> rel{total.canonical[0] - 0, total.canonical[1] - base.canonical[0]};
    const Filt pushed = direct(-x + rel[0], -y + rel[1]);
    // R p_* O(x,y) = (p_* O(-x,-y) (x) omega_rel)^v [-n]
    const Filt dualized = filt_dual(b, pushed);
    return rhom_tree(base.homogeneous, Filt::leaf(Weight::zero(rs.rank())), dualized).shifted(-n);
  }

 private:
  const Catalog& cat_;

  // RHom(A, B) over triangle trees; the left factor is expanded first, pulled-back
  // irreducibles are kept whole and pushed forward.
  static GradedDim rhom_tree(const SpacePtr& h, const Filt& a, const Filt& b) {
    if (b.kind == Filt::Kind::Middle && b.nonsplit) {
      // A = B2[s]: id in RHom^s(A, B2) hits the class of the triangle
      if (const auto s = detail::same_up_to_shift(a, b.kids[1])) {
        if (auto c = detail::cancel_one(rhom_tree(h, a, b.kids[0]), rhom_tree(h, a, b.kids[1]), *s)) return *c;
      }
    }
    switch (a.kind) {
      case Filt::Kind::Sum: {
        GradedDim g;
        for (const auto& k : a.kids) g = g + rhom_tree(h, k, b);
        return g;
      }
      case Filt::Kind::Middle: {
        // A1 -> A -> A2 gives RHom(A2,B) -> RHom(A,B) -> RHom(A1,B)
        const GradedDim x = rhom_tree(h, a.kids[1], b);
        const GradedDim z = rhom_tree(h, a.kids[0], b);
        if (a.nonsplit) {
          // B = A1[s]: id in RHom^(-s)(A1, B) hits the class of the triangle
          if (const auto s = detail::same_up_to_shift(b, a.kids[0])) {
            if (auto c = detail::cancel_one(x, z, -*s)) return *c;
          }
        }
        return middle(x, z);
      }
      default:
        break;
    }
    switch (b.kind) {
      case Filt::Kind::Sum: {
        GradedDim g;
        for (const auto& k : b.kids) g = g + rhom_tree(h, a, k);
        return g;
      }
      case Filt::Kind::Middle: {
        return middle(rhom_tree(h, a, b.kids[0]), rhom_tree(h, a, b.kids[1]));
      }
      default:
        break;
    }
    if (a.kind == Filt::Kind::Pull || b.kind == Filt::Kind::Pull) {
      if (a.kind == Filt::Kind::Pull && b.kind == Filt::Kind::Pull && a.src->name() != b.src->name())
        return rhom_tree(h, detail::unfold(*h, a), b);
      return rhom_pushed(h, a, b);
    }
    return rhom_irr(IrrBundle(h, a.weight), IrrBundle(h, b.weight)).shifted(b.shift - a.shift);
  }

  // Projection formula: RHom(p^*E (x) L1, F) = H^*(base, E^vee (x) Rp_*(L1^vee (x) F)), with
  // Rp_* given by relative Bott.
  static GradedDim rhom_pushed(const SpacePtr& h, const Filt& a, const Filt& b) {
    const RootSystem& rs = h->root_system();
    const SpacePtr& base = a.kind == Filt::Kind::Pull ? a.src : b.src;
    Weight nu = Weight::zero(rs.rank());
    if (a.kind == Filt::Kind::Pull) {
      nu -= a.twist;
    } else {
      nu += dual_highest_weight(rs, a.weight, h->levi_nodes());
    }
    nu += b.kind == Filt::Kind::Pull ? b.twist : b.weight;
    const auto pushed = relative_bott(rs, nu, base->levi_nodes());
    if (!pushed) return GradedDim{};
    const IrrBundle down(base, pushed->first);
    GradedDim g;
    if (a.kind == Filt::Kind::Pull && b.kind == Filt::Kind::Pull) {
      const Weight ad = dual_highest_weight(rs, a.weight, base->levi_nodes());
      for (const auto& [w, m] : tensor_decompose(rs, ad, b.weight, base->levi_nodes()))
        g = g + rhom_irr(IrrBundle(base, dual_highest_weight(rs, w, base->levi_nodes())), down).scaled(m);
    } else if (a.kind == Filt::Kind::Pull) {
      g = rhom_irr(IrrBundle(base, a.weight), down);
    } else {
      g = rhom_irr(IrrBundle(base, dual_highest_weight(rs, b.weight, base->levi_nodes())), down);
    }
    return g.shifted(b.shift - a.shift - pushed->second);
  }
};

// ---------------------------------------------------------------------------
// registered sequences and lemma reports

struct SequenceCheck {
  std::string name;
  long long rank_left = 0, rank_middle = 0, rank_right = 0;
  std::vector<int> det_left, det_middle, det_right;
  bool rank_ok = false;
  bool det_ok = false;
};

inline SequenceCheck check_sequence(const SheafCalculus& sc, const ExactSequenceRule& r) {
  SequenceCheck c;
  c.name = r.name;
  const auto obj = [&](const std::string& t) { return SheafObject{r.space, sc.parse(r.space, t), 0}; };
  c.rank_left = sc.rank(obj(r.left));
  c.rank_middle = sc.rank(obj(r.middle));
  c.rank_right = sc.rank(obj(r.right));
  c.det_left = sc.det(obj(r.left));
  c.det_middle = sc.det(obj(r.middle));
  c.det_right = sc.det(obj(r.right));
  c.rank_ok = c.rank_middle == c.rank_left + c.rank_right;
  std::vector<int> s = c.det_left;
  for (std::size_t i = 0; i < s.size(); ++i) s[i] += c.det_right[i];
  c.det_ok = s == c.det_middle;
  return c;
}

struct LemmaItem {
  std::string label;        // "1", "2", ...
  std::string statement;    // human readable
  std::vector<std::pair<std::string, GradedDim>> values;
  bool pass = false;
};

struct LemmaReport {
  std::string lemma;
  std::vector<LemmaItem> items;
  bool pass() const {
    return std::all_of(items.begin(), items.end(), [](const LemmaItem& i) { return i.pass; });
  }
};

inline AmbientContext d4_blowup() { return AmbientContext::blowup({1, 1}, 3, 10); }
inline AmbientContext g2_blowup() { return AmbientContext::blowup({1, 1}, 2, 8); }

namespace detail {

inline std::string hom_text(const std::string& a, const std::string& b) { return "RHom(" + a + ", " + b + ")"; }

inline LemmaItem vanishing_item(const SheafCalculus& sc, const std::string& space, const AmbientContext& ctx, std::string label,
                                const std::vector<std::pair<std::string, std::string>>& pairs, bool expect_point) {
  LemmaItem it;
  it.label = std::move(label);
  it.pass = true;
  for (const auto& [a, b] : pairs) {
    const GradedDim g = sc.rhom(space, a, b, ctx);
    it.values.emplace_back(hom_text(a, b), g);
    it.pass = it.pass && g.is_exact() && (expect_point ? g.is_point() : g.is_zero());
  }
  it.statement = it.values.size() == 1 ? it.values.front().first : hom_text(pairs.front().first, pairs.front().second) + " ...";
  it.statement += expect_point ? " = C[0]" : " = 0";
  return it;
}

// L_M T = T' justified by RHom(M, T) = C[0] and the registered triangle M -> T -> T'
inline LemmaItem rewrite_item(const SheafCalculus& sc, const std::string& space, const AmbientContext& ctx, std::string label,
                              const std::string& mutator, const std::string& target, const std::string& result,
                              const std::string& rule_name) {
  LemmaItem it;
  it.label = std::move(label);
  it.statement = "L_{" + mutator + "} " + target + " = " + result + " via " + rule_name;
  const GradedDim g = sc.rhom(space, mutator, target, ctx);
  it.values.emplace_back(hom_text(mutator, target), g);
  const ExactSequenceRule& r = sc.catalog().sequence(rule_name);
  const std::size_t pr = static_cast<std::size_t>(sc.catalog().space(space).picard_rank());
  const Expr m = sc.parse(space, mutator);
  const Expr l = normalize(parse_expr(r.left), pr);
  std::vector<int> t = expr_twist(m, pr);
  const std::vector<int> lt = expr_twist(l, pr);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] -= lt[i];
  const auto tw = [&](const std::string& s) { return print_expr(normalize(Expr::twist(parse_expr(s), t), pr)); };
  const bool matches = tw(r.left) == print_expr(m) && tw(r.middle) == print_expr(sc.parse(space, target)) &&
                       tw(r.right) == print_expr(sc.parse(space, result));
  it.pass = g.is_exact() && g.is_point() && matches;
  return it;
}

}  // namespace detail

/// Lemma on the D4 resolution: items (1)-(6) on E = OGr(3,8) inside the blowup.
inline LemmaReport verify_lemma_van(const SheafCalculus& sc) {
  const AmbientContext ctx = d4_blowup();
  LemmaReport r{"van", {}};
  r.items.push_back(detail::vanishing_item(sc, "E_D4", ctx, "1",
                                           {{"O(1,-1)", "O(0,0)"}, {"O(2,-1)", "O(0,0)"}, {"O(3,-1)", "O(0,0)"}, {"O(4,-1)", "O(0,0)"}},
                                           false));
  r.items.push_back(detail::vanishing_item(sc, "E_D4", ctx, "2", {{"O(3,-2)", "O(0,0)"}}, false));
  r.items.push_back(detail::vanishing_item(sc, "E_D4", ctx, "3", {{"O(0,0)", "U+^v(-2,1)"}}, false));
  r.items.push_back(detail::vanishing_item(sc, "E_D4", ctx, "4", {{"O(0,0)", "U+(-2,1)"}}, false));
  r.items.push_back(detail::vanishing_item(sc, "E_D4", ctx, "5", {{"O(0,0)", "U+^v(-1,1)"}}, true));
  r.items.push_back(detail::rewrite_item(sc, "E_D4", ctx, "6", "O(1,-1)", "U+^v", "V^v", "releuler+"));
  return r;
}

/// Lemma on the G2 common resolution, computed on R inside OFl(1,3,7).
inline LemmaReport verify_lemma_van2(const SheafCalculus& sc) {
  const AmbientContext ctx = g2_blowup();
  LemmaReport r{"van2", {}};
  r.items.push_back(
      detail::vanishing_item(sc, "R", ctx, "1", {{"O(1,-1)", "O(0,0)"}, {"O(2,-1)", "O(0,0)"}, {"O(3,-1)", "O(0,0)"}}, false));
  r.items.push_back(detail::rewrite_item(sc, "R", ctx, "2", "O(1,-1)", "S", "EE", "seqfund1"));
  return r;
}

}  // namespace roofflop
