#pragma once
//
// Root systems of types A, B, C, D, G2 (Bourbaki numbering), integral weights in
// the fundamental-weight basis, and the representation-theoretic routines that
// Borel-Weil-Bott needs: Weyl dimension, dotted dominant conjugation,
// Freudenthal multiplicities and Racah-Speiser (Klimyk) tensor decomposition.
//
// Every routine optionally takes a set of simple nodes. With the full node set it
// works for G itself; with a proper subset it works for the Levi subgroup
// generated by those nodes. Weights always stay in the ambient G weight lattice,
// so the central character of a Levi weight is carried exactly by the
// coordinates outside the node set.
//

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/rational.hpp>

#include "roofflop/error.hpp"

namespace roofflop {

using Rational = boost::rational<long long>;

enum class CartanType { A, B, C, D, G2 };

inline std::string to_string(CartanType t) {
  switch (t) {
    case CartanType::A: return "A";
    case CartanType::B: return "B";
    case CartanType::C: return "C";
    case CartanType::D: return "D";
    case CartanType::G2: return "G2";
  }
  return "?";
}

inline CartanType cartan_type_from_string(const std::string& s) {
  if (s == "A") return CartanType::A;
  if (s == "B") return CartanType::B;
  if (s == "C") return CartanType::C;
  if (s == "D") return CartanType::D;
  if (s == "G2" || s == "G") return CartanType::G2;
  throw RootSystemError("unknown Cartan type '" + s + "'");
}

/// Integral weight in the fundamental-weight basis: coords[i] is the coefficient of
/// omega_{i+1}.
struct Weight {
  std::vector<int> coords;

  Weight() = default;
  explicit Weight(std::vector<int> c) : coords(std::move(c)) {}
  Weight(std::initializer_list<int> c) : coords(c) {}

  static Weight zero(int rank) { return Weight(std::vector<int>(static_cast<std::size_t>(rank), 0)); }

  std::size_t size() const { return coords.size(); }
  int operator[](std::size_t i) const { return coords[i]; }
  int& operator[](std::size_t i) { return coords[i]; }

  Weight& operator+=(const Weight& o) {
    for (std::size_t i = 0; i < coords.size(); ++i) coords[i] += o.coords[i];
    return *this;
  }
  Weight& operator-=(const Weight& o) {
    for (std::size_t i = 0; i < coords.size(); ++i) coords[i] -= o.coords[i];
    return *this;
  }
  friend Weight operator+(Weight a, const Weight& b) { return a += b; }
  friend Weight operator-(Weight a, const Weight& b) { return a -= b; }
  friend Weight operator-(Weight a) {
    for (auto& c : a.coords) c = -c;
    return a;
  }
  friend Weight operator*(int k, Weight a) {
    for (auto& c : a.coords) c *= k;
    return a;
  }
  bool is_zero() const {
    return std::all_of(coords.begin(), coords.end(), [](int c) { return c == 0; });
  }

  auto operator<=>(const Weight&) const = default;
  bool operator==(const Weight&) const = default;
};

inline std::string to_string(const Weight& w) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < w.size(); ++i) os << (i ? "," : "") << w[i];
  os << ')';
  return os.str();
}

inline std::ostream& operator<<(std::ostream& os, const Weight& w) { return os << to_string(w); }

/// Weyl group element as a word in simple reflections (1-based node numbers),
/// applied right to left.
struct WeylElement {
  std::vector<int> word;
  int length() const { return static_cast<int>(word.size()); }
};

/// Result of moving a weight into the dominant chamber.
struct DominantConjugate {
  bool singular = false;
  int w_length = 0;
  Weight dominant;
  WeylElement element;
};

/// Set of simple nodes (1-based, Bourbaki) selecting a Levi subsystem.
using NodeSet = std::vector<int>;

namespace detail {

using Matrix = std::vector<std::vector<Rational>>;

inline Matrix invert(Matrix a) {
  const std::size_t n = a.size();
  Matrix inv(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a[piv][col].numerator() == 0) ++piv;
    if (piv == n) throw RootSystemError("singular Cartan matrix");
    std::swap(a[piv], a[col]);
    std::swap(inv[piv], inv[col]);
    const Rational p = a[col][col];
    for (std::size_t j = 0; j < n; ++j) {
      a[col][j] /= p;
      inv[col][j] /= p;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col].numerator() == 0) continue;
      const Rational f = a[r][col];
      for (std::size_t j = 0; j < n; ++j) {
        a[r][j] -= f * a[col][j];
        inv[r][j] -= f * inv[col][j];
      }
    }
  }
  return inv;
}

inline long long floor_div(const Rational& r) {
  long long q = r.numerator() / r.denominator();
  if (r.numerator() % r.denominator() != 0 && r.numerator() < 0) --q;
  return q;
}

struct CacheKey {
  NodeSet nodes;
  Weight a;
  Weight b;
  auto operator<=>(const CacheKey&) const = default;
};

struct Caches {
  std::mutex mu;
  std::map<CacheKey, long long> dims;
  std::map<CacheKey, std::map<Weight, int>> mults;
  std::map<CacheKey, std::map<Weight, int>> tensors;
};

}  // namespace detail

/// A finite root system with its Cartan matrix, positive roots and rho.
///
/// Convention: cartan()[i][j] = <alpha_{i+1}, alpha_{j+1}^vee>, so row i is the simple
/// root alpha_{i+1} written in the fundamental-weight basis.
class RootSystem {
 public:
  RootSystem() = default;

  CartanType cartan_type() const { return type_; }
  int rank() const { return rank_; }
  const std::vector<std::vector<int>>& cartan_matrix() const { return cartan_; }
  /// Positive roots in the fundamental-weight basis.
  const std::vector<Weight>& positive_roots() const { return roots_fund_; }
  /// Positive roots in the simple-root basis.
  const std::vector<std::vector<int>>& positive_roots_simple() const { return roots_simple_; }
  const Weight& rho() const { return rho_; }
  std::string name() const { return to_string(type_) + (type_ == CartanType::G2 ? "" : std::to_string(rank_)); }

  Weight simple_root(int node) const { return Weight(cartan_.at(static_cast<std::size_t>(node - 1))); }
  Weight fundamental_weight(int node) const {
    Weight w = Weight::zero(rank_);
    w[static_cast<std::size_t>(node - 1)] = 1;
    return w;
  }
  NodeSet all_nodes() const {
    NodeSet n(static_cast<std::size_t>(rank_));
    std::iota(n.begin(), n.end(), 1);
    return n;
  }

  /// <lambda, beta^vee> for the positive root with index `root`.
  long long coroot_pairing(const Weight& lambda, std::size_t root) const {
    long long num = 0;
    for (std::size_t j = 0; j < lambda.size(); ++j) num += static_cast<long long>(lambda[j]) * root_coef_[root][j];
    const long long den = root_norm2_[root];
    if ((2 * num) % den != 0) throw RootSystemError("weight is not integral");
    return 2 * num / den;
  }

  /// Invariant inner product (lambda, mu), normalized by the squared lengths used
  /// in build_root_system.
  Rational inner(const Weight& a, const Weight& b) const {
    Rational s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] == 0) continue;
      for (std::size_t j = 0; j < b.size(); ++j) {
        if (b[j] != 0) s += Rational(a[i]) * Rational(b[j]) * form_[i][j];
      }
    }
    return s;
  }

  /// Indices of the positive roots whose support lies inside `nodes`.
  std::vector<std::size_t> positive_roots_in(const NodeSet& nodes) const {
    std::vector<bool> in(static_cast<std::size_t>(rank_), false);
    for (int n : nodes) in.at(static_cast<std::size_t>(n - 1)) = true;
    std::vector<std::size_t> out;
    for (std::size_t r = 0; r < roots_simple_.size(); ++r) {
      bool ok = true;
      for (std::size_t j = 0; j < roots_simple_[r].size(); ++j) {
        if (roots_simple_[r][j] != 0 && !in[j]) ok = false;
      }
      if (ok) out.push_back(r);
    }
    return out;
  }

  /// lambda restricted to `nodes`, expressed in the simple roots of that subsystem.
  std::vector<Rational> simple_root_coords(const Weight& lambda, const NodeSet& nodes) const {
    const std::size_t k = nodes.size();
    detail::Matrix at(k, std::vector<Rational>(k));
    for (std::size_t r = 0; r < k; ++r) {
      for (std::size_t c = 0; c < k; ++c) {
        // transpose of the sub-Cartan matrix
        at[r][c] = cartan_[static_cast<std::size_t>(nodes[c] - 1)][static_cast<std::size_t>(nodes[r] - 1)];
      }
    }
    const auto inv = detail::invert(at);
    std::vector<Rational> c(k, Rational(0));
    for (std::size_t r = 0; r < k; ++r) {
      for (std::size_t j = 0; j < k; ++j) c[r] += inv[r][j] * lambda[static_cast<std::size_t>(nodes[j] - 1)];
    }
    return c;
  }

  detail::Caches& caches() const { return *caches_; }

  friend RootSystem build_root_system(CartanType type, int rank);

 private:
  CartanType type_ = CartanType::A;
  int rank_ = 0;
  std::vector<std::vector<int>> cartan_;
  std::vector<int> sq_;  // (alpha_i, alpha_i)
  std::vector<Weight> roots_fund_;
  std::vector<std::vector<int>> roots_simple_;
  std::vector<std::vector<long long>> root_coef_;  // 2 (omega_j, beta) = root_coef_[.][j]
  std::vector<long long> root_norm2_;             // 2 (beta, beta)
  detail::Matrix form_;                            // (omega_i, omega_j)
  Weight rho_;
  std::shared_ptr<detail::Caches> caches_ = std::make_shared<detail::Caches>();
};

/// Builds the root system of the given type and rank. G2 requires rank 2, D
/// requires rank >= 3 (D3 = A3), B and C require rank >= 2, A requires rank >= 1.
inline RootSystem build_root_system(CartanType type, int rank) {
  const auto bad = [&] {
    throw RootSystemError("invalid rank " + std::to_string(rank) + " for type " + to_string(type));
  };
  switch (type) {
    case CartanType::A: if (rank < 1) bad(); break;
    case CartanType::B:
    case CartanType::C: if (rank < 2) bad(); break;
    case CartanType::D: if (rank < 3) bad(); break;
    case CartanType::G2: if (rank != 2) bad(); break;
  }
  RootSystem rs;
  rs.type_ = type;
  rs.rank_ = rank;
  const auto n = static_cast<std::size_t>(rank);
  auto& a = rs.cartan_;
  a.assign(n, std::vector<int>(n, 0));
  rs.sq_.assign(n, 2);
  for (std::size_t i = 0; i < n; ++i) a[i][i] = 2;
  const auto link = [&](std::size_t i, std::size_t j) { a[i][j] = a[j][i] = -1; };
  switch (type) {
    case CartanType::A:
      for (std::size_t i = 0; i + 1 < n; ++i) link(i, i + 1);
      break;
    case CartanType::B:
      for (std::size_t i = 0; i + 2 < n; ++i) link(i, i + 1);
      // alpha_n short
      a[n - 2][n - 1] = -2;
      a[n - 1][n - 2] = -1;
      rs.sq_[n - 1] = 1;
      break;
    case CartanType::C:
      for (std::size_t i = 0; i + 2 < n; ++i) link(i, i + 1);
      // alpha_n long
      a[n - 2][n - 1] = -1;
      a[n - 1][n - 2] = -2;
      for (std::size_t i = 0; i + 1 < n; ++i) rs.sq_[i] = 1;
      break;
    case CartanType::D:
      for (std::size_t i = 0; i + 3 < n; ++i) link(i, i + 1);
      link(n - 3, n - 2);
      link(n - 3, n - 1);
      break;
    case CartanType::G2:
      // alpha_1 short, alpha_2 long
      a[0][1] = -1;
      a[1][0] = -3;
      rs.sq_ = {2, 6};
      break;
  }

  // positive roots by reflection closure of the simple roots
  std::set<std::vector<int>> seen;
  std::vector<std::vector<int>> frontier;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<int> e(n, 0);
    e[i] = 1;
    seen.insert(e);
    frontier.push_back(e);
  }
  const auto to_fund = [&](const std::vector<int>& c) {
    Weight w = Weight::zero(rank);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) w[k] += c[j] * a[j][k];
    return w;
  };
  while (!frontier.empty()) {
    std::vector<std::vector<int>> next;
    for (const auto& c : frontier) {
      const Weight f = to_fund(c);
      for (std::size_t i = 0; i < n; ++i) {
        auto r = c;
        r[i] -= f[i];
        if (std::all_of(r.begin(), r.end(), [](int x) { return x >= 0; }) &&
            std::any_of(r.begin(), r.end(), [](int x) { return x > 0; }) && seen.insert(r).second) {
          next.push_back(r);
        }
      }
    }
    frontier = std::move(next);
  }
  std::vector<std::vector<int>> roots(seen.begin(), seen.end());
  std::stable_sort(roots.begin(), roots.end(), [](const auto& x, const auto& y) {
    return std::accumulate(x.begin(), x.end(), 0) < std::accumulate(y.begin(), y.end(), 0);
  });
  rs.roots_simple_ = roots;
  for (const auto& c : roots) {
    rs.roots_fund_.push_back(to_fund(c));
    std::vector<long long> coef(n);
    for (std::size_t j = 0; j < n; ++j) coef[j] = static_cast<long long>(c[j]) * rs.sq_[j];
    rs.root_coef_.push_back(coef);
    // 2 (beta,beta) = sum_jk c_j c_k a_jk sq_k
    long long nn = 0;
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) nn += static_cast<long long>(c[j]) * c[k] * a[j][k] * rs.sq_[k];
    rs.root_norm2_.push_back(nn);
  }

  // (omega_i, omega_j) = (A^{-1} N)_{ij}, N = diag(sq/2)
  detail::Matrix am(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) am[i][j] = a[i][j];
  const auto inv = detail::invert(am);
  rs.form_.assign(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) rs.form_[i][j] = inv[i][j] * Rational(rs.sq_[j], 2);

  rs.rho_ = Weight(std::vector<int>(n, 1));
  return rs;
}

/// True when lambda pairs nonnegatively with every simple coroot in `nodes`.
inline bool is_dominant(const Weight& lambda, const NodeSet& nodes) {
  return std::all_of(nodes.begin(), nodes.end(), [&](int n) { return lambda[static_cast<std::size_t>(n - 1)] >= 0; });
}

inline bool is_dominant(const RootSystem& rs, const Weight& lambda) { return is_dominant(lambda, rs.all_nodes()); }

inline void require_weight(const RootSystem& rs, const Weight& w) {
  if (static_cast<int>(w.size()) != rs.rank())
    throw RootSystemError("weight " + to_string(w) + " has wrong length for " + rs.name());
}

inline Weight reflect(const RootSystem& rs, const Weight& w, int node) {
  const int p = w[static_cast<std::size_t>(node - 1)];
  return w - p * rs.simple_root(node);
}

/// Moves mu into the dominant chamber of the subsystem `nodes` by simple
/// reflections (plain linear action, no rho shift). Returns Singular when mu lies on
/// a wall, i.e. pairs to zero with some coroot of the subsystem.
inline DominantConjugate dominant_conjugate(const RootSystem& rs, const Weight& mu, const NodeSet& nodes) {
  require_weight(rs, mu);
  DominantConjugate out;
  Weight v = mu;
  for (;;) {
    int pick = 0;
    for (int nd : nodes) {
      if (v[static_cast<std::size_t>(nd - 1)] < 0) {
        pick = nd;
        break;
      }
    }
    if (pick == 0) break;
    v = reflect(rs, v, pick);
    out.element.word.insert(out.element.word.begin(), pick);
  }
  out.w_length = out.element.length();
  out.dominant = v;
  out.singular = std::any_of(nodes.begin(), nodes.end(), [&](int nd) { return v[static_cast<std::size_t>(nd - 1)] == 0; });
  return out;
}

inline DominantConjugate dominant_conjugate(const RootSystem& rs, const Weight& mu) {
  return dominant_conjugate(rs, mu, rs.all_nodes());
}

/// Weyl dimension formula for the irreducible of the subsystem `nodes` with highest
/// weight lambda.
inline long long weyl_dim(const RootSystem& rs, const Weight& lambda, const NodeSet& nodes) {
  require_weight(rs, lambda);
  if (!is_dominant(lambda, nodes)) throw RootSystemError("weyl_dim: weight " + to_string(lambda) + " is not dominant");
  detail::CacheKey key{nodes, lambda, {}};
  {
    std::lock_guard lock(rs.caches().mu);
    if (auto it = rs.caches().dims.find(key); it != rs.caches().dims.end()) return it->second;
  }
  const Weight shifted = lambda + rs.rho();
  __int128 num = 1;
  __int128 den = 1;
  for (std::size_t r : rs.positive_roots_in(nodes)) {
    num *= rs.coroot_pairing(shifted, r);
    den *= rs.coroot_pairing(rs.rho(), r);
    __int128 x = num < 0 ? -num : num;
    __int128 y = den;
    while (y != 0) {
      const __int128 t = x % y;
      x = y;
      y = t;
    }
    if (x > 1) {
      num /= x;
      den /= x;
    }
  }
  if (den != 1) throw RootSystemError("weyl_dim: non-integral result");
  const auto d = static_cast<long long>(num);
  std::lock_guard lock(rs.caches().mu);
  rs.caches().dims.emplace(key, d);
  return d;
}

inline long long weyl_dim(const RootSystem& rs, const Weight& lambda) { return weyl_dim(rs, lambda, rs.all_nodes()); }

/// The Weyl orbit of mu under the reflections in `nodes`.
inline std::set<Weight> weyl_orbit(const RootSystem& rs, const Weight& mu, const NodeSet& nodes) {
  std::set<Weight> orbit{mu};
  std::vector<Weight> stack{mu};
  while (!stack.empty()) {
    const Weight w = stack.back();
    stack.pop_back();
    for (int nd : nodes) {
      Weight r = reflect(rs, w, nd);
      if (orbit.insert(r).second) stack.push_back(std::move(r));
    }
  }
  return orbit;
}

/// Full weight-multiplicity map of the irreducible of the subsystem `nodes` with
/// highest weight lambda (Freudenthal recursion on dominant weights, then Weyl orbits).
inline std::map<Weight, int> freudenthal_multiplicities(const RootSystem& rs, const Weight& lambda, const NodeSet& nodes) {
  require_weight(rs, lambda);
  if (!is_dominant(lambda, nodes))
    throw RootSystemError("freudenthal_multiplicities: weight " + to_string(lambda) + " is not dominant");
  detail::CacheKey key{nodes, lambda, {}};
  {
    std::lock_guard lock(rs.caches().mu);
    if (auto it = rs.caches().mults.find(key); it != rs.caches().mults.end()) return it->second;
  }

  const auto bounds = rs.simple_root_coords(lambda, nodes);
  const auto roots = rs.positive_roots_in(nodes);

  // dominant weights lambda - sum k_i alpha_i below lambda, by depth
  std::vector<std::pair<std::vector<int>, Weight>> dominant;
  std::vector<int> k(nodes.size(), 0);
  std::vector<long long> lim(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) lim[i] = std::max<long long>(0, detail::floor_div(bounds[i]));
  for (;;) {
    Weight mu = lambda;
    for (std::size_t i = 0; i < nodes.size(); ++i) mu -= k[i] * rs.simple_root(nodes[i]);
    if (is_dominant(mu, nodes)) dominant.emplace_back(k, mu);
    std::size_t i = 0;
    while (i < k.size() && k[i] == lim[i]) k[i++] = 0;
    if (i == k.size()) break;
    ++k[i];
  }
  std::stable_sort(dominant.begin(), dominant.end(), [](const auto& x, const auto& y) {
    return std::accumulate(x.first.begin(), x.first.end(), 0) < std::accumulate(y.first.begin(), y.first.end(), 0);
  });

  std::map<Weight, int> dom_mult;
  const auto lookup = [&](const Weight& nu) -> int {
    const auto dc = dominant_conjugate(rs, nu, nodes);
    auto it = dom_mult.find(dc.dominant);
    return it == dom_mult.end() ? 0 : it->second;
  };
  // depth of nu below lambda in the subsystem root basis; nullopt if not below
  const auto below = [&](const Weight& nu) {
    const auto c = rs.simple_root_coords(lambda - nu, nodes);
    return std::all_of(c.begin(), c.end(), [](const Rational& x) { return x.numerator() >= 0; });
  };
  const Weight lr = lambda + rs.rho();
  const Rational top = rs.inner(lr, lr);
  for (const auto& [depth, mu] : dominant) {
    if (mu == lambda) {
      dom_mult[mu] = 1;
      continue;
    }
    Rational sum = 0;
    for (std::size_t r : roots) {
      const Weight& beta = rs.positive_roots()[r];
      Weight nu = mu + beta;
      while (below(nu)) {
        const int m = lookup(nu);
        if (m != 0) sum += Rational(2 * m) * rs.inner(nu, beta);
        nu += beta;
      }
    }
    const Weight mr = mu + rs.rho();
    const Rational denom = top - rs.inner(mr, mr);
    if (denom.numerator() <= 0) throw RootSystemError("freudenthal: nonpositive denominator");
    const Rational m = sum / denom;
    if (m.denominator() != 1) throw RootSystemError("freudenthal: non-integral multiplicity");
    if (m.numerator() != 0) dom_mult[mu] = static_cast<int>(m.numerator());
  }

  std::map<Weight, int> out;
  for (const auto& [mu, m] : dom_mult) {
    for (const auto& w : weyl_orbit(rs, mu, nodes)) out[w] = m;
  }
  std::lock_guard lock(rs.caches().mu);
  rs.caches().mults.emplace(key, out);
  return out;
}

inline std::map<Weight, int> freudenthal_multiplicities(const RootSystem& rs, const Weight& lambda) {
  return freudenthal_multiplicities(rs, lambda, rs.all_nodes());
}

/// Irreducible constituents of V_lambda (x) V_mu for the subsystem `nodes`
/// (Racah-Speiser / Klimyk over the weights of the smaller factor).
inline std::map<Weight, int> tensor_decompose(const RootSystem& rs, const Weight& lambda, const Weight& mu, const NodeSet& nodes) {
  require_weight(rs, lambda);
  require_weight(rs, mu);
  if (!is_dominant(lambda, nodes) || !is_dominant(mu, nodes))
    throw RootSystemError("tensor_decompose: inputs must be dominant");
  const bool swap = weyl_dim(rs, lambda, nodes) > weyl_dim(rs, mu, nodes) ||
                    (weyl_dim(rs, lambda, nodes) == weyl_dim(rs, mu, nodes) && mu < lambda);
  const Weight& small = swap ? mu : lambda;
  const Weight& big = swap ? lambda : mu;
  detail::CacheKey key{nodes, small, big};
  {
    std::lock_guard lock(rs.caches().mu);
    if (auto it = rs.caches().tensors.find(key); it != rs.caches().tensors.end()) return it->second;
  }
  std::map<Weight, long long> acc;
  for (const auto& [nu, m] : freudenthal_multiplicities(rs, small, nodes)) {
    const auto dc = dominant_conjugate(rs, nu + big + rs.rho(), nodes);
    if (dc.singular) continue;
    acc[dc.dominant - rs.rho()] += (dc.w_length % 2 ? -1 : 1) * static_cast<long long>(m);
  }
  std::map<Weight, int> out;
  for (const auto& [w, m] : acc) {
    if (m < 0) throw RootSystemError("tensor_decompose: negative multiplicity");
    if (m > 0) out[w] = static_cast<int>(m);
  }
  std::lock_guard lock(rs.caches().mu);
  rs.caches().tensors.emplace(key, out);
  return out;
}

inline std::map<Weight, int> tensor_decompose(const RootSystem& rs, const Weight& lambda, const Weight& mu) {
  return tensor_decompose(rs, lambda, mu, rs.all_nodes());
}

/// Highest weight of the dual of the subsystem irreducible with highest weight
/// lambda: the dominant conjugate of -lambda.
inline Weight dual_highest_weight(const RootSystem& rs, const Weight& lambda, const NodeSet& nodes) {
  return dominant_conjugate(rs, -lambda, nodes).dominant;
}

/// Orthogonal (epsilon) coordinates for classical types. Type A uses n+1
/// coordinates normalized to last coordinate zero.
inline std::vector<Rational> to_epsilon(const RootSystem& rs, const Weight& w) {
  require_weight(rs, w);
  const auto N = static_cast<std::size_t>(rs.rank());
  switch (rs.cartan_type()) {
    case CartanType::A: {
      std::vector<Rational> e(N + 1, Rational(0));
      for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j <= i; ++j) e[j] += w[i];
      return e;
    }
    case CartanType::B:
    case CartanType::C:
    case CartanType::D: {
      const auto t = rs.cartan_type();
      std::vector<Rational> e(N, Rational(0));
      for (std::size_t i = 0; i < N; ++i) {
        std::vector<Rational> f(N, Rational(0));
        if (t == CartanType::D && i == N - 2) {
          for (std::size_t j = 0; j < N; ++j) f[j] = Rational(j + 1 == N ? -1 : 1, 2);
        } else if ((t == CartanType::D || t == CartanType::B) && i == N - 1) {
          for (std::size_t j = 0; j < N; ++j) f[j] = Rational(1, 2);
        } else {
          for (std::size_t j = 0; j <= i; ++j) f[j] = 1;
        }
        for (std::size_t j = 0; j < N; ++j) e[j] += f[j] * w[i];
      }
      return e;
    }
    case CartanType::G2: break;
  }
  throw RootSystemError("epsilon coordinates not available for " + rs.name());
}

inline Weight from_epsilon(const RootSystem& rs, const std::vector<Rational>& e) {
  const auto N = static_cast<std::size_t>(rs.rank());
  Weight w = Weight::zero(rs.rank());
  std::vector<Rational> f(N);
  switch (rs.cartan_type()) {
    case CartanType::A:
      if (e.size() != N + 1) throw RootSystemError("from_epsilon: wrong length");
      for (std::size_t i = 0; i < N; ++i) f[i] = e[i] - e[i + 1];
      break;
    case CartanType::B:
    case CartanType::C:
    case CartanType::D:
      if (e.size() != N) throw RootSystemError("from_epsilon: wrong length");
      for (std::size_t i = 0; i + 1 < N; ++i) f[i] = e[i] - e[i + 1];
      if (rs.cartan_type() == CartanType::B) f[N - 1] = 2 * e[N - 1];
      if (rs.cartan_type() == CartanType::C) f[N - 1] = e[N - 1];
      if (rs.cartan_type() == CartanType::D) f[N - 1] = e[N - 2] + e[N - 1];
      break;
    case CartanType::G2:
      throw RootSystemError("epsilon coordinates not available for G2");
  }
  for (std::size_t i = 0; i < N; ++i) {
    if (f[i].denominator() != 1) throw RootSystemError("from_epsilon: not an integral weight");
    w[i] = static_cast<int>(f[i].numerator());
  }
  return w;
}

}  // namespace roofflop
