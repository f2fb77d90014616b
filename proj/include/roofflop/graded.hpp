#pragma once

#include <algorithm>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

#include "roofflop/error.hpp"

namespace roofflop {

/// Dimensions of a graded vector space indexed by cohomological degree, with
/// degreewise lower/upper bounds. Exact values have lower == upper.
class GradedDim {
 public:
  using Dims = std::map<int, long long>;

  GradedDim() = default;

  static GradedDim exact(Dims d) {
    prune(d);
    GradedDim g;
    g.lower_ = d;
    g.upper_ = std::move(d);
    return g;
  }
  static GradedDim in_degree(int degree, long long dim) { return exact({{degree, dim}}); }
  static GradedDim interval(Dims lower, Dims upper) {
    prune(lower);
    prune(upper);
    for (const auto& [d, v] : lower) {
      auto it = upper.find(d);
      if (it == upper.end() || it->second < v) throw Error("GradedDim: lower bound exceeds upper bound");
    }
    GradedDim g;
    g.lower_ = std::move(lower);
    g.upper_ = std::move(upper);
    return g;
  }

  bool is_exact() const { return lower_ == upper_; }
  /// Zero in every degree (only true when the upper bound vanishes).
  bool is_zero() const { return upper_.empty(); }
  /// Exactly C in degree 0.
  bool is_point() const { return is_exact() && upper_ == Dims{{0, 1}}; }

  const Dims& lower() const { return lower_; }
  const Dims& upper() const { return upper_; }
  /// Exact dimensions; throws for interval values.
  const Dims& dims() const {
    if (!is_exact()) throw Error("GradedDim: value is not exact");
    return upper_;
  }
  long long lower_at(int d) const { return get(lower_, d); }
  long long upper_at(int d) const { return get(upper_, d); }

  long long euler() const {
    long long chi = 0;
    for (const auto& [d, v] : dims()) chi += (d % 2 == 0 ? v : -v);
    return chi;
  }

  /// The complex shifted by s: degree i of the result is degree i+s of this.
  GradedDim shifted(int s) const {
    GradedDim g;
    for (const auto& [d, v] : lower_) g.lower_[d - s] = v;
    for (const auto& [d, v] : upper_) g.upper_[d - s] = v;
    return g;
  }

  /// Degree reflection i -> n - i (Serre duality bookkeeping).
  GradedDim reflected(int n) const {
    GradedDim g;
    for (const auto& [d, v] : lower_) g.lower_[n - d] = v;
    for (const auto& [d, v] : upper_) g.upper_[n - d] = v;
    return g;
  }

  GradedDim scaled(long long k) const {
    GradedDim g;
    for (const auto& [d, v] : lower_) g.lower_[d] = v * k;
    for (const auto& [d, v] : upper_) g.upper_[d] = v * k;
    prune(g.lower_);
    prune(g.upper_);
    return g;
  }

  friend GradedDim operator+(const GradedDim& a, const GradedDim& b) {
    GradedDim g = a;
    for (const auto& [d, v] : b.lower_) g.lower_[d] += v;
    for (const auto& [d, v] : b.upper_) g.upper_[d] += v;
    return g;
  }

  /// Middle term of a distinguished triangle X -> Y -> Z -> X[1] from the outer
  /// terms. dim Y^i = X^i + Z^i - rk(Z^{i-1} -> X^i) - rk(Z^i -> X^{i+1}); the
  /// connecting ranks are unknown, so they are bounded by the smaller side. The
  /// result is exact precisely when every connecting map is forced to vanish.
  friend GradedDim middle(const GradedDim& x, const GradedDim& z) {
    std::set<int> degrees;
    for (const auto* m : {&x.upper_, &z.upper_}) {
      for (const auto& [d, v] : *m) {
        degrees.insert(d);
        degrees.insert(d + 1);
        degrees.insert(d - 1);
      }
    }
    Dims lo;
    Dims hi;
    for (int i : degrees) {
      const long long up = x.upper_at(i) + z.upper_at(i);
      const long long cut = std::min(z.upper_at(i - 1), x.upper_at(i)) + std::min(z.upper_at(i), x.upper_at(i + 1));
      hi[i] = up;
      lo[i] = std::max(0LL, x.lower_at(i) + z.lower_at(i) - cut);
    }
    return interval(lo, hi);
  }

  /// Common refinement of two bounds on the same complex.
  friend GradedDim intersect(const GradedDim& x, const GradedDim& y) {
    std::set<int> degrees;
    for (const auto* m : {&x.upper_, &y.upper_, &x.lower_, &y.lower_}) {
      for (const auto& [d, v] : *m) degrees.insert(d);
    }
    Dims lo;
    Dims hi;
    for (int i : degrees) {
      lo[i] = std::max(x.lower_at(i), y.lower_at(i));
      hi[i] = std::min(x.upper_at(i), y.upper_at(i));
      if (lo[i] > hi[i]) throw std::logic_error("intersect: disjoint bounds in degree " + std::to_string(i));
    }
    return interval(lo, hi);
  }

  bool operator==(const GradedDim&) const = default;

  std::string to_string() const {
    if (is_zero()) return "0 in all degrees";
    std::ostringstream os;
    bool first = true;
    std::set<int> degrees;
    for (const auto& [d, v] : upper_) degrees.insert(d);
    for (int d : degrees) {
      if (!first) os << ", ";
      first = false;
      const long long lo = lower_at(d);
      const long long hi = upper_at(d);
      if (lo == hi) {
        os << (hi == 1 ? std::string("C") : "C^" + std::to_string(hi));
      } else {
        os << "C^[" << lo << ".." << hi << "]";
      }
      os << " in degree " << d;
    }
    if (!is_exact()) os << " (undetermined)";
    return os.str();
  }

 private:
  static long long get(const Dims& m, int d) {
    auto it = m.find(d);
    return it == m.end() ? 0 : it->second;
  }
  static void prune(Dims& d) {
    for (auto it = d.begin(); it != d.end();) {
      if (it->second < 0) throw Error("GradedDim: negative dimension");
      it = it->second == 0 ? d.erase(it) : std::next(it);
    }
  }

  Dims lower_;
  Dims upper_;
};

inline std::ostream& operator<<(std::ostream& os, const GradedDim& g) { return os << g.to_string(); }

}  // namespace roofflop
