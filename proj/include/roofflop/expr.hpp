#pragma once
//
// Bundle expressions: a small tree language shared by the CLI, scripts and the API.
//
//   expr    := term ('+' term)*
//   term    := primary postfix*
//   primary := atom | '(' expr ')'
//   atom    := 'O' ['(' ints ')'] | 'U+' | 'U-' | 'V' | 'S' | "S'" | 'S+' | 'S-' | 'G' | "G'" | 'EE'
//   postfix := '^v' | '(' ints ')' | '[' int ']'
//
// A '+' or '-' right after U or S belongs to the symbol unless what follows starts
// a new operand, so "U+ + V" and "U+V" both read as U plus V only in the first case.
//

#include <cctype>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "roofflop/error.hpp"

namespace roofflop {

struct Expr {
  enum class Kind { Atom, Dual, Twist, Shift, Sum };

  Kind kind = Kind::Atom;
  std::string symbol;       // Atom
  std::vector<int> args;    // Atom O: twist (may be empty); Twist: twist; Shift: {n}
  std::vector<Expr> kids;   // Dual/Twist/Shift: one child; Sum: two or more

  static Expr atom(std::string s, std::vector<int> a = {}) {
    Expr e;
    e.symbol = std::move(s);
    e.args = std::move(a);
    return e;
  }
  static Expr line(std::vector<int> a) { return atom("O", std::move(a)); }
  static Expr dual(Expr c) { return unary(Kind::Dual, std::move(c), {}); }
  static Expr twist(Expr c, std::vector<int> t) { return unary(Kind::Twist, std::move(c), std::move(t)); }
  static Expr shift(Expr c, int n) { return unary(Kind::Shift, std::move(c), {n}); }
  static Expr sum(std::vector<Expr> parts) {
    Expr e;
    e.kind = Kind::Sum;
    e.kids = std::move(parts);
    return e;
  }

  bool operator==(const Expr&) const = default;

 private:
  static Expr unary(Kind k, Expr c, std::vector<int> a) {
    Expr e;
    e.kind = k;
    e.args = std::move(a);
    e.kids.push_back(std::move(c));
    return e;
  }
};

inline const std::vector<std::string>& expr_symbols() {
  static const std::vector<std::string> s{"O", "U+", "U-", "V", "S", "S'", "S+", "S-", "G", "G'", "EE"};
  return s;
}

namespace detail {

inline std::string ints(const std::vector<int>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(v[i]);
  }
  return s + ")";
}

class ExprParser {
 public:
  explicit ExprParser(std::string_view text) : t_(text) {}

  Expr parse() {
    skip();
    if (at_end()) fail("empty expression");
    Expr e = parse_sum();
    skip();
    if (!at_end()) fail(std::string("unexpected '") + t_[p_] + "'");
    return e;
  }

 private:
  std::string_view t_;
  std::size_t p_ = 0;

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, p_); }
  bool at_end() const { return p_ >= t_.size(); }
  void skip() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(t_[p_]))) ++p_;
  }
  char peek() {
    skip();
    return at_end() ? '\0' : t_[p_];
  }
  // next non-space character at or after position q
  std::size_t next_solid(std::size_t q) const {
    while (q < t_.size() && std::isspace(static_cast<unsigned char>(t_[q]))) ++q;
    return q;
  }

  Expr parse_sum() {
    std::vector<Expr> parts;
    parts.push_back(parse_term());
    while (peek() == '+') {
      ++p_;
      parts.push_back(parse_term());
    }
    if (parts.size() == 1) return std::move(parts.front());
    return Expr::sum(std::move(parts));
  }

  Expr parse_term() {
    Expr e = parse_primary();
    for (;;) {
      const char c = peek();
      if (c == '^') {
        ++p_;
        if (at_end() || t_[p_] != 'v') fail("expected 'v' after '^'");
        ++p_;
        e = Expr::dual(std::move(e));
      } else if (c == '(') {
        e = Expr::twist(std::move(e), parse_ints());
      } else if (c == '[') {
        ++p_;
        const int n = parse_int();
        if (peek() != ']') fail("expected ']'");
        ++p_;
        e = Expr::shift(std::move(e), n);
      } else {
        return e;
      }
    }
  }

  Expr parse_primary() {
    const char c = peek();
    if (c == '(') {
      ++p_;
      Expr e = parse_sum();
      if (peek() != ')') fail("expected ')'");
      ++p_;
      return e;
    }
    if (at_end()) fail("expected a bundle symbol");
    const std::size_t start = p_;
    if (c == 'O') {
      ++p_;
      if (peek() == '(') return Expr::line(parse_ints());
      return Expr::line({});
    }
    if (c == 'E' && p_ + 1 < t_.size() && t_[p_ + 1] == 'E') {
      p_ += 2;
      return Expr::atom("EE");
    }
    if (c == 'V') {
      ++p_;
      return Expr::atom("V");
    }
    if (c == 'U' || c == 'S' || c == 'G') {
      ++p_;
      std::string sym(1, c);
      if (!at_end() && t_[p_] == '\'' && c != 'U') {
        ++p_;
        return Expr::atom(sym + "'");
      }
      const std::size_t q = next_solid(p_);
      if (q < t_.size() && (t_[q] == '+' || t_[q] == '-') && c != 'G' && sign_binds(q)) {
        sym += t_[q];
        p_ = q + 1;
        return Expr::atom(sym);
      }
      if (c == 'U') {
        p_ = start;
        fail("expected U+ or U-");
      }
      return Expr::atom(sym);
    }
    fail(std::string("unknown symbol starting with '") + c + "'");
  }

  // The sign at q is part of the symbol unless a new operand starts after it.
  bool sign_binds(std::size_t q) const {
    const std::size_t r = next_solid(q + 1);
    if (r >= t_.size()) return true;
    const char n = t_[r];
    if (std::isalpha(static_cast<unsigned char>(n))) return false;
    if (n == '(') {
      const std::size_t s = next_solid(r + 1);
      return s < t_.size() && !std::isalpha(static_cast<unsigned char>(t_[s])) && t_[s] != '(';
    }
    return true;
  }

  std::vector<int> parse_ints() {
    if (peek() != '(') fail("expected '('");
    ++p_;
    std::vector<int> v{parse_int()};
    while (peek() == ',') {
      ++p_;
      v.push_back(parse_int());
    }
    if (peek() != ')') fail("expected ')' or ','");
    ++p_;
    if (v.size() > 2) fail("at most two twist coordinates");
    return v;
  }

  int parse_int() {
    skip();
    const std::size_t start = p_;
    bool neg = false;
    if (!at_end() && (t_[p_] == '-' || t_[p_] == '+')) {
      neg = t_[p_] == '-';
      ++p_;
    }
    if (at_end() || !std::isdigit(static_cast<unsigned char>(t_[p_]))) fail("expected an integer");
    long long v = 0;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(t_[p_]))) {
      v = v * 10 + (t_[p_] - '0');
      if (v > 1000000) {
        p_ = start;
        fail("integer out of range");
      }
      ++p_;
    }
    return static_cast<int>(neg ? -v : v);
  }
};

}  // namespace detail

/// Parse a bundle expression; throws ParseError carrying the byte offset.
inline Expr parse_expr(std::string_view text) { return detail::ExprParser(text).parse(); }

/// Canonical text form. parse_expr(print_expr(e)) == e.
inline std::string print_expr(const Expr& e) {
  using K = Expr::Kind;
  const auto operand = [](const Expr& c) {
    const std::string s = print_expr(c);
    // a bare O followed by a twist would read back as a single atom
    if (c.kind == K::Sum || (c.kind == K::Atom && c.symbol == "O" && c.args.empty())) return "(" + s + ")";
    return s;
  };
  switch (e.kind) {
    case K::Atom:
      return e.args.empty() ? e.symbol : e.symbol + detail::ints(e.args);
    case K::Dual:
      return (e.kids[0].kind == K::Sum ? "(" + print_expr(e.kids[0]) + ")" : print_expr(e.kids[0])) + "^v";
    case K::Twist:
      return operand(e.kids[0]) + detail::ints(e.args);
    case K::Shift:
      return (e.kids[0].kind == K::Sum ? "(" + print_expr(e.kids[0]) + ")" : print_expr(e.kids[0])) + "[" +
             std::to_string(e.args[0]) + "]";
    case K::Sum: {
      std::string s;
      for (std::size_t i = 0; i < e.kids.size(); ++i) {
        if (i) s += " + ";
        s += e.kids[i].kind == K::Sum ? "(" + print_expr(e.kids[i]) + ")" : print_expr(e.kids[i]);
      }
      return s;
    }
  }
  return {};
}

namespace detail {

inline std::vector<int> padded(std::vector<int> v, std::size_t n) {
  if (v.size() > n) throw CatalogError("twist " + ints(v) + " has too many coordinates");
  if (v.size() < n) {
    if (!v.empty()) throw CatalogError("twist " + ints(v) + " needs " + std::to_string(n) + " coordinates");
    v.assign(n, 0);
  }
  return v;
}

inline std::vector<int> add(std::vector<int> a, const std::vector<int>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

inline bool all_zero(const std::vector<int>& v) {
  return std::all_of(v.begin(), v.end(), [](int x) { return x == 0; });
}

// twist and shift pushed down to the atoms; `tw` and `sh` are pending
inline Expr normalize_rec(const Expr& e, std::size_t rank, std::vector<int> tw, int sh) {
  using K = Expr::Kind;
  Expr out;
  switch (e.kind) {
    case K::Atom:
      if (e.symbol == "O") {
        out = Expr::line(add(padded(e.args, rank), tw));
      } else {
        if (!e.args.empty()) throw CatalogError("symbol " + e.symbol + " takes no arguments");
        out = all_zero(tw) ? Expr::atom(e.symbol) : Expr::twist(Expr::atom(e.symbol), tw);
      }
      break;
    case K::Dual: {
      // (X(t))^v = X^v(-t): normalize the child without pending twist first
      Expr inner = normalize_rec(e.kids[0], rank, std::vector<int>(rank, 0), 0);
      if (inner.kind == K::Shift) {
        sh -= inner.args[0];
        inner = inner.kids[0];
      }
      if (inner.kind == K::Sum) {
        std::vector<Expr> parts;
        for (const auto& k : inner.kids) parts.push_back(normalize_rec(Expr::dual(k), rank, tw, 0));
        out = Expr::sum(std::move(parts));
      } else if (inner.kind == K::Atom && inner.symbol == "O") {
        std::vector<int> neg = inner.args;
        for (auto& x : neg) x = -x;
        out = Expr::line(add(neg, tw));
      } else {
        std::vector<int> base(rank, 0);
        Expr core = inner;
        if (core.kind == K::Twist) {
          base = core.args;
          core = core.kids[0];
        }
        for (auto& x : base) x = -x;
        base = add(base, tw);
        // core is an atom or a dualized atom
        Expr d = core.kind == K::Dual ? core.kids[0] : Expr::dual(core);
        out = all_zero(base) ? d : Expr::twist(d, base);
      }
      break;
    }
    case K::Twist:
      return normalize_rec(e.kids[0], rank, add(padded(e.args, rank), tw), sh);
    case K::Shift:
      return normalize_rec(e.kids[0], rank, tw, sh + e.args[0]);
    case K::Sum: {
      std::vector<Expr> parts;
      for (const auto& k : e.kids) {
        Expr n = normalize_rec(k, rank, tw, 0);
        if (n.kind == K::Sum) {
          for (auto& x : n.kids) parts.push_back(std::move(x));
        } else {
          parts.push_back(std::move(n));
        }
      }
      out = Expr::sum(std::move(parts));
      break;
    }
  }
  return sh == 0 ? out : Expr::shift(std::move(out), sh);
}

}  // namespace detail

/// Normal form on a space with `picard_rank` twist coordinates: twists collected on
/// atoms, O always carries full coordinates, duals sit directly on atoms, one outer shift.
inline Expr normalize(const Expr& e, std::size_t picard_rank) {
  return detail::normalize_rec(e, picard_rank, std::vector<int>(picard_rank, 0), 0);
}

/// Total twist of a normalized non-sum expression (zero for untwisted symbols).
inline std::vector<int> expr_twist(const Expr& e, std::size_t picard_rank) {
  const Expr* c = &e;
  if (c->kind == Expr::Kind::Shift) c = &c->kids[0];
  if (c->kind == Expr::Kind::Atom && c->symbol == "O") return c->args;
  if (c->kind == Expr::Kind::Twist) return c->args;
  return std::vector<int>(picard_rank, 0);
}

/// Symbol of a normalized non-sum expression with its twist and shift removed ("O", "U+^v", ...).
inline std::string expr_core(const Expr& e) {
  const Expr* c = &e;
  if (c->kind == Expr::Kind::Shift) c = &c->kids[0];
  if (c->kind == Expr::Kind::Twist) c = &c->kids[0];
  if (c->kind == Expr::Kind::Atom) return c->symbol;
  if (c->kind == Expr::Kind::Dual && c->kids[0].kind == Expr::Kind::Atom) return c->kids[0].symbol + "^v";
  return print_expr(*c);
}

}  // namespace roofflop
