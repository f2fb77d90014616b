#pragma once
//
// Semiorthogonal decompositions of chessboard type and the mutation steps that
// rearrange them. Every conditional step records the Hom computations it relied on.
//

#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "roofflop/sheafcalc.hpp"

namespace roofflop {

struct Block {
  enum class Kind { Explicit, Unknown };
  Kind kind = Kind::Explicit;
  std::vector<Expr> objects;         // Explicit, normalized
  std::string label;                 // Unknown
  std::vector<std::string> pending;  // Unknown: mutation functors applied so far

  static Block unknown(std::string label) {
    Block b;
    b.kind = Kind::Unknown;
    b.label = std::move(label);
    return b;
  }
  static Block explicit_block(std::vector<Expr> objs) {
    Block b;
    b.objects = std::move(objs);
    return b;
  }
  bool is_unknown() const { return kind == Kind::Unknown; }
  bool operator==(const Block&) const = default;
};

struct SOD {
  std::string space;
  AmbientContext ctx;
  std::string embed;  // pullback functor feeding the unknown block, e.g. "pi+"
  std::vector<Block> blocks;

  int serre_twist() const { return ctx.discrepancy; }
  int ambient_dim() const { return ctx.ambient_dim; }
  std::size_t object_count() const {
    std::size_t n = 0;
    for (const auto& b : blocks) n += b.objects.size();
    return n;
  }
  bool operator==(const SOD&) const = default;
};

/// A Hom computation a step depended on.
struct Fact {
  std::string kind;  // "vanishing", "hypothesis", "exceptional"
  std::string a;
  std::string b;
  std::string expected;  // "0" or "C[0]"
  GradedDim value;
  bool ok = false;

  std::string to_string() const { return "RHom(" + a + ", " + b + ") = " + value.to_string(); }
};

struct MutationStep {
  enum class Kind { SerreRL, SerreLR, Exchange, Left, Right, SwapObjects, Rewrite, Regroup };
  Kind kind = Kind::SerreRL;
  std::vector<int> args;
  std::string rule;  // Rewrite

  bool operator==(const MutationStep&) const = default;
};

inline std::string step_name(MutationStep::Kind k) {
  switch (k) {
    case MutationStep::Kind::SerreRL:
      return "serre-rl";
    case MutationStep::Kind::SerreLR:
      return "serre-lr";
    case MutationStep::Kind::Exchange:
      return "exchange";
    case MutationStep::Kind::Left:
      return "left";
    case MutationStep::Kind::Right:
      return "right";
    case MutationStep::Kind::SwapObjects:
      return "swap-objects";
    case MutationStep::Kind::Rewrite:
      return "rewrite";
    case MutationStep::Kind::Regroup:
      return "regroup";
  }
  return {};
}

inline std::string to_string(const MutationStep& s) {
  std::string out = step_name(s.kind);
  for (int a : s.args) out += " " + std::to_string(a);
  if (!s.rule.empty()) out += " " + s.rule;
  return out;
}

/// Parse "kind args..." (the text after `step` in a script).
inline MutationStep parse_step(const std::string& text) {
  std::istringstream in(text);
  std::string kind;
  in >> kind;
  static const std::map<std::string, MutationStep::Kind> kinds{
      {"serre-rl", MutationStep::Kind::SerreRL}, {"serre-lr", MutationStep::Kind::SerreLR},
      {"exchange", MutationStep::Kind::Exchange}, {"left", MutationStep::Kind::Left},
      {"right", MutationStep::Kind::Right},       {"swap-objects", MutationStep::Kind::SwapObjects},
      {"rewrite", MutationStep::Kind::Rewrite},   {"regroup", MutationStep::Kind::Regroup}};
  auto it = kinds.find(kind);
  if (it == kinds.end()) throw ParseError("unknown step kind '" + kind + "'", text.find(kind));
  MutationStep s;
  s.kind = it->second;
  std::string tok;
  while (in >> tok) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      s.args.push_back(v);
    } catch (const std::logic_error&) {
      if (s.kind != MutationStep::Kind::Rewrite || !s.rule.empty())
        throw ParseError("unexpected argument '" + tok + "'", text.find(tok));
      s.rule = tok;
    }
  }
  std::size_t want = 0;
  switch (s.kind) {
    case MutationStep::Kind::SerreRL:
    case MutationStep::Kind::SerreLR:
    case MutationStep::Kind::Exchange:
    case MutationStep::Kind::Left:
    case MutationStep::Kind::Right:
      want = 1;
      break;
    case MutationStep::Kind::SwapObjects:
    case MutationStep::Kind::Rewrite:
      want = 2;
      break;
    case MutationStep::Kind::Regroup:
      if (s.args.size() < 3) throw ParseError("regroup needs first, last and at least one size", 0);
      want = s.args.size();
      break;
  }
  if (s.args.size() != want) throw ParseError(kind + " takes " + std::to_string(want) + " integer argument(s)", 0);
  if (s.kind == MutationStep::Kind::Rewrite && s.rule.empty()) throw ParseError("rewrite needs a rule name", text.size());
  for (int a : s.args) {
    if (a < 0) throw ParseError("negative index in step", text.find('-'));
  }
  return s;
}

struct Cell {
  std::string kind;  // "O", "OU", "A", "multi"
  int a = 0;
  int b = 0;
  int block = 0;
};

/// Thrown when a conditional step's vanishing fails; carries the offending fact.
class StepFailure : public StepRejected {
 public:
  StepFailure(const std::string& msg, Fact f) : StepRejected(msg), fact_(std::move(f)) {}
  const Fact& fact() const noexcept { return fact_; }

 private:
  Fact fact_;
};

struct StepResult {
  SOD sod;
  std::vector<Fact> facts;
};

struct Comparison {
  bool agree = false;
  std::vector<std::string> justifications;
  std::vector<Fact> facts;
  std::string reason;
};

/// Mutation engine bound to a sheaf calculus; memoizes Hom computations.
class Mutator {
 public:
  explicit Mutator(const SheafCalculus& sc) : sc_(sc) {}

  const SheafCalculus& calculus() const { return sc_; }

  std::size_t picard_rank(const SOD& s) const { return static_cast<std::size_t>(sc_.catalog().space(s.space).picard_rank()); }

  Expr object(const SOD& s, const std::string& text) const { return sc_.parse(s.space, text); }

  GradedDim rhom(const SOD& s, const Expr& a, const Expr& b) const {
    const auto key = std::make_tuple(s.space, to_string(s.ctx), print_expr(a), print_expr(b));
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = cache_.find(key);
      if (it != cache_.end()) return it->second;
    }
    const GradedDim g = sc_.rhom(SheafObject{s.space, a, 0}, SheafObject{s.space, b, 0}, s.ctx);
    std::lock_guard<std::mutex> lock(mu_);
    cache_.emplace(key, g);
    return g;
  }

  Fact fact(const SOD& s, const std::string& kind, const Expr& a, const Expr& b, bool expect_point) const {
    Fact f;
    f.kind = kind;
    f.a = print_expr(a);
    f.b = print_expr(b);
    f.expected = expect_point ? "C[0]" : "0";
    f.value = rhom(s, a, b);
    f.ok = f.value.is_exact() && (expect_point ? f.value.is_point() : f.value.is_zero());
    return f;
  }

  /// Twist every object of a block.
  Block twisted(const SOD& s, const Block& b, int k) const {
    Block out = b;
    const std::vector<int> t(picard_rank(s), k);
    for (auto& o : out.objects) o = normalize(Expr::twist(o, t), picard_rank(s));
    return out;
  }

  static std::string block_tag(const Block& b) {
    std::string s = "<";
    for (std::size_t i = 0; i < b.objects.size(); ++i) {
      if (i) s += ",";
      s += print_expr(b.objects[i]);
    }
    return s + ">";
  }

  /// Apply one step. Throws StepFailure (with the blocking fact) or StepRejected.
  StepResult apply(const SOD& in, const MutationStep& step) const {
    StepResult r{in, {}};
    SOD& s = r.sod;
    auto& bl = s.blocks;
    const auto need_block = [&](int i) -> Block& {
      if (i < 0 || static_cast<std::size_t>(i) >= bl.size())
        throw StepRejected(to_string(step) + ": block index " + std::to_string(i) + " out of range");
      return bl[static_cast<std::size_t>(i)];
    };
    const auto need_explicit = [&](int i) -> Block& {
      Block& b = need_block(i);
      if (b.is_unknown()) throw StepRejected(to_string(step) + ": block " + std::to_string(i) + " is the unknown block");
      return b;
    };
    const auto require = [&](Fact f) {
      r.facts.push_back(f);
      if (!f.ok) throw StepFailure(to_string(step) + " rejected: " + f.to_string() + ", needed " + f.expected, f);
    };
    const int a0 = step.args.empty() ? 0 : step.args[0];
    switch (step.kind) {
      case MutationStep::Kind::SerreRL:
      case MutationStep::Kind::SerreLR: {
        const int n = a0;
        if (static_cast<std::size_t>(n) > bl.size()) throw StepRejected(to_string(step) + ": not enough blocks");
        if (s.serre_twist() == 0 && n > 0) throw StepRejected(to_string(step) + ": the ambient context has no Serre twist");
        std::vector<Block> moved;
        std::vector<Block> rest;
        if (step.kind == MutationStep::Kind::SerreRL) {
          rest.assign(bl.begin(), bl.end() - n);
          for (auto it = bl.end() - n; it != bl.end(); ++it) {
            if (it->is_unknown()) throw StepRejected(to_string(step) + ": cannot transport the unknown block");
            moved.push_back(twisted(s, *it, -s.serre_twist()));
          }
          moved.insert(moved.end(), rest.begin(), rest.end());
          bl = std::move(moved);
        } else {
          for (auto it = bl.begin(); it != bl.begin() + n; ++it) {
            if (it->is_unknown()) throw StepRejected(to_string(step) + ": cannot transport the unknown block");
            moved.push_back(twisted(s, *it, s.serre_twist()));
          }
          rest.assign(bl.begin() + n, bl.end());
          rest.insert(rest.end(), moved.begin(), moved.end());
          bl = std::move(rest);
        }
        break;
      }
      case MutationStep::Kind::Exchange: {
        Block& x = need_explicit(a0);
        Block& y = need_explicit(a0 + 1);
        for (const auto& p : x.objects) {
          for (const auto& q : y.objects) {
            require(fact(s, "vanishing", p, q, false));
            require(fact(s, "vanishing", q, p, false));
          }
        }
        std::swap(x, y);
        break;
      }
      case MutationStep::Kind::Left: {
        Block& x = need_explicit(a0);
        Block& u = need_block(a0 + 1);
        if (!u.is_unknown()) throw StepRejected(to_string(step) + ": the unknown block is not right of block " + std::to_string(a0));
        u.pending.push_back("L" + block_tag(x));
        std::swap(x, u);
        break;
      }
      case MutationStep::Kind::Right: {
        Block& u = need_block(a0);
        Block& x = need_explicit(a0 + 1);
        if (!u.is_unknown()) throw StepRejected(to_string(step) + ": block " + std::to_string(a0) + " is not the unknown block");
        u.pending.push_back("R" + block_tag(x));
        std::swap(x, u);
        break;
      }
      case MutationStep::Kind::SwapObjects: {
        Block& b = need_explicit(a0);
        const int i = step.args[1];
        if (static_cast<std::size_t>(i) + 1 >= b.objects.size()) throw StepRejected(to_string(step) + ": object index out of range");
        const Expr p = b.objects[static_cast<std::size_t>(i)];
        const Expr q = b.objects[static_cast<std::size_t>(i) + 1];
        require(fact(s, "vanishing", p, q, false));
        require(fact(s, "vanishing", q, p, false));
        std::swap(b.objects[static_cast<std::size_t>(i)], b.objects[static_cast<std::size_t>(i) + 1]);
        break;
      }
      case MutationStep::Kind::Rewrite: {
        Block& b = need_explicit(a0);
        const std::size_t i = static_cast<std::size_t>(step.args[1]);
        if (i + 1 >= b.objects.size()) throw StepRejected(to_string(step) + ": object index out of range");
        const Expr m = b.objects[i];
        const Expr t = b.objects[i + 1];
        const auto result = rule_result(s, step.rule, m, t);
        const Fact hyp = fact(s, "hypothesis", m, t, true);
        if (hyp.value.is_exact() && hyp.value.is_zero()) {
          // orthogonal mutator: the mutation fixes the object
          Fact f = hyp;
          f.expected = "0";
          f.ok = true;
          require(f);
          require(fact(s, "vanishing", t, m, false));
          std::swap(b.objects[i], b.objects[i + 1]);
          break;
        }
        if (!result) throw StepRejected(to_string(step) + ": rule " + step.rule + " does not apply to " + print_expr(m) + ", " + print_expr(t));
        require(hyp);
        require(fact(s, "exceptional", m, m, true));
        require(fact(s, "exceptional", t, t, true));
        require(fact(s, "vanishing", t, m, false));
        require(fact(s, "exceptional", *result, *result, true));
        require(fact(s, "vanishing", m, *result, false));
        b.objects[i] = *result;
        b.objects[i + 1] = m;
        break;
      }
      case MutationStep::Kind::Regroup: {
        const int first = step.args[0];
        const int last = step.args[1];
        if (last < first) throw StepRejected(to_string(step) + ": last < first");
        std::vector<Expr> flat;
        for (int i = first; i <= last; ++i) {
          const Block& b = need_explicit(i);
          flat.insert(flat.end(), b.objects.begin(), b.objects.end());
        }
        std::vector<Block> grouped;
        std::size_t pos = 0;
        for (std::size_t k = 2; k < step.args.size(); ++k) {
          const std::size_t n = static_cast<std::size_t>(step.args[k]);
          if (n == 0 || pos + n > flat.size()) throw StepRejected(to_string(step) + ": sizes do not cover the objects");
          grouped.push_back(Block::explicit_block({flat.begin() + static_cast<long>(pos), flat.begin() + static_cast<long>(pos + n)}));
          pos += n;
        }
        if (pos != flat.size()) throw StepRejected(to_string(step) + ": sizes do not cover the objects");
        bl.erase(bl.begin() + first, bl.begin() + last + 1);
        bl.insert(bl.begin() + first, grouped.begin(), grouped.end());
        break;
      }
    }
    return r;
  }

  /// T' with M -> T -> T' a twist of the registered rule, if it matches.
  std::optional<Expr> rule_result(const SOD& s, const std::string& rule_name, const Expr& m, const Expr& t) const {
    const ExactSequenceRule& r = sc_.catalog().sequence(rule_name);
    if (r.space != s.space) throw StepRejected("rule " + rule_name + " lives on " + r.space + ", not " + s.space);
    const std::size_t pr = picard_rank(s);
    const Expr left = normalize(parse_expr(r.left), pr);
    if (expr_core(left) != expr_core(m)) return std::nullopt;
    std::vector<int> tw = expr_twist(m, pr);
    const std::vector<int> lt = expr_twist(left, pr);
    for (std::size_t i = 0; i < pr; ++i) tw[i] -= lt[i];
    const auto at = [&](const std::string& text) { return normalize(Expr::twist(parse_expr(text), tw), pr); };
    if (!(at(r.left) == m) || !(at(r.middle) == t)) return std::nullopt;
    return at(r.right);
  }

  /// Pairs (later, earlier) violating semiorthogonality; empty when the SOD is valid.
  std::optional<Fact> first_violation(const SOD& s) const {
    std::vector<Expr> flat;
    for (const auto& b : s.blocks) flat.insert(flat.end(), b.objects.begin(), b.objects.end());
    for (std::size_t i = 0; i < flat.size(); ++i) {
      for (std::size_t j = i + 1; j < flat.size(); ++j) {
        Fact f = fact(s, "vanishing", flat[j], flat[i], false);
        if (!f.ok) return f;
      }
    }
    return std::nullopt;
  }

  /// Blockwise comparison allowing transpositions of fully orthogonal neighbors.
  Comparison compare(const SOD& a, const SOD& b) const {
    Comparison c;
    if (a.space != b.space || !(a.ctx == b.ctx)) {
      c.reason = "different spaces or ambient contexts";
      return c;
    }
    if (a.blocks.size() != b.blocks.size()) {
      c.reason = "different numbers of blocks (" + std::to_string(a.blocks.size()) + " vs " + std::to_string(b.blocks.size()) + ")";
      return c;
    }
    std::vector<Block> work = b.blocks;
    const auto ms = [](const Block& x) {
      std::vector<std::string> v;
      for (const auto& o : x.objects) v.push_back(print_expr(o));
      std::sort(v.begin(), v.end());
      return v;
    };
    const auto orth = [&](const std::vector<Expr>& xs, const std::vector<Expr>& ys) {
      for (const auto& p : xs) {
        for (const auto& q : ys) {
          for (const auto& f : {fact(a, "vanishing", p, q, false), fact(a, "vanishing", q, p, false)}) {
            c.facts.push_back(f);
            if (!f.ok) return false;
          }
        }
      }
      return true;
    };
    for (std::size_t p = 0; p < a.blocks.size(); ++p) {
      const Block& want = a.blocks[p];
      if (want.is_unknown()) {
        if (!work[p].is_unknown()) {
          c.reason = "unknown blocks sit at different positions";
          return c;
        }
        continue;
      }
      std::size_t q = p;
      while (q < work.size() && (work[q].is_unknown() || ms(work[q]) != ms(want))) ++q;
      if (q == work.size()) {
        c.reason = "no block matching " + block_tag(want);
        return c;
      }
      for (; q > p; --q) {
        if (work[q - 1].is_unknown() || !orth(work[q - 1].objects, work[q].objects)) {
          c.reason = "cannot move " + block_tag(work[q]) + " past " + (work[q - 1].is_unknown() ? "the unknown block" : block_tag(work[q - 1]));
          return c;
        }
        c.justifications.push_back("blocks " + block_tag(work[q - 1]) + " and " + block_tag(work[q]) + " are mutually orthogonal");
        std::swap(work[q - 1], work[q]);
      }
      auto& objs = work[p].objects;
      for (std::size_t i = 0; i < want.objects.size(); ++i) {
        std::size_t j = i;
        while (!(objs[j] == want.objects[i])) ++j;
        for (; j > i; --j) {
          if (!orth({objs[j - 1]}, {objs[j]})) {
            c.reason = "cannot transpose " + print_expr(objs[j - 1]) + " and " + print_expr(objs[j]);
            return c;
          }
          c.justifications.push_back("transpose " + print_expr(objs[j - 1]) + " and " + print_expr(objs[j]) + " in block " +
                                     std::to_string(p) + ": both RHom directions vanish");
          std::swap(objs[j - 1], objs[j]);
        }
      }
    }
    c.agree = true;
    return c;
  }

  /// Chessboard rendering of the explicit blocks.
  std::vector<Cell> board(const SOD& s) const {
    std::vector<Cell> cells;
    const std::size_t pr = picard_rank(s);
    const auto coords = [&](const Expr& e) {
      auto t = expr_twist(e, pr);
      t.resize(2, 0);
      return t;
    };
    for (std::size_t i = 0; i < s.blocks.size(); ++i) {
      const Block& b = s.blocks[i];
      if (b.is_unknown()) continue;
      const bool all_lines = std::all_of(b.objects.begin(), b.objects.end(), [](const Expr& e) { return expr_core(e) == "O"; });
      if (all_lines) {
        for (const auto& o : b.objects) {
          const auto c = coords(o);
          cells.push_back({"O", c[0], c[1], static_cast<int>(i)});
        }
        continue;
      }
      // anchor: the first object that is not a line bundle, or the trivial line before it
      std::vector<int> anchor;
      for (std::size_t k = 0; k < b.objects.size(); ++k) {
        if (expr_core(b.objects[k]) != "O") {
          anchor = coords(b.objects[k]);
          break;
        }
      }
      const std::string kind = b.objects.size() == 2 ? "OU" : b.objects.size() == 4 ? "A" : "multi";
      cells.push_back({kind, anchor[0], anchor[1], static_cast<int>(i)});
    }
    return cells;
  }

 private:
  const SheafCalculus& sc_;
  mutable std::mutex mu_;
  mutable std::map<std::tuple<std::string, std::string, std::string, std::string>, GradedDim> cache_;
};

// ---------------------------------------------------------------------------
// JSON views

inline nlohmann::json to_json(const GradedDim& g) {
  nlohmann::json lo = nlohmann::json::object();
  nlohmann::json hi = nlohmann::json::object();
  for (const auto& [d, v] : g.lower()) lo[std::to_string(d)] = v;
  for (const auto& [d, v] : g.upper()) hi[std::to_string(d)] = v;
  nlohmann::json j{{"text", g.to_string()}, {"exact", g.is_exact()}};
  if (g.is_exact()) {
    j["dims"] = hi;
  } else {
    j["lower"] = lo;
    j["upper"] = hi;
  }
  return j;
}

inline nlohmann::json to_json(const Fact& f) {
  return {{"kind", f.kind}, {"a", f.a}, {"b", f.b}, {"expected", f.expected}, {"value", to_json(f.value)}, {"ok", f.ok}};
}

inline nlohmann::json to_json(const Block& b) {
  if (b.is_unknown()) return {{"kind", "unknown"}, {"label", b.label}, {"pending", b.pending}};
  nlohmann::json objs = nlohmann::json::array();
  for (const auto& o : b.objects) objs.push_back(print_expr(o));
  return {{"kind", "explicit"}, {"objects", objs}};
}

inline nlohmann::json to_json(const Cell& c) { return {{"kind", c.kind}, {"a", c.a}, {"b", c.b}, {"block", c.block}}; }

inline nlohmann::json blocks_json(const SOD& s) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& b : s.blocks) j.push_back(to_json(b));
  return j;
}

inline nlohmann::json board_json(const Mutator& m, const SOD& s) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : m.board(s)) cells.push_back(to_json(c));
  nlohmann::json unknown = nlohmann::json::object();
  for (std::size_t i = 0; i < s.blocks.size(); ++i) {
    if (s.blocks[i].is_unknown()) unknown = {{"block", i}, {"label", s.blocks[i].label}, {"pending", s.blocks[i].pending}};
  }
  return {{"space", s.space}, {"ambient", to_string(s.ctx)}, {"blocks", blocks_json(s)}, {"cells", cells}, {"unknown", unknown}};
}

/// Rebuild an SOD from its block list (inverse of blocks_json).
inline SOD sod_from_json(const Mutator& m, const std::string& space, const AmbientContext& ctx, const std::string& embed,
                         const nlohmann::json& blocks) {
  SOD s{space, ctx, embed, {}};
  for (const auto& b : blocks) {
    if (b.at("kind") == "unknown") {
      Block u = Block::unknown(b.at("label").get<std::string>());
      u.pending = b.value("pending", std::vector<std::string>{});
      s.blocks.push_back(u);
    } else {
      std::vector<Expr> objs;
      for (const auto& o : b.at("objects")) objs.push_back(m.object(s, o.get<std::string>()));
      if (objs.empty()) throw CatalogError("empty explicit block");
      s.blocks.push_back(Block::explicit_block(std::move(objs)));
    }
  }
  return s;
}

}  // namespace roofflop
