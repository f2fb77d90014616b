#pragma once
//
// Catalog of the named spaces, bundle dictionaries, exact sequences, fibrations
// and restriction maps. The default catalog is embedded as JSON; ROOFFLOP_CATALOG
// points at a replacement file with the same schema.
//

#include <cstdlib>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "roofflop/bwb.hpp"
#include "roofflop/expr.hpp"

namespace roofflop {

/// How a dictionary symbol is built. `dual` applies to the whole definition.
struct SymbolDef {
  enum class Kind { Irr, Pullback, Triangle };
  Kind kind = Kind::Irr;
  std::vector<int> weight;  // Irr / Pullback
  std::string from;         // Pullback: source space
  std::string sub;          // Triangle: sub -> X -> quot
  std::string quot;
  bool dual = false;
  bool nonsplit = false;    // Triangle: the connecting morphism is nonzero
};

struct SpaceEntry {
  enum class Kind { Homogeneous, Divisor };
  std::string name;
  Kind kind = Kind::Homogeneous;
  SpacePtr homogeneous;               // the space itself, or the host for divisors
  std::string host;                   // Divisor
  std::vector<int> divisor_class;     // Divisor, in host twist coordinates
  std::vector<int> canonical;         // twist coordinates
  std::map<std::string, SymbolDef> dictionary;

  int picard_rank() const { return homogeneous->picard_rank(); }
  int dimension() const { return homogeneous->dimension() - (kind == Kind::Divisor ? 1 : 0); }
};

struct ExactSequenceRule {
  std::string name;
  std::string space;
  std::string left;
  std::string middle;
  std::string right;
};

struct FibrationEntry {
  std::string name;
  std::string total;
  std::string base;
  int fiber_dim = 0;
  std::vector<std::pair<std::vector<int>, std::string>> pushforward;
};

struct RestrictionEntry {
  std::string from;
  std::string to;
  std::map<std::string, std::string> symbols;
  std::vector<std::vector<int>> line_map;  // rows: target coordinates
};

class Catalog {
 public:
  std::map<std::string, SpaceEntry> spaces;
  std::map<std::string, ExactSequenceRule> sequences;
  std::map<std::string, FibrationEntry> fibrations;
  std::vector<RestrictionEntry> restrictions;
  std::vector<std::string> triality;

  const SpaceEntry& space(const std::string& name) const {
    auto it = spaces.find(name);
    if (it == spaces.end()) throw CatalogError("unknown space '" + name + "'");
    return it->second;
  }
  const ExactSequenceRule& sequence(const std::string& name) const {
    auto it = sequences.find(name);
    if (it == sequences.end()) throw CatalogError("unknown sequence '" + name + "'");
    return it->second;
  }
  const FibrationEntry& fibration(const std::string& name) const {
    auto it = fibrations.find(name);
    if (it == fibrations.end()) throw CatalogError("unknown fibration '" + name + "'");
    return it->second;
  }
  std::vector<std::string> space_names() const {
    std::vector<std::string> v;
    for (const auto& [n, s] : spaces) v.push_back(n);
    return v;
  }
};

inline const char* standard_catalog_json() {
  return R"json({
  "spaces": [
    {"name": "P1", "type": "A", "rank": 1, "levi": [], "picard": [1], "canonical": [-2], "dictionary": {}},
    {"name": "S_plus", "type": "D", "rank": 4, "levi": [1, 2, 3], "picard": [4], "canonical": [-6],
     "dictionary": {
       "U+": {"kind": "irr", "weight": [1, 0, 0, 0], "dual": true},
       "G":  {"kind": "triangle", "sub": "U+^v", "quot": "O[1]", "nonsplit": true, "dual": true}}},
    {"name": "S_minus", "type": "D", "rank": 4, "levi": [1, 2, 4], "picard": [3], "canonical": [-6],
     "dictionary": {
       "U-": {"kind": "irr", "weight": [1, 0, 0, 0], "dual": true},
       "G":  {"kind": "triangle", "sub": "U-^v", "quot": "O[1]", "nonsplit": true, "dual": true}}},
    {"name": "E_D4", "type": "D", "rank": 4, "levi": [1, 2], "picard": [4, 3], "canonical": [-4, -4],
     "dictionary": {
       "U+": {"kind": "pullback", "from": "S_plus", "weight": [1, 0, 0, 0], "dual": true},
       "U-": {"kind": "pullback", "from": "S_minus", "weight": [1, 0, 0, 0], "dual": true},
       "V":  {"kind": "irr", "weight": [1, 0, 0, 0], "dual": true}}},
    {"name": "Q6", "type": "D", "rank": 4, "levi": [2, 3, 4], "picard": [1], "canonical": [-6],
     "dictionary": {
       "S+": {"kind": "irr", "weight": [0, 0, 0, 1]},
       "S-": {"kind": "irr", "weight": [0, 0, 1, 0]},
       "G":  {"kind": "triangle", "sub": "S+", "quot": "O[1]", "nonsplit": true, "dual": true}}},
    {"name": "Q5", "type": "B", "rank": 3, "levi": [2, 3], "picard": [1], "canonical": [-5],
     "dictionary": {
       "S": {"kind": "irr", "weight": [0, 0, 1]},
       "G": {"kind": "triangle", "sub": "S", "quot": "O[1]", "nonsplit": true, "dual": true}}},
    {"name": "OGr37", "type": "B", "rank": 3, "levi": [1, 2], "picard": [3], "canonical": [-6],
     "dictionary": {
       "V": {"kind": "irr", "weight": [1, 0, 0], "dual": true}}},
    {"name": "FlagB3", "type": "B", "rank": 3, "levi": [2], "picard": [1, 3], "canonical": [-3, -4],
     "dictionary": {
       "S":  {"kind": "pullback", "from": "Q5", "weight": [0, 0, 1]},
       "G":  {"kind": "triangle", "sub": "S", "quot": "O(0,0)[1]", "nonsplit": true, "dual": true},
       "G'": {"kind": "pullback", "from": "OGr37", "weight": [1, 0, 0], "dual": true},
       "EE": {"kind": "triangle", "sub": "S", "quot": "O(1,-1)[1]", "nonsplit": true},
       "S'": {"kind": "triangle", "sub": "O(-1,1)", "quot": "EE", "nonsplit": true}}},
    {"name": "R", "kind": "divisor", "host": "FlagB3", "divisor_class": [0, 1], "canonical": [-3, -3]}
  ],
  "sequences": [
    {"name": "releuler+", "space": "E_D4", "left": "O(-1,-1)", "middle": "U+^v(-2,0)", "right": "V^v(-2,0)"},
    {"name": "releuler-", "space": "E_D4", "left": "O(-1,-1)", "middle": "U-^v(0,-2)", "right": "V^v(0,-2)"},
    {"name": "euler+", "space": "S_plus", "left": "U+", "middle": "O + O + O + O + O + O + O + O", "right": "U+^v"},
    {"name": "euler-", "space": "S_minus", "left": "U-", "middle": "O + O + O + O + O + O + O + O", "right": "U-^v"},
    {"name": "Ott+", "space": "S_plus", "left": "O", "middle": "U+^v", "right": "G^v"},
    {"name": "Ott-", "space": "S_minus", "left": "O", "middle": "U-^v", "right": "G^v"},
    {"name": "Ott1", "space": "Q6", "left": "O", "middle": "S+", "right": "G^v"},
    {"name": "Ott", "space": "Q5", "left": "O", "middle": "S", "right": "G^v"},
    {"name": "seqfund1", "space": "R", "left": "O(1,-1)", "middle": "S", "right": "EE"},
    {"name": "seqfund2", "space": "R", "left": "O(-1,1)", "middle": "S'", "right": "EE"}
  ],
  "fibrations": [
    {"name": "p+", "total": "E_D4", "base": "S_plus", "fiber_dim": 3,
     "pushforward": [{"line": [1, 1], "expr": "U+(2)"}, {"line": [0, 0], "expr": "O"}]},
    {"name": "p-", "total": "E_D4", "base": "S_minus", "fiber_dim": 3,
     "pushforward": [{"line": [1, 1], "expr": "U-(2)"}, {"line": [0, 0], "expr": "O"}]},
    {"name": "p", "total": "R", "base": "Q5", "fiber_dim": 2,
     "pushforward": [{"line": [1, 1], "expr": "G^v(1)"}, {"line": [0, 0], "expr": "O"}]},
    {"name": "p'", "total": "R", "base": "OGr37", "fiber_dim": 2,
     "pushforward": [{"line": [1, 1], "expr": "V^v(1)"}, {"line": [0, 0], "expr": "O"}]}
  ],
  "restrictions": [
    {"from": "Q6", "to": "Q5", "symbols": {"S+": "S", "S-": "S", "G": "G"}, "line_map": [[1]]},
    {"from": "S_plus", "to": "E_D4", "symbols": {"U+": "U+"}, "line_map": [[1], [0]]},
    {"from": "S_minus", "to": "E_D4", "symbols": {"U-": "U-"}, "line_map": [[0], [1]]},
    {"from": "FlagB3", "to": "R", "symbols": {"S": "S", "G": "G", "G'": "G'", "EE": "EE", "S'": "S'"},
     "line_map": [[1, 0], [0, 1]]},
    {"from": "Q5", "to": "R", "symbols": {"S": "S", "G": "G"}, "line_map": [[1], [0]]},
    {"from": "OGr37", "to": "R", "symbols": {"V": "G'"}, "line_map": [[0], [1]]}
  ],
  "triality": [
    "OGr(3,V8) -> S_plus, S_minus: flop Tot(U+^v(-2h+)) --> Tot(U-^v(-2h-))",
    "OFl(1,4,V8)+ -> Q6, S_plus: flop Tot(S+^v(-h1)) --> Tot(U+(-h+))",
    "OFl(1,4,V8)- -> S_minus, Q6: flop Tot(U-(-h-)) --> Tot(S-^v(-h1))"
  ]
})json";
}

namespace detail {

inline std::vector<int> ivec(const nlohmann::json& j) { return j.get<std::vector<int>>(); }

}  // namespace detail

/// Build a catalog from its JSON form.
inline Catalog catalog_from_json(const nlohmann::json& j) {
  Catalog c;
  for (const auto& s : j.at("spaces")) {
    SpaceEntry e;
    e.name = s.at("name").get<std::string>();
    e.canonical = detail::ivec(s.at("canonical"));
    if (s.value("kind", std::string("homogeneous")) == "divisor") {
      e.kind = SpaceEntry::Kind::Divisor;
      e.host = s.at("host").get<std::string>();
      e.divisor_class = detail::ivec(s.at("divisor_class"));
      const SpaceEntry& host = c.space(e.host);
      if (host.kind != SpaceEntry::Kind::Homogeneous) throw CatalogError(e.name + ": host must be homogeneous");
      if (e.divisor_class.size() != static_cast<std::size_t>(host.picard_rank()))
        throw CatalogError(e.name + ": divisor class is not a line weight on " + e.host);
      e.homogeneous = host.homogeneous;
      e.dictionary = host.dictionary;
    } else {
      const auto rs = build_root_system(cartan_type_from_string(s.at("type").get<std::string>()), s.at("rank").get<int>());
      e.homogeneous = std::make_shared<HomogeneousSpace>(e.name, rs, s.at("levi").get<NodeSet>(), s.at("picard").get<NodeSet>());
      for (const auto& [sym, d] : s.at("dictionary").items()) {
        SymbolDef def;
        const std::string kind = d.at("kind").get<std::string>();
        if (kind == "irr") {
          def.kind = SymbolDef::Kind::Irr;
          def.weight = detail::ivec(d.at("weight"));
        } else if (kind == "pullback") {
          def.kind = SymbolDef::Kind::Pullback;
          def.weight = detail::ivec(d.at("weight"));
          def.from = d.at("from").get<std::string>();
        } else if (kind == "triangle") {
          def.kind = SymbolDef::Kind::Triangle;
          def.sub = d.at("sub").get<std::string>();
          def.quot = d.at("quot").get<std::string>();
          def.nonsplit = d.value("nonsplit", false);
        } else {
          throw CatalogError(e.name + ": unknown symbol kind '" + kind + "'");
        }
        def.dual = d.value("dual", false);
        e.dictionary[sym] = def;
      }
    }
    if (e.canonical.size() != static_cast<std::size_t>(e.picard_rank()))
      throw CatalogError(e.name + ": canonical class has the wrong number of coordinates");
    c.spaces[e.name] = std::move(e);
  }
  for (const auto& s : j.value("sequences", nlohmann::json::array())) {
    ExactSequenceRule r{s.at("name"), s.at("space"), s.at("left"), s.at("middle"), s.at("right")};
    c.space(r.space);
    c.sequences[r.name] = r;
  }
  for (const auto& f : j.value("fibrations", nlohmann::json::array())) {
    FibrationEntry e;
    e.name = f.at("name");
    e.total = f.at("total");
    e.base = f.at("base");
    e.fiber_dim = f.at("fiber_dim");
    for (const auto& p : f.at("pushforward")) e.pushforward.emplace_back(detail::ivec(p.at("line")), p.at("expr").get<std::string>());
    c.space(e.total);
    c.space(e.base);
    c.fibrations[e.name] = e;
  }
  for (const auto& r : j.value("restrictions", nlohmann::json::array())) {
    RestrictionEntry e;
    e.from = r.at("from");
    e.to = r.at("to");
    e.symbols = r.at("symbols").get<std::map<std::string, std::string>>();
    e.line_map = r.at("line_map").get<std::vector<std::vector<int>>>();
    const auto& src = c.space(e.from);
    const auto& dst = c.space(e.to);
    if (e.line_map.size() != static_cast<std::size_t>(dst.picard_rank()))
      throw CatalogError("restriction " + e.from + "->" + e.to + ": line map has the wrong shape");
    for (const auto& row : e.line_map) {
      if (row.size() != static_cast<std::size_t>(src.picard_rank()))
        throw CatalogError("restriction " + e.from + "->" + e.to + ": line map has the wrong shape");
    }
    c.restrictions.push_back(std::move(e));
  }
  for (const auto& t : j.value("triality", nlohmann::json::array())) c.triality.push_back(t.get<std::string>());
  return c;
}

/// JSON form of a catalog (inverse of catalog_from_json).
inline nlohmann::json catalog_to_json(const Catalog& c) {
  using nlohmann::json;
  json spaces = json::array();
  // hosts before divisors
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& [name, e] : c.spaces) {
      const bool divisor = e.kind == SpaceEntry::Kind::Divisor;
      if (divisor != (pass == 1)) continue;
      json s{{"name", name}, {"canonical", e.canonical}};
      if (divisor) {
        s["kind"] = "divisor";
        s["host"] = e.host;
        s["divisor_class"] = e.divisor_class;
      } else {
        const auto& h = *e.homogeneous;
        s["type"] = to_string(h.root_system().cartan_type());
        s["rank"] = h.root_system().rank();
        s["levi"] = h.levi_nodes();
        s["picard"] = h.picard_nodes();
        json dict = json::object();
        for (const auto& [sym, d] : e.dictionary) {
          json dj;
          switch (d.kind) {
            case SymbolDef::Kind::Irr:
              dj = {{"kind", "irr"}, {"weight", d.weight}};
              break;
            case SymbolDef::Kind::Pullback:
              dj = {{"kind", "pullback"}, {"from", d.from}, {"weight", d.weight}};
              break;
            case SymbolDef::Kind::Triangle:
              dj = {{"kind", "triangle"}, {"sub", d.sub}, {"quot", d.quot}};
              if (d.nonsplit) dj["nonsplit"] = true;
              break;
          }
          if (d.dual) dj["dual"] = true;
          dict[sym] = dj;
        }
        s["dictionary"] = dict;
      }
      spaces.push_back(s);
    }
  }
  json seqs = json::array();
  for (const auto& [n, r] : c.sequences)
    seqs.push_back({{"name", n}, {"space", r.space}, {"left", r.left}, {"middle", r.middle}, {"right", r.right}});
  json fibs = json::array();
  for (const auto& [n, f] : c.fibrations) {
    json pf = json::array();
    for (const auto& [l, e] : f.pushforward) pf.push_back({{"line", l}, {"expr", e}});
    fibs.push_back({{"name", n}, {"total", f.total}, {"base", f.base}, {"fiber_dim", f.fiber_dim}, {"pushforward", pf}});
  }
  json res = json::array();
  for (const auto& r : c.restrictions) res.push_back({{"from", r.from}, {"to", r.to}, {"symbols", r.symbols}, {"line_map", r.line_map}});
  return {{"spaces", spaces}, {"sequences", seqs}, {"fibrations", fibs}, {"restrictions", res}, {"triality", c.triality}};
}

/// The embedded catalog, or the file named by ROOFFLOP_CATALOG when set.
inline Catalog load_standard_catalog() {
  if (const char* path = std::getenv("ROOFFLOP_CATALOG"); path && *path) {
    std::ifstream in(path);
    if (!in) throw CatalogError(std::string("cannot read catalog file ") + path);
    try {
      return catalog_from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::exception& e) {
      throw CatalogError(std::string("malformed catalog file: ") + e.what());
    }
  }
  return catalog_from_json(nlohmann::json::parse(standard_catalog_json()));
}

/// Shared immutable instance of load_standard_catalog().
inline const Catalog& standard_catalog() {
  static const Catalog c = load_standard_catalog();
  return c;
}

namespace detail {

inline Expr restrict_rec(const Expr& e, const RestrictionEntry& r) {
  using K = Expr::Kind;
  if (e.kind == K::Atom) {
    if (e.symbol == "O") {
      if (e.args.empty()) return e;
      std::vector<int> out;
      for (const auto& row : r.line_map) {
        int v = 0;
        for (std::size_t i = 0; i < row.size(); ++i) v += row[i] * e.args.at(i);
        out.push_back(v);
      }
      return Expr::line(out);
    }
    auto it = r.symbols.find(e.symbol);
    if (it == r.symbols.end()) throw CatalogError("no restriction of " + e.symbol + " from " + r.from + " to " + r.to);
    return Expr::atom(it->second);
  }
  Expr out = e;
  for (auto& k : out.kids) k = restrict_rec(k, r);
  if (e.kind == K::Twist) {
    const Expr line = restrict_rec(Expr::line(padded(e.args, r.line_map.empty() ? 0 : r.line_map[0].size())), r);
    out.args = line.args;
  }
  return out;
}

}  // namespace detail

/// Rewrite an expression on `from` into the dictionary of `to`.
inline Expr restrict(const Catalog& cat, const Expr& expr, const std::string& from, const std::string& to) {
  cat.space(from);
  cat.space(to);
  if (from == to) return expr;
  for (const auto& r : cat.restrictions) {
    if (r.from == from && r.to == to) return detail::restrict_rec(normalize(expr, static_cast<std::size_t>(cat.space(from).picard_rank())), r);
  }
  throw CatalogError("no registered restriction from " + from + " to " + to);
}

}  // namespace roofflop
