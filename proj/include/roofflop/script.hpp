#pragma once
//
// Proof scripts and certificates.
//
//   # comment
//   space E_D4
//   ambient blowup conormal=(1,1) discrepancy=3 dim=10
//   embed pi+
//   sod ?D(X+) | O(-2,0) | O(0,0), U+^v | ...      (repeatable; blocks append)
//   step exchange 1
//   compare-with other.mut
//

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "roofflop/mutation.hpp"

namespace roofflop {

struct Script {
  std::string name;
  std::string space;
  AmbientContext ctx;
  std::string embed;
  std::vector<std::vector<std::string>> sod;  // blocks of object texts; "?Label" marks the unknown
  std::vector<MutationStep> steps;
  std::string compare_with;                   // path relative to the script's directory
  std::filesystem::path dir;
};

namespace detail {

// split on `sep` outside parentheses/brackets
inline std::vector<std::pair<std::string, std::size_t>> split_top(const std::string& s, char sep, std::size_t base) {
  std::vector<std::pair<std::string, std::size_t>> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    const char c = i < s.size() ? s[i] : sep;
    if (c == '(' || c == '[') ++depth;
    if (c == ')' || c == ']') --depth;
    if (c == sep && (depth == 0 || i == s.size())) {
      out.emplace_back(s.substr(start, i - start), base + start);
      start = i + 1;
    }
  }
  return out;
}

inline std::pair<std::string, std::size_t> trim(const std::string& s, std::size_t base) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {"", base + s.size()};
  const auto e = s.find_last_not_of(" \t\r");
  return {s.substr(b, e - b + 1), base + b};
}

inline std::vector<int> parse_pair(const std::string& v, std::size_t off, std::size_t line) {
  const Expr e = [&] {
    try {
      return parse_expr("O" + v);
    } catch (const ParseError& pe) {
      throw ParseError("bad coordinate list '" + v + "'", off + (pe.offset() > 0 ? pe.offset() - 1 : 0), line);
    }
  }();
  if (e.kind != Expr::Kind::Atom || e.args.empty()) throw ParseError("bad coordinate list '" + v + "'", off, line);
  return e.args;
}

inline int parse_int_value(const std::string& v, std::size_t off, std::size_t line) {
  try {
    std::size_t used = 0;
    const int x = std::stoi(v, &used);
    if (used == v.size()) return x;
  } catch (const std::logic_error&) {
  }
  throw ParseError("expected an integer, got '" + v + "'", off, line);
}

}  // namespace detail

/// Parse script text. ParseError carries the 1-based line and the byte offset in that line.
inline Script parse_script(const std::string& text, const std::string& name = "script") {
  Script sc;
  sc.name = name;
  std::istringstream in(text);
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw.substr(0, raw.find('#'));
    const auto [body, boff] = detail::trim(line, 0);
    if (body.empty()) continue;
    const auto sp = body.find_first_of(" \t");
    const std::string cmd = body.substr(0, sp);
    const std::string rest_raw = sp == std::string::npos ? "" : body.substr(sp + 1);
    const auto [rest, roff0] = detail::trim(rest_raw, boff + (sp == std::string::npos ? body.size() : sp + 1));
    const std::size_t roff = roff0;
    if (cmd == "space") {
      if (rest.empty()) throw ParseError("space needs a name", roff, lineno);
      sc.space = rest;
    } else if (cmd == "embed") {
      if (rest.empty()) throw ParseError("embed needs a functor name", roff, lineno);
      sc.embed = rest;
    } else if (cmd == "compare-with") {
      if (rest.empty()) throw ParseError("compare-with needs a path", roff, lineno);
      sc.compare_with = rest;
    } else if (cmd == "ambient") {
      std::istringstream ws(rest);
      std::string mode;
      ws >> mode;
      AmbientContext ctx;
      if (mode == "plain") {
        ctx.mode = AmbientContext::Mode::Plain;
      } else if (mode == "blowup") {
        ctx.mode = AmbientContext::Mode::Blowup;
      } else if (mode == "hyperplane") {
        ctx.mode = AmbientContext::Mode::Hyperplane;
      } else {
        throw ParseError("unknown ambient mode '" + mode + "'", roff, lineno);
      }
      std::string kv;
      while (ws >> kv) {
        const std::size_t off = roff + rest.find(kv);
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw ParseError("expected key=value, got '" + kv + "'", off, lineno);
        const std::string key = kv.substr(0, eq);
        const std::string val = kv.substr(eq + 1);
        if (key == "conormal" || key == "normal") {
          ctx.line = detail::parse_pair(val, off + eq + 1, lineno);
        } else if (key == "discrepancy") {
          ctx.discrepancy = detail::parse_int_value(val, off + eq + 1, lineno);
        } else if (key == "dim") {
          ctx.ambient_dim = detail::parse_int_value(val, off + eq + 1, lineno);
        } else {
          throw ParseError("unknown ambient key '" + key + "'", off, lineno);
        }
      }
      if (ctx.mode != AmbientContext::Mode::Plain && ctx.line.empty()) throw ParseError("ambient context needs a line class", roff, lineno);
      sc.ctx = ctx;
    } else if (cmd == "sod") {
      for (const auto& [blk, boff2] : detail::split_top(rest, '|', roff)) {
        std::vector<std::string> objs;
        for (const auto& [obj, ooff] : detail::split_top(blk, ',', boff2)) {
          const auto [o, off] = detail::trim(obj, ooff);
          if (o.empty()) throw ParseError("empty object in sod", off, lineno);
          if (o[0] != '?') {
            try {
              parse_expr(o);
            } catch (const ParseError& pe) {
              throw ParseError(pe.what(), off + pe.offset(), lineno);
            }
          }
          objs.push_back(o);
        }
        if (objs.size() > 1 && std::any_of(objs.begin(), objs.end(), [](const std::string& o) { return o[0] == '?'; }))
          throw ParseError("the unknown block must stand alone", boff2, lineno);
        sc.sod.push_back(objs);
      }
    } else if (cmd == "step") {
      try {
        sc.steps.push_back(parse_step(rest));
      } catch (const ParseError& pe) {
        throw ParseError(pe.what(), roff + std::min(pe.offset(), rest.size()), lineno);
      }
    } else {
      throw ParseError("unknown directive '" + cmd + "'", boff, lineno);
    }
  }
  if (sc.space.empty()) throw ParseError("script has no space directive", 0, lineno);
  if (sc.sod.empty()) throw ParseError("script has no sod directive", 0, lineno);
  return sc;
}

inline Script load_script(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read script " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  Script s = parse_script(ss.str(), path.stem().string());
  s.dir = path.parent_path();
  return s;
}

/// Script text for a session history (inverse of parse_script up to comments).
inline std::string script_text(const std::string& space, const AmbientContext& ctx, const std::string& embed, const SOD& initial,
                               const std::vector<MutationStep>& steps) {
  std::ostringstream os;
  os << "space " << space << "\n";
  if (ctx.mode != AmbientContext::Mode::Plain) os << "ambient " << to_string(ctx) << "\n";
  if (!embed.empty()) os << "embed " << embed << "\n";
  os << "sod ";
  for (std::size_t i = 0; i < initial.blocks.size(); ++i) {
    if (i) os << " | ";
    const Block& b = initial.blocks[i];
    if (b.is_unknown()) {
      os << "?" << b.label;
    } else {
      for (std::size_t k = 0; k < b.objects.size(); ++k) os << (k ? ", " : "") << print_expr(b.objects[k]);
    }
  }
  os << "\n";
  for (const auto& s : steps) os << "step " << to_string(s) << "\n";
  return os.str();
}

inline SOD initial_sod(const Mutator& m, const Script& sc) {
  const SpaceEntry& sp = m.calculus().catalog().space(sc.space);
  if (sc.ctx.mode != AmbientContext::Mode::Plain && sc.ctx.line.size() != static_cast<std::size_t>(sp.picard_rank()))
    throw CatalogError("ambient line class does not match " + sc.space);
  SOD s{sc.space, sc.ctx, sc.embed, {}};
  for (const auto& blk : sc.sod) {
    if (blk.size() == 1 && blk[0][0] == '?') {
      s.blocks.push_back(Block::unknown(blk[0].substr(1)));
      continue;
    }
    std::vector<Expr> objs;
    for (const auto& o : blk) objs.push_back(m.object(s, o));
    s.blocks.push_back(Block::explicit_block(std::move(objs)));
  }
  return s;
}

struct RunResult {
  SOD initial;
  SOD final;
  std::vector<std::vector<std::size_t>> step_facts;  // indices into facts
  std::vector<Fact> facts;
  bool pass = false;
  std::string error;
  std::size_t failed_step = 0;  // 1-based, 0 if none
};

inline RunResult execute(const Mutator& m, const SOD& start, const std::vector<MutationStep>& steps) {
  RunResult r;
  r.initial = start;
  r.final = start;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    std::vector<std::size_t> ids;
    try {
      StepResult sr = m.apply(r.final, steps[i]);
      for (auto& f : sr.facts) {
        ids.push_back(r.facts.size());
        r.facts.push_back(std::move(f));
      }
      r.final = std::move(sr.sod);
    } catch (const StepFailure& e) {
      ids.push_back(r.facts.size());
      r.facts.push_back(e.fact());
      r.step_facts.push_back(ids);
      r.error = "step " + std::to_string(i + 1) + ": " + e.what();
      r.failed_step = i + 1;
      return r;
    } catch (const Error& e) {
      r.step_facts.push_back(ids);
      r.error = "step " + std::to_string(i + 1) + ": " + e.what();
      r.failed_step = i + 1;
      return r;
    }
    r.step_facts.push_back(ids);
  }
  r.pass = true;
  return r;
}

/// Functor tags of the unknown block, framed by the embedding functor.
inline std::vector<std::string> own_trace(const SOD& s) {
  std::vector<std::string> t;
  if (!s.embed.empty()) t.push_back(s.embed + "^*");
  for (const auto& b : s.blocks) {
    if (b.is_unknown()) t.insert(t.end(), b.pending.begin(), b.pending.end());
  }
  return t;
}

/// Composite trace: this side's mutations, then the other side's undone in reverse.
inline std::vector<std::string> composed_trace(const SOD& plus, const SOD& minus) {
  std::vector<std::string> t = own_trace(plus);
  std::vector<std::string> back;
  for (const auto& b : minus.blocks) {
    if (b.is_unknown()) back = b.pending;
  }
  for (auto it = back.rbegin(); it != back.rend(); ++it) {
    std::string tag = *it;
    tag[0] = tag[0] == 'L' ? 'R' : 'L';
    t.push_back(tag);
  }
  if (!minus.embed.empty()) t.push_back(minus.embed + "_*");
  return t;
}

inline nlohmann::json run_json(const Script& sc, const RunResult& r) {
  using nlohmann::json;
  json steps = json::array();
  for (std::size_t i = 0; i < r.step_facts.size(); ++i)
    steps.push_back({{"index", i + 1}, {"step", to_string(sc.steps[i])}, {"facts", r.step_facts[i]}});
  json facts = json::array();
  for (std::size_t i = 0; i < r.facts.size(); ++i) {
    json f = to_json(r.facts[i]);
    f["id"] = i;
    facts.push_back(f);
  }
  return {{"steps", steps}, {"facts", facts}};
}

/// Annotate a PASSing certificate with the relative-validity statement. Every fact in it is a
/// computation on a single fiber, so the flat-family criterion applies step by step.
inline nlohmann::json relative_stamp(nlohmann::json cert) {
  if (cert.value("verdict", std::string()) != "PASS") return cert;
  const auto scan = [&](const nlohmann::json& facts, const std::string& prefix, std::vector<std::string>& ex, std::vector<std::string>& va) {
    for (const auto& f : facts) {
      const std::string id = prefix + std::to_string(f.at("id").get<std::size_t>());
      if (f.at("kind") == "exceptional") {
        ex.push_back(id);
      } else {
        va.push_back(id);
      }
    }
  };
  std::vector<std::string> ex;
  std::vector<std::string> va;
  scan(cert.at("facts"), "", ex, va);
  if (cert.contains("counterpart") && cert["counterpart"].is_object()) scan(cert["counterpart"].at("facts"), "counterpart:", ex, va);
  cert["relative_stamp"] = {
      {"lemma", "relvan"},
      {"statement",
       "for a flat family s: X -> B with these fibers, every exchange and mutation in this certificate holds for s^*D(B) (x) E_i"},
      {"fiberwise", true},
      {"condition_1", {{"requirement", "E1|_b, E2|_b, E3|_b exceptional on each fiber"}, {"facts", ex}}},
      {"condition_2", {{"requirement", "RHom(E1|_b, E3|_b) = 0 on each fiber"}, {"facts", va}}}};
  return cert;
}

/// Run a script (and its counterpart) and build the certificate document.
inline nlohmann::json run_script(const Mutator& m, const Script& sc) {
  using nlohmann::json;
  const SOD start = initial_sod(m, sc);
  const RunResult r = execute(m, start, sc.steps);
  json cert = run_json(sc, r);
  cert["script_name"] = sc.name;
  cert["space"] = sc.space;
  cert["ambient"] = to_string(sc.ctx);
  cert["embed"] = sc.embed;
  cert["initial"] = blocks_json(r.initial);
  cert["final"] = blocks_json(r.final);
  cert["functor_trace"] = own_trace(r.final);
  cert["relative_stamp"] = nullptr;
  cert["counterpart"] = nullptr;
  cert["comparison"] = nullptr;
  if (!r.pass) {
    cert["verdict"] = "FAIL";
    cert["error"] = r.error;
    return cert;
  }
  bool pass = true;
  if (!sc.compare_with.empty()) {
    const Script other = load_script(sc.dir / sc.compare_with);
    const RunResult o = execute(m, initial_sod(m, other), other.steps);
    json cp = run_json(other, o);
    cp["script_name"] = other.name;
    cp["embed"] = other.embed;
    cp["initial"] = blocks_json(o.initial);
    cp["final"] = blocks_json(o.final);
    cp["verdict"] = o.pass ? "PASS" : "FAIL";
    if (!o.pass) cp["error"] = o.error;
    cert["counterpart"] = cp;
    if (!o.pass) {
      pass = false;
      cert["error"] = "counterpart " + other.name + " failed: " + o.error;
    } else {
      const Comparison c = m.compare(r.final, o.final);
      json cf = json::array();
      for (const auto& f : c.facts) cf.push_back(to_json(f));
      cert["comparison"] = {{"verdict", c.agree ? "AGREE" : "DISAGREE"}, {"justifications", c.justifications}, {"facts", cf}};
      if (!c.agree) {
        cert["comparison"]["reason"] = c.reason;
        cert["error"] = "terminal decompositions differ: " + c.reason;
        pass = false;
      } else {
        cert["functor_trace"] = composed_trace(r.final, o.final);
      }
    }
  }
  cert["verdict"] = pass ? "PASS" : "FAIL";
  return relative_stamp(std::move(cert));
}

inline nlohmann::json run_script_file(const Mutator& m, const std::filesystem::path& path) { return run_script(m, load_script(path)); }

/// Re-run the steps recorded in a certificate from its initial blocks and compare.
inline bool replay_matches(const Mutator& m, const nlohmann::json& cert, const AmbientContext& ctx) {
  const SOD start = sod_from_json(m, cert.at("space"), ctx, cert.value("embed", std::string()), cert.at("initial"));
  std::vector<MutationStep> steps;
  for (const auto& s : cert.at("steps")) steps.push_back(parse_step(s.at("step").get<std::string>()));
  const RunResult r = execute(m, start, steps);
  return blocks_json(r.final) == cert.at("final");
}

}  // namespace roofflop
