// roofflop: cohomology and RHom queries, lemma checks, proof-script verification, workbench server.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "roofflop/workbench.hpp"

using namespace roofflop;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

struct Options {
  std::string format = "text";
  std::string space;
  std::string ambient = "plain";
  std::vector<int> line;
  int discrepancy = -1;
  int dim = -1;
  std::vector<std::string> exprs;
  std::string script;
  std::string output;
  std::string which = "all";
  std::string host = "127.0.0.1";
  int port = 8080;
};

void caret(std::ostream& os, const std::string& text, std::size_t offset) {
  os << "  " << text << "\n  " << std::string(std::min(offset, text.size()), ' ') << "^\n";
}

/// Ambient context from flags; blowup and hyperplane default to the roof data of the space.
AmbientContext ambient_from(const Options& o, const Catalog& cat) {
  if (o.ambient == "plain") return AmbientContext::plain();
  const bool g2 = o.space == "R";
  const bool d4 = o.space == "E_D4";
  std::vector<int> line = o.line.empty() ? std::vector<int>{1, 1} : o.line;
  if (line.size() != static_cast<std::size_t>(cat.space(o.space).picard_rank()))
    throw CatalogError("--line needs " + std::to_string(cat.space(o.space).picard_rank()) + " coordinates on " + o.space);
  if (o.ambient == "blowup") {
    const int k = o.discrepancy >= 0 ? o.discrepancy : d4 ? 3 : g2 ? 2 : -1;
    const int n = o.dim >= 0 ? o.dim : d4 ? 10 : g2 ? 8 : -1;
    if (k < 0 || n < 0) throw CatalogError("blowup on " + o.space + " needs --discrepancy and --dim");
    return AmbientContext::blowup(line, k, n);
  }
  const int k = o.discrepancy >= 0 ? o.discrepancy : d4 ? 3 : g2 ? 2 : -1;
  const int n = o.dim >= 0 ? o.dim : cat.space(o.space).dimension() - 1;
  if (k < 0) throw CatalogError("hyperplane on " + o.space + " needs --discrepancy");
  return AmbientContext::hyperplane(line, k, n);
}

void emit(const Options& o, const json& j, const std::string& text) {
  if (o.format == "json") {
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << text;
  }
}

int cmd_cohomology(const Options& o, const SheafCalculus& sc) {
  if (o.exprs.size() != 1) throw CLI::ValidationError("cohomology", "expects one bundle expression");
  const GradedDim g = sc.rhom(o.space, "O", o.exprs[0], AmbientContext::plain());
  emit(o, {{"space", o.space}, {"expr", print_expr(sc.parse(o.space, o.exprs[0]))}, {"value", to_json(g)}}, g.to_string() + "\n");
  return kOk;
}

int cmd_rhom(const Options& o, const SheafCalculus& sc) {
  if (o.exprs.size() != 2) throw CLI::ValidationError("rhom", "expects two bundle expressions");
  const AmbientContext ctx = ambient_from(o, sc.catalog());
  const GradedDim g = sc.rhom(o.space, o.exprs[0], o.exprs[1], ctx);
  emit(o,
       {{"space", o.space},
        {"ambient", to_string(ctx)},
        {"a", print_expr(sc.parse(o.space, o.exprs[0]))},
        {"b", print_expr(sc.parse(o.space, o.exprs[1]))},
        {"value", to_json(g)}},
       g.to_string() + "\n");
  return kOk;
}

int cmd_lemmas(const Options& o, const SheafCalculus& sc) {
  std::vector<LemmaReport> reports;
  if (o.which == "van" || o.which == "all") reports.push_back(verify_lemma_van(sc));
  if (o.which == "van2" || o.which == "all") reports.push_back(verify_lemma_van2(sc));
  if (reports.empty()) throw CLI::ValidationError("--which", "expected van, van2 or all");
  json out = json::array();
  std::ostringstream text;
  bool pass = true;
  for (const auto& rep : reports) {
    json items = json::array();
    for (const auto& it : rep.items) {
      json values = json::array();
      std::string vals;
      for (const auto& [what, g] : it.values) {
        values.push_back({{"hom", what}, {"value", to_json(g)}});
        vals += (vals.empty() ? "" : "; ") + what + " = " + g.to_string();
      }
      items.push_back({{"item", it.label}, {"statement", it.statement}, {"pass", it.pass}, {"values", values}});
      text << rep.lemma << " (" << it.label << ") " << (it.pass ? "PASS" : "FAIL") << "  " << it.statement << "  [" << vals << "]\n";
    }
    out.push_back({{"lemma", rep.lemma}, {"pass", rep.pass()}, {"items", items}});
    pass = pass && rep.pass();
  }
  emit(o, out, text.str());
  return pass ? kOk : kFail;
}

int cmd_verify(const Options& o, const Mutator& m) {
  if (!std::filesystem::is_regular_file(o.script)) throw CLI::ValidationError("script", "no such file: " + o.script);
  const json cert = run_script_file(m, o.script);
  if (!o.output.empty()) {
    std::ofstream out(o.output);
    if (!out) throw Error("cannot write " + o.output);
    out << cert.dump(2) << "\n";
  }
  const bool pass = cert.at("verdict") == "PASS";
  std::ostringstream text;
  text << cert.at("script_name").get<std::string>() << ": " << cert.at("verdict").get<std::string>() << "\n";
  text << "  steps checked: " << cert.at("steps").size() << ", facts: " << cert.at("facts").size() << "\n";
  if (cert.at("comparison").is_object()) text << "  comparison: " << cert["comparison"]["verdict"].get<std::string>() << "\n";
  if (cert.contains("error")) text << "  error: " << cert.at("error").get<std::string>() << "\n";
  text << "  functor trace:";
  for (const auto& t : cert.at("functor_trace")) text << " " << t.get<std::string>();
  text << "\n";
  if (cert.at("relative_stamp").is_object()) text << "  relative stamp: lemma relvan, fiberwise\n";
  emit(o, cert, text.str());
  return pass ? kOk : kFail;
}

int cmd_serve(const Options& o, const Mutator& m) {
  Workbench wb(m);
  httplib::Server srv;
  mount_workbench(srv, wb);
  std::cerr << "workbench listening on http://" << o.host << ":" << o.port << "/v1\n";
  if (!srv.listen(o.host, o.port)) {
    std::cerr << "error: cannot listen on " << o.host << ":" << o.port << "\n";
    return kUsage;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"roofflop: derived-category computations on D4 and G2 roofs"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--format", o.format, "output format")->check(CLI::IsMember({"text", "json"}));

  const auto ambient_flags = [&](CLI::App* c) {
    c->add_option("--ambient", o.ambient, "plain, blowup or hyperplane")->check(CLI::IsMember({"plain", "blowup", "hyperplane"}));
    c->add_option("--line", o.line, "conormal / normal class, e.g. --line 1 1")->expected(1, 2);
    c->add_option("--discrepancy", o.discrepancy, "k in the Serre twist O(kD)");
    c->add_option("--dim", o.dim, "dimension of the ambient variety");
  };

  auto* coh = app.add_subcommand("cohomology", "graded dimension of H^*(space, E)");
  coh->add_option("--space", o.space, "catalog space")->required();
  coh->add_option("expr", o.exprs, "bundle expression")->required();

  auto* rh = app.add_subcommand("rhom", "graded dimension of RHom(A, B)");
  rh->add_option("--space", o.space, "catalog space")->required();
  ambient_flags(rh);
  rh->add_option("exprs", o.exprs, "A B")->required()->expected(2);

  auto* ver = app.add_subcommand("verify", "run a proof script and emit its certificate");
  ver->add_option("script", o.script, "script path")->required();
  ver->add_option("-o,--output", o.output, "certificate path");

  auto* lem = app.add_subcommand("lemmas", "check the vanishing lemmas");
  lem->add_option("--which", o.which, "van, van2 or all")->check(CLI::IsMember({"van", "van2", "all"}));

  auto* srv = app.add_subcommand("serve", "start the workbench HTTP service");
  srv->add_option("--port", o.port, "TCP port")->required();
  srv->add_option("--host", o.host, "bind address");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  std::string current;  // expression being parsed, for diagnostics
  try {
    const Catalog& cat = standard_catalog();
    SheafCalculus sc(cat);
    Mutator m(sc);
    if (!o.space.empty()) cat.space(o.space);
    for (const auto& e : o.exprs) {
      current = e;
      sc.parse(o.space, e);
    }
    current.clear();
    if (*coh) return cmd_cohomology(o, sc);
    if (*rh) return cmd_rhom(o, sc);
    if (*lem) return cmd_lemmas(o, sc);
    if (*ver) return cmd_verify(o, m);
    if (*srv) return cmd_serve(o, m);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what();
    if (e.line() > 0) std::cerr << " (line " << e.line() << ")";
    std::cerr << "\n";
    if (!current.empty()) {
      caret(std::cerr, current, e.offset());
    } else if (e.line() > 0 && !o.script.empty()) {
      std::ifstream in(o.script);
      std::string l;
      for (std::size_t i = 0; i < e.line() && std::getline(in, l); ++i) {
      }
      caret(std::cerr, l, e.offset());
    }
    return kUsage;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const CatalogError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFail;
  }
  return kUsage;
}
