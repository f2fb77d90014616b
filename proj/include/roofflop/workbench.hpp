#pragma once
//
// Workbench service: in-memory sessions over the mutation engine, and the /v1 HTTP routes.
//

#include <chrono>
#include <iomanip>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "roofflop/script.hpp"

namespace roofflop {

/// Starting chessboards, as script headers.
inline const std::map<std::string, std::string>& workbench_presets() {
  static const std::map<std::string, std::string> presets = {
      {"d4_plus",
       "space E_D4\n"
       "ambient blowup conormal=(1,1) discrepancy=3 dim=10\n"
       "embed pi+\n"
       "sod ?D(X+)\n"
       "sod O(-2,0) | O(-1,0) | O(0,0), U+^v(0,0) | O(1,0), U+^v(1,0) | O(2,0) | O(3,0)\n"
       "sod O(-1,1) | O(0,1) | O(1,1), U+^v(1,1) | O(2,1), U+^v(2,1) | O(3,1) | O(4,1)\n"
       "sod O(0,2) | O(1,2) | O(2,2), U+^v(2,2) | O(3,2), U+^v(3,2) | O(4,2) | O(5,2)\n"},
      {"d4_minus",
       "space E_D4\n"
       "ambient blowup conormal=(1,1) discrepancy=3 dim=10\n"
       "embed pi-\n"
       "sod ?D(X-)\n"
       "sod O(0,-3) | O(0,-2) | O(0,-1), U-^v(0,-1) | O(0,0), U-^v(0,0) | O(0,1) | O(0,2)\n"
       "sod O(1,-2) | O(1,-1) | O(1,0), U-^v(1,0) | O(1,1), U-^v(1,1) | O(1,2) | O(1,3)\n"
       "sod O(2,-1) | O(2,0) | O(2,1), U-^v(2,1) | O(2,2), U-^v(2,2) | O(2,3) | O(2,4)\n"},
      {"g2_y",
       "space R\n"
       "ambient blowup conormal=(1,1) discrepancy=2 dim=8\n"
       "embed pi\n"
       "sod ?D(Y)\n"
       "sod O(-2,0) | O(-1,0) | O(0,0), S | O(1,0) | O(2,0)\n"
       "sod O(-1,1) | O(0,1) | O(1,1), S(1,1) | O(2,1) | O(3,1)\n"},
      {"g2_yprime",
       "space R\n"
       "ambient blowup conormal=(1,1) discrepancy=2 dim=8\n"
       "embed pi'\n"
       "sod ?D(Y')\n"
       "sod O(0,-2) | O(0,-1) | O(0,0), S' | O(0,1) | O(0,2)\n"
       "sod O(1,-1) | O(1,0) | O(1,1), S'(1,1) | O(1,2) | O(1,3)\n"}};
  return presets;
}

/// Status code plus JSON body.
struct Reply {
  int status = 200;
  nlohmann::json body;
};

struct Session {
  std::string id;
  std::string preset;
  SOD initial;
  SOD sod;
  std::vector<MutationStep> history;
  std::vector<SOD> states;  // states[i] precedes history[i]
  std::chrono::steady_clock::time_point created;
  std::chrono::steady_clock::time_point touched;
  std::mutex mu;
};

class Workbench {
 public:
  explicit Workbench(const Mutator& m, std::chrono::seconds idle = std::chrono::hours(2)) : m_(m), idle_(idle) {}

  const Mutator& mutator() const { return m_; }

  /// POST /sessions: {"preset": name} or {"custom": {space, ambient, embed, sod: [lines]}}.
  Reply create(const nlohmann::json& req) {
    std::string text;
    std::string preset;
    try {
      if (req.contains("preset")) {
        preset = req.at("preset").get<std::string>();
        auto it = workbench_presets().find(preset);
        if (it == workbench_presets().end()) return error(400, "unknown preset '" + preset + "'");
        text = it->second;
      } else if (req.contains("custom")) {
        text = custom_text(req.at("custom"));
      } else {
        return error(400, "expected 'preset' or 'custom'");
      }
    } catch (const nlohmann::json::exception& e) {
      return error(400, std::string("malformed request: ") + e.what());
    }
    SOD sod;
    try {
      sod = initial_sod(m_, parse_script(text, "session"));
    } catch (const ParseError& e) {
      Reply r = error(400, e.what());
      r.body["line"] = e.line();
      r.body["offset"] = e.offset();
      return r;
    } catch (const Error& e) {
      return error(400, e.what());
    }
    if (auto bad = m_.first_violation(sod)) {
      Reply r = error(400, "not semiorthogonal: RHom(" + bad->a + ", " + bad->b + ") = " + bad->value.to_string());
      r.body["fact"] = to_json(*bad);
      return r;
    }
    auto s = std::make_shared<Session>();
    s->id = new_id();
    s->preset = preset;
    s->initial = sod;
    s->sod = sod;
    s->created = s->touched = std::chrono::steady_clock::now();
    {
      std::lock_guard<std::mutex> lock(mu_);
      sessions_[s->id] = s;
    }
    return {201, {{"id", s->id}, {"board", board_json(m_, s->sod)}}};
  }

  Reply get(const std::string& id) {
    auto s = find(id);
    if (!s) return not_found(id);
    std::lock_guard<std::mutex> lock(s->mu);
    nlohmann::json hist = nlohmann::json::array();
    for (const auto& st : s->history) hist.push_back(to_string(st));
    return {200, {{"id", s->id}, {"board", board_json(m_, s->sod)}, {"history", hist}}};
  }

  /// Candidate moves, each checked by applying it.
  Reply moves(const std::string& id) {
    auto s = find(id);
    if (!s) return not_found(id);
    std::lock_guard<std::mutex> lock(s->mu);
    nlohmann::json legal = nlohmann::json::array();
    nlohmann::json blocked = nlohmann::json::array();
    for (const auto& step : candidates(s->sod)) {
      try {
        const StepResult r = m_.apply(s->sod, step);
        nlohmann::json facts = nlohmann::json::array();
        for (const auto& f : r.facts) facts.push_back(to_json(f));
        legal.push_back({{"step", to_string(step)}, {"facts", facts}});
      } catch (const StepFailure& e) {
        blocked.push_back({{"step", to_string(step)}, {"reason", e.what()}, {"fact", to_json(e.fact())}});
      } catch (const Error& e) {
        blocked.push_back({{"step", to_string(step)}, {"reason", e.what()}, {"fact", nullptr}});
      }
    }
    return {200, {{"legal", legal}, {"blocked", blocked}}};
  }

  /// POST /sessions/{id}/steps: {"step": "exchange 2"}.
  Reply step(const std::string& id, const nlohmann::json& req) {
    auto s = find(id);
    if (!s) return not_found(id);
    MutationStep st;
    try {
      st = parse_step(req.at("step").get<std::string>());
    } catch (const nlohmann::json::exception& e) {
      return error(400, std::string("malformed request: ") + e.what());
    } catch (const ParseError& e) {
      Reply r = error(400, e.what());
      r.body["offset"] = e.offset();
      return r;
    }
    std::lock_guard<std::mutex> lock(s->mu);
    try {
      StepResult r = m_.apply(s->sod, st);
      s->states.push_back(s->sod);
      s->history.push_back(st);
      s->sod = std::move(r.sod);
      nlohmann::json facts = nlohmann::json::array();
      for (const auto& f : r.facts) facts.push_back(to_json(f));
      return {200, {{"board", board_json(m_, s->sod)}, {"checked_facts", facts}}};
    } catch (const StepFailure& e) {
      Reply r = error(409, e.what());
      r.body["fact"] = to_json(e.fact());
      return r;
    } catch (const Error& e) {
      Reply r = error(409, e.what());
      r.body["fact"] = nullptr;
      return r;
    }
  }

  Reply undo(const std::string& id) {
    auto s = find(id);
    if (!s) return not_found(id);
    std::lock_guard<std::mutex> lock(s->mu);
    if (s->history.empty()) return error(409, "nothing to undo");
    s->sod = s->states.back();
    s->states.pop_back();
    s->history.pop_back();
    return {200, {{"board", board_json(m_, s->sod)}}};
  }

  /// History as a replayable script plus its certificate.
  Reply certificate(const std::string& id) {
    auto s = find(id);
    if (!s) return not_found(id);
    std::lock_guard<std::mutex> lock(s->mu);
    const std::string text = script_text(s->initial.space, s->initial.ctx, s->initial.embed, s->initial, s->history);
    const Script sc = parse_script(text, s->preset.empty() ? "session-" + s->id : s->preset);
    return {200, {{"script", text}, {"certificate", run_script(m_, sc)}}};
  }

  std::size_t size() {
    std::lock_guard<std::mutex> lock(mu_);
    return sessions_.size();
  }

  /// Drop sessions idle for longer than the limit.
  void expire() {
    const auto now = std::chrono::steady_clock::now();
    std::lock_guard<std::mutex> lock(mu_);
    for (auto it = sessions_.begin(); it != sessions_.end();) {
      std::unique_lock<std::mutex> sl(it->second->mu, std::try_to_lock);
      if (sl.owns_lock() && now - it->second->touched > idle_) {
        sl.unlock();
        it = sessions_.erase(it);
      } else {
        ++it;
      }
    }
  }

  /// Moves offered to the user: transports, adjacent exchanges, mutations of the unknown block,
  /// object swaps and registered rewrites that match.
  std::vector<MutationStep> candidates(const SOD& sod) const {
    using K = MutationStep::Kind;
    std::vector<MutationStep> out;
    const int n = static_cast<int>(sod.blocks.size());
    int unknown = -1;
    for (int i = 0; i < n; ++i) {
      if (sod.blocks[static_cast<std::size_t>(i)].is_unknown()) unknown = i;
    }
    if (sod.serre_twist() != 0) {
      const int right = unknown < 0 ? n : n - 1 - unknown;
      const int left = unknown < 0 ? n : unknown;
      for (int c = 1; c <= right; ++c) out.push_back({K::SerreRL, {c}, {}});
      for (int c = 1; c <= left; ++c) out.push_back({K::SerreLR, {c}, {}});
    }
    for (int i = 0; i + 1 < n; ++i) {
      const bool ui = i == unknown;
      const bool uj = i + 1 == unknown;
      if (!ui && !uj) out.push_back({K::Exchange, {i}, {}});
      if (uj) out.push_back({K::Left, {i}, {}});
      if (ui) out.push_back({K::Right, {i}, {}});
    }
    for (int b = 0; b < n; ++b) {
      const Block& blk = sod.blocks[static_cast<std::size_t>(b)];
      if (blk.is_unknown()) continue;
      for (int i = 0; i + 1 < static_cast<int>(blk.objects.size()); ++i) {
        out.push_back({K::SwapObjects, {b, i}, {}});
        for (const auto& [name, rule] : m_.calculus().catalog().sequences) {
          if (rule.space != sod.space) continue;
          if (m_.rule_result(sod, rule.name, blk.objects[static_cast<std::size_t>(i)], blk.objects[static_cast<std::size_t>(i) + 1]))
            out.push_back({K::Rewrite, {b, i}, name});
        }
      }
    }
    return out;
  }

 private:
  const Mutator& m_;
  std::chrono::seconds idle_;
  std::mutex mu_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::mt19937_64 rng_{std::random_device{}()};

  std::shared_ptr<Session> find(const std::string& id) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) return nullptr;
    it->second->touched = std::chrono::steady_clock::now();
    return it->second;
  }

  std::string new_id() {
    std::lock_guard<std::mutex> lock(mu_);
    std::ostringstream os;
    os << std::hex << std::setfill('0') << std::setw(16) << rng_();
    return os.str();
  }

  static std::string custom_text(const nlohmann::json& c) {
    std::string t = "space " + c.at("space").get<std::string>() + "\n";
    if (c.contains("ambient")) t += "ambient " + c.at("ambient").get<std::string>() + "\n";
    if (c.contains("embed")) t += "embed " + c.at("embed").get<std::string>() + "\n";
    for (const auto& line : c.at("sod")) t += "sod " + line.get<std::string>() + "\n";
    return t;
  }

  static Reply error(int status, const std::string& msg) { return {status, {{"error", msg}}}; }
  static Reply not_found(const std::string& id) { return error(404, "no session '" + id + "'"); }
};

/// Register the /v1 routes on a server.
inline void mount_workbench(httplib::Server& srv, Workbench& wb, const std::string& origin = "*") {
  const auto send = [origin](httplib::Response& res, const Reply& r) {
    res.status = r.status;
    res.set_header("Access-Control-Allow-Origin", origin);
    res.set_content(r.body.dump(), "application/json");
  };
  const auto body = [](const httplib::Request& req, nlohmann::json& out) {
    try {
      out = req.body.empty() ? nlohmann::json::object() : nlohmann::json::parse(req.body);
      return true;
    } catch (const nlohmann::json::exception&) {
      return false;
    }
  };
  srv.Options(R"(/v1/.*)", [origin](const httplib::Request&, httplib::Response& res) {
    res.status = 204;
    res.set_header("Access-Control-Allow-Origin", origin);
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
  });
  srv.Post("/v1/sessions", [&wb, send, body](const httplib::Request& req, httplib::Response& res) {
    wb.expire();
    nlohmann::json j;
    if (!body(req, j)) return send(res, {400, {{"error", "request body is not JSON"}}});
    send(res, wb.create(j));
  });
  srv.Get(R"(/v1/sessions/([0-9a-f]+))", [&wb, send](const httplib::Request& req, httplib::Response& res) {
    send(res, wb.get(req.matches[1]));
  });
  srv.Get(R"(/v1/sessions/([0-9a-f]+)/moves)", [&wb, send](const httplib::Request& req, httplib::Response& res) {
    send(res, wb.moves(req.matches[1]));
  });
  srv.Post(R"(/v1/sessions/([0-9a-f]+)/steps)", [&wb, send, body](const httplib::Request& req, httplib::Response& res) {
    nlohmann::json j;
    if (!body(req, j)) return send(res, {400, {{"error", "request body is not JSON"}}});
    send(res, wb.step(req.matches[1], j));
  });
  srv.Post(R"(/v1/sessions/([0-9a-f]+)/undo)", [&wb, send](const httplib::Request& req, httplib::Response& res) {
    send(res, wb.undo(req.matches[1]));
  });
  srv.Get(R"(/v1/sessions/([0-9a-f]+)/certificate)", [&wb, send](const httplib::Request& req, httplib::Response& res) {
    send(res, wb.certificate(req.matches[1]));
  });
  srv.set_error_handler([origin](const httplib::Request&, httplib::Response& res) {
    if (!res.body.empty()) return;
    res.set_header("Access-Control-Allow-Origin", origin);
    res.set_content(nlohmann::json{{"error", "not found"}}.dump(), "application/json");
  });
}

}  // namespace roofflop
