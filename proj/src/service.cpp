#include "vst/service.hpp"

#include <httplib.h>

#include <atomic>
#include <filesystem>
#include <map>
#include <mutex>
#include <random>
#include <stop_token>
#include <thread>

#include "json_codec.hpp"
#include "vst/error.hpp"
#include "vst/hash.hpp"
#include "vst/session_store.hpp"

namespace vst {

namespace {

using json_codec::json;

enum class Status { Matching, Ready, Failed };

std::string_view status_name(Status s) {
  switch (s) {
    case Status::Matching: return "matching";
    case Status::Ready: return "ready";
    case Status::Failed: return "failed";
  }
  return "failed";
}

// Malformed request bodies; answered with 400.
struct BadRequest : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Cancelled {};

struct SessionEntry {
  std::string id;
  std::string source_name;
  std::string target_name;
  std::atomic<double> progress{0.0};

  std::mutex mutex;  // guards the fields below
  Status status = Status::Matching;
  std::string error;
  std::optional<TransferSession> session;
  std::optional<AnalyzedDocument> source_analysis;
  std::optional<AnalyzedDocument> target_analysis;

  // Declared last so it is joined before the fields it writes are destroyed.
  std::jthread worker;
};

using EntryPtr = std::shared_ptr<SessionEntry>;

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedXml:
    case ErrorCode::UnsupportedRoot:
    case ErrorCode::EmptyDocument: return 400;
    case ErrorCode::IoError: return 500;
    default: return 422;
  }
}

json error_body(std::string_view code, const std::string& message) {
  return json{{"error", {{"code", code}, {"message", message}}}};
}

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

json parse_body(const httplib::Request& req) {
  try {
    json j = json::parse(req.body);
    if (!j.is_object()) throw BadRequest("request body must be a JSON object");
    return j;
  } catch (const json::exception& e) {
    throw BadRequest(std::string("request body is not valid JSON: ") + e.what());
  }
}

const json& body_field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw BadRequest(std::string("missing field ") + key);
  return *it;
}

std::string string_field(const json& j, const char* key) {
  const json& v = body_field(j, key);
  if (!v.is_string()) throw BadRequest(std::string(key) + " must be a string");
  return v.get<std::string>();
}

std::vector<std::string> string_list(const json& j, const char* key) {
  const json& v = body_field(j, key);
  if (!v.is_array()) throw BadRequest(std::string(key) + " must be an array of ids");
  std::vector<std::string> out;
  for (const json& item : v) {
    if (!item.is_string()) throw BadRequest(std::string(key) + " must be an array of ids");
    out.push_back(item.get<std::string>());
  }
  return out;
}

json bbox_json(const BBox& b) {
  return json{{"x", b.x}, {"y", b.y}, {"width", b.width}, {"height", b.height}};
}

json document_view(const DesignDocument& doc) {
  json elements = json::array();
  for (const Element& e : doc.elements) {
    elements.push_back({{"id", e.id},
                        {"kind", element_kind_name(e.kind)},
                        {"tag", e.tag},
                        {"bbox", bbox_json(e.bbox)},
                        {"style", json_codec::style_to_json(e.style)},
                        {"markup", serialize_element(e)}});
  }
  json warnings = json::array();
  for (const ParseWarning& w : doc.warnings) {
    warnings.push_back({{"locator", w.locator}, {"code", warning_code_name(w.code)}, {"detail", w.detail}});
  }
  return json{{"viewBox", bbox_json(doc.view_box)}, {"elements", elements}, {"warnings", warnings}};
}

json scores_json(const std::optional<DimensionScores>& s) {
  if (!s) return nullptr;
  return json{{"color", s->color},
              {"shape", s->shape},
              {"size", s->size},
              {"text", s->text ? json(*s->text) : json(nullptr)},
              {"structure", s->structure},
              {"combined", s->combined}};
}

json groups_json(const std::vector<AttributeGroup>& groups) {
  json out = json::array();
  for (const AttributeGroup& g : groups) {
    out.push_back({{"attribute", attribute_name(g.attribute)},
                   {"value", json_codec::value_to_json(g.attribute, g.value)},
                   {"elements", g.element_ids},
                   {"states", {{"copied", g.states.copied}, {"original", g.states.original}, {"custom", g.states.custom}}}});
  }
  return out;
}

json script_json(const TransferSession& s) {
  json out = json::array();
  for (const Element& t : s.target->elements) {
    for (AttributeName a : kAllAttributes) {
      AttributeState st = s.script.get(t.id, a);
      if (st.kind != StateKind::Original) out.push_back(json_codec::state_to_json(t.id, a, st));
    }
  }
  return out;
}

json handle_json(const SessionEntry& e) {
  json j{{"sessionId", e.id},
         {"status", status_name(e.status)},
         {"progress", e.status == Status::Ready ? 1.0 : e.progress.load()},
         {"sourceName", e.source_name},
         {"targetName", e.target_name}};
  if (e.status == Status::Failed) j["error"] = e.error;
  return j;
}

// Caller holds e.mutex.
json full_view(const SessionEntry& e) {
  json view = handle_json(e);
  if (e.status != Status::Ready) return view;
  const TransferSession& s = *e.session;

  std::vector<TransferWarning> warnings;
  DesignDocument output = apply_transfer(s, &warnings);

  json match = json::array();
  for (const MatchEntry& m : s.correspondence.base) {
    const std::string& effective = s.correspondence.effective(m.target);
    match.push_back({{"target", m.target},
                     {"source", effective},
                     {"baseSource", m.source},
                     {"overridden", effective != m.source},
                     {"scores", scores_json(m.scores)}});
  }
  json overrides = json::array();
  for (const Override& o : s.correspondence.overrides) overrides.push_back({{"target", o.target}, {"source", o.source}});
  json output_warnings = json::array();
  for (const TransferWarning& w : warnings) {
    output_warnings.push_back({{"target", w.target}, {"attribute", attribute_name(w.attribute)}, {"source", w.source}});
  }

  view["source"] = document_view(*s.source);
  view["target"] = document_view(*s.target);
  view["output"] = document_view(output);
  view["outputWarnings"] = output_warnings;
  view["match"] = match;
  view["overrides"] = overrides;
  view["script"] = script_json(s);
  view["groups"] = groups_json(group_attribute_values(s, output, std::nullopt, GroupFilter::All));
  view["modifiedGroups"] = groups_json(group_attribute_values(s, output, std::nullopt, GroupFilter::ModifiedOnly));
  view["weights"] = json_codec::weights_to_json(s.weights);
  view["graphConfig"] = json_codec::graph_config_to_json(s.graph_config);
  return view;
}

std::vector<std::string> in_paint_order(const DesignDocument& doc, const std::set<std::string>& ids) {
  std::vector<std::string> out;
  for (const Element& e : doc.elements) {
    if (ids.count(e.id)) out.push_back(e.id);
  }
  return out;
}

StateKind parse_state(const std::string& text) {
  auto kind = parse_state_kind(text);
  if (!kind) throw Error(ErrorCode::InvalidValue, "unknown state " + text);
  return *kind;
}

AttributeName parse_attribute(const std::string& text) {
  auto attr = parse_attribute_name(text);
  if (!attr) throw Error(ErrorCode::UnknownAttribute, "unknown attribute " + text);
  return *attr;
}

TransferSession apply_script_op(const TransferSession& s, const json& op) {
  if (!op.is_object()) throw BadRequest("ops entries must be objects");
  const std::string name = string_field(op, "op");
  if (name == "copy_all") return copy_all(s);
  if (name == "copy_none") return copy_none(s);
  if (name == "set_state") {
    std::vector<std::string> targets = string_list(op, "targets");
    AttributeName attr = parse_attribute(string_field(op, "attribute"));
    AttributeState state{parse_state(string_field(op, "state")), std::nullopt};
    if (op.contains("value")) {
      if (state.kind != StateKind::Custom) throw BadRequest("value is only allowed with state custom");
      state.value = json_codec::value_from_json(attr, op["value"]);
    } else if (state.kind == StateKind::Custom) {
      throw BadRequest("state custom requires a value");
    }
    return set_state(s, targets, attr, state);
  }
  throw BadRequest("unknown op " + name);
}

struct Upload {
  std::string source;
  std::string target;
  std::string source_name = "source.svg";
  std::string target_name = "target.svg";
  std::optional<json> weights;
  std::optional<json> graph_config;
  std::optional<std::string> session;
};

std::optional<json> json_part(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::exception&) {
    throw BadRequest(std::string(what) + " is not valid JSON");
  }
}

Upload read_upload(const httplib::Request& req) {
  Upload up;
  if (req.is_multipart_form_data()) {
    if (!req.has_file("source") || !req.has_file("target")) throw BadRequest("source and target parts are required");
    auto src = req.get_file_value("source");
    auto tgt = req.get_file_value("target");
    up.source = src.content;
    up.target = tgt.content;
    if (!src.filename.empty()) up.source_name = src.filename;
    if (!tgt.filename.empty()) up.target_name = tgt.filename;
    if (req.has_file("weights")) up.weights = json_part(req.get_file_value("weights").content, "weights");
    if (req.has_file("graphConfig")) {
      up.graph_config = json_part(req.get_file_value("graphConfig").content, "graphConfig");
    }
    if (req.has_file("session")) up.session = req.get_file_value("session").content;
    return up;
  }
  json body = parse_body(req);
  up.source = string_field(body, "source");
  up.target = string_field(body, "target");
  if (body.contains("sourceName")) up.source_name = string_field(body, "sourceName");
  if (body.contains("targetName")) up.target_name = string_field(body, "targetName");
  if (body.contains("weights")) up.weights = body["weights"];
  if (body.contains("graphConfig")) up.graph_config = body["graphConfig"];
  if (body.contains("session")) up.session = string_field(body, "session");
  return up;
}

// Parses one uploaded document; the error names which one failed.
std::shared_ptr<const DesignDocument> parse_upload(const std::string& bytes, const char* which) {
  try {
    return std::make_shared<const DesignDocument>(parse_svg(bytes));
  } catch (const Error& e) {
    throw Error(e.code(), std::string(which) + ": " + e.what());
  }
}

}  // namespace

struct SessionService::Impl {
  ServiceOptions options;
  httplib::Server server;
  bool bound = false;
  std::atomic<bool> run_entered{false};
  std::atomic<bool> stop_requested{false};

  std::mutex registry_mutex;
  std::map<std::string, EntryPtr> sessions;
  std::uint64_t next_serial = 1;
  std::uint64_t id_salt = std::random_device{}();

  explicit Impl(ServiceOptions opts) : options(std::move(opts)) {
    const int threads = options.threads;
    server.set_keep_alive_timeout(2);
    server.new_task_queue = [threads] { return new httplib::ThreadPool(static_cast<size_t>(threads)); };
    server.set_default_headers({{"Access-Control-Allow-Origin", options.cors_origin}});
    // httplib also sets SO_REUSEPORT, which would let a second server share
    // an occupied port instead of failing to bind.
    server.set_socket_options([](socket_t sock) {
      int yes = 1;
      setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
    });
    routes();
  }

  ~Impl() {
    server.stop();
    std::lock_guard lock(registry_mutex);
    sessions.clear();
  }

  std::string new_id() {
    std::lock_guard lock(registry_mutex);
    const std::uint64_t serial = next_serial++;
    return "s" + std::to_string(serial) + "-" + hash_to_hex(fnv1a(std::to_string(serial), id_salt)).substr(0, 8);
  }

  EntryPtr find(const std::string& id) {
    std::lock_guard lock(registry_mutex);
    auto it = sessions.find(id);
    return it == sessions.end() ? nullptr : it->second;
  }

  void insert(EntryPtr entry) {
    std::lock_guard lock(registry_mutex);
    sessions.emplace(entry->id, std::move(entry));
  }

  // Runs `fn` with the session locked and ready, translating errors into
  // HTTP statuses.
  template <typename Fn>
  void with_session(const httplib::Request& req, httplib::Response& res, bool require_ready, Fn fn) {
    try {
      EntryPtr e = find(req.matches[1]);
      if (!e) {
        send_json(res, 404, error_body("UnknownSession", "no session " + std::string(req.matches[1])));
        return;
      }
      std::lock_guard lock(e->mutex);
      if (require_ready && e->status != Status::Ready) {
        send_json(res, 409, error_body("NotReady", "session is " + std::string(status_name(e->status))));
        return;
      }
      fn(*e);
    } catch (const BadRequest& ex) {
      send_json(res, 400, error_body("BadRequest", ex.what()));
    } catch (const Error& ex) {
      send_json(res, http_status(ex.code()), error_body(error_code_name(ex.code()), ex.what()));
    }
  }

  void start_matching(const EntryPtr& entry, std::shared_ptr<const DesignDocument> src,
                      std::shared_ptr<const DesignDocument> tgt, SimilarityWeights weights, GraphConfig cfg) {
    SessionEntry* e = entry.get();
    e->worker = std::jthread([e, src = std::move(src), tgt = std::move(tgt), weights, cfg](std::stop_token stop) {
      try {
        AnalyzedDocument sa = analyze(*src, cfg);
        AnalyzedDocument ta = analyze(*tgt, cfg);
        Correspondence c = compute_correspondence(sa, ta, weights, [&](double p) {
          if (stop.stop_requested()) throw Cancelled{};
          e->progress = p;
        });
        TransferSession s;
        s.source = src;
        s.target = tgt;
        s.correspondence = std::move(c);
        s.weights = weights;
        s.graph_config = cfg;
        s.source_path = e->source_name;
        s.target_path = e->target_name;
        std::lock_guard lock(e->mutex);
        e->session = std::move(s);
        e->source_analysis = std::move(sa);
        e->target_analysis = std::move(ta);
        e->status = Status::Ready;
        e->progress = 1.0;
      } catch (const Cancelled&) {
      } catch (const std::exception& ex) {
        std::lock_guard lock(e->mutex);
        e->status = Status::Failed;
        e->error = ex.what();
      }
    });
  }

  void create(const httplib::Request& req, httplib::Response& res) {
    try {
      Upload up = read_upload(req);
      SimilarityWeights weights;
      GraphConfig cfg;
      try {
        if (up.weights) weights = json_codec::weights_from_json(*up.weights);
        if (up.graph_config) cfg = json_codec::graph_config_from_json(*up.graph_config);
      } catch (const Error& ex) {
        throw BadRequest(ex.what());
      }
      auto src = parse_upload(up.source, "source");
      auto tgt = parse_upload(up.target, "target");

      auto entry = std::make_shared<SessionEntry>();
      entry->id = new_id();
      entry->source_name = up.source_name;
      entry->target_name = up.target_name;
      insert(entry);
      start_matching(entry, std::move(src), std::move(tgt), weights, cfg);
      std::lock_guard lock(entry->mutex);
      send_json(res, 201, handle_json(*entry));
    } catch (const BadRequest& ex) {
      send_json(res, 400, error_body("BadRequest", ex.what()));
    } catch (const Error& ex) {
      send_json(res, http_status(ex.code()), error_body(error_code_name(ex.code()), ex.what()));
    }
  }

  void import(const httplib::Request& req, httplib::Response& res) {
    try {
      Upload up = read_upload(req);
      if (!up.session) throw BadRequest("session part is required");
      auto src = parse_upload(up.source, "source");
      auto tgt = parse_upload(up.target, "target");
      TransferSession s = restore_session(*up.session, src, tgt);

      auto entry = std::make_shared<SessionEntry>();
      entry->id = new_id();
      entry->source_name = s.source_path;
      entry->target_name = s.target_path;
      entry->source_analysis = analyze(*s.source, s.graph_config);
      entry->target_analysis = analyze(*s.target, s.graph_config);
      entry->session = std::move(s);
      entry->status = Status::Ready;
      entry->progress = 1.0;
      insert(entry);
      std::lock_guard lock(entry->mutex);
      send_json(res, 201, full_view(*entry));
    } catch (const BadRequest& ex) {
      send_json(res, 400, error_body("BadRequest", ex.what()));
    } catch (const Error& ex) {
      send_json(res, http_status(ex.code()), error_body(error_code_name(ex.code()), ex.what()));
    }
  }

  const AnalyzedDocument& selection_document(SessionEntry& e, const json& body) {
    std::string which = body.contains("document") ? string_field(body, "document") : "target";
    if (which == "target") return *e.target_analysis;
    if (which == "source") return *e.source_analysis;
    throw BadRequest("document must be source or target");
  }

  void routes() {
    const std::string session = "/sessions/([^/]+)";

    server.Options(".*", [this](const httplib::Request&, httplib::Response& res) {
      res.set_header("Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS");
      res.set_header("Access-Control-Allow-Headers", "Content-Type");
      res.status = 204;
    });

    server.Post("/sessions", [this](const httplib::Request& req, httplib::Response& res) { create(req, res); });
    server.Post("/sessions/import", [this](const httplib::Request& req, httplib::Response& res) { import(req, res); });

    server.Get(session, [this](const httplib::Request& req, httplib::Response& res) {
      with_session(req, res, false, [&](SessionEntry& e) { send_json(res, 200, full_view(e)); });
    });

    server.Delete(session, [this](const httplib::Request& req, httplib::Response& res) {
      EntryPtr e;
      {
        std::lock_guard lock(registry_mutex);
        auto it = sessions.find(req.matches[1]);
        if (it != sessions.end()) {
          e = std::move(it->second);
          sessions.erase(it);
        }
      }
      if (!e) {
        send_json(res, 404, error_body("UnknownSession", "no session " + std::string(req.matches[1])));
        return;
      }
      e->worker.request_stop();
      res.status = 204;
    });

    server.Post(session + "/retarget", [this](const httplib::Request& req, httplib::Response& res) {
      with_session(req, res, true, [&](SessionEntry& e) {
        json body = parse_body(req);
        e.session = transfer_source_style(*e.session, string_list(body, "targets"), string_field(body, "source"));
        send_json(res, 200, full_view(e));
      });
    });

    server.Post(session + "/script", [this](const httplib::Request& req, httplib::Response& res) {
      with_session(req, res, true, [&](SessionEntry& e) {
        json body = parse_body(req);
        const json& ops = body_field(body, "ops");
        if (!ops.is_array()) throw BadRequest("ops must be an array");
        TransferSession next = *e.session;
        for (const json& op : ops) next = apply_script_op(next, op);
        e.session = std::move(next);
        send_json(res, 200, full_view(e));
      });
    });

    server.Post(session + "/selection/expand", [this](const httplib::Request& req, httplib::Response& res) {
      with_session(req, res, true, [&](SessionEntry& e) {
        json body = parse_body(req);
        const AnalyzedDocument& doc = selection_document(e, body);
        std::vector<std::string> current = string_list(body, "current");
        auto grown = expand_selection(doc, {current.begin(), current.end()}, e.session->weights);
        send_json(res, 200, json{{"selection", in_paint_order(*doc.doc, grown)}});
      });
    });

    server.Post(session + "/selection/threshold", [this](const httplib::Request& req, httplib::Response& res) {
      with_session(req, res, true, [&](SessionEntry& e) {
        json body = parse_body(req);
        const AnalyzedDocument& doc = selection_document(e, body);
        std::vector<std::string> seed = string_list(body, "seed");
        const json& tau_json = body_field(body, "tau");
        if (!tau_json.is_number()) throw BadRequest("tau must be a number");
        double tau = tau_json.get<double>();
        if (body.contains("steps")) {
          if (!body["steps"].is_number_integer()) throw BadRequest("steps must be an integer");
          tau = step_threshold(tau, body["steps"].get<int>());
        }
        if (!(tau >= 0.0 && tau <= 1.0)) throw Error(ErrorCode::InvalidValue, "tau must be within [0, 1]");
        auto picked = threshold_selection(doc, {seed.begin(), seed.end()}, tau, e.session->weights);
        send_json(res, 200, json{{"selection", in_paint_order(*doc.doc, picked)}, {"tau", tau}});
      });
    });

    server.Get(session + "/output.svg", [this](const httplib::Request& req, httplib::Response& res) {
      with_session(req, res, true, [&](SessionEntry& e) {
        res.set_content(serialize_svg(apply_transfer(*e.session)), "image/svg+xml");
      });
    });

    server.Get(session + "/matched_targets", [this](const httplib::Request& req, httplib::Response& res) {
      with_session(req, res, true, [&](SessionEntry& e) {
        if (!req.has_param("source")) throw BadRequest("source query parameter is required");
        const std::string source = req.get_param_value("source");
        auto targets = matched_targets(e.session->correspondence, source);
        send_json(res, 200, json{{"source", source}, {"targets", in_paint_order(*e.session->target, targets)}});
      });
    });

    server.Get(session + "/groups", [this](const httplib::Request& req, httplib::Response& res) {
      with_session(req, res, true, [&](SessionEntry& e) {
        std::optional<std::set<std::string>> scope;
        if (req.has_param("scope")) {
          scope.emplace();
          std::string ids = req.get_param_value("scope");
          size_t start = 0;
          while (start <= ids.size()) {
            size_t comma = ids.find(',', start);
            if (comma == std::string::npos) comma = ids.size();
            if (comma > start) scope->insert(ids.substr(start, comma - start));
            start = comma + 1;
          }
        }
        GroupFilter filter = GroupFilter::All;
        if (req.has_param("filter")) {
          std::string f = req.get_param_value("filter");
          if (f == "modified") filter = GroupFilter::ModifiedOnly;
          else if (f != "all") throw BadRequest("filter must be all or modified");
        }
        send_json(res, 200, json{{"groups", groups_json(group_attribute_values(*e.session, scope, filter))}});
      });
    });

    server.Get(session + "/session.json", [this](const httplib::Request& req, httplib::Response& res) {
      with_session(req, res, true, [&](SessionEntry& e) {
        res.set_content(session_to_json(*e.session), "application/json");
      });
    });

    server.Get(session + "/scores.csv", [this](const httplib::Request& req, httplib::Response& res) {
      with_session(req, res, true, [&](SessionEntry& e) {
        res.set_content(score_matrix_csv(*e.source_analysis, *e.target_analysis, e.session->weights), "text/csv");
      });
    });
  }
};

SessionService::SessionService(ServiceOptions options) : impl_(std::make_unique<Impl>(std::move(options))) {}

SessionService::~SessionService() = default;

int SessionService::bind(const std::string& host, int port) {
  if (!impl_->options.static_dir.empty()) {
    if (!std::filesystem::is_directory(impl_->options.static_dir) ||
        !impl_->server.set_mount_point("/", impl_->options.static_dir)) {
      throw Error(ErrorCode::IoError, "static directory not found: " + impl_->options.static_dir);
    }
  }
  int bound = -1;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port(host);
  } else if (impl_->server.bind_to_port(host, port)) {
    bound = port;
  }
  if (bound < 0) throw Error(ErrorCode::IoError, "cannot bind " + host + ":" + std::to_string(port));
  impl_->bound = true;
  return bound;
}

void SessionService::run() {
  if (!impl_->bound) throw Error(ErrorCode::IoError, "service is not bound");
  impl_->run_entered = true;
  if (impl_->stop_requested) return;
  impl_->server.listen_after_bind();
}

// httplib ignores stop() until its accept loop is running, so a stop that
// races with run() waits for the loop first.
void SessionService::stop() {
  impl_->stop_requested = true;
  if (impl_->run_entered) {
    impl_->server.wait_until_ready();
    impl_->server.stop();
  }
}

}  // namespace vst
