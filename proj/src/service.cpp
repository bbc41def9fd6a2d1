#include "nextviz/service.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <fstream>
#include <sstream>

#include <httplib.h>

#include "nextviz/errors.hpp"

namespace nextviz {

using json_io::Json;

namespace {

struct HttpError {
  int status;
  std::string message;
};

std::int64_t wall_clock_ms() {
  using namespace std::chrono;
  return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

std::vector<std::string> split_path(std::string_view path) {
  std::vector<std::string> parts;
  std::size_t i = 0;
  while (i < path.size()) {
    const std::size_t j = path.find('/', i);
    const std::size_t end = j == std::string_view::npos ? path.size() : j;
    if (end > i) parts.emplace_back(path.substr(i, end - i));
    i = end + 1;
  }
  return parts;
}

Json parse_body(std::string_view body) {
  if (body.empty()) return Json::object();
  try {
    return Json::parse(body);
  } catch (const nlohmann::json::parse_error& e) {
    throw HttpError{400, std::string("malformed JSON body: ") + e.what()};
  }
}

std::string body_string(const Json& j, const char* name) {
  auto it = j.is_object() ? j.find(name) : j.end();
  if (it == j.end() || !it->is_string())
    throw HttpError{400, std::string("body needs a string field \"") + name + "\""};
  return it->get<std::string>();
}

template <typename T>
std::optional<T> query_number(const std::map<std::string, std::string>& q, const char* name) {
  auto it = q.find(name);
  if (it == q.end()) return std::nullopt;
  T v{};
  const auto& s = it->second;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size())
    throw HttpError{400, std::string("query parameter ") + name + " must be a non-negative integer"};
  return v;
}

Json view_payload(const std::optional<VizSpec>& view, const Dataset& ds) {
  Json j;
  if (!view) {
    j["view"] = nullptr;
    j["key"] = nullptr;
    j["data"] = nullptr;
    return j;
  }
  j["view"] = json_io::to_json(*view);
  j["key"] = canonical_key(*view);
  j["data"] = json_io::to_json(aggregate(ds, *view));
  return j;
}

Json toggles_json(const SessionContext& s) {
  Json j = Json::object();
  for (CategoryKind k : precedence_order()) {
    auto it = s.toggles.find(k);
    j[std::string(to_string(k))] = it == s.toggles.end() ? true : it->second;
  }
  return j;
}

Json envelope_ok(Json data) {
  Json j;
  j["ok"] = true;
  j["data"] = std::move(data);
  j["version"] = json_io::kProtocolVersion;
  return j;
}

Json envelope_error(int status, const std::string& message) {
  Json j;
  j["ok"] = false;
  j["error"] = Json{{"status", status}, {"message", message}};
  j["version"] = json_io::kProtocolVersion;
  return j;
}

}  // namespace

struct ExplorerService::DatasetEntry {
  std::string id;
  std::string csv;
  std::string overrides_json;
  DatasetPtr ds;
};

struct ExplorerService::SessionEntry {
  std::mutex mu;
  SessionContext ctx;
};

Json to_json(const SessionContext& s) {
  Json j;
  j["id"] = s.id;
  j["dataset"] = s.dataset_ref;
  j["view"] = s.current_view ? json_io::to_json(*s.current_view) : Json(nullptr);
  Json toggles = Json::object();
  for (const auto& [k, on] : s.toggles) toggles[std::string(to_string(k))] = on;
  j["toggles"] = std::move(toggles);
  j["starred"] = s.starred;
  Json served = Json::object();
  for (const auto& [key, spec] : s.served) served[key] = json_io::to_json(spec);
  j["served"] = std::move(served);
  j["log"] = s.log;
  return j;
}

SessionContext session_from_json(const Json& j) {
  try {
    SessionContext s;
    s.id = j.at("id").get<std::string>();
    s.dataset_ref = j.at("dataset").get<std::string>();
    if (!j.at("view").is_null()) s.current_view = json_io::spec_from_json(j.at("view"));
    for (const auto& [name, on] : j.at("toggles").items())
      s.toggles[parse_category_kind(name)] = on.get<bool>();
    for (const auto& key : j.at("starred")) s.starred.insert(key.get<std::string>());
    for (const auto& [key, spec] : j.at("served").items())
      s.served.emplace(key, json_io::spec_from_json(spec));
    for (const auto& e : j.at("log")) s.log.push_back(e);
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad session record: ") + e.what());
  }
}

ExplorerService::ExplorerService(ServiceOptions options) : options_(std::move(options)) {
  if (!options_.clock_ms) options_.clock_ms = &wall_clock_ms;
}

ExplorerService::~ExplorerService() = default;

std::string ExplorerService::add_dataset(std::string csv, std::string overrides_json) {
  LoadOptions opts;
  if (!overrides_json.empty()) opts.overrides = parse_schema_overrides(overrides_json);
  auto entry = std::make_shared<DatasetEntry>();
  entry->ds = load_csv(std::string_view(csv), opts);
  entry->csv = std::move(csv);
  entry->overrides_json = std::move(overrides_json);

  std::unique_lock lock(mu_);
  entry->id = "ds-" + std::to_string(next_dataset_++);
  datasets_.emplace(entry->id, entry);
  return entry->id;
}

DatasetPtr ExplorerService::dataset(const std::string& id) const {
  auto e = find_dataset(id);
  return e ? e->ds : nullptr;
}

std::optional<SessionContext> ExplorerService::session(const std::string& id) const {
  auto e = find_session(id);
  if (!e) return std::nullopt;
  std::lock_guard lock(e->mu);
  return e->ctx;
}

std::shared_ptr<ExplorerService::DatasetEntry> ExplorerService::find_dataset(
    const std::string& id) const {
  std::shared_lock lock(mu_);
  auto it = datasets_.find(id);
  return it == datasets_.end() ? nullptr : it->second;
}

std::shared_ptr<ExplorerService::SessionEntry> ExplorerService::find_session(
    const std::string& id) const {
  std::shared_lock lock(mu_);
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

void ExplorerService::record(SessionContext& s, std::string kind, Json payload) {
  Json event;
  event["ts"] = options_.clock_ms();
  event["session"] = s.id;
  event["kind"] = std::move(kind);
  event["payload"] = std::move(payload);
  if (options_.log_path) {
    std::lock_guard lock(log_mu_);
    std::ofstream out(*options_.log_path, std::ios::app);
    out << event.dump() << '\n';
  }
  s.log.push_back(std::move(event));
}

Response ExplorerService::handle(std::string_view method, std::string_view path,
                                 const std::map<std::string, std::string>& query,
                                 std::string_view body) {
  try {
    Json data = dispatch(method, split_path(path), query, body);
    return {200, envelope_ok(std::move(data)).dump()};
  } catch (const HttpError& e) {
    return {e.status, envelope_error(e.status, e.message).dump()};
  } catch (const UnknownColumn& e) {
    return {422, envelope_error(422, e.what()).dump()};
  } catch (const UnsupportedSpec& e) {
    return {422, envelope_error(422, e.what()).dump()};
  } catch (const ParseError& e) {
    return {400, envelope_error(400, e.what()).dump()};
  } catch (const nlohmann::json::exception& e) {
    return {400, envelope_error(400, e.what()).dump()};
  } catch (const std::exception& e) {
    return {500, envelope_error(500, e.what()).dump()};
  }
}

Json ExplorerService::dispatch(std::string_view method, const std::vector<std::string>& parts,
                               const std::map<std::string, std::string>& query,
                               std::string_view body) {
  const auto n = parts.size();
  auto route_missing = [&]() -> HttpError {
    return {404, "no route for " + std::string(method) + " /" + [&] {
                   std::string p;
                   for (std::size_t i = 0; i < n; ++i) p += (i ? "/" : "") + parts[i];
                   return p;
                 }()};
  };
  if (n == 0) throw route_missing();

  if (parts[0] == "health" && n == 1 && method == "GET") return Json{{"status", "ok"}};

  if (parts[0] == "datasets") {
    if (n == 1 && method == "POST") {
      std::string csv(body), overrides;
      const auto first = csv.find_first_not_of(" \t\r\n");
      if (first != std::string::npos && csv[first] == '{') {
        Json j = parse_body(body);
        csv = body_string(j, "csv");
        if (auto it = j.find("schema_override"); it != j.end() && !it->is_null())
          overrides = it->dump();
      }
      const std::string id = add_dataset(std::move(csv), std::move(overrides));
      Json out;
      out["id"] = id;
      out["schema"] = json_io::schema_json(*dataset(id));
      return out;
    }
    if (n >= 2 && n <= 3 && method == "GET" && (n == 2 || parts[2] == "schema")) {
      auto e = find_dataset(parts[1]);
      if (!e) throw HttpError{404, "unknown dataset " + parts[1]};
      Json out;
      out["id"] = e->id;
      out["schema"] = json_io::schema_json(*e->ds);
      return out;
    }
    throw route_missing();
  }

  if (parts[0] != "sessions") throw route_missing();

  if (n == 1) {
    if (method != "POST") throw route_missing();
    const Json j = parse_body(body);
    const std::string ds_id = body_string(j, "dataset");
    if (!find_dataset(ds_id)) throw HttpError{404, "unknown dataset " + ds_id};
    auto entry = std::make_shared<SessionEntry>();
    {
      std::unique_lock lock(mu_);
      entry->ctx.id = "s-" + std::to_string(next_session_++);
      entry->ctx.dataset_ref = ds_id;
      sessions_.emplace(entry->ctx.id, entry);
    }
    std::lock_guard lock(entry->mu);
    record(entry->ctx, "session_created", Json{{"dataset", ds_id}});
    return Json{{"session", entry->ctx.id}, {"dataset", ds_id}};
  }

  auto entry = find_session(parts[1]);
  if (!entry) throw HttpError{404, "unknown session " + parts[1]};
  std::lock_guard lock(entry->mu);
  SessionContext& s = entry->ctx;
  auto ds_entry = find_dataset(s.dataset_ref);
  if (!ds_entry) throw HttpError{404, "unknown dataset " + s.dataset_ref};
  const Dataset& ds = *ds_entry->ds;

  if (n == 2) {
    if (method != "GET") throw route_missing();
    return to_json(s);
  }
  if (n != 3) throw route_missing();
  const std::string& op = parts[2];

  if (op == "view") {
    if (method == "GET") return view_payload(s.current_view, ds);
    if (method != "PUT") throw route_missing();
    const Json j = parse_body(body);
    s.current_view = json_io::view_from_request(j.is_object() && j.contains("view") ? j["view"] : j, ds);
    record(s, "view_set",
           Json{{"view", s.current_view ? json_io::to_json(*s.current_view) : Json(nullptr)}});
    return view_payload(s.current_view, ds);
  }

  if (op == "recommendations") {
    if (method != "GET") throw route_missing();
    RecommendConfig config = options_.defaults;
    if (auto k = query_number<std::size_t>(query, "k")) {
      if (*k == 0) throw HttpError{400, "k must be positive"};
      config.k = *k;
    }
    if (auto cap = query_number<std::size_t>(query, "cardinality_cap"))
      config.lattice.cardinality_cap = *cap;
    if (auto seed = query_number<std::uint64_t>(query, "order_seed")) config.order_seed = *seed;
    if (auto it = query.find("metric"); it != query.end())
      config.scoring.metric = parse_correlation_metric(it->second);
    if (auto it = query.find("similarity"); it != query.end()) {
      if (it->second != "asc" && it->second != "desc")
        throw HttpError{400, "similarity must be asc or desc"};
      config.similarity_descending = it->second == "desc";
    }
    Mode mode = Mode::categorized;
    if (auto it = query.find("mode"); it != query.end()) mode = parse_mode(it->second);
    const std::uint64_t seed = query_number<std::uint64_t>(query, "seed").value_or(0);
    bool with_data = true;
    if (auto it = query.find("data"); it != query.end()) with_data = it->second != "0";

    for (const auto& [kind, on] : s.toggles)
      if (!on) config.disabled.push_back(kind);

    RecommendationSet set = recommend(s.current_view, ds, config);
    if (mode == Mode::baseline) set = flatten_baseline(set, seed);

    std::size_t count = 0;
    for (const auto& cat : set.categories)
      for (const auto& item : cat.items) {
        s.served.emplace(item.key, item.spec);
        ++count;
      }
    record(s, "recommendations_served",
           Json{{"mode", std::string(to_string(mode))}, {"k", config.k}, {"items", count}});
    return json_io::to_json(set, with_data ? &ds : nullptr);
  }

  if (method != "POST") throw route_missing();
  const Json j = parse_body(body);

  if (op == "promote") {
    const std::string key = body_string(j, "key");
    auto it = s.served.find(key);
    if (it == s.served.end()) throw HttpError{409, "key was never served to this session"};
    s.current_view = it->second;
    record(s, "promote", Json{{"key", key}});
    return view_payload(s.current_view, ds);
  }

  if (op == "star") {
    const std::string key = body_string(j, "key");
    if (!s.served.count(key)) throw HttpError{409, "key was never served to this session"};
    bool starred = true;
    if (auto it = j.find("starred"); it != j.end()) {
      if (!it->is_boolean()) throw HttpError{400, "starred must be a boolean"};
      starred = it->get<bool>();
    }
    if (starred) {
      s.starred.insert(key);
    } else {
      s.starred.erase(key);
    }
    record(s, starred ? "star" : "unstar", Json{{"key", key}});
    return Json{{"starred", s.starred}};
  }

  if (op == "toggle-category") {
    const CategoryKind kind = parse_category_kind(body_string(j, "category"));
    auto it = s.toggles.find(kind);
    const bool current = it == s.toggles.end() ? true : it->second;
    bool next = !current;
    if (auto e = j.find("enabled"); e != j.end()) {
      if (!e->is_boolean()) throw HttpError{400, "enabled must be a boolean"};
      next = e->get<bool>();
    }
    s.toggles[kind] = next;
    record(s, "toggle_category",
           Json{{"category", std::string(to_string(kind))}, {"enabled", next}});
    return Json{{"toggles", toggles_json(s)}};
  }

  throw route_missing();
}

Json ExplorerService::snapshot() const {
  std::shared_lock lock(mu_);
  Json j;
  j["version"] = json_io::kProtocolVersion;
  j["next_dataset"] = next_dataset_;
  j["next_session"] = next_session_;
  Json ds = Json::array();
  for (const auto& [id, e] : datasets_)
    ds.push_back(Json{{"id", id}, {"csv", e->csv}, {"schema_override", e->overrides_json}});
  j["datasets"] = std::move(ds);
  Json ss = Json::array();
  for (const auto& [id, e] : sessions_) {
    std::lock_guard session_lock(e->mu);
    ss.push_back(to_json(e->ctx));
  }
  j["sessions"] = std::move(ss);
  return j;
}

void ExplorerService::restore(const Json& snap) {
  std::map<std::string, std::shared_ptr<DatasetEntry>> datasets;
  std::map<std::string, std::shared_ptr<SessionEntry>> sessions;
  std::uint64_t next_dataset = 1, next_session = 1;
  try {
    next_dataset = snap.at("next_dataset").get<std::uint64_t>();
    next_session = snap.at("next_session").get<std::uint64_t>();
    for (const auto& d : snap.at("datasets")) {
      auto e = std::make_shared<DatasetEntry>();
      e->id = d.at("id").get<std::string>();
      e->csv = d.at("csv").get<std::string>();
      e->overrides_json = d.at("schema_override").get<std::string>();
      LoadOptions opts;
      if (!e->overrides_json.empty()) opts.overrides = parse_schema_overrides(e->overrides_json);
      e->ds = load_csv(std::string_view(e->csv), opts);
      datasets.emplace(e->id, std::move(e));
    }
    for (const auto& s : snap.at("sessions")) {
      auto e = std::make_shared<SessionEntry>();
      e->ctx = session_from_json(s);
      if (!datasets.count(e->ctx.dataset_ref))
        throw ParseError("session " + e->ctx.id + " references a missing dataset");
      sessions.emplace(e->ctx.id, std::move(e));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad snapshot: ") + e.what());
  }
  std::unique_lock lock(mu_);
  datasets_ = std::move(datasets);
  sessions_ = std::move(sessions);
  next_dataset_ = next_dataset;
  next_session_ = next_session;
}

void ExplorerService::save_snapshot(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write snapshot " + path);
  out << snapshot().dump(2) << '\n';
}

void ExplorerService::load_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read snapshot " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    restore(Json::parse(buf.str()));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("bad snapshot: ") + e.what());
  }
}

namespace {
std::atomic<httplib::Server*> g_server{nullptr};
}

bool run_server(ExplorerService& svc, const std::string& host, int port) {
  httplib::Server server;
  auto handler = [&svc](const httplib::Request& req, httplib::Response& res) {
    std::map<std::string, std::string> query;
    for (const auto& [k, v] : req.params) query.emplace(k, v);
    Response r = svc.handle(req.method, req.path, query, req.body);
    res.status = r.status;
    res.set_content(r.body, "application/json");
  };
  server.Get(".*", handler);
  server.Post(".*", handler);
  server.Put(".*", handler);
  server.Delete(".*", handler);
  server.Patch(".*", handler);
  g_server = &server;
  const bool ok = server.listen(host, port);
  g_server = nullptr;
  return ok;
}

void stop_server() {
  if (auto* s = g_server.load()) s->stop();
}

}  // namespace nextviz
