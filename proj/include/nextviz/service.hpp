#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "nextviz/dataset.hpp"
#include "nextviz/json_io.hpp"
#include "nextviz/orchestrator.hpp"

namespace nextviz {

/// Per-user exploration state.
struct SessionContext {
  std::string id;
  std::string dataset_ref;
  std::optional<VizSpec> current_view;
  std::map<CategoryKind, bool> toggles;  // missing means enabled
  std::set<std::string> starred;
  std::map<std::string, VizSpec> served;  // canonical key -> spec shown to this session
  std::vector<json_io::Json> log;

  bool operator==(const SessionContext&) const = default;
};

json_io::Json to_json(const SessionContext& s);
SessionContext session_from_json(const json_io::Json& j);

struct Response {
  int status = 200;
  std::string body;  // envelope JSON
};

struct ServiceOptions {
  RecommendConfig defaults;
  std::optional<std::string> log_path;  // JSON-lines event sink
  /// Timestamps for log events; replaced in tests for reproducible logs.
  std::int64_t (*clock_ms)() = nullptr;
};

/// Transport-independent request handling for the explorer protocol.
/// Thread-safe: sessions are serialized individually, different sessions
/// run in parallel.
class ExplorerService {
 public:
  explicit ExplorerService(ServiceOptions options = {});
  ~ExplorerService();

  Response handle(std::string_view method, std::string_view path,
                  const std::map<std::string, std::string>& query, std::string_view body);

  /// Loads csv (with an optional sidecar override JSON) and returns its id.
  /// Throws ParseError. The bytes are kept for snapshots.
  std::string add_dataset(std::string csv, std::string overrides_json = {});
  DatasetPtr dataset(const std::string& id) const;
  std::optional<SessionContext> session(const std::string& id) const;

  json_io::Json snapshot() const;
  void restore(const json_io::Json& snapshot);
  void save_snapshot(const std::string& path) const;
  void load_snapshot(const std::string& path);

 private:
  struct DatasetEntry;
  struct SessionEntry;

  json_io::Json dispatch(std::string_view method, const std::vector<std::string>& parts,
                         const std::map<std::string, std::string>& query, std::string_view body);
  std::shared_ptr<DatasetEntry> find_dataset(const std::string& id) const;
  std::shared_ptr<SessionEntry> find_session(const std::string& id) const;
  void record(SessionContext& s, std::string kind, json_io::Json payload);

  ServiceOptions options_;
  mutable std::shared_mutex mu_;
  std::map<std::string, std::shared_ptr<DatasetEntry>> datasets_;
  std::map<std::string, std::shared_ptr<SessionEntry>> sessions_;
  std::uint64_t next_dataset_ = 1;
  std::uint64_t next_session_ = 1;
  std::mutex log_mu_;
};

/// Serves svc over HTTP/1.1 until stop_server is called or the process exits.
/// Returns false when the socket cannot be bound.
bool run_server(ExplorerService& svc, const std::string& host, int port);
void stop_server();

}  // namespace nextviz
