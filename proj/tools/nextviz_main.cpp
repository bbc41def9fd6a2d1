// nextviz: batch recommendations and the explorer HTTP service.

#include <chrono>
#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "nextviz/errors.hpp"
#include "nextviz/json_io.hpp"
#include "nextviz/orchestrator.hpp"
#include "nextviz/service.hpp"

namespace {

constexpr int kExitParse = 1;
constexpr int kExitSpec = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw nextviz::ParseError("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct RecommendArgs {
  std::string csv;
  std::string view;
  std::size_t k = 10;
  bool baseline = false;
  std::uint64_t seed = 0;
  std::string metric = "spearman";
  std::size_t cardinality_cap = 50;
  std::string schema_override;
  std::string log;
  std::optional<std::uint64_t> order_seed;
  bool similarity_desc = false;
  bool with_data = false;
};

int run_recommend(const RecommendArgs& a) {
  using namespace nextviz;
  DatasetPtr ds;
  std::optional<VizSpec> view;
  RecommendConfig config;
  try {
    LoadOptions opts;
    if (!a.schema_override.empty()) opts.overrides = parse_schema_overrides(read_file(a.schema_override));
    ds = load_csv_file(a.csv, opts);
    config.scoring.metric = parse_correlation_metric(a.metric);
  } catch (const UnknownColumn& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitSpec;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitParse;
  }

  try {
    if (!a.view.empty()) {
      json_io::Json j;
      try {
        j = json_io::Json::parse(read_file(a.view));
      } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("view file: ") + e.what());
      }
      view = json_io::view_from_request(j, *ds);
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitParse;
  } catch (const Error& e) {
    std::cerr << "invalid view: " << e.what() << '\n';
    return kExitSpec;
  }

  config.k = a.k;
  config.lattice.cardinality_cap = a.cardinality_cap;
  config.order_seed = a.order_seed;
  config.similarity_descending = a.similarity_desc;

  RecommendationSet set = recommend(view, *ds, config);
  if (a.baseline) set = flatten_baseline(set, a.seed);
  std::cout << json_io::to_json(set, a.with_data ? ds.get() : nullptr).dump(2) << '\n';

  if (!a.log.empty()) {
    using namespace std::chrono;
    json_io::Json event;
    event["ts"] = duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
    event["session"] = "cli";
    event["kind"] = "recommendations_served";
    std::size_t items = 0;
    for (const auto& c : set.categories) items += c.items.size();
    event["payload"] = json_io::Json{{"dataset", a.csv},
                                     {"view", view ? json_io::to_json(*view) : json_io::Json()},
                                     {"mode", a.baseline ? "baseline" : "categorized"},
                                     {"items", items}};
    std::ofstream out(a.log, std::ios::app);
    out << event.dump() << '\n';
  }
  return 0;
}

void on_signal(int) { nextviz::stop_server(); }

int run_serve(const std::string& host, int port, const std::string& snapshot, const std::string& log) {
  nextviz::ServiceOptions options;
  if (!log.empty()) options.log_path = log;
  nextviz::ExplorerService svc(options);
  if (!snapshot.empty() && std::ifstream(snapshot).good()) {
    try {
      svc.load_snapshot(snapshot);
    } catch (const nextviz::Error& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kExitParse;
    }
  }
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  std::cerr << "listening on " << host << ':' << port << '\n';
  const bool ok = nextviz::run_server(svc, host, port);
  if (!snapshot.empty()) svc.save_snapshot(snapshot);
  if (!ok) {
    std::cerr << "error: cannot listen on " << host << ':' << port << '\n';
    return 3;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Categorized next-step visualization recommendations"};
  app.require_subcommand(1);

  RecommendArgs rec;
  auto* r = app.add_subcommand("recommend", "Print recommendations for a CSV file as JSON");
  r->add_option("csv", rec.csv, "Dataset (CSV with header row)")->required();
  r->add_option("--view", rec.view, "Current view JSON file ({\"attrs\": [...], \"filters\": [...]})");
  r->add_option("--k", rec.k, "Items per category")->check(CLI::Range(std::size_t{1}, std::size_t{1000000}));
  r->add_flag("--baseline", rec.baseline, "One shuffled list without categories");
  r->add_option("--seed", rec.seed, "Shuffle seed for --baseline");
  r->add_option("--metric", rec.metric, "Scatterplot correlation metric")
      ->check(CLI::IsMember({"spearman", "mi"}));
  r->add_option("--cardinality-cap", rec.cardinality_cap,
                "Largest dimension offered as a filter or distribution");
  r->add_option("--schema-override", rec.schema_override, "Sidecar JSON overriding dtype/role");
  r->add_option("--log", rec.log, "Append a JSON-lines event to this file");
  r->add_option("--order-seed", rec.order_seed, "Shuffle the category display order");
  r->add_flag("--similarity-desc", rec.similarity_desc, "Most different charts first");
  r->add_flag("--with-data", rec.with_data, "Include chart data per item");

  std::string host = "127.0.0.1", snapshot, log;
  int port = 8080;
  if (const char* env = std::getenv("RECSVC_PORT")) port = std::atoi(env);
  auto* s = app.add_subcommand("serve", "Run the HTTP/JSON explorer service");
  s->add_option("--host", host, "Bind address");
  s->add_option("--port", port, "Port (default $RECSVC_PORT or 8080)");
  s->add_option("--snapshot", snapshot, "Session snapshot loaded at start, written at shutdown");
  s->add_option("--log", log, "JSON-lines interaction log");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitParse;
  }

  if (*r) return run_recommend(rec);
  return run_serve(host, port, snapshot, log);
}
