#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nextviz/errors.hpp"
#include "nextviz/interestingness.hpp"
#include "nextviz/json_io.hpp"
#include "nextviz/orchestrator.hpp"
#include "nextviz/service.hpp"

namespace py = pybind11;
using nextviz::json_io::Json;

namespace {

nextviz::DatasetPtr load(const std::string& path, const std::string& overrides) {
  nextviz::LoadOptions opts;
  if (!overrides.empty()) opts.overrides = nextviz::parse_schema_overrides(overrides);
  return nextviz::load_csv_file(path, opts);
}

nextviz::DatasetPtr load_text(const std::string& text, const std::string& overrides) {
  nextviz::LoadOptions opts;
  if (!overrides.empty()) opts.overrides = nextviz::parse_schema_overrides(overrides);
  return nextviz::load_csv(std::string_view(text), opts);
}

Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw nextviz::ParseError(e.what());
  }
}

std::optional<nextviz::VizSpec> view_of(const nextviz::Dataset& ds, const std::optional<std::string>& view) {
  if (!view) return std::nullopt;
  return nextviz::json_io::view_from_request(parse(*view), ds);
}

std::string recommend(const nextviz::DatasetPtr& ds, const std::optional<std::string>& view, std::size_t k,
                      bool baseline, std::uint64_t seed, const std::string& metric,
                      std::size_t cardinality_cap, std::optional<std::uint64_t> order_seed,
                      bool similarity_descending, bool with_data) {
  nextviz::RecommendConfig config;
  config.k = k;
  config.scoring.metric = nextviz::parse_correlation_metric(metric);
  config.lattice.cardinality_cap = cardinality_cap;
  config.order_seed = order_seed;
  config.similarity_descending = similarity_descending;
  auto v = view_of(*ds, view);
  nextviz::RecommendationSet set;
  {
    py::gil_scoped_release release;
    set = nextviz::recommend(v, *ds, config);
    if (baseline) set = nextviz::flatten_baseline(set, seed);
  }
  return nextviz::json_io::to_json(set, with_data ? ds.get() : nullptr).dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Categorized visualization recommendations over CSV data";

  auto base = py::register_exception<nextviz::Error>(m, "Error");
  py::register_exception<nextviz::ParseError>(m, "ParseError", base.ptr());
  py::register_exception<nextviz::UnknownColumn>(m, "UnknownColumn", base.ptr());
  py::register_exception<nextviz::UnsupportedSpec>(m, "UnsupportedSpec", base.ptr());

  py::class_<nextviz::Dataset, std::shared_ptr<nextviz::Dataset>>(m, "Dataset")
      .def_static("from_csv", [](const std::string& path, const std::string& overrides) {
            return std::const_pointer_cast<nextviz::Dataset>(load(path, overrides));
          }, py::arg("path"), py::arg("schema_override") = "")
      .def_static("from_text", [](const std::string& text, const std::string& overrides) {
            return std::const_pointer_cast<nextviz::Dataset>(load_text(text, overrides));
          }, py::arg("text"), py::arg("schema_override") = "")
      .def_property_readonly("row_count", &nextviz::Dataset::row_count)
      .def("schema_json", [](const nextviz::Dataset& ds) { return nextviz::json_io::schema_json(ds).dump(); })
      .def("measure_names", &nextviz::Dataset::measure_names)
      .def("dimension_names", &nextviz::Dataset::dimension_names);

  m.def("encode", [](const nextviz::Dataset& ds, const std::string& view) {
        auto v = view_of(ds, view);
        return v ? nextviz::json_io::to_json(*v).dump() : std::string("null");
      }, py::arg("dataset"), py::arg("view"));
  m.def("canonical_key", [](const std::string& spec) {
        return nextviz::canonical_key(nextviz::json_io::spec_from_json(parse(spec)));
      });
  m.def("aggregate", [](const nextviz::Dataset& ds, const std::string& spec) {
        return nextviz::json_io::to_json(nextviz::aggregate(ds, nextviz::json_io::spec_from_json(parse(spec)))).dump();
      });
  m.def("recommend", &recommend, py::arg("dataset"), py::arg("view") = py::none(), py::arg("k") = 10,
        py::arg("baseline") = false, py::arg("seed") = 0, py::arg("metric") = "spearman",
        py::arg("cardinality_cap") = 50, py::arg("order_seed") = py::none(),
        py::arg("similarity_descending") = false, py::arg("with_data") = false);

  m.def("skewness", [](const std::vector<double>& v) { return nextviz::skewness(v); });
  m.def("spearman", [](const std::vector<double>& x, const std::vector<double>& y) { return nextviz::spearman(x, y); });
  m.def("mutual_information", [](const std::vector<double>& x, const std::vector<double>& y, std::size_t bins) {
        return nextviz::mutual_information(x, y, bins);
      }, py::arg("x"), py::arg("y"), py::arg("bins") = 10);
  m.def("non_uniformity", [](const std::vector<double>& v) { return nextviz::non_uniformity(v); });
  m.def("deviation", [](const std::vector<double>& a, const std::vector<double>& b) { return nextviz::deviation(a, b); });
  m.def("separability", [](const std::vector<double>& x, const std::vector<double>& y,
                           const std::vector<std::int32_t>& labels, std::size_t cap) {
        return nextviz::separability(x, y, labels, cap);
      }, py::arg("x"), py::arg("y"), py::arg("labels"), py::arg("sample_cap") = 2000);
  m.def("euclidean_similarity", [](const std::vector<double>& a, const std::vector<double>& b) {
        return nextviz::euclidean_similarity(std::span<const double>(a), std::span<const double>(b));
      });

  py::class_<nextviz::ExplorerService>(m, "Service")
      .def(py::init<>())
      .def("handle", [](nextviz::ExplorerService& svc, const std::string& method, const std::string& path,
                        const std::map<std::string, std::string>& query, const std::string& body) {
            nextviz::Response r;
            {
              py::gil_scoped_release release;
              r = svc.handle(method, path, query, body);
            }
            return py::make_tuple(r.status, r.body);
          }, py::arg("method"), py::arg("path"), py::arg("query") = std::map<std::string, std::string>{},
          py::arg("body") = "")
      .def("snapshot", [](const nextviz::ExplorerService& svc) { return svc.snapshot().dump(); })
      .def("restore", [](nextviz::ExplorerService& svc, const std::string& s) { svc.restore(parse(s)); });

  m.attr("PROTOCOL_VERSION") = nextviz::json_io::kProtocolVersion;
}
