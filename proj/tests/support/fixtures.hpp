#pragma once

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "nextviz/dataset.hpp"
#include "nextviz/errors.hpp"
#include "nextviz/lattice.hpp"
#include "nextviz/viz_spec.hpp"

#ifndef NEXTVIZ_TEST_DATA_DIR
#define NEXTVIZ_TEST_DATA_DIR "tests/data"
#endif

namespace fixtures {

inline std::string data_path(const std::string& name) {
  return std::string(NEXTVIZ_TEST_DATA_DIR) + "/" + name;
}

inline nextviz::DatasetPtr cars() { return nextviz::load_csv_file(data_path("cars.csv")); }
inline nextviz::DatasetPtr college() { return nextviz::load_csv_file(data_path("college.csv")); }

/// Small mixed-type table with 2..max_cols columns and some nulls.
inline nextviz::DatasetPtr random_dataset(std::mt19937_64& rng, std::size_t max_cols = 8,
                                          std::size_t rows = 60) {
  static const std::vector<std::string> pool = {"alpha", "Beta", "gamma", "Delta", "eps", "Zeta",
                                                "eta",   "Theta", "iota", "Kappa", "lam", "Mu"};
  std::vector<std::string> names = pool;
  std::shuffle(names.begin(), names.end(), rng);
  const std::size_t ncols = std::uniform_int_distribution<std::size_t>(2, max_cols)(rng);

  std::vector<nextviz::RawColumn> cols;
  for (std::size_t c = 0; c < ncols; ++c) {
    nextviz::RawColumn col;
    col.name = names[c];
    const int kind = std::uniform_int_distribution<int>(0, 3)(rng);
    const int card = std::uniform_int_distribution<int>(1, 6)(rng);
    std::normal_distribution<double> normal(50, 15);
    for (std::size_t r = 0; r < rows; ++r) {
      if (std::uniform_int_distribution<int>(0, 29)(rng) == 0) {
        col.cells.emplace_back(std::nullopt);
        continue;
      }
      const int pick = std::uniform_int_distribution<int>(0, card - 1)(rng);
      switch (kind) {
        case 0: col.cells.emplace_back(std::to_string(std::round(normal(rng) * 1000) / 1000)); break;
        case 1: col.cells.emplace_back(std::string(1, static_cast<char>('p' + pick))); break;
        case 2: col.cells.emplace_back(std::to_string(pick + 1)); break;
        default: col.cells.emplace_back("2021-03-0" + std::to_string(pick + 1)); break;
      }
    }
    cols.push_back(std::move(col));
  }
  return nextviz::Dataset::from_columns(std::move(cols), {});
}

/// An encodable view with 1..3 attributes and up to two filters on other
/// dimensions, or nullopt (the empty view) about one time in ten.
inline std::optional<nextviz::VizSpec> random_view(std::mt19937_64& rng, const nextviz::Dataset& ds) {
  if (std::uniform_int_distribution<int>(0, 9)(rng) == 0) return std::nullopt;
  const auto& cols = ds.columns();
  for (int attempt = 0; attempt < 200; ++attempt) {
    std::vector<std::size_t> idx(cols.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::shuffle(idx.begin(), idx.end(), rng);
    const std::size_t na = std::uniform_int_distribution<std::size_t>(1, std::min<std::size_t>(3, cols.size()))(rng);
    std::vector<std::string> attrs;
    for (std::size_t i = 0; i < na; ++i) attrs.push_back(cols[idx[i]].name);
    std::vector<nextviz::FilterPredicate> filters;
    const int nf = std::uniform_int_distribution<int>(0, 2)(rng);
    for (std::size_t i = na; i < idx.size() && static_cast<int>(filters.size()) < nf; ++i) {
      const auto& m = cols[idx[i]];
      if (m.role != nextviz::Role::dimension || ds.labels(idx[i]).empty()) continue;
      const auto& labels = ds.labels(idx[i]);
      filters.push_back({m.name, labels[std::uniform_int_distribution<std::size_t>(0, labels.size() - 1)(rng)]});
    }
    try {
      return nextviz::encode(ds, attrs, filters);
    } catch (const nextviz::UnsupportedSpec&) {
    }
  }
  return std::nullopt;
}

}  // namespace fixtures
