#include "manifest.hpp"

#include <filesystem>
#include <fstream>
#include <map>

#include "frecl/csv_io.hpp"
#include "json.hpp"

namespace frecl::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path.string() : (base / path).string();
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InputError(std::string("manifest: bad value for '") + key + "': " + e.what());
  }
}

// Collapses rows sharing an id by the pointwise median; first-appearance order.
io::CurveTable collapse(const io::CurveTable& t) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<Eigen::Index>> rows;
  for (std::size_t i = 0; i < t.ids.size(); ++i) {
    auto [it, fresh] = rows.try_emplace(t.ids[i]);
    if (fresh) order.push_back(t.ids[i]);
    it->second.push_back(static_cast<Eigen::Index>(i));
  }
  Matrix values(static_cast<Eigen::Index>(order.size()), t.curves.points());
  for (std::size_t r = 0; r < order.size(); ++r) {
    const auto& idx = rows[order[r]];
    std::vector<std::vector<double>> reps(static_cast<std::size_t>(t.curves.points()));
    for (Eigen::Index q = 0; q < t.curves.points(); ++q)
      for (Eigen::Index i : idx) reps[static_cast<std::size_t>(q)].push_back(t.curves.values()(i, q));
    values.row(static_cast<Eigen::Index>(r)) = median_collapse(reps).transpose();
  }
  return io::CurveTable{CurveSet(t.curves.grid(), std::move(values)), std::move(order)};
}

io::CurveTable keep_rows(const io::CurveTable& t, const std::vector<Eigen::Index>& rows) {
  std::vector<std::string> ids;
  for (Eigen::Index i : rows) ids.push_back(t.ids[static_cast<std::size_t>(i)]);
  return io::CurveTable{t.curves.select(rows), std::move(ids)};
}

}  // namespace

DatasetManifest read_manifest(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw InputError("cannot open manifest '" + path + "'");
  json j;
  try {
    j = json::parse(is);
  } catch (const json::parse_error& e) {
    throw InputError("manifest '" + path + "': " + e.what());
  }
  if (!j.is_object()) throw InputError("manifest '" + path + "' must be a JSON object");
  DatasetManifest m;
  m.response = get_or<std::string>(j, "response", "");
  if (m.response.empty()) throw InputError("manifest '" + path + "': missing 'response'");
  m.predictors = get_or<std::vector<std::string>>(j, "predictors", {});
  if (j.contains("grid") && !j.at("grid").is_string()) m.grid = get_or<std::vector<double>>(j, "grid", {});
  else if (get_or<std::string>(j, "grid", "header") != "header")
    throw InputError("manifest: 'grid' must be \"header\" or a list of time points");
  m.median_collapse = get_or(j, "median_collapse", false);
  if (j.contains("filter_threshold") && !j.at("filter_threshold").is_null())
    m.filter_threshold = get_or(j, "filter_threshold", 5.0);
  m.filter_min_points = get_or(j, "filter_min_points", 20);
  m.filter_seasons = get_or<std::vector<std::string>>(j, "filter_seasons", {});
  if (j.contains("loess_span") && !j.at("loess_span").is_null()) m.loess_span = get_or(j, "loess_span", 0.75);
  m.loess_degree = get_or(j, "loess_degree", 2);
  m.midpoints = get_or(j, "midpoints", false);
  m.center = get_or(j, "center", false);
  if (m.midpoints && !m.loess_span) throw InputError("manifest: 'midpoints' requires 'loess_span'");
  return m;
}

void write_manifest(const std::string& path, const DatasetManifest& m) {
  json j;
  j["response"] = m.response;
  j["predictors"] = m.predictors;
  j["grid"] = m.grid.empty() ? json("header") : json(m.grid);
  j["center"] = m.center;
  j["median_collapse"] = m.median_collapse;
  j["midpoints"] = m.midpoints;
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InputError("cannot open '" + path + "' for writing");
  os << j.dump(2) << '\n';
}

FunctionalDataset load_dataset(const std::string& manifest_path) {
  const DatasetManifest m = read_manifest(manifest_path);
  const fs::path base = fs::path(manifest_path).parent_path();

  auto load = [&](const std::string& rel) {
    io::CurveTable t = io::read_curves_file(resolve(base, rel));
    if (!m.grid.empty()) {
      if (static_cast<Eigen::Index>(m.grid.size()) != t.curves.points())
        throw InputError("manifest grid has " + std::to_string(m.grid.size()) + " points but '" + rel + "' has " +
                         std::to_string(t.curves.points()));
      Vector pts = Eigen::Map<const Vector>(m.grid.data(), static_cast<Eigen::Index>(m.grid.size()));
      t.curves = CurveSet(TimeGrid(std::move(pts)), t.curves.values());
    }
    return m.median_collapse ? collapse(t) : t;
  };

  io::CurveTable y = load(m.response);
  std::vector<io::CurveTable> xs;
  for (const auto& p : m.predictors) {
    xs.push_back(load(p));
    if (xs.back().ids != y.ids) throw InputError("predictor file '" + p + "' does not share the response's row ids");
  }

  if (m.filter_threshold) {
    std::vector<Matrix> seasons{y.curves.values()};
    for (const auto& s : m.filter_seasons) {
      io::CurveTable st = load(s);
      if (st.ids != y.ids) throw InputError("season file '" + s + "' does not share the response's row ids");
      seasons.push_back(st.curves.values());
    }
    const auto kept = expression_filter(seasons, *m.filter_threshold, m.filter_min_points);
    if (kept.empty()) throw InputError("expression filter removed every observation");
    y = keep_rows(y, kept);
    for (auto& x : xs) x = keep_rows(x, kept);
  }

  auto prepare = [&](const CurveSet& cs) {
    CurveSet out = cs;
    if (m.loess_span)
      out = loess_smooth_at(out, m.midpoints ? with_midpoints(out.grid()) : out.grid(), *m.loess_span, m.loess_degree);
    if (m.center) out = center_curves(out);
    return out;
  };
  std::vector<CurveSet> predictors;
  for (const auto& x : xs) predictors.push_back(prepare(x.curves));
  return FunctionalDataset(prepare(y.curves), std::move(predictors), y.ids);
}

}  // namespace frecl::cli
