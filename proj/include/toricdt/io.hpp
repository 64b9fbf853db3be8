#pragma once

// JSON encodings of fans, maps, summand tables and count reports.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "toricdt/decomp.hpp"
#include "toricdt/fan.hpp"
#include "toricdt/oracle.hpp"
#include "toricdt/toricmap.hpp"

namespace toricdt {

using Json = nlohmann::ordered_json;

namespace detail {

inline Int json_int(const Json& j, const std::string& what) {
  if (j.is_number_integer()) return j.is_number_unsigned() ? Int(j.get<unsigned long long>()) : Int(j.get<long long>());
  if (j.is_string()) {
    try {
      return Int(j.get<std::string>());
    } catch (const std::exception&) {
    }
  }
  throw InputError(what + ": expected an integer, got " + j.dump());
}

inline Json int_json(const Int& v) {
  if (v >= std::numeric_limits<long long>::min() && v <= std::numeric_limits<long long>::max())
    return Json(v.convert_to<long long>());
  return Json(v.str());
}

inline std::size_t json_index(const Json& j, const std::string& what) {
  if (!j.is_number_integer() || j.get<long long>() < 0) throw InputError(what + ": expected an index, got " + j.dump());
  return j.get<std::size_t>();
}

inline const Json& field(const Json& j, const char* key, const std::string& what) {
  if (!j.is_object() || !j.contains(key)) throw InputError(what + ": missing field \"" + key + "\"");
  return j.at(key);
}

}  // namespace detail

inline Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InputError("malformed JSON in " + path.string() + ": " + e.what());
  }
}

inline Fan fan_from_json(const Json& j) {
  const std::size_t rank = detail::json_index(detail::field(j, "rank", "fan"), "fan rank");
  const Json& rays = detail::field(j, "rays", "fan");
  const Json& maxes = detail::field(j, "max_cones", "fan");
  if (!rays.is_array() || !maxes.is_array()) throw InputError("fan: rays and max_cones must be arrays");
  std::vector<IntVector> rs;
  for (const auto& r : rays) {
    if (!r.is_array()) throw InputError("fan: ray must be an array");
    IntVector v;
    for (const auto& x : r) v.push_back(detail::json_int(x, "ray entry"));
    rs.push_back(std::move(v));
  }
  std::vector<std::vector<std::size_t>> mc;
  for (const auto& c : maxes) {
    if (!c.is_array()) throw InputError("fan: max cone must be an array of ray indices");
    std::vector<std::size_t> idx;
    for (const auto& x : c) idx.push_back(detail::json_index(x, "max cone entry"));
    mc.push_back(std::move(idx));
  }
  return Fan::from_max_cones(rank, std::move(rs), mc);
}

inline Json fan_to_json(const Fan& f) {
  Json j;
  j["rank"] = f.rank();
  Json rays = Json::array();
  for (const auto& r : f.rays()) {
    Json v = Json::array();
    for (const auto& x : r) v.push_back(detail::int_json(x));
    rays.push_back(std::move(v));
  }
  j["rays"] = std::move(rays);
  Json maxes = Json::array();
  for (auto i : f.maximal_cones()) maxes.push_back(f.ray_indices(i));
  j["max_cones"] = std::move(maxes);
  return j;
}

inline IntMatrix matrix_from_json(const Json& j, std::size_t rows, std::size_t cols) {
  if (!j.is_array() || j.size() != rows)
    throw InputError("map matrix must have " + std::to_string(rows) + " rows (target rank)");
  IntMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols)
      throw InputError("map matrix row " + std::to_string(r) + " must have " + std::to_string(cols) +
                       " entries (source rank)");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = detail::json_int(j[r][c], "matrix entry");
  }
  return m;
}

inline Json matrix_to_json(const IntMatrix& m) {
  Json j = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(detail::int_json(m(r, c)));
    j.push_back(std::move(row));
  }
  return j;
}

struct MapInput {
  FanMap map;
  std::optional<Int> p;
};

/// Fan given inline or as a path relative to `base`.
inline Fan fan_ref_from_json(const Json& j, const std::filesystem::path& base) {
  if (j.is_string()) {
    const std::filesystem::path p = base / j.get<std::string>();
    return fan_from_json(read_json_file(p));
  }
  return fan_from_json(j);
}

inline MapInput map_from_json(const Json& j, const std::filesystem::path& base = ".") {
  Fan source = fan_ref_from_json(detail::field(j, "source", "map"), base);
  Fan target = fan_ref_from_json(detail::field(j, "target", "map"), base);
  IntMatrix m = matrix_from_json(detail::field(j, "matrix", "map"), target.rank(), source.rank());
  MapInput out{build_map(std::move(m), std::move(source), std::move(target)), std::nullopt};
  if (j.contains("p") && !j["p"].is_null()) {
    out.p = detail::json_int(j["p"], "p");
    if (!is_prime(*out.p)) throw InputError("p = " + out.p->str() + " is not prime");
  }
  return out;
}

inline Json map_to_json(const FanMap& f, std::optional<Int> p = std::nullopt) {
  Json j;
  j["matrix"] = matrix_to_json(f.matrix);
  j["source"] = fan_to_json(f.source);
  j["target"] = fan_to_json(f.target);
  j["p"] = p ? detail::int_json(*p) : Json(nullptr);
  return j;
}

/// Entries in output order: by (support id, k).
inline std::vector<DTSummand> ordered_entries(const DTSummandTable& t) {
  std::vector<DTSummand> es = t.entries;
  std::stable_sort(es.begin(), es.end(), [](const DTSummand& a, const DTSummand& b) {
    return std::tie(a.support_id, a.twist_k) < std::tie(b.support_id, b.twist_k);
  });
  return es;
}

inline Json table_to_json(const DTSummandTable& t, const std::string& map_ref) {
  Json j;
  j["map"] = map_ref;
  j["p"] = t.p ? detail::int_json(*t.p) : Json(nullptr);
  Json rows = Json::array();
  for (const auto& e : ordered_entries(t)) {
    Json r;
    r["support_cone"] = e.support_id;
    r["image_orbit"] = e.image_orbit_id ? Json(*e.image_orbit_id) : Json(nullptr);
    r["twist_k"] = e.twist_k;
    r["shift"] = e.shift();
    r["multiplicity"] = detail::int_json(e.multiplicity);
    r["ls_rank"] = detail::int_json(e.ls_rank);
    r["b_index"] = e.b_index();
    rows.push_back(std::move(r));
  }
  j["summands"] = std::move(rows);
  return j;
}

/// Reads a summand table back. Support indices follow first appearance of each
/// support id; dim X - dim V is recovered per entry as 2k - b, which is all the
/// duality and hard Lefschetz checks use.
inline DTSummandTable table_from_json(const Json& j) {
  DTSummandTable t;
  if (j.contains("p") && !j["p"].is_null()) t.p = detail::json_int(j["p"], "p");
  std::vector<std::string> ids;
  for (const auto& r : detail::field(j, "summands", "summand table")) {
    DTSummand e;
    e.support_id = detail::field(r, "support_cone", "summand").get<std::string>();
    auto it = std::find(ids.begin(), ids.end(), e.support_id);
    e.support = static_cast<std::size_t>(it - ids.begin());
    if (it == ids.end()) ids.push_back(e.support_id);
    if (r.contains("image_orbit") && !r["image_orbit"].is_null()) e.image_orbit_id = r["image_orbit"].get<std::string>();
    e.twist_k = detail::field(r, "twist_k", "summand").get<int>();
    e.multiplicity = detail::json_int(detail::field(r, "multiplicity", "summand"), "multiplicity");
    e.ls_rank = detail::json_int(detail::field(r, "ls_rank", "summand"), "ls_rank");
    const int b = detail::field(r, "b_index", "summand").get<int>();
    if (detail::field(r, "shift", "summand").get<int>() != 2 * e.twist_k)
      throw InputError("summand shift is not 2 * twist_k");
    e.dim_v = 0;
    e.dim_x = 2 * e.twist_k - b;
    t.dim_x = std::max(t.dim_x, e.dim_x);
    if (e.image_orbit_id) t.fibration = false;
    t.entries.push_back(std::move(e));
  }
  return t;
}

inline Json duality_to_json(const DualityReport& r) {
  Json j;
  j["pass"] = r.pass();
  auto sorted = r.violations;
  std::stable_sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    return std::tie(a.support_id, a.k) < std::tie(b.support_id, b.k);
  });
  Json vs = Json::array();
  for (const auto& v : sorted)
    vs.push_back({{"support_cone", v.support_id}, {"k", v.k}, {"k_dual", v.k_dual},
                  {"m", detail::int_json(v.m)}, {"m_dual", detail::int_json(v.m_dual)}});
  j["violations"] = std::move(vs);
  return j;
}

inline Json rhl_to_json(const RhlReport& r) {
  Json j;
  j["label"] = r.label();
  j["pass"] = r.pass();
  j["cumulative_form_holds"] = r.cumulative_form_holds;
  auto sorted = r.violations;
  std::stable_sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    return std::tie(a.support_id, a.b) < std::tie(b.support_id, b.b);
  });
  Json vs = Json::array();
  for (const auto& v : sorted)
    vs.push_back({{"support_cone", v.support_id}, {"b", v.b}, {"s_b", detail::int_json(v.s_b)},
                  {"s_b_plus_2", detail::int_json(v.bound)}});
  j["violations"] = std::move(vs);
  return j;
}

inline Json report_to_json(const CountReport& r) {
  Json j;
  Json checks = Json::array();
  for (const auto& c : r.checks) {
    Json e;
    e["name"] = c.name;
    e["q"] = c.q ? detail::int_json(*c.q) : Json(nullptr);
    auto values = [&](const std::vector<Int>& v) {
      if (!c.q && c.name != "duality") {
        Json a = Json::array();
        for (const auto& x : v) a.push_back(detail::int_json(x));
        return a;
      }
      return v.size() == 1 ? detail::int_json(v[0]) : Json(nullptr);
    };
    e["expected"] = values(c.expected);
    e["observed"] = values(c.observed);
    e["pass"] = c.pass;
    checks.push_back(std::move(e));
  }
  j["checks"] = std::move(checks);
  return j;
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace toricdt
