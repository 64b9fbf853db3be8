#pragma once

// Command dispatch for the toricdt tool. Exit codes: 0 success, 1 input or
// validation error, 2 failed mathematical invariant.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "toricdt/decomp.hpp"
#include "toricdt/fan.hpp"
#include "toricdt/ih.hpp"
#include "toricdt/io.hpp"
#include "toricdt/oracle.hpp"
#include "toricdt/toricmap.hpp"

namespace toricdt {

enum class OutputFormat { table, json };

struct RunConfig {
  std::string command;
  std::vector<std::string> inputs;
  std::optional<std::string> p;
  std::optional<std::string> qs;
  OutputFormat format = OutputFormat::table;
  std::optional<std::string> out;
  std::optional<std::string> cone;
  bool projective = false;  // caller asserts the map is projective
};

namespace detail {

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) throw InputError("empty entry in list \"" + s + "\"");
    parts.push_back(item.substr(b, e - b + 1));
  }
  return parts;
}

inline Int parse_int(const std::string& s, const std::string& what) {
  if (s.empty() || s.find_first_not_of("-0123456789") != std::string::npos)
    throw InputError(what + ": \"" + s + "\" is not an integer");
  return Int(s);
}

inline std::optional<Int> parse_prime(const RunConfig& c) {
  if (!c.p) return std::nullopt;
  Int p = parse_int(*c.p, "--p");
  if (!is_prime(p)) throw InputError("--p " + *c.p + " is not prime");
  return p;
}

inline std::optional<std::vector<Int>> parse_qs(const RunConfig& c) {
  if (!c.qs) return std::nullopt;
  std::vector<Int> out;
  for (const auto& s : split_list(*c.qs)) {
    Int q = parse_int(s, "--qs");
    if (prime_of_prime_power(q) == 0) throw InputError("--qs: " + s + " is not a prime power");
    out.push_back(q);
  }
  return out;
}

inline std::vector<std::size_t> parse_cone(const std::string& s) {
  std::vector<std::size_t> out;
  for (const auto& x : split_list(s)) {
    const Int v = parse_int(x, "--cone");
    if (v < 0) throw InputError("--cone: negative ray index");
    out.push_back(v.convert_to<std::size_t>());
  }
  return out;
}

inline const std::string& single_input(const RunConfig& c) {
  if (c.inputs.size() != 1) throw InputError(c.command + " takes exactly one input file");
  return c.inputs[0];
}

inline Fan load_fan(const std::string& path) { return fan_from_json(read_json_file(path)); }

inline MapInput load_map(const std::string& path) {
  return map_from_json(read_json_file(path), std::filesystem::path(path).parent_path());
}

inline std::string pad(std::string s, std::size_t w) {
  if (s.size() < w) s.append(w - s.size(), ' ');
  return s;
}

inline std::string fmt_opt(const std::optional<Int>& v) { return v ? v->str() : "-"; }

struct Emitter {
  const RunConfig& config;
  std::ostream& out;

  void write(const std::string& text) const {
    if (config.out) {
      std::ofstream f(*config.out);
      if (!f) throw InputError("cannot write " + *config.out);
      f << text;
    } else {
      out << text;
    }
  }
};

inline Json table_reports_json(const DTSummandTable& t, bool projective) {
  Json j;
  j["duality"] = duality_to_json(verify_duality(t));
  j["rhl"] = rhl_to_json(verify_rhl(t, projective));
  return j;
}

inline std::string table_text(const DTSummandTable& t, const Fan* support_fan) {
  std::ostringstream s;
  s << "dim X = " << t.dim_x << ", p = " << fmt_opt(t.p) << (t.fibration ? ", fibration" : ", finite part present")
    << "\n";
  s << pad("support", 18) << pad("k", 4) << pad("shift", 7) << pad("b", 5) << pad("mult", 6) << pad("ls_rank", 9)
    << pad("image orbit", 18) << "support cone\n";
  for (const auto& e : ordered_entries(t)) {
    std::string img = "-";
    if (e.image_orbit_id) {
      img = *e.image_orbit_id;
    }
    s << pad(e.support_id, 18) << pad(std::to_string(e.twist_k), 4) << pad(std::to_string(e.shift()), 7)
      << pad(std::to_string(e.b_index()), 5) << pad(e.multiplicity.str(), 6) << pad(e.ls_rank.str(), 9) << pad(img, 18)
      << (support_fan ? support_fan->cone(e.support).to_string() : "") << "\n";
  }
  return s.str();
}

inline std::string reports_text(const DTSummandTable& t, bool projective) {
  std::ostringstream s;
  const auto dual = verify_duality(t);
  s << "duality: " << (dual.pass() ? "pass" : "FAIL") << "\n";
  for (const auto& v : dual.violations)
    s << "  " << v.support_id << " m_" << v.k << " = " << v.m << " but m_" << v.k_dual << " = " << v.m_dual << "\n";
  const auto rhl = verify_rhl(t, projective);
  s << "hard Lefschetz (" << rhl.label() << "): " << (rhl.pass() ? "pass" : "FAIL") << "\n";
  for (const auto& v : rhl.violations)
    s << "  " << v.support_id << " s_" << v.b << " = " << v.s_b << " < s_" << v.b + 2 << " = " << v.bound << "\n";
  return s.str();
}

inline std::string report_text(const CountReport& r) {
  std::ostringstream s;
  auto values = [](const std::vector<Int>& v) {
    if (v.size() == 1) return v[0].str();
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + v[i].str();
    return out + "]";
  };
  s << pad("check", 44) << pad("q", 5) << pad("expected", 18) << pad("observed", 18) << "result\n";
  for (const auto& c : r.checks)
    s << pad(c.name, 44) << pad(fmt_opt(c.q), 5) << pad(values(c.expected), 18) << pad(values(c.observed), 18)
      << (c.pass ? "pass" : "FAIL") << "\n";
  s << (r.pass() ? "all checks pass" : "some checks FAILED") << "\n";
  return s.str();
}

inline int cmd_validate(const RunConfig& c, const Emitter& em) {
  const Fan f = load_fan(single_input(c));
  const FanReport rep = validate_fan(f);
  if (c.format == OutputFormat::json) {
    Json j;
    j["valid"] = rep.ok();
    j["cones"] = f.size();
    Json vs = Json::array();
    for (const auto& v : rep.violations) {
      Json e;
      e["kind"] = v.kind == FanViolation::Kind::missing_face ? "missing_face" : "bad_intersection";
      e["message"] = v.message;
      vs.push_back(std::move(e));
    }
    j["violations"] = std::move(vs);
    em.write(dump(j));
  } else {
    std::ostringstream s;
    s << "rank " << f.rank() << ", " << f.size() << " cones, " << f.maximal_cones().size() << " maximal\n";
    s << (rep.ok() ? "valid fan" : "NOT a fan") << "\n";
    for (const auto& v : rep.violations) s << "  " << v.message << "\n";
    if (rep.ok()) s << (is_complete(f) ? "complete" : "not complete") << "\n";
    em.write(s.str());
  }
  return rep.ok() ? 0 : 1;
}

inline void require_valid(const Fan& f, const std::string& what) {
  const FanReport rep = validate_fan(f);
  if (!rep.ok()) throw FanError(what + " is not a fan: " + rep.violations.front().message);
}

inline int cmd_gpoly(const RunConfig& c, const Emitter& em) {
  const Fan f = load_fan(single_input(c));
  require_valid(f, "input");
  std::vector<std::size_t> which;
  if (c.cone) {
    const auto idx = parse_cone(*c.cone);
    const auto i = f.index_of_ray_indices(idx);
    if (!i) throw InputError("--cone " + *c.cone + " is not a cone of the fan");
    which.push_back(*i);
  } else {
    which = f.maximal_cones();
  }
  Json j = Json::array();
  std::ostringstream s;
  for (auto i : which) {
    const QPolynomial g = g_stalk(f.cone(i));
    Json e;
    e["cone"] = f.cone(i).id();
    e["rays"] = f.ray_indices(i);
    Json cs = Json::array();
    for (const auto& x : g.coeffs()) cs.push_back(detail::int_json(x));
    e["g"] = std::move(cs);
    j.push_back(std::move(e));
    s << pad(f.cone(i).to_string(), 40) << g.to_string() << "\n";
  }
  em.write(c.format == OutputFormat::json ? dump(j) : s.str());
  return 0;
}

inline int cmd_ih(const RunConfig& c, const Emitter& em) {
  const Fan f = load_fan(single_input(c));
  require_valid(f, "input");
  QPolynomial p;
  std::string how;
  if (is_complete(f)) {
    p = global_ih(f);
    how = "complete";
  } else {
    p = ih_contractible(f);
    how = "contractible";
  }
  if (c.format == OutputFormat::json) {
    Json j;
    j["kind"] = how;
    Json cs = Json::array();
    for (const auto& x : p.coeffs()) cs.push_back(detail::int_json(x));
    j["ih"] = std::move(cs);
    em.write(dump(j));
  } else {
    em.write("IH (" + how + "): " + p.to_string() + "\n");
  }
  return 0;
}

inline int cmd_check(const RunConfig& c, const Emitter& em) {
  const std::string& path = single_input(c);
  const Json mj = read_json_file(path);
  const auto base = std::filesystem::path(path).parent_path();
  Fan source = fan_ref_from_json(detail::field(mj, "source", "map"), base);
  Fan target = fan_ref_from_json(detail::field(mj, "target", "map"), base);
  require_valid(source, "source");
  require_valid(target, "target");
  IntMatrix m = matrix_from_json(detail::field(mj, "matrix", "map"), target.rank(), source.rank());
  Json j;
  std::ostringstream s;
  std::optional<FanMap> f;
  try {
    f = build_map(m, source, target);
    j["compatible"] = true;
    s << "compatible: yes\n";
  } catch (const Incompatible& e) {
    j["compatible"] = false;
    j["incompatible_cone"] = source.ray_indices(e.cone());
    s << "compatible: no (" << e.what() << ")\n";
  }
  if (f) {
    const ProperCertificate pc = check_proper(*f);
    j["proper"] = pc.proper;
    s << "proper: " << (pc.proper ? "yes" : "no");
    if (pc.witness) {
      Json w = Json::array();
      for (const auto& x : *pc.witness) w.push_back(detail::int_json(x));
      j["witness"] = std::move(w);
      s << " (witness " << to_string(*pc.witness) << " maps into the target support but lies outside the source)";
    }
    s << "\n";
    const bool surj = is_surjective(f->matrix);
    j["surjective"] = surj;
    j["fibration"] = surj && pc.proper;
    s << "lattice map surjective: " << (surj ? "yes" : "no") << "\n";
    s << "fibration: " << (surj && pc.proper ? "yes" : "no") << "\n";
  }
  em.write(c.format == OutputFormat::json ? dump(j) : s.str());
  return 0;
}

inline int cmd_stein(const RunConfig& c, const Emitter& em, std::ostream& out) {
  const MapInput in = load_map(single_input(c));
  require_valid(in.map.source, "source");
  require_valid(in.map.target, "target");
  const SteinData st = stein_factorization(in.map);
  Json zf = fan_to_json(st.z_fan);
  Json g = map_to_json(st.g);
  Json h = map_to_json(st.h);
  if (c.out) {
    const std::filesystem::path dir(*c.out);
    std::filesystem::create_directories(dir);
    auto put = [&](const char* name, const Json& j) {
      std::ofstream f(dir / name);
      if (!f) throw InputError("cannot write " + (dir / name).string());
      f << dump(j);
    };
    put("z_fan.json", zf);
    put("g_map.json", g);
    put("h_map.json", h);
    out << "wrote z_fan.json, g_map.json, h_map.json to " << dir.string() << "\n";
    return 0;
  }
  if (c.format == OutputFormat::json) {
    Json j;
    j["z_fan"] = zf;
    j["g"] = g;
    j["h"] = h;
    em.write(dump(j));
  } else {
    std::ostringstream s;
    s << "N_Z basis (columns in N_Y):";
    for (const auto& col : st.z_basis.column_list()) s << " " << to_string(col);
    s << "\nZ fan: rank " << st.z_fan.rank() << ", " << st.z_fan.size() << " cones\n";
    for (auto i : st.z_fan.maximal_cones()) s << "  " << st.z_fan.cone(i).to_string() << "\n";
    s << "g matrix: " << matrix_to_json(st.g.matrix).dump() << "\n";
    s << "h matrix: " << matrix_to_json(st.h.matrix).dump() << "\n";
    em.write(s.str());
  }
  return 0;
}

inline int cmd_decompose(const RunConfig& c, const Emitter& em, std::ostream& out) {
  const std::string& path = single_input(c);
  const MapInput in = load_map(path);
  require_valid(in.map.source, "source");
  require_valid(in.map.target, "target");
  std::optional<Int> p = parse_prime(c);
  if (!p) p = in.p;
  const ProperCertificate pc = check_proper(in.map);
  if (!pc.proper)
    throw InputError("decompose: map is not proper" +
                     (pc.witness ? " (witness " + to_string(*pc.witness) + ")" : std::string()));
  DTSummandTable t;
  std::optional<SteinData> st;
  if (is_surjective(in.map.matrix)) {
    t = deconvolve(in.map);
    t.p = p;
  } else {
    if (!p) throw InputError("decompose: --p is required for maps that are not fibrations");
    st = stein_factorization(in.map);
    t = summands_proper(in.map, *p);
  }
  const bool dual_ok = verify_duality(t).pass();
  const bool rhl_ok = verify_rhl(t, c.projective).pass();
  const int code = (!dual_ok || (c.projective && !rhl_ok)) ? 2 : 0;
  if (c.format == OutputFormat::json) {
    em.write(dump(table_to_json(t, path)));
    if (c.out) out << dump(table_reports_json(t, c.projective));
  } else {
    const Fan& support_fan = st ? st->z_fan : in.map.target;
    em.write(table_text(t, &support_fan) + reports_text(t, c.projective));
  }
  return code;
}

inline int cmd_verify(const RunConfig& c, const Emitter& em) {
  const std::string& path = single_input(c);
  const Json j = read_json_file(path);
  if (j.is_object() && j.contains("summands")) {
    const DTSummandTable t = table_from_json(j);
    const bool ok = verify_duality(t).pass() && (!c.projective || verify_rhl(t, true).pass());
    em.write(c.format == OutputFormat::json ? dump(table_reports_json(t, c.projective)) : reports_text(t, c.projective));
    return ok ? 0 : 2;
  }
  const MapInput in = map_from_json(j, std::filesystem::path(path).parent_path());
  require_valid(in.map.source, "source");
  require_valid(in.map.target, "target");
  std::optional<Int> p = parse_prime(c);
  if (!p) p = in.p;
  const CountReport r = verify_map(in.map, p, parse_qs(c));
  em.write(c.format == OutputFormat::json ? dump(report_to_json(r)) : report_text(r));
  return r.pass() ? 0 : 2;
}

}  // namespace detail

/// Runs one command. Results go to `out` (or the --out file); diagnostics to `err`.
inline int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const detail::Emitter em{config, out};
  try {
    if (config.command == "validate") return detail::cmd_validate(config, em);
    if (config.command == "gpoly") return detail::cmd_gpoly(config, em);
    if (config.command == "ih") return detail::cmd_ih(config, em);
    if (config.command == "check") return detail::cmd_check(config, em);
    if (config.command == "stein") return detail::cmd_stein(config, em, out);
    if (config.command == "decompose") return detail::cmd_decompose(config, em, out);
    if (config.command == "verify") return detail::cmd_verify(config, em);
    throw InputError("unknown command \"" + config.command + "\"");
  } catch (const InvariantViolation& e) {
    err << "invariant violation: " << e.what() << "\n";
    return 2;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace toricdt
