#pragma once

#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "nestedvrp/core.hpp"
#include "nestedvrp/ns.hpp"

namespace nvrp {

using json = nlohmann::json;

inline json to_json(const Instance& inst) {
  json locs = json::array();
  for (const auto& l : inst.locations) locs.push_back({{"id", l.id}, {"x", l.x}, {"y", l.y}, {"obs_s", l.obs_time}});
  return {{"id", inst.id},
          {"unit_scale", inst.unit_scale},
          {"drone_speed", inst.drone_speed},
          {"truck_speed", inst.truck_speed},
          {"battery_s", inst.battery},
          {"swap_s", inst.swap_time},
          {"locations", locs}};
}

inline Instance instance_from_json(const json& j) {
  try {
    Instance inst;
    inst.id = j.value("id", std::string{});
    inst.unit_scale = j.value("unit_scale", 100.0);
    inst.drone_speed = j.value("drone_speed", 30.0);
    inst.truck_speed = j.value("truck_speed", inst.drone_speed);
    inst.battery = j.value("battery_s", 900.0);
    inst.swap_time = j.value("swap_s", 100.0);
    for (const auto& l : j.at("locations"))
      inst.locations.push_back({l.at("id").get<int>(), l.at("x").get<double>(), l.at("y").get<double>(),
                                l.value("obs_s", 0.0)});
    check_instance_parameters(inst);
    return inst;
  } catch (const json::exception& e) {
    throw StructuralError(std::string("bad instance JSON: ") + e.what());
  }
}

inline json to_json(const NestedUnit& u) {
  return {{"kind", to_string(u.kind)}, {"span", {u.begin, u.end}}, {"locs", u.locations}, {"D", u.drone_time},
          {"T", u.truck_time},         {"ibr", u.ibr},             {"l", u.cost},         {"charged", u.charged}};
}

inline json to_json(const Solution& s) {
  json units = json::array();
  for (const auto& u : s.units) units.push_back(to_json(u));
  return {{"instance_id", s.instance_id}, {"makespan_s", s.makespan}, {"obs_offset_s", s.obs_offset},
          {"route", s.route},             {"units", units}};
}

inline Solution solution_from_json(const json& j) {
  try {
    Solution s;
    s.instance_id = j.value("instance_id", std::string{});
    s.makespan = j.at("makespan_s").get<double>();
    s.obs_offset = j.value("obs_offset_s", 0.0);
    s.route = j.at("route").get<std::vector<int>>();
    for (const auto& ju : j.at("units")) {
      NestedUnit u;
      u.kind = unit_kind_from_string(ju.at("kind").get<std::string>());
      const auto span = ju.at("span").get<std::vector<int>>();
      if (span.size() != 2) throw StructuralError("unit span must have two entries");
      u.begin = span[0];
      u.end = span[1];
      u.locations = ju.value("locs", std::vector<int>{});
      u.drone_time = ju.at("D").get<double>();
      u.truck_time = ju.at("T").get<double>();
      u.cost = ju.at("l").get<double>();
      u.charged = ju.value("charged", u.kind != UnitKind::Shipment);
      if (ju.contains("ibr"))
        u.ibr = ju.at("ibr").get<double>();
      else
        u.ibr = u.kind == UnitKind::Shipment ? u.cost : std::max(u.drone_time, u.truck_time);
      s.units.push_back(std::move(u));
    }
    return s;
  } catch (const json::exception& e) {
    throw StructuralError(std::string("bad solution JSON: ") + e.what());
  }
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw StructuralError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw StructuralError(path + ": " + e.what());
  }
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StructuralError("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline Instance load_instance(const std::string& path) { return instance_from_json(read_json_file(path)); }
inline Solution load_solution(const std::string& path) { return solution_from_json(read_json_file(path)); }

inline void save_json(const std::string& path, const json& j) { write_text_file(path, j.dump(2) + "\n"); }

inline void write_trace_csv(std::ostream& os, const NsResult& r) {
  os << "iter,incumbent_s,best_s,accepted,destroyed_unit_idx\n";
  std::ostringstream line;
  line.precision(17);
  for (const auto& t : r.trace) {
    line.str("");
    line << t.iter << ',' << t.incumbent << ',' << t.best << ',' << (t.accepted ? 1 : 0) << ',' << t.destroyed_unit
         << '\n';
    os << line.str();
  }
}

}  // namespace nvrp
