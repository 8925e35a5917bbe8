#include "pdptwse/io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace pdptwse {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr const char* kInstanceFormat = "pdptwse-instance";
constexpr const char* kSolutionFormat = "pdptwse-solution";

ordered_json Coords(const Point& p, bool three_d) {
  ordered_json c = ordered_json::array({p.x, p.y});
  if (three_d) c.push_back(p.z);
  return c;
}

Point ParsePoint(const json& c) {
  if (!c.is_array() || c.size() < 2 || c.size() > 3) throw FormatError("coords must hold 2 or 3 numbers");
  Point p{c[0].get<double>(), c[1].get<double>(), 0.0};
  if (c.size() == 3) p.z = c[2].get<double>();
  return p;
}

TimeWindow ParseWindow(const json& w) {
  if (!w.is_array() || w.size() != 2) throw FormatError("window must be [open, close]");
  return {w[0].get<double>(), w[1].get<double>()};
}

json Parse(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

std::string InstanceToJson(const InstanceData& d) {
  bool three_d = false;
  for (const Node& v : d.nodes) three_d |= v.pos.z != 0.0;
  for (const Machine& m : d.machines) {
    for (const Station& s : m.stations) three_d |= s.pos.z != 0.0;
  }
  ordered_json doc;
  doc["format"] = kInstanceFormat;
  doc["version"] = 1;
  doc["name"] = d.name;
  doc["requests"] = d.num_requests;
  doc["regions"] = d.num_regions;
  ordered_json nodes = ordered_json::array();
  for (std::size_t i = 0; i < d.nodes.size(); ++i) {
    const Node& v = d.nodes[i];
    ordered_json o;
    o["id"] = i;
    o["coords"] = Coords(v.pos, three_d);
    o["region"] = v.region;
    o["demand"] = v.demand;
    o["window"] = ordered_json::array({v.window.open, v.window.close});
    o["service"] = v.service;
    nodes.push_back(std::move(o));
  }
  doc["nodes"] = std::move(nodes);
  ordered_json vehicles = ordered_json::array();
  for (const Vehicle& v : d.vehicles) {
    ordered_json o;
    o["capacity"] = v.capacity;
    o["speed"] = v.speed;
    vehicles.push_back(std::move(o));
  }
  doc["vehicles"] = std::move(vehicles);
  ordered_json machines = ordered_json::array();
  for (const Machine& m : d.machines) {
    ordered_json o;
    o["speed"] = m.speed;
    ordered_json stations = ordered_json::array();
    for (const Station& s : m.stations) {
      ordered_json so;
      so["region"] = s.region;
      so["coords"] = Coords(s.pos, three_d);
      stations.push_back(std::move(so));
    }
    o["stations"] = std::move(stations);
    machines.push_back(std::move(o));
  }
  doc["machines"] = std::move(machines);
  return doc.dump(1) + "\n";
}

InstanceData InstanceFromJson(std::string_view text) {
  const json doc = Parse(text);
  try {
    if (doc.value("format", "") != kInstanceFormat) throw FormatError("not an instance document");
    InstanceData d;
    d.name = doc.value("name", "");
    d.num_requests = doc.at("requests").get<int>();
    d.num_regions = doc.at("regions").get<int>();
    for (const json& o : doc.at("nodes")) {
      Node v;
      v.pos = ParsePoint(o.at("coords"));
      v.region = o.at("region").get<int>();
      v.demand = o.at("demand").get<int>();
      v.window = ParseWindow(o.at("window"));
      v.service = o.at("service").get<double>();
      d.nodes.push_back(v);
    }
    for (const json& o : doc.at("vehicles")) {
      d.vehicles.push_back({o.at("capacity").get<double>(), o.value("speed", 1.0)});
    }
    for (const json& o : doc.at("machines")) {
      Machine m;
      m.speed = o.value("speed", 1.0);
      for (const json& s : o.at("stations")) m.stations.push_back({s.at("region").get<int>(), ParsePoint(s.at("coords"))});
      d.machines.push_back(std::move(m));
    }
    return d;
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad instance document: ") + e.what());
  }
}

std::string SolutionToJson(const Solution& sol) {
  ordered_json doc;
  doc["format"] = kSolutionFormat;
  doc["version"] = 1;
  doc["feasible"] = sol.feasible;
  doc["cost"] = sol.cost;
  ordered_json routes = ordered_json::array();
  for (const auto& route : sol.routes) {
    ordered_json r = ordered_json::array();
    for (const Visit& v : route) r.push_back(ordered_json::array({v.node, v.start, v.load}));
    routes.push_back(std::move(r));
  }
  doc["routes"] = std::move(routes);
  ordered_json machines = ordered_json::array();
  for (const auto& seq : sol.machines) {
    ordered_json m = ordered_json::array();
    for (const Travel& t : seq) m.push_back(ordered_json::array({t.from, t.to, t.vehicle, t.start}));
    machines.push_back(std::move(m));
  }
  doc["machines"] = std::move(machines);
  return doc.dump(1) + "\n";
}

Solution SolutionFromJson(std::string_view text) {
  const json doc = Parse(text);
  try {
    if (doc.value("format", "") != kSolutionFormat) throw FormatError("not a solution document");
    Solution sol;
    sol.feasible = doc.at("feasible").get<bool>();
    sol.cost = doc.at("cost").get<double>();
    for (const json& r : doc.at("routes")) {
      std::vector<Visit> route;
      for (const json& v : r) route.push_back({v.at(0).get<int>(), v.at(1).get<double>(), v.at(2).get<int>()});
      sol.routes.push_back(std::move(route));
    }
    for (const json& m : doc.at("machines")) {
      std::vector<Travel> seq;
      for (const json& t : m) {
        seq.push_back({t.at(0).get<int>(), t.at(1).get<int>(), t.at(2).get<int>(), t.at(3).get<double>()});
      }
      sol.machines.push_back(std::move(seq));
    }
    return sol;
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad solution document: ") + e.what());
  }
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void WriteFile(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw std::runtime_error("write failed for " + path);
}

InstanceData LoadInstance(const std::string& path) { return InstanceFromJson(ReadFile(path)); }

void SaveInstance(const std::string& path, const InstanceData& data) { WriteFile(path, InstanceToJson(data)); }

Solution LoadSolution(const std::string& path) { return SolutionFromJson(ReadFile(path)); }

void SaveSolution(const std::string& path, const Solution& sol) { WriteFile(path, SolutionToJson(sol)); }

}  // namespace pdptwse
