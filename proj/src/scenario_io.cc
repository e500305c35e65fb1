#include "bimodal/scenario_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include "bimodal/error.hpp"

namespace bimodal {

using nlohmann::json;

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void WriteFile(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << contents;
  if (!out) throw IoError("write failed for " + path.string());
}

std::string FormatDouble(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

namespace {

double ParseDouble(std::string_view text, const std::string& where) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw IoError(where + ": expected a number, got '" + std::string(text) + "'");
  }
  return value;
}

std::vector<std::string_view> Split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = text.find(sep, start);
    out.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::string_view> Lines(std::string_view text) {
  auto lines = Split(text, '\n');
  for (auto& l : lines) {
    if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
  }
  return lines;
}

std::vector<std::string> Tokens(std::string_view line) {
  std::istringstream in{std::string(line)};
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

// --- scenario JSON -------------------------------------------------------

const json& Field(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.is_object()) throw ValidationError(where + ": expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw ValidationError(where + ": missing field '" + key + "'");
  return *it;
}

double Number(const json& obj, const std::string& key, const std::string& where) {
  const json& v = Field(obj, key, where);
  if (!v.is_number()) throw ValidationError(where + "." + key + ": expected a number");
  return v.get<double>();
}

double NumberOr(const json& obj, const std::string& key, double fallback, const std::string& where) {
  return obj.contains(key) ? Number(obj, key, where) : fallback;
}

std::string String(const json& obj, const std::string& key, const std::string& where) {
  const json& v = Field(obj, key, where);
  if (!v.is_string()) throw ValidationError(where + "." + key + ": expected a string");
  return v.get<std::string>();
}

LatencyPlane Omega(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 3 || !std::all_of(v.begin(), v.end(), [](const json& x) {
        return x.is_number();
      })) {
    throw ValidationError(where + ": omega must be an array of 3 numbers");
  }
  return {{v[0].get<double>(), v[1].get<double>(), v[2].get<double>()}};
}

struct ReferencePlane {
  LatencyPlane plane;
  double length_km;
};

Constants ParseConstants(const json& c) {
  const std::string where = "constants";
  Constants out;
  if (c.contains("parcels_per_truck")) {
    const json& m = c["parcels_per_truck"];
    if (!m.is_number_integer()) throw ValidationError(where + ".parcels_per_truck: expected an integer");
    out.parcels_per_truck = m.get<int>();
  }
  out.truck_cost = NumberOr(c, "truck_cost", out.truck_cost, where);
  out.drone_cost = NumberOr(c, "drone_cost", out.drone_cost, where);
  out.nominal_total = Number(c, "beta", where);
  out.cost_cap = Number(c, "cost_cap", where);
  out.drone_speed_kmh = NumberOr(c, "drone_speed_kmh", out.drone_speed_kmh, where);
  return out;
}

}  // namespace

Network ScenarioFromJson(const json& doc) {
  if (!doc.is_object()) throw ValidationError("scenario: expected a JSON object");
  if (doc.contains("schema_version")) {
    const json& v = doc["schema_version"];
    if (!v.is_number_integer() || v.get<int>() != kScenarioSchemaVersion) {
      throw ValidationError("scenario.schema_version: unsupported version " + v.dump());
    }
  }

  Network net;
  if (doc.contains("name") && doc["name"].is_string()) net.name = doc["name"].get<std::string>();

  const json& nodes = Field(doc, "nodes", "scenario");
  if (!nodes.is_array() || nodes.empty()) throw ValidationError("scenario.nodes: expected a non-empty array");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::string where = "nodes[" + std::to_string(i) + "]";
    Node node;
    node.name = String(nodes[i], "name", where);
    const bool has_x = nodes[i].contains("x_km");
    if (has_x != nodes[i].contains("y_km")) {
      throw ValidationError(where + ": give both x_km and y_km or neither");
    }
    if (has_x) node.position = Point{Number(nodes[i], "x_km", where), Number(nodes[i], "y_km", where)};
    net.nodes.push_back(std::move(node));
  }
  auto lookup = [&net](const std::string& name, const std::string& where) {
    const auto id = net.find_node(name);
    if (!id) throw ValidationError(where + ": unknown node '" + name + "'");
    return *id;
  };

  net.hub = lookup(String(doc, "hub", "scenario"), "scenario.hub");
  net.constants = ParseConstants(Field(doc, "constants", "scenario"));

  std::map<int, ReferencePlane> reference{
      {2, {TwoLaneReferencePlane(), kTwoLaneReferenceLengthKm}},
      {3, {ThreeLaneReferencePlane(), kThreeLaneReferenceLengthKm}},
  };
  if (doc.contains("reference_planes")) {
    const json& refs = doc["reference_planes"];
    for (const auto& [key, lanes] : {std::pair{"two_lane", 2}, std::pair{"three_lane", 3}}) {
      if (!refs.contains(key)) continue;
      const std::string where = std::string("reference_planes.") + key;
      reference[lanes] = {Omega(Field(refs[key], "omega", where), where + ".omega"),
                          Number(refs[key], "length_km", where)};
    }
  }

  const json& roads = Field(doc, "road_edges", "scenario");
  if (!roads.is_array()) throw ValidationError("scenario.road_edges: expected an array");
  // Edges given as capacity+flow get kappa * flow / capacity, with kappa
  // chosen so that all nominal flows sum to beta.
  std::vector<std::pair<std::size_t, double>> ratio_edges;
  double explicit_total = 0.0;
  for (std::size_t i = 0; i < roads.size(); ++i) {
    const std::string where = "road_edges[" + std::to_string(i) + "]";
    const json& r = roads[i];
    RoadEdge e;
    e.id = EdgeId{static_cast<int>(i)};
    e.from = lookup(String(r, "from", where), where + ".from");
    e.to = lookup(String(r, "to", where), where + ".to");
    e.length_km = Number(r, "length_km", where);
    const json& lanes = Field(r, "lanes", where);
    if (!lanes.is_number_integer()) throw ValidationError(where + ".lanes: expected an integer");
    e.lanes = lanes.get<int>();
    if (r.contains("nominal_flow")) {
      e.nominal_flow = Number(r, "nominal_flow", where);
      explicit_total += e.nominal_flow;
    } else if (r.contains("capacity") && r.contains("flow")) {
      const double capacity = Number(r, "capacity", where);
      if (!(capacity > 0.0)) throw ValidationError(where + ".capacity: must be positive");
      ratio_edges.emplace_back(i, Number(r, "flow", where) / capacity);
    } else {
      throw ValidationError(where + ": give nominal_flow or a capacity and flow pair");
    }
    if (r.contains("omega")) {
      e.plane = Omega(r["omega"], where + ".omega");
    } else {
      const auto ref = reference.find(e.lanes);
      if (ref == reference.end()) {
        throw ValidationError(where + ".lanes: no reference plane for " + std::to_string(e.lanes) +
                              " lanes");
      }
      if (!(e.length_km > 0.0)) throw ValidationError(where + ".length_km: must be positive");
      e.plane = ScalePlane(ref->second.plane, e.length_km, ref->second.length_km);
    }
    net.road_edges.push_back(e);
  }
  if (!ratio_edges.empty()) {
    double ratio_sum = 0.0;
    for (const auto& [i, ratio] : ratio_edges) ratio_sum += ratio;
    const double kappa = (net.constants.nominal_total - explicit_total) / ratio_sum;
    if (!(kappa > 0.0) || !std::isfinite(kappa)) {
      throw ValidationError("road_edges: cannot scale capacity/flow ratios to sum to beta");
    }
    for (const auto& [i, ratio] : ratio_edges) net.road_edges[i].nominal_flow = kappa * ratio;
  }

  if (doc.contains("aerial_edges")) {
    const json& aerial = doc["aerial_edges"];
    if (!aerial.is_array()) throw ValidationError("scenario.aerial_edges: expected an array");
    for (std::size_t i = 0; i < aerial.size(); ++i) {
      const std::string where = "aerial_edges[" + std::to_string(i) + "]";
      const json& a = aerial[i];
      AerialEdge e;
      e.id = AerialEdgeId{static_cast<int>(i)};
      e.from = a.contains("from") ? lookup(String(a, "from", where), where + ".from") : net.hub;
      e.to = lookup(String(a, "to", where), where + ".to");
      const json& latency = Field(a, "latency_hours", where);
      if (latency.is_string() && latency.get<std::string>() == "auto") {
        const auto& p = net.nodes[e.from.index()].position;
        const auto& q = net.nodes[e.to.index()].position;
        if (!p || !q) {
          throw ValidationError(where + ".latency_hours: \"auto\" needs coordinates on both nodes");
        }
        e.latency_hours = AerialLatency(std::hypot(p->x_km - q->x_km, p->y_km - q->y_km),
                                        net.constants.drone_speed_kmh);
      } else if (latency.is_number()) {
        e.latency_hours = latency.get<double>();
      } else {
        throw ValidationError(where + ".latency_hours: expected a number or \"auto\"");
      }
      net.aerial_edges.push_back(e);
    }
  }

  net.demand.assign(net.nodes.size(), 0.0);
  if (doc.contains("demand")) {
    const json& demand = doc["demand"];
    if (!demand.is_object()) throw ValidationError("scenario.demand: expected an object");
    for (const auto& [name, value] : demand.items()) {
      if (!value.is_number()) throw ValidationError("demand." + name + ": expected a number");
      net.demand[lookup(name, "demand").index()] = value.get<double>();
    }
  }
  return net;
}

Network ParseScenarioFile(const std::filesystem::path& path) {
  json doc;
  try {
    doc = json::parse(ReadFile(path));
  } catch (const json::parse_error& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  return ScenarioFromJson(doc);
}

Network LoadScenario(const std::filesystem::path& path) {
  Network net = ParseScenarioFile(path);
  const auto violations = Validate(net);
  if (!violations.empty()) {
    std::string msg = path.string() + " failed validation:";
    for (const auto& v : violations) msg += "\n  " + v.code + ": " + v.detail;
    throw ValidationError(msg);
  }
  return net;
}

json ScenarioToJson(const Network& net) {
  auto name = [&net](NodeId id) { return net.nodes[id.index()].name; };
  json doc;
  doc["schema_version"] = kScenarioSchemaVersion;
  doc["name"] = net.name;
  doc["hub"] = name(net.hub);
  json nodes = json::array();
  for (const auto& n : net.nodes) {
    json node{{"name", n.name}};
    if (n.position) {
      node["x_km"] = n.position->x_km;
      node["y_km"] = n.position->y_km;
    }
    nodes.push_back(std::move(node));
  }
  doc["nodes"] = std::move(nodes);
  json roads = json::array();
  for (const auto& e : net.road_edges) {
    roads.push_back({{"from", name(e.from)},
                     {"to", name(e.to)},
                     {"length_km", e.length_km},
                     {"lanes", e.lanes},
                     {"nominal_flow", e.nominal_flow},
                     {"omega", e.plane.omega}});
  }
  doc["road_edges"] = std::move(roads);
  json aerial = json::array();
  for (const auto& e : net.aerial_edges) {
    aerial.push_back({{"from", name(e.from)}, {"to", name(e.to)}, {"latency_hours", e.latency_hours}});
  }
  doc["aerial_edges"] = std::move(aerial);
  json demand = json::object();
  for (std::size_t v = 0; v < net.nodes.size(); ++v) {
    if (NodeId{static_cast<int>(v)} != net.hub) demand[net.nodes[v].name] = net.demand[v];
  }
  doc["demand"] = std::move(demand);
  const auto& c = net.constants;
  doc["constants"] = {{"parcels_per_truck", c.parcels_per_truck},
                      {"truck_cost", c.truck_cost},
                      {"drone_cost", c.drone_cost},
                      {"beta", c.nominal_total},
                      {"cost_cap", c.cost_cap},
                      {"drone_speed_kmh", c.drone_speed_kmh}};
  return doc;
}

void SaveScenario(const Network& network, const std::filesystem::path& path) {
  WriteFile(path, ScenarioToJson(network).dump(2) + "\n");
}

// --- TNTP ----------------------------------------------------------------

namespace {

struct TntpLink {
  int from;
  int to;
  double capacity;
};

std::vector<TntpLink> ReadTntpNet(const std::filesystem::path& path) {
  const std::string text = ReadFile(path);
  std::vector<TntpLink> links;
  long declared = -1;
  bool in_metadata = true;
  const auto lines = Lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string_view line = lines[i];
    const std::string where = path.filename().string() + ":" + std::to_string(i + 1);
    if (in_metadata && line.starts_with("<")) {
      if (line.starts_with("<END OF METADATA>")) in_metadata = false;
      if (line.starts_with("<NUMBER OF LINKS>")) {
        declared = static_cast<long>(ParseDouble(line.substr(17), where));
      }
      continue;
    }
    auto tokens = Tokens(line);
    if (tokens.empty() || tokens.front().starts_with("~")) continue;
    if (tokens.back() == ";") tokens.pop_back();
    if (tokens.size() < 3) throw IoError(where + ": malformed link row");
    TntpLink link{static_cast<int>(ParseDouble(tokens[0], where)),
                  static_cast<int>(ParseDouble(tokens[1], where)), ParseDouble(tokens[2], where)};
    if (!(link.capacity > 0.0)) throw IoError(where + ": link capacity must be positive");
    links.push_back(link);
  }
  if (declared >= 0 && static_cast<long>(links.size()) != declared) {
    throw IoError(path.filename().string() + ": header declares " + std::to_string(declared) +
                  " links, found " + std::to_string(links.size()));
  }
  return links;
}

// Rows whose first token is not an integer (headers, comments) are skipped.
std::vector<std::vector<double>> ReadNumericRows(const std::filesystem::path& path,
                                                 std::size_t min_fields) {
  const std::string text = ReadFile(path);
  std::vector<std::vector<double>> rows;
  const auto lines = Lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    auto tokens = Tokens(lines[i]);
    if (!tokens.empty() && tokens.back() == ";") tokens.pop_back();
    if (tokens.empty()) continue;
    int probe = 0;
    const auto& first = tokens.front();
    const auto res = std::from_chars(first.data(), first.data() + first.size(), probe);
    if (res.ec != std::errc() || res.ptr != first.data() + first.size()) continue;
    const std::string where = path.filename().string() + ":" + std::to_string(i + 1);
    if (tokens.size() < min_fields) throw IoError(where + ": expected " + std::to_string(min_fields) + " fields");
    std::vector<double> row;
    for (const auto& t : tokens) row.push_back(ParseDouble(t, where));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

Network ImportTntp(const std::filesystem::path& net_path, const std::filesystem::path& node_path,
                   const std::filesystem::path& flow_path, const TntpOptions& options) {
  const auto links = ReadTntpNet(net_path);

  std::map<int, Point> coords;
  for (const auto& row : ReadNumericRows(node_path, 3)) {
    coords[static_cast<int>(row[0])] = Point{row[1], row[2]};
  }
  std::map<std::pair<int, int>, double> volume;
  for (const auto& row : ReadNumericRows(flow_path, 3)) {
    volume[{static_cast<int>(row[0]), static_cast<int>(row[1])}] = row[2];
  }

  std::map<int, NodeId> ids;
  for (const auto& l : links) {
    ids.emplace(l.from, NodeId{});
    ids.emplace(l.to, NodeId{});
  }
  Network net;
  net.name = net_path.stem().string();
  for (auto& [tntp_id, id] : ids) {
    const auto c = coords.find(tntp_id);
    if (c == coords.end()) {
      throw IoError(node_path.filename().string() + ": no coordinates for node " + std::to_string(tntp_id));
    }
    id = NodeId{static_cast<int>(net.nodes.size())};
    net.nodes.push_back(Node{std::to_string(tntp_id), c->second});
  }
  const auto hub = ids.find(options.hub);
  if (hub == ids.end()) throw ValidationError("hub node " + std::to_string(options.hub) + " is not in the network");
  net.hub = hub->second;

  // Geographic coordinates are projected equirectangularly around the mean
  // latitude; planar ones are rescaled to the target mean edge length.
  const bool geographic = std::all_of(net.nodes.begin(), net.nodes.end(), [](const Node& n) {
    return std::abs(n.position->x_km) <= 180.0 && std::abs(n.position->y_km) <= 90.0;
  });
  if (geographic) {
    double lat0 = 0.0;
    for (const auto& n : net.nodes) lat0 += n.position->y_km;
    lat0 /= static_cast<double>(net.nodes.size());
    const double kx = 111.320 * std::cos(lat0 * std::numbers::pi / 180.0);
    constexpr double ky = 110.574;
    for (auto& n : net.nodes) n.position = Point{n.position->x_km * kx, n.position->y_km * ky};
  }
  auto distance = [&net](NodeId a, NodeId b) {
    const Point& p = *net.nodes[a.index()].position;
    const Point& q = *net.nodes[b.index()].position;
    return std::hypot(p.x_km - q.x_km, p.y_km - q.y_km);
  };
  double mean_edge = 0.0;
  for (const auto& l : links) mean_edge += distance(ids[l.from], ids[l.to]);
  mean_edge /= static_cast<double>(links.size());
  if (!(mean_edge > 0.0)) throw ValidationError("node coordinates give zero-length edges");
  const double target = options.mean_edge_km.value_or(geographic ? mean_edge : kDefaultMeanEdgeKm);
  const double scale = target / mean_edge;
  double min_x = std::numeric_limits<double>::infinity();
  double min_y = min_x;
  for (const auto& n : net.nodes) {
    min_x = std::min(min_x, n.position->x_km);
    min_y = std::min(min_y, n.position->y_km);
  }
  for (auto& n : net.nodes) {
    n.position = Point{(n.position->x_km - min_x) * scale, (n.position->y_km - min_y) * scale};
  }

  std::vector<double> ratio;
  double ratio_sum = 0.0;
  for (std::size_t i = 0; i < links.size(); ++i) {
    const auto& l = links[i];
    const auto v = volume.find({l.from, l.to});
    if (v == volume.end()) {
      throw IoError(flow_path.filename().string() + ": no flow for link " + std::to_string(l.from) +
                    "->" + std::to_string(l.to));
    }
    ratio.push_back(v->second / l.capacity);
    ratio_sum += ratio.back();
  }
  if (!(ratio_sum > 0.0)) throw ValidationError("TNTP link flows are all zero");
  const double kappa = options.nominal_total / ratio_sum;

  for (std::size_t i = 0; i < links.size(); ++i) {
    const auto& l = links[i];
    RoadEdge e;
    e.id = EdgeId{static_cast<int>(i)};
    e.from = ids[l.from];
    e.to = ids[l.to];
    e.length_km = distance(e.from, e.to);
    e.lanes = l.capacity > options.three_lane_capacity ? 3 : 2;
    e.nominal_flow = kappa * ratio[i];
    e.plane = e.lanes == 3 ? ScalePlane(options.three_lane, e.length_km, kThreeLaneReferenceLengthKm)
                           : ScalePlane(options.two_lane, e.length_km, kTwoLaneReferenceLengthKm);
    net.road_edges.push_back(e);
  }

  net.constants = options.constants;
  net.constants.nominal_total = options.nominal_total;
  net.constants.cost_cap = options.cost_cap;
  net.demand.assign(net.nodes.size(), 0.0);
  for (std::size_t v = 0; v < net.nodes.size(); ++v) {
    const NodeId id{static_cast<int>(v)};
    if (id == net.hub) continue;
    net.demand[v] = options.demand_per_node;
    net.aerial_edges.push_back(AerialEdge{AerialEdgeId{static_cast<int>(net.aerial_edges.size())},
                                          net.hub, id,
                                          AerialLatency(distance(net.hub, id),
                                                        net.constants.drone_speed_kmh)});
  }
  return net;
}

// --- samples and planes ----------------------------------------------------

std::vector<LatencySample> ReadSamplesCsv(const std::filesystem::path& path) {
  const std::string text = ReadFile(path);
  const auto lines = Lines(text);
  if (lines.empty() || lines[0] != "truck_flow,total_flow,latency_hours") {
    throw IoError(path.string() + ":1: expected header truck_flow,total_flow,latency_hours");
  }
  std::vector<LatencySample> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(i + 1);
    const auto fields = Split(lines[i], ',');
    if (fields.size() != 3) throw IoError(where + ": expected 3 fields");
    out.push_back({ParseDouble(fields[0], where), ParseDouble(fields[1], where),
                   ParseDouble(fields[2], where)});
  }
  return out;
}

void WriteSamplesCsv(std::span<const LatencySample> samples, const std::filesystem::path& path) {
  std::string out = "truck_flow,total_flow,latency_hours\n";
  for (const auto& s : samples) {
    out += FormatDouble(s.truck_flow) + "," + FormatDouble(s.total_flow) + "," +
           FormatDouble(s.latency) + "\n";
  }
  WriteFile(path, out);
}

json PlaneToJson(const LatencyPlane& plane) { return {{"omega", plane.omega}}; }

LatencyPlane PlaneFromJson(const json& doc) { return Omega(Field(doc, "omega", "plane"), "plane.omega"); }

// --- results ---------------------------------------------------------------

namespace {

constexpr std::string_view kResultsHeader =
    "gamma,mode,status,objective_minutes,parcel_latency_minutes,societal_latency_minutes,"
    "operational_cost,kkt_residual,iterations,edge_truck_flows,path_flows,drone_demands";

std::string JoinList(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ';';
    out += FormatDouble(values[i]);
  }
  return out;
}

std::vector<double> ParseList(std::string_view text, const std::string& where) {
  std::vector<double> out;
  if (text.empty()) return out;
  for (auto part : Split(text, ';')) out.push_back(ParseDouble(part, where));
  return out;
}

}  // namespace

std::string ResultsToCsv(std::span<const ResultRow> rows) {
  std::string out(kResultsHeader);
  out += '\n';
  for (const auto& r : rows) {
    out += FormatDouble(r.gamma) + ',' + std::string(ToString(r.mode)) + ',' + r.status + ',' +
           FormatDouble(r.objective_minutes) + ',' + FormatDouble(r.parcel_latency_minutes) + ',' +
           FormatDouble(r.societal_latency_minutes) + ',' + FormatDouble(r.operational_cost) + ',' +
           FormatDouble(r.kkt_residual) + ',' + std::to_string(r.iterations) + ',' +
           JoinList(r.edge_truck_flows) + ',' + JoinList(r.path_flows) + ',' +
           JoinList(r.drone_demands) + '\n';
  }
  return out;
}

std::vector<ResultRow> ResultsFromCsv(const std::string& text) {
  const auto lines = Lines(text);
  if (lines.empty() || lines[0] != kResultsHeader) throw IoError("results: unexpected header");
  std::vector<ResultRow> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const std::string where = "results:" + std::to_string(i + 1);
    const auto f = Split(lines[i], ',');
    if (f.size() != 12) throw IoError(where + ": expected 12 fields");
    ResultRow r;
    r.gamma = ParseDouble(f[0], where);
    r.mode = ParseMode(f[1]);
    r.status = std::string(f[2]);
    r.objective_minutes = ParseDouble(f[3], where);
    r.parcel_latency_minutes = ParseDouble(f[4], where);
    r.societal_latency_minutes = ParseDouble(f[5], where);
    r.operational_cost = ParseDouble(f[6], where);
    r.kkt_residual = ParseDouble(f[7], where);
    r.iterations = static_cast<int>(ParseDouble(f[8], where));
    r.edge_truck_flows = ParseList(f[9], where);
    r.path_flows = ParseList(f[10], where);
    r.drone_demands = ParseList(f[11], where);
    rows.push_back(std::move(r));
  }
  return rows;
}

void ExportResults(std::span<const ResultRow> rows, const std::filesystem::path& path) {
  if (rows.empty()) throw DomainError("no result rows to export");
  WriteFile(path, ResultsToCsv(rows));
}

}  // namespace bimodal
