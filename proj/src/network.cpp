#include "volpipe/network.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

#include "volpipe/csv.hpp"
#include "volpipe/errors.hpp"

namespace volpipe {

namespace {

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower((unsigned char)c));
  return s;
}

}  // namespace

LinkType parse_link_type(const std::string& s, bool* known) {
  std::string t = lower(s);
  if (known) *known = true;
  if (t == "motorway") return LinkType::motorway;
  if (t == "trunk") return LinkType::trunk;
  if (t == "ramp") return LinkType::ramp;
  if (t.size() > 5 && t.substr(t.size() - 5) == "_link") return LinkType::ramp;
  if (t == "primary") return LinkType::primary;
  if (t == "secondary") return LinkType::secondary;
  if (t == "tertiary") return LinkType::tertiary;
  if (t == "residential" || t == "local") return LinkType::residential;
  if (t == "service") return LinkType::service;
  if (t == "unclassified") return LinkType::unclassified;
  if (known) *known = false;
  return LinkType::other;
}

std::string link_type_name(LinkType t) {
  switch (t) {
    case LinkType::motorway: return "motorway";
    case LinkType::trunk: return "trunk";
    case LinkType::ramp: return "ramp";
    case LinkType::primary: return "primary";
    case LinkType::secondary: return "secondary";
    case LinkType::tertiary: return "tertiary";
    case LinkType::residential: return "residential";
    case LinkType::service: return "service";
    case LinkType::unclassified: return "unclassified";
    case LinkType::other: return "other";
  }
  return "other";
}

std::string functional_class_name(FunctionalClass f) {
  return f == FunctionalClass::highway ? "highway" : "non_highway";
}

FunctionalClass functional_class_of(LinkType t) {
  switch (t) {
    case LinkType::motorway:
    case LinkType::trunk:
    case LinkType::ramp:
      return FunctionalClass::highway;
    default:
      return FunctionalClass::non_highway;
  }
}

Stratum classify_stratum(const Link& link) {
  return Stratum{link.county, link.urban, functional_class_of(link.type)};
}

void LoadReport::reject_node(const std::string& why) {
  ++nodes_rejected;
  if (diagnostics.size() < 1000) diagnostics.push_back("node: " + why);
}

void LoadReport::reject_link(const std::string& why) {
  ++links_rejected;
  if (diagnostics.size() < 1000) diagnostics.push_back("link: " + why);
}

void RoadNetwork::finalize() {
  node_idx_.clear();
  link_idx_.clear();
  node_idx_.reserve(nodes.size());
  link_idx_.reserve(links.size());
  for (size_t i = 0; i < nodes.size(); ++i) node_idx_[nodes[i].node_id] = static_cast<int>(i);
  for (size_t i = 0; i < links.size(); ++i) link_idx_[links[i].link_id] = static_cast<int>(i);

  if (!nodes.empty()) {
    double lat_min = 90, lat_max = -90, lon_min = 180, lon_max = -180;
    for (const Node& n : nodes) {
      lat_min = std::min(lat_min, n.position.lat);
      lat_max = std::max(lat_max, n.position.lat);
      lon_min = std::min(lon_min, n.position.lon);
      lon_max = std::max(lon_max, n.position.lon);
    }
    projection_ref = GeoPoint{(lat_min + lat_max) / 2.0, (lon_min + lon_max) / 2.0};
  }

  node_plane_.resize(nodes.size());
  for (size_t i = 0; i < nodes.size(); ++i) node_plane_[i] = project(nodes[i].position, projection_ref);

  out_links_.assign(nodes.size(), {});
  link_dir_.assign(links.size(), std::nullopt);
  for (size_t i = 0; i < links.size(); ++i) {
    const Link& l = links[i];
    auto fit = node_idx_.find(l.from_node);
    auto tit = node_idx_.find(l.to_node);
    if (fit == node_idx_.end() || tit == node_idx_.end()) {
      throw InternalError("link references missing node after load: " + std::to_string(l.link_id));
    }
    out_links_[fit->second].push_back(static_cast<int>(i));
    const PlanePoint& a = node_plane_[fit->second];
    const PlanePoint& b = node_plane_[tit->second];
    double dx = b.x - a.x, dy = b.y - a.y;
    if (std::hypot(dx, dy) > 1e-9) link_dir_[i] = heading_deg(dx, dy);
  }
  for (auto& v : out_links_) std::sort(v.begin(), v.end(), [this](int a, int b) {
    return links[a].link_id < links[b].link_id;
  });
}

int RoadNetwork::node_index(int64_t node_id) const {
  auto it = node_idx_.find(node_id);
  return it == node_idx_.end() ? -1 : it->second;
}

int RoadNetwork::link_index(int64_t link_id) const {
  auto it = link_idx_.find(link_id);
  return it == link_idx_.end() ? -1 : it->second;
}

const Node& RoadNetwork::node(int64_t node_id) const {
  int i = node_index(node_id);
  if (i < 0) throw InternalError("unknown node id: " + std::to_string(node_id));
  return nodes[i];
}

const Link& RoadNetwork::link(int64_t link_id) const {
  int i = link_index(link_id);
  if (i < 0) throw InternalError("unknown link id: " + std::to_string(link_id));
  return links[i];
}

double link_direction(const Link& link, const RoadNetwork& net) {
  int li = net.link_index(link.link_id);
  if (li >= 0) {
    auto d = net.link_dir_deg(li);
    if (!d) throw InternalError("degenerate link geometry (zero projected length): " +
                                std::to_string(link.link_id));
    return *d;
  }
  PlanePoint a = project(net.node(link.from_node).position, net.projection_ref);
  PlanePoint b = project(net.node(link.to_node).position, net.projection_ref);
  double dx = b.x - a.x, dy = b.y - a.y;
  if (std::hypot(dx, dy) <= 1e-9) {
    throw InternalError("degenerate link geometry (zero projected length): " +
                        std::to_string(link.link_id));
  }
  return heading_deg(dx, dy);
}

namespace {

int require_col(const CsvReader& r, const std::string& name, const std::string& file) {
  int c = r.col(name);
  if (c < 0) throw InputError("missing required column '" + name + "' in " + file);
  return c;
}

std::string field(const std::vector<std::string>& row, int idx) {
  if (idx < 0 || idx >= static_cast<int>(row.size())) return "";
  return row[idx];
}

}  // namespace

RoadNetwork load_network(const std::string& node_file, const std::string& link_file,
                         LoadReport* report) {
  LoadReport local;
  LoadReport& rep = report ? *report : local;
  RoadNetwork net;

  {
    CsvReader r(node_file);
    int c_id = require_col(r, "node_id", node_file);
    int c_x = require_col(r, "x_coord", node_file);
    int c_y = require_col(r, "y_coord", node_file);
    std::vector<std::string> row;
    std::unordered_map<int64_t, bool> seen;
    while (r.next(row)) {
      auto id = parse_int_opt(field(row, c_id));
      auto lon = parse_double_opt(field(row, c_x));
      auto lat = parse_double_opt(field(row, c_y));
      if (!id || !lon || !lat) {
        rep.reject_node("row " + std::to_string(r.line_number()) + ": unparsable id/coords");
        continue;
      }
      GeoPoint p{*lat, *lon};
      if (!geo_valid(p)) {
        rep.reject_node("row " + std::to_string(r.line_number()) + ": coordinates out of range");
        continue;
      }
      if (seen.count(*id)) {
        rep.reject_node("row " + std::to_string(r.line_number()) + ": duplicate node_id " +
                        std::to_string(*id));
        continue;
      }
      seen[*id] = true;
      net.nodes.push_back(Node{*id, p});
      ++rep.nodes_loaded;
    }
  }

  // Projection reference is needed to validate geometry endpoints in meters.
  net.finalize();

  {
    CsvReader r(link_file);
    int c_id = require_col(r, "link_id", link_file);
    int c_from = require_col(r, "from_node_id", link_file);
    int c_to = require_col(r, "to_node_id", link_file);
    int c_len = require_col(r, "length", link_file);
    int c_geom = require_col(r, "geometry", link_file);
    int c_type = require_col(r, "link_type", link_file);
    int c_lanes = r.col("lanes");
    int c_speed = r.col("free_speed");
    int c_county = r.col("county");
    int c_urban = r.col("urban");

    std::vector<std::string> row;
    std::unordered_map<int64_t, bool> seen;
    while (r.next(row)) {
      std::string where = "row " + std::to_string(r.line_number());
      auto id = parse_int_opt(field(row, c_id));
      auto from = parse_int_opt(field(row, c_from));
      auto to = parse_int_opt(field(row, c_to));
      auto len = parse_double_opt(field(row, c_len));
      if (!id || !from || !to || !len) {
        rep.reject_link(where + ": unparsable id/nodes/length");
        continue;
      }
      if (seen.count(*id)) {
        rep.reject_link(where + ": duplicate link_id " + std::to_string(*id));
        continue;
      }
      if (*from == *to) {
        rep.reject_link(where + ": from_node equals to_node");
        continue;
      }
      if (*len <= 0) {
        rep.reject_link(where + ": non-positive length");
        continue;
      }
      int fi = net.node_index(*from);
      int ti = net.node_index(*to);
      if (fi < 0 || ti < 0) {
        rep.reject_link(where + ": dangling node reference " +
                        std::to_string(fi < 0 ? *from : *to));
        continue;
      }
      std::vector<GeoPoint> geom;
      try {
        geom = parse_wkt_linestring(field(row, c_geom));
      } catch (const InputError& e) {
        rep.reject_link(where + ": " + e.what());
        continue;
      }
      PlanePoint g0 = project(geom.front(), net.projection_ref);
      PlanePoint g1 = project(geom.back(), net.projection_ref);
      if (plane_distance(g0, net.node_plane(fi)) > 1.0 ||
          plane_distance(g1, net.node_plane(ti)) > 1.0) {
        rep.reject_link(where + ": geometry endpoints off node positions by > 1 m");
        continue;
      }

      Link l;
      l.link_id = *id;
      l.from_node = *from;
      l.to_node = *to;
      l.geometry = std::move(geom);
      l.length_m = *len;
      bool known = true;
      l.type = parse_link_type(field(row, c_type), &known);
      if (!known) ++rep.unknown_link_types;
      if (auto lanes = parse_int_opt(field(row, c_lanes)); lanes && *lanes > 0) {
        l.lanes = static_cast<int>(*lanes);
      }
      // free_speed column follows the GMNS convention (km/h); stored as m/s.
      if (auto sp = parse_double_opt(field(row, c_speed)); sp && *sp > 0) {
        l.speed_limit_ms = *sp / 3.6;
      }
      l.county = field(row, c_county);
      std::string u = lower(field(row, c_urban));
      l.urban = (u == "1" || u == "true" || u == "yes");
      net.links.push_back(std::move(l));
      ++rep.links_loaded;
    }
  }

  net.finalize();
  return net;
}

namespace {

// Lower median for lane counts (an observed value), true median for speeds.
int median_int(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  return v[(v.size() - 1) / 2];
}

double median_double(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  size_t n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

}  // namespace

RoadNetwork impute_missing_attributes(RoadNetwork net) {
  constexpr int kDefaultLanes = 1;
  constexpr double kDefaultSpeedMs = 13.9;

  std::unordered_map<Stratum, std::vector<int>, StratumHash> lanes_by_stratum;
  std::unordered_map<Stratum, std::vector<double>, StratumHash> speed_by_stratum;
  std::vector<int> lanes_by_fc[2];
  std::vector<double> speed_by_fc[2];

  for (const Link& l : net.links) {
    Stratum s = classify_stratum(l);
    int fc = static_cast<int>(s.fc);
    if (l.lanes) {
      lanes_by_stratum[s].push_back(*l.lanes);
      lanes_by_fc[fc].push_back(*l.lanes);
    }
    if (l.speed_limit_ms) {
      speed_by_stratum[s].push_back(*l.speed_limit_ms);
      speed_by_fc[fc].push_back(*l.speed_limit_ms);
    }
  }

  for (Link& l : net.links) {
    Stratum s = classify_stratum(l);
    int fc = static_cast<int>(s.fc);
    if (!l.lanes) {
      auto it = lanes_by_stratum.find(s);
      if (it != lanes_by_stratum.end()) l.lanes = median_int(it->second);
      else if (!lanes_by_fc[fc].empty()) l.lanes = median_int(lanes_by_fc[fc]);
      else l.lanes = kDefaultLanes;
    }
    if (!l.speed_limit_ms) {
      auto it = speed_by_stratum.find(s);
      if (it != speed_by_stratum.end()) l.speed_limit_ms = median_double(it->second);
      else if (!speed_by_fc[fc].empty()) l.speed_limit_ms = median_double(speed_by_fc[fc]);
      else l.speed_limit_ms = kDefaultSpeedMs;
    }
  }
  return net;
}

void write_network_csv(const RoadNetwork& net, const std::string& node_file,
                       const std::string& link_file) {
  {
    CsvWriter w(node_file);
    w.write_row({"node_id", "x_coord", "y_coord"});
    for (const Node& n : net.nodes) {
      w.write_row({std::to_string(n.node_id), fmt_double(n.position.lon), fmt_double(n.position.lat)});
    }
  }
  {
    CsvWriter w(link_file);
    w.write_row({"link_id", "from_node_id", "to_node_id", "length", "geometry", "link_type",
                 "lanes", "free_speed", "county", "urban"});
    for (const Link& l : net.links) {
      w.write_row({std::to_string(l.link_id), std::to_string(l.from_node),
                   std::to_string(l.to_node), fmt_double(l.length_m),
                   format_wkt_linestring(l.geometry), link_type_name(l.type),
                   l.lanes ? std::to_string(*l.lanes) : "",
                   l.speed_limit_ms ? fmt_double(*l.speed_limit_ms * 3.6) : "",
                   l.county, l.urban ? "1" : "0"});
    }
  }
}

}  // namespace volpipe
