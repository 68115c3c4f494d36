#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "volpipe/geo.hpp"

namespace volpipe {

enum class LinkType {
  motorway,
  trunk,
  ramp,
  primary,
  secondary,
  tertiary,
  residential,
  service,
  unclassified,
  other,
};

enum class FunctionalClass { highway, non_highway };

LinkType parse_link_type(const std::string& s, bool* known = nullptr);
std::string link_type_name(LinkType t);
std::string functional_class_name(FunctionalClass f);

/// motorway / trunk / ramp map to highway, everything else to non_highway.
FunctionalClass functional_class_of(LinkType t);

struct Node {
  int64_t node_id = 0;
  GeoPoint position;
};

struct Link {
  int64_t link_id = 0;
  int64_t from_node = 0;
  int64_t to_node = 0;
  std::vector<GeoPoint> geometry;  // >= 2 points, endpoints near node positions
  double length_m = 0.0;
  LinkType type = LinkType::other;
  std::optional<int> lanes;
  std::optional<double> speed_limit_ms;
  std::string county;
  bool urban = false;
};

/// Weighting cell: county x urban/rural x functional class.
struct Stratum {
  std::string county;
  bool urban = false;
  FunctionalClass fc = FunctionalClass::non_highway;

  bool operator==(const Stratum& o) const {
    return county == o.county && urban == o.urban && fc == o.fc;
  }
  bool operator<(const Stratum& o) const {
    if (county != o.county) return county < o.county;
    if (urban != o.urban) return urban < o.urban;
    return fc < o.fc;
  }
};

struct StratumHash {
  size_t operator()(const Stratum& s) const {
    size_t h = std::hash<std::string>()(s.county);
    h = h * 1315423911u ^ (s.urban ? 0x9e3779b9u : 0x7f4a7c15u);
    h = h * 1315423911u ^ static_cast<size_t>(s.fc);
    return h;
  }
};

Stratum classify_stratum(const Link& link);

struct LoadReport {
  size_t nodes_loaded = 0;
  size_t links_loaded = 0;
  size_t nodes_rejected = 0;
  size_t links_rejected = 0;
  size_t unknown_link_types = 0;
  std::vector<std::string> diagnostics;  // one entry per rejected row

  void reject_node(const std::string& why);
  void reject_link(const std::string& why);
};

class RoadNetwork {
public:
  std::vector<Node> nodes;
  std::vector<Link> links;
  GeoPoint projection_ref;

  /// Rebuilds node/link lookup tables, plane positions, adjacency and
  /// cached link directions. Call after mutating nodes/links.
  void finalize();

  int node_index(int64_t node_id) const;
  int link_index(int64_t link_id) const;
  const Node& node(int64_t node_id) const;
  const Link& link(int64_t link_id) const;
  bool has_node(int64_t node_id) const { return node_index(node_id) >= 0; }
  bool has_link(int64_t link_id) const { return link_index(link_id) >= 0; }

  const PlanePoint& node_plane(int idx) const { return node_plane_[idx]; }
  const std::vector<int>& out_links(int node_idx) const { return out_links_[node_idx]; }

  /// Cached direction of the link at `link_idx` (nullopt when the projected
  /// endpoints coincide).
  std::optional<double> link_dir_deg(int link_idx) const { return link_dir_[link_idx]; }

private:
  std::unordered_map<int64_t, int> node_idx_;
  std::unordered_map<int64_t, int> link_idx_;
  std::vector<PlanePoint> node_plane_;
  std::vector<std::vector<int>> out_links_;
  std::vector<std::optional<double>> link_dir_;
};

/// Loads a GMNS-style node/link CSV pair. Rows violating invariants are
/// rejected and counted in `report`; missing required columns are fatal.
RoadNetwork load_network(const std::string& node_file, const std::string& link_file,
                         LoadReport* report = nullptr);

/// Direction of the straight from-node -> to-node chord, degrees CCW from
/// east in [0, 360). Throws InternalError on zero projected length.
double link_direction(const Link& link, const RoadNetwork& net);

/// Fills missing lanes/speed_limit from stratum-peer medians, falling back to
/// the functional-class median network-wide, then to global defaults
/// (lanes = 1, speed = 13.9 m/s).
RoadNetwork impute_missing_attributes(RoadNetwork net);

void write_network_csv(const RoadNetwork& net, const std::string& node_file,
                       const std::string& link_file);

}  // namespace volpipe
