#include "pickwave/model.hpp"

#include <algorithm>
#include <fstream>
#include <queue>
#include <sstream>

#include "json.hpp"

namespace pickwave {

using ordered_json = nlohmann::ordered_json;

static NodePoint parse_point(const ordered_json& j) {
  if (!j.is_array() || j.size() != 3) throw ParseError("node must be [id,x,y]");
  return NodePoint{j[0].get<int>(), j[1].get<int>(), j[2].get<int>()};
}

Instance parse_instance(const std::string& json_text, const std::string& name) {
  ordered_json j;
  try {
    j = ordered_json::parse(json_text);
  } catch (const std::exception& e) {
    throw ParseError(std::string("invalid json: ") + e.what());
  }
  Instance inst;
  inst.name = name;
  try {
    const auto& w = j.at("warehouse");
    const auto& lay = w.at("layout");
    inst.warehouse.layout.num_aisles = lay.at("num_aisles").get<int>();
    inst.warehouse.layout.num_blocks = lay.at("num_blocks").get<int>();
    inst.warehouse.layout.slots_per_aisle_side =
        lay.at("slots_per_aisle_side").get<int>();
    inst.warehouse.layout.aisle_pitch = lay.at("aisle_pitch").get<int>();
    inst.warehouse.layout.cross_aisle_travel =
        lay.at("cross_aisle_travel").get<int>();
    inst.warehouse.layout.slot_travel = lay.at("slot_travel").get<int>();
    for (const auto& p : w.at("locations"))
      inst.warehouse.locations.push_back(parse_point(p));
    for (const auto& p : w.at("intersections"))
      inst.warehouse.intersections.push_back(parse_point(p));
    inst.warehouse.depot_start = w.at("depot_start").get<int>();
    inst.warehouse.depot_end = w.at("depot_end").get<int>();
    for (const auto& a : w.at("arcs")) {
      if (!a.is_array() || a.size() != 3)
        throw ParseError("arc must be [from,to,time]");
      inst.warehouse.arcs.push_back(
          Arc{a[0].get<int>(), a[1].get<int>(), a[2].get<int>()});
    }
    for (const auto& [key, val] : j.at("items").items())
      inst.items[std::stoi(key)] = val.get<int>();
    inst.num_pickers = j.at("pickers").get<int>();
    inst.capacity = j.at("capacity").get<int>();
    inst.setup_time = j.at("setup_time").get<int>();
    inst.pick_time_per_item = j.at("pick_time_per_item").get<int>();
    for (const auto& o : j.at("orders")) {
      Order od;
      od.id = o.at("id").get<int>();
      for (const auto& it : o.at("items")) od.items.push_back(it.get<int>());
      od.deadline = o.at("deadline").get<int>();
      inst.orders.push_back(std::move(od));
    }
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError(std::string("missing or malformed field: ") + e.what());
  }

  std::sort(inst.orders.begin(), inst.orders.end(),
            [](const Order& a, const Order& b) { return a.id < b.id; });
  for (auto& od : inst.orders) {
    std::sort(od.items.begin(), od.items.end());
    od.items.erase(std::unique(od.items.begin(), od.items.end()),
                   od.items.end());
    od.size = (int)od.items.size();
    od.pick_time = od.size * inst.pick_time_per_item;
    for (ItemId it : od.items) {
      auto f = inst.items.find(it);
      if (f != inst.items.end()) od.locations.push_back(f->second);
    }
    std::sort(od.locations.begin(), od.locations.end());
    od.locations.erase(
        std::unique(od.locations.begin(), od.locations.end()),
        od.locations.end());
  }
  std::set<int> ds;
  for (const auto& od : inst.orders) ds.insert(od.deadline);
  inst.deadlines.assign(ds.begin(), ds.end());

  validate_instance(inst);
  return inst;
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  std::string stem = path;
  if (auto p = stem.find_last_of('/'); p != std::string::npos)
    stem = stem.substr(p + 1);
  if (auto p = stem.rfind(".json"); p != std::string::npos)
    stem = stem.substr(0, p);
  return parse_instance(ss.str(), stem);
}

std::string instance_to_json(const Instance& inst) {
  ordered_json w;
  w["layout"] = {{"num_aisles", inst.warehouse.layout.num_aisles},
                 {"num_blocks", inst.warehouse.layout.num_blocks},
                 {"slots_per_aisle_side",
                  inst.warehouse.layout.slots_per_aisle_side},
                 {"aisle_pitch", inst.warehouse.layout.aisle_pitch},
                 {"cross_aisle_travel",
                  inst.warehouse.layout.cross_aisle_travel},
                 {"slot_travel", inst.warehouse.layout.slot_travel}};
  auto points = [](const std::vector<NodePoint>& ps) {
    ordered_json a = ordered_json::array();
    for (const auto& p : ps) a.push_back({p.id, p.x, p.y});
    return a;
  };
  w["locations"] = points(inst.warehouse.locations);
  w["intersections"] = points(inst.warehouse.intersections);
  w["depot_start"] = inst.warehouse.depot_start;
  w["depot_end"] = inst.warehouse.depot_end;
  ordered_json arcs = ordered_json::array();
  for (const auto& a : inst.warehouse.arcs)
    arcs.push_back({a.from, a.to, a.travel_time});
  w["arcs"] = arcs;

  ordered_json items;
  for (const auto& [it, loc] : inst.items) items[std::to_string(it)] = loc;

  ordered_json orders = ordered_json::array();
  for (const auto& od : inst.orders) {
    ordered_json o;
    o["id"] = od.id;
    o["items"] = od.items;
    o["deadline"] = od.deadline;
    orders.push_back(o);
  }

  ordered_json j;
  j["warehouse"] = w;
  j["items"] = items;
  j["orders"] = orders;
  j["pickers"] = inst.num_pickers;
  j["capacity"] = inst.capacity;
  j["setup_time"] = inst.setup_time;
  j["pick_time_per_item"] = inst.pick_time_per_item;
  return j.dump(1) + "\n";
}

void save_instance(const Instance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write file: " + path);
  out << instance_to_json(inst);
}

void validate_instance(const Instance& inst) {
  const Warehouse& w = inst.warehouse;
  const LayoutDescriptor& lay = w.layout;
  if (lay.num_aisles <= 0 || lay.num_blocks <= 0 ||
      lay.slots_per_aisle_side <= 0 || lay.aisle_pitch <= 0 ||
      lay.cross_aisle_travel < 0 || lay.slot_travel < 0)
    throw ValidationError("invalid layout descriptor");
  if (inst.num_pickers <= 0) throw ValidationError("pickers must be positive");
  if (inst.capacity <= 0) throw ValidationError("capacity must be positive");
  if (inst.setup_time < 0 || inst.pick_time_per_item < 0)
    throw ValidationError("negative time parameter");

  std::map<NodeId, NodePoint> nodes;
  for (const auto& p : w.locations) {
    if (nodes.count(p.id)) throw ValidationError("duplicate node id");
    nodes[p.id] = p;
  }
  for (const auto& p : w.intersections) {
    if (nodes.count(p.id)) throw ValidationError("duplicate node id");
    nodes[p.id] = p;
  }
  if (!nodes.count(w.depot_start) || !nodes.count(w.depot_end))
    throw ValidationError("depot node missing");
  if (w.depot_start == w.depot_end)
    throw ValidationError("depot_start and depot_end must be distinct nodes");

  // every pick location sits in one aisle of one block
  int period = lay.slots_per_aisle_side + 1;
  std::set<NodeId> loc_ids;
  for (const auto& p : w.locations) {
    loc_ids.insert(p.id);
    if (p.id == w.depot_start || p.id == w.depot_end) continue;
    if (p.x % lay.aisle_pitch != 0)
      throw ValidationError("location off the aisle grid");
    int aisle = p.x / lay.aisle_pitch;
    if (aisle < 0 || aisle >= lay.num_aisles)
      throw ValidationError("location outside aisle range");
    if (p.y < 0 || p.y % period == 0)
      throw ValidationError("location on a cross aisle");
    int block = p.y / period;
    if (block >= lay.num_blocks)
      throw ValidationError("location outside block range");
  }

  for (const auto& a : w.arcs) {
    if (!nodes.count(a.from) || !nodes.count(a.to))
      throw ValidationError("arc references unknown node");
    if (a.travel_time < 0) throw ValidationError("negative arc travel time");
  }
  // symmetric pairing
  std::set<std::tuple<NodeId, NodeId, int>> arcset;
  for (const auto& a : w.arcs) arcset.insert({a.from, a.to, a.travel_time});
  for (const auto& a : w.arcs)
    if (!arcset.count({a.to, a.from, a.travel_time}))
      throw ValidationError("arc without symmetric counterpart");

  // reachability s -> every location -> s'
  std::map<NodeId, std::vector<NodeId>> adj;
  for (const auto& a : w.arcs) adj[a.from].push_back(a.to);
  auto reach = [&](NodeId from) {
    std::set<NodeId> seen{from};
    std::queue<NodeId> q;
    q.push(from);
    while (!q.empty()) {
      NodeId u = q.front();
      q.pop();
      for (NodeId v : adj[u])
        if (seen.insert(v).second) q.push(v);
    }
    return seen;
  };
  auto from_s = reach(w.depot_start);
  std::map<NodeId, std::vector<NodeId>> radj;
  for (const auto& a : w.arcs) radj[a.to].push_back(a.from);
  std::set<NodeId> to_t{w.depot_end};
  {
    std::queue<NodeId> q;
    q.push(w.depot_end);
    while (!q.empty()) {
      NodeId u = q.front();
      q.pop();
      for (NodeId v : radj[u])
        if (to_t.insert(v).second) q.push(v);
    }
  }
  for (const auto& p : w.locations) {
    if (!from_s.count(p.id))
      throw ValidationError("location unreachable from depot_start");
    if (!to_t.count(p.id))
      throw ValidationError("location cannot reach depot_end");
  }

  std::set<OrderId> oids;
  for (size_t i = 0; i < inst.orders.size(); ++i) {
    const auto& od = inst.orders[i];
    if (!oids.insert(od.id).second)
      throw ValidationError("duplicate order id");
    if (od.id != (OrderId)i)
      throw ValidationError("order ids must be contiguous from 0");
    if (od.items.empty()) throw ValidationError("order with no items");
    if (od.deadline <= 0) throw ValidationError("deadline must be positive");
    if (od.size > inst.capacity)
      throw ValidationError("order exceeds capacity");
    for (ItemId it : od.items) {
      auto f = inst.items.find(it);
      if (f == inst.items.end())
        throw ValidationError("order references unknown item");
      if (!loc_ids.count(f->second))
        throw ValidationError("item assigned to a non-location node");
    }
  }
  if (inst.orders.empty()) throw ValidationError("instance has no orders");
  if ((int)inst.deadlines.size() > (int)inst.orders.size())
    throw ValidationError("more deadlines than orders");
  if (!std::is_sorted(inst.deadlines.begin(), inst.deadlines.end()))
    throw ValidationError("deadlines not sorted");
}

}  // namespace pickwave
