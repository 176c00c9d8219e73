#include "normlog/error.hpp"
#include "normlog/model.hpp"

#include <json.hpp>

#include <deque>
#include <fstream>
#include <sstream>

namespace normlog {

namespace {

using nlohmann::json;

const char* const mark_fields[] = {"V", "D", "R", "P"};

void only_fields(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!obj.is_object()) throw ModelError(where + ": expected an object");
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ModelError(where + ": unknown field '" + key + "'");
  }
}

std::vector<std::string> strings(const json& obj, const char* field, const std::string& where) {
  std::vector<std::string> out;
  if (!obj.contains(field)) return out;
  const json& arr = obj.at(field);
  if (!arr.is_array()) throw ModelError(where + ": '" + field + "' must be an array");
  for (const auto& v : arr) {
    if (!v.is_string()) throw ModelError(where + ": '" + field + "' entries must be strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

struct Edge {
  std::string to;
  std::set<std::string> agents;
};

struct RawState {
  std::set<std::string> atoms;
  std::vector<Edge> children;
  std::vector<std::pair<SpecialKind, std::pair<std::string, std::string>>> marks;
};

} // namespace

Model load_model(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw ModelError(std::string("malformed model document: ") + e.what());
  }
  only_fields(doc, {"agents", "norms", "root", "states"}, "model");
  if (!doc.contains("root") || !doc.at("root").is_string())
    throw ModelError("model: missing 'root'");
  std::string root = doc.at("root").get<std::string>();

  std::map<std::string, RawState> raw;
  std::vector<std::string> order;
  if (doc.contains("states")) {
    if (!doc.at("states").is_array()) throw ModelError("model: 'states' must be an array");
    for (const json& st : doc.at("states")) {
      only_fields(st, {"id", "atoms", "children", "V", "D", "R", "P"}, "state");
      if (!st.contains("id") || !st.at("id").is_string()) throw ModelError("state: missing 'id'");
      std::string id = st.at("id").get<std::string>();
      std::string where = "state '" + id + "'";
      if (raw.count(id)) throw ModelError("duplicate state id '" + id + "'");
      RawState rs;
      for (auto& a : strings(st, "atoms", where)) rs.atoms.insert(a);
      if (st.contains("children")) {
        if (!st.at("children").is_array()) throw ModelError(where + ": 'children' must be an array");
        for (const json& c : st.at("children")) {
          only_fields(c, {"to", "agents"}, where + " child");
          if (!c.contains("to") || !c.at("to").is_string())
            throw ModelError(where + ": child without 'to'");
          Edge e{c.at("to").get<std::string>(), {}};
          for (auto& a : strings(c, "agents", where)) e.agents.insert(a);
          rs.children.push_back(std::move(e));
        }
      }
      for (int k = 0; k < 4; ++k) {
        if (!st.contains(mark_fields[k])) continue;
        const json& arr = st.at(mark_fields[k]);
        if (!arr.is_array()) throw ModelError(where + ": '" + mark_fields[k] + "' must be an array");
        for (const json& pair : arr) {
          if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string() || !pair[1].is_string())
            throw ModelError(where + ": '" + mark_fields[k] + "' entries must be [norm, agent]");
          rs.marks.push_back({static_cast<SpecialKind>(k),
                              {pair[0].get<std::string>(), pair[1].get<std::string>()}});
        }
      }
      raw.emplace(id, std::move(rs));
      order.push_back(id);
    }
  }
  if (!raw.count(root)) {
    if (!raw.empty()) throw ModelError("root '" + root + "' is not a listed state");
    raw.emplace(root, RawState{});
    order.push_back(root);
  }

  std::map<std::string, std::string> parent_of;
  for (const auto& id : order) {
    for (const Edge& e : raw.at(id).children) {
      if (!raw.count(e.to)) throw ModelError("state '" + id + "' references unknown child '" + e.to + "'");
      if (parent_of.count(e.to)) throw ModelError("state '" + e.to + "' has multiple parents");
      parent_of.emplace(e.to, id);
    }
  }
  if (parent_of.count(root)) throw ModelError("cycle detected: root '" + root + "' has a parent");

  Model model(root, raw.at(root).atoms);
  for (auto& a : strings(doc, "agents", "model")) model.declare_agent(a);
  for (auto& n : strings(doc, "norms", "model")) model.declare_norm(n);

  std::deque<std::pair<std::string, StateId>> queue{{root, model.root()}};
  while (!queue.empty()) {
    auto [id, sid] = queue.front();
    queue.pop_front();
    for (const Edge& e : raw.at(id).children) {
      StateId child = model.add_state(e.to, sid, e.agents, raw.at(e.to).atoms);
      queue.emplace_back(e.to, child);
    }
  }
  if (model.size() != raw.size()) throw ModelError("cycle detected: some states are unreachable from the root");

  for (const auto& id : order)
    for (const auto& [kind, na] : raw.at(id).marks) model.mark(kind, na.first, na.second, model.find(id));
  return model;
}

Model load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open model file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return load_model(buf.str());
}

std::string dump_model(const Model& model) {
  json doc;
  doc["agents"] = std::vector<std::string>(model.agents().begin(), model.agents().end());
  doc["norms"] = std::vector<std::string>(model.norms().begin(), model.norms().end());
  doc["root"] = model.name(model.root());
  json states = json::array();
  for (StateId s = 0; s < model.size(); ++s) {
    json st;
    st["id"] = model.name(s);
    st["atoms"] = std::vector<std::string>(model.atoms(s).begin(), model.atoms(s).end());
    json kids = json::array();
    for (StateId c : model.children(s))
      kids.push_back({{"to", model.name(c)},
                      {"agents", std::vector<std::string>(model.label(c).begin(), model.label(c).end())}});
    st["children"] = kids;
    states.push_back(st);
  }
  for (const auto& [key, members] : model.marks()) {
    const auto& [kind, norm, agent] = key;
    for (StateId s : members) states[s][mark_fields[static_cast<int>(kind)]].push_back({norm, agent});
  }
  doc["states"] = states;
  return doc.dump(2);
}

} // namespace normlog
