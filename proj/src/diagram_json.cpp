#include "screenopt/diagram_json.hpp"

#include "screenopt/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <set>

namespace screenopt {

using nlohmann::json;

std::string formatDouble(double value) {
  if (value == 0.0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

namespace {

std::string quote(const std::string& s) { return json(s).dump(); }

std::string labels(const std::vector<std::string>& items) {
  std::string out = "[";
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += quote(items[i]);
  }
  return out + "]";
}

std::vector<std::string> givenLabels(const InfluenceDiagram& d, NodeId id, std::size_t info) {
  const auto& lay = d.layout(id);
  const auto states = d.informationState(id, info);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < states.size(); ++i) {
    out.push_back(d.node(d.pathNodes()[lay.predecessorSlots[i]]).states[states[i]]);
  }
  return out;
}

void checkKeys(const json& obj, const std::set<std::string>& allowed, const std::string& path,
               std::vector<std::string>& issues) {
  if (!obj.is_object()) {
    issues.push_back(path + ": expected an object");
    return;
  }
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) issues.push_back(path + "." + key + ": unknown key");
  }
}

}  // namespace

std::string diagramToJson(const InfluenceDiagram& d) {
  std::string out = "{\n  \"nodes\": [";
  for (std::size_t pos = 0; pos < d.nodeCount(); ++pos) {
    const auto& n = d.nodeAt(pos);
    out += pos ? ",\n    " : "\n    ";
    out += "{\"id\": " + std::to_string(n.id) + ", \"kind\": " + quote(toString(n.kind)) +
           ", \"name\": " + quote(n.name) + ", \"states\": " + labels(n.states);
    if (n.kind == NodeKind::Value) out += ", \"orientation\": " + quote(toString(n.orientation));
    out += "}";
  }
  out += "\n  ],\n  \"arcs\": [";
  for (std::size_t i = 0; i < d.arcs().size(); ++i) {
    out += i ? ", " : "";
    out += "[" + std::to_string(d.arcs()[i].first) + ", " + std::to_string(d.arcs()[i].second) + "]";
  }
  out += "],\n  \"cpts\": [";
  bool first = true;
  for (NodeId id : d.chanceNodes()) {
    const auto& t = d.cpt(id);
    out += first ? "\n    " : ",\n    ";
    first = false;
    out += "{\"node\": " + std::to_string(id) + ", \"rows\": [";
    bool firstRow = true;
    for (Eigen::Index r = 0; r < t.rows(); ++r) {
      if (t.row(r).hasNaN()) continue;
      out += firstRow ? "\n      " : ",\n      ";
      firstRow = false;
      out += "{\"given\": " + labels(givenLabels(d, id, static_cast<std::size_t>(r))) + ", \"probs\": [";
      for (Eigen::Index c = 0; c < t.cols(); ++c) out += (c ? ", " : "") + formatDouble(t(r, c));
      out += "]}";
    }
    out += firstRow ? "]}" : "\n    ]}";
  }
  out += first ? "],\n  \"values\": [" : "\n  ],\n  \"values\": [";
  first = true;
  for (NodeId id : d.valueNodes()) {
    const auto& u = d.utilities(id);
    out += first ? "\n    " : ",\n    ";
    first = false;
    out += "{\"node\": " + std::to_string(id) + ", \"rows\": [";
    bool firstRow = true;
    for (Eigen::Index r = 0; r < u.size(); ++r) {
      if (std::isnan(u[r])) continue;
      out += firstRow ? "\n      " : ",\n      ";
      firstRow = false;
      out += "{\"given\": " + labels(givenLabels(d, id, static_cast<std::size_t>(r))) +
             ", \"value\": " + formatDouble(u[r]) + ", \"unit\": " + quote(d.node(id).unit) + "}";
    }
    out += firstRow ? "]}" : "\n    ]}";
  }
  out += first ? "]\n}\n" : "\n  ]\n}\n";
  return out;
}

InfluenceDiagram diagramFromJson(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError({std::string("$: ") + e.what()});
  }
  std::vector<std::string> issues;
  checkKeys(doc, {"nodes", "arcs", "cpts", "values"}, "$", issues);
  if (!issues.empty()) throw ValidationError(issues);

  DiagramBuilder b;
  auto arrayAt = [&](const json& parent, const char* key, const std::string& path) -> const json* {
    if (!parent.contains(key)) return nullptr;
    const auto& v = parent.at(key);
    if (!v.is_array()) {
      issues.push_back(path + "." + key + ": expected an array");
      return nullptr;
    }
    return &v;
  };
  auto stringList = [&](const json& v, const std::string& path) {
    std::vector<std::string> out;
    if (!v.is_array()) {
      issues.push_back(path + ": expected an array of strings");
      return out;
    }
    for (const auto& s : v) {
      if (!s.is_string()) {
        issues.push_back(path + ": expected an array of strings");
        return out;
      }
      out.push_back(s.get<std::string>());
    }
    return out;
  };

  // Value-node units live on their rows.
  std::map<NodeId, std::string> units;
  if (const auto* values = arrayAt(doc, "values", "$")) {
    for (std::size_t i = 0; i < values->size(); ++i) {
      const auto& v = (*values)[i];
      if (!v.is_object() || !v.contains("node") || !v.contains("rows") || !v["rows"].is_array()) continue;
      for (const auto& row : v["rows"]) {
        if (row.is_object() && row.contains("unit") && row["unit"].is_string()) {
          units[v["node"].get<NodeId>()] = row["unit"].get<std::string>();
          break;
        }
      }
    }
  }

  if (const auto* nodes = arrayAt(doc, "nodes", "$")) {
    for (std::size_t i = 0; i < nodes->size(); ++i) {
      const auto& n = (*nodes)[i];
      const std::string path = "$.nodes[" + std::to_string(i) + "]";
      checkKeys(n, {"id", "kind", "name", "states", "orientation"}, path, issues);
      if (!n.is_object()) continue;
      if (!n.contains("id") || !n["id"].is_number_unsigned()) {
        issues.push_back(path + ".id: expected a non-negative integer");
        continue;
      }
      const auto id = n["id"].get<NodeId>();
      const std::string kind = n.value("kind", "");
      const std::string name = n.contains("name") && n["name"].is_string() ? n["name"].get<std::string>() : "";
      std::vector<std::string> states;
      if (n.contains("states")) states = stringList(n["states"], path + ".states");
      if (kind == "chance") {
        b.chance(id, name, states);
      } else if (kind == "decision") {
        b.decision(id, name, states);
      } else if (kind == "value") {
        const std::string o = n.value("orientation", "maximize");
        if (o != "minimize" && o != "maximize") issues.push_back(path + ".orientation: unknown orientation");
        b.value(id, name, o == "minimize" ? Orientation::Minimize : Orientation::Maximize, units[id]);
      } else {
        issues.push_back(path + ".kind: expected chance, decision or value");
      }
    }
  }

  if (const auto* arcs = arrayAt(doc, "arcs", "$")) {
    for (std::size_t i = 0; i < arcs->size(); ++i) {
      const auto& a = (*arcs)[i];
      if (!a.is_array() || a.size() != 2 || !a[0].is_number_unsigned() || !a[1].is_number_unsigned()) {
        issues.push_back("$.arcs[" + std::to_string(i) + "]: expected [from, to]");
        continue;
      }
      b.arc(a[0].get<NodeId>(), a[1].get<NodeId>());
    }
  }

  if (const auto* cpts = arrayAt(doc, "cpts", "$")) {
    for (std::size_t i = 0; i < cpts->size(); ++i) {
      const auto& c = (*cpts)[i];
      const std::string path = "$.cpts[" + std::to_string(i) + "]";
      checkKeys(c, {"node", "rows"}, path, issues);
      if (!c.is_object() || !c.contains("node") || !c["node"].is_number_unsigned()) {
        issues.push_back(path + ".node: expected a node id");
        continue;
      }
      const auto node = c["node"].get<NodeId>();
      const auto* rows = arrayAt(c, "rows", path);
      if (!rows) continue;
      for (std::size_t r = 0; r < rows->size(); ++r) {
        const auto& row = (*rows)[r];
        const std::string rp = path + ".rows[" + std::to_string(r) + "]";
        checkKeys(row, {"given", "probs"}, rp, issues);
        if (!row.is_object() || !row.contains("given") || !row.contains("probs") || !row["probs"].is_array()) {
          issues.push_back(rp + ": expected {given, probs}");
          continue;
        }
        std::vector<double> probs;
        for (const auto& p : row["probs"]) {
          if (!p.is_number()) {
            issues.push_back(rp + ".probs: expected numbers");
            break;
          }
          probs.push_back(p.get<double>());
        }
        b.cptRow(node, stringList(row["given"], rp + ".given"), probs);
      }
    }
  }

  if (const auto* values = arrayAt(doc, "values", "$")) {
    for (std::size_t i = 0; i < values->size(); ++i) {
      const auto& v = (*values)[i];
      const std::string path = "$.values[" + std::to_string(i) + "]";
      checkKeys(v, {"node", "rows"}, path, issues);
      if (!v.is_object() || !v.contains("node") || !v["node"].is_number_unsigned()) {
        issues.push_back(path + ".node: expected a node id");
        continue;
      }
      const auto node = v["node"].get<NodeId>();
      const auto* rows = arrayAt(v, "rows", path);
      if (!rows) continue;
      for (std::size_t r = 0; r < rows->size(); ++r) {
        const auto& row = (*rows)[r];
        const std::string rp = path + ".rows[" + std::to_string(r) + "]";
        checkKeys(row, {"given", "value", "unit"}, rp, issues);
        if (!row.is_object() || !row.contains("given") || !row.contains("value") || !row["value"].is_number()) {
          issues.push_back(rp + ": expected {given, value, unit}");
          continue;
        }
        if (row.contains("unit") && (!row["unit"].is_string() || row["unit"].get<std::string>() != units[node])) {
          issues.push_back(rp + ".unit: rows of one value node must share a unit");
        }
        b.utilityRow(node, stringList(row["given"], rp + ".given"), row["value"].get<double>());
      }
    }
  }

  if (!issues.empty()) throw ValidationError(issues);
  return b.build();
}

}  // namespace screenopt
