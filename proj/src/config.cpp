#include "fejer/config.hpp"

#include <fstream>
#include <string>

#include "fejer/errors.hpp"

namespace fejer {

using nlohmann::json;

namespace {

int parse_coord(const std::string& key) {
  std::size_t used = 0;
  int c = 0;
  try {
    c = std::stoi(key, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != key.size() || c < 1) throw ConfigError("bad coordinate key '" + key + "'");
  return c;
}

MultiIndex index_from_json(const json& j) {
  if (j.is_array()) return MultiIndex::dense(j.get<std::vector<int>>());
  if (!j.is_object()) throw ConfigError("multi-index must be an object or an array");
  MultiIndex n;
  for (const auto& [key, value] : j.items()) n.set(parse_coord(key), value.get<int>());
  return n;
}

template <class T>
T required(const json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("field '") + key + "': " + e.what());
  }
}

}  // namespace

Function function_from_json(const json& j, const std::filesystem::path& base_dir) {
  const auto type = required<std::string>(j, "type");
  try {
    if (type == "trigpoly") {
      TrigPoly f;
      for (const auto& term : required<json>(j, "terms"))
        f.add(index_from_json(required<json>(term, "index")),
              Complex(term.value("re", 0.0), term.value("im", 0.0)));
      return f;
    }
    if (type == "spike") {
      std::map<int, double> widths;
      const auto eps = required<json>(j, "eps");
      for (const auto& [key, value] : eps.items())
        widths[parse_coord(key)] = value.get<double>();
      return SpikeTensor(std::move(widths));
    }
    if (type == "grid") {
      std::filesystem::path file = required<std::string>(j, "file");
      if (file.is_relative()) file = base_dir / file;
      return CylinderGrid::read_binary(file, required<std::vector<std::size_t>>(j, "sizes"));
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("function spec: ") + e.what());
  }
  throw ConfigError("unknown function type '" + type + "'");
}

Schedule schedule_from_json(const json& j) {
  const std::string kind = j.is_string() ? j.get<std::string>() : required<std::string>(j, "kind");
  const double lambda = j.is_object() ? j.value("lambda", 1.0) : 1.0;
  if (kind == "cube") return Schedule::cube();
  if (kind == "pringsheim") return Schedule::pringsheim();
  if (kind == "regular") return Schedule::regular(lambda);
  if (kind == "dregular") {
    if (!j.is_object()) throw ConfigError("dregular schedule needs blocks");
    return Schedule::dregular(required<std::vector<std::vector<int>>>(j, "blocks"), lambda);
  }
  throw ConfigError("unknown schedule kind '" + kind + "'");
}

json schedule_to_json(const Schedule& s) {
  json j{{"kind", s.name()}};
  if (s.kind() == ScheduleKind::Regular || s.kind() == ScheduleKind::DRegular)
    j["lambda"] = s.lambda();
  if (s.kind() == ScheduleKind::DRegular) j["blocks"] = s.blocks();
  return j;
}

std::vector<OperatorNet> nets_from_json(const json& j) {
  if (!j.is_array()) throw ConfigError("factors must be an array");
  std::vector<OperatorNet> nets;
  for (const auto& entry : j) {
    const auto grid = required<std::size_t>(required<json>(entry, "factor"), "grid");
    const auto net = required<json>(entry, "net");
    const auto kind = required<std::string>(net, "kind");
    if (kind != "fejer") throw ConfigError("unknown net kind '" + kind + "'");
    nets.push_back(OperatorNet::fejer(grid, required<std::vector<int>>(net, "degrees")));
  }
  return nets;
}

json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

}  // namespace fejer
