#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "hitlab/error.hpp"
#include "hitlab/graph.hpp"
#include "hitlab/hitting.hpp"
#include "json.hpp"

namespace hitlab {

using json = nlohmann::json;

// Shortest text that parses back to the same double.
inline std::string format_double(double x) { return json(x).dump(); }

// Graph file: {"n": int, "edges": [[u, v, weight], ...], "labels": [int, ...]}
// with edges listed u <= v in lexicographic order.
inline json graph_to_json(const WeightedGraph& g) {
  json edges = json::array();
  for (const Edge& e : g.edges()) edges.push_back(json::array({e.u, e.v, e.weight}));
  json out = {{"n", g.size()}, {"edges", std::move(edges)}};
  if (g.has_labels()) out["labels"] = *g.labels();
  return out;
}

inline WeightedGraph graph_from_json(const json& doc) {
  try {
    if (!doc.is_object() || !doc.contains("n") || !doc.contains("edges"))
      throw InvalidArgument("graph JSON needs fields \"n\" and \"edges\"");
    const auto n = doc.at("n").get<long long>();
    if (n <= 0) throw InvalidArgument("graph JSON: n must be positive");
    std::vector<Edge> edges;
    for (const auto& e : doc.at("edges")) {
      if (!e.is_array() || e.size() < 2 || e.size() > 3)
        throw InvalidArgument("graph JSON: each edge must be [u, v] or [u, v, weight]");
      const auto u = e.at(0).get<long long>();
      const auto v = e.at(1).get<long long>();
      if (u < 0 || v < 0) throw InvalidArgument("graph JSON: negative vertex index");
      edges.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v),
                       e.size() == 3 ? e.at(2).get<double>() : 1.0});
    }
    std::optional<std::vector<int>> labels;
    if (doc.contains("labels") && !doc.at("labels").is_null())
      labels = doc.at("labels").get<std::vector<int>>();
    return build_graph(static_cast<std::size_t>(n), edges, std::move(labels));
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed graph JSON: ") + e.what());
  }
}

// Edge-list CSV with header "u,v,weight"; n is one past the largest index.
inline WeightedGraph graph_from_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("empty edge-list CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "u,v,weight") throw InvalidArgument("edge-list CSV header must be \"u,v,weight\"");
  std::vector<Edge> edges;
  std::size_t n = 0;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string a, b, c;
    if (!std::getline(fields, a, ',') || !std::getline(fields, b, ',') || !std::getline(fields, c))
      throw InvalidArgument("edge-list CSV line " + std::to_string(lineno) + " is malformed");
    try {
      const long long u = std::stoll(a);
      const long long v = std::stoll(b);
      const double w = std::stod(c);
      if (u < 0 || v < 0) throw InvalidArgument("negative vertex index");
      edges.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v), w});
      n = std::max({n, static_cast<std::size_t>(u) + 1, static_cast<std::size_t>(v) + 1});
    } catch (const std::logic_error&) {
      throw InvalidArgument("edge-list CSV line " + std::to_string(lineno) + " is malformed");
    }
  }
  if (n == 0) throw InvalidArgument("edge-list CSV has no edges");
  return build_graph(n, edges);
}

inline bool has_suffix(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

inline WeightedGraph read_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open graph file " + path);
  if (has_suffix(path, ".csv")) return graph_from_csv(in);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw InvalidArgument("cannot parse " + path + ": " + e.what());
  }
  return graph_from_json(doc);
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write " + path);
  out << text;
  if (!out) throw Error("write to " + path + " failed");
}

inline void write_json(const std::string& path, const json& doc) {
  write_text(path, doc.dump(2) + "\n");
}

inline std::string graph_to_csv(const WeightedGraph& g) {
  std::string out = "u,v,weight\n";
  for (const Edge& e : g.edges())
    out += std::to_string(e.u) + "," + std::to_string(e.v) + "," + format_double(e.weight) + "\n";
  return out;
}

// vertex,hitting_time,label,adjacent_to_target; label is empty when the
// graph carries none.
inline std::string profile_to_csv(const WeightedGraph& g, const HittingProfile& h) {
  std::string out = "vertex,hitting_time,label,adjacent_to_target\n";
  for (Vertex w = 0; w < g.size(); ++w) {
    out += std::to_string(w) + "," + format_double(h.values[w]) + ",";
    if (g.has_labels()) out += std::to_string(g.label(w));
    out += ",";
    out += (w != h.target && g.adjacent(w, h.target)) ? "1" : "0";
    out += "\n";
  }
  return out;
}

}  // namespace hitlab
