// Copyright 2026 The tplot Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tplot/error.hpp"
#include "tplot/matrix.hpp"
#include "tplot/net.hpp"

namespace tplot::io {

using nlohmann::json;

// {"nodes":[{"id","name","r","q"}],"edges":[{"id","from","to","capacity","weight"}]}
inline Network network_from_json(const json& doc) {
  try {
    std::vector<Node> nodes;
    for (const auto& jn : doc.at("nodes")) {
      Node nd;
      nd.id = jn.at("id").get<int>();
      nd.name = jn.value("name", std::to_string(nd.id));
      nd.ingress = jn.value("r", 1.0);
      nd.egress = jn.value("q", 1.0);
      nodes.push_back(std::move(nd));
    }
    std::vector<EdgeSpec> edges;
    for (const auto& je : doc.at("edges")) {
      EdgeSpec es;
      es.id = je.at("id").is_string() ? je.at("id").get<std::string>() : je.at("id").dump();
      es.from = je.at("from").get<int>();
      es.to = je.at("to").get<int>();
      es.capacity = je.value("capacity", 1.0);
      if (je.contains("weight") && !je.at("weight").is_null()) es.weight = je.at("weight").get<double>();
      edges.push_back(std::move(es));
    }
    return Network(std::move(nodes), edges);
  } catch (const json::exception& ex) {
    throw StructuralError("net", std::string("malformed network document: ") + ex.what());
  }
}

inline json network_to_json(const Network& net) {
  json doc;
  doc["nodes"] = json::array();
  for (const Node& nd : net.nodes()) {
    doc["nodes"].push_back({{"id", nd.id}, {"name", nd.name}, {"r", nd.ingress}, {"q", nd.egress}});
  }
  doc["edges"] = json::array();
  for (const Edge& e : net.edges()) {
    json je = {{"id", e.id},
               {"from", net.node(e.tail).id},
               {"to", net.node(e.head).id},
               {"capacity", e.capacity}};
    if (e.weight) je["weight"] = *e.weight;
    doc["edges"].push_back(std::move(je));
  }
  return doc;
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw StructuralError("io", "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& ex) {
    throw StructuralError("io", path + ": " + ex.what());
  }
}

inline Network load_network(const std::string& path) { return network_from_json(read_json_file(path)); }

// Routing file: [{"src","dst","edge","fraction"}], src/dst are node ids and
// edge is an edge id (or TAIL-HEAD name pair).
inline Routing routing_from_json(const Network& net, const json& doc) {
  Routing f(net.node_count(), net.edge_count());
  try {
    for (const auto& jr : doc) {
      const int s = net.node_index(jr.at("src").get<int>());
      const int d = net.node_index(jr.at("dst").get<int>());
      const std::string edge = jr.at("edge").is_string() ? jr.at("edge").get<std::string>() : jr.at("edge").dump();
      f.set_fraction(s, d, net.edge_index(edge), jr.at("fraction").get<double>());
    }
  } catch (const json::exception& ex) {
    throw StructuralError("net", std::string("malformed routing document: ") + ex.what());
  }
  return f;
}

inline json routing_to_json(const Network& net, const Routing& f) {
  json doc = json::array();
  for (int s = 0; s < net.node_count(); ++s) {
    for (int d = 0; d < net.node_count(); ++d) {
      for (int e = 0; e < net.edge_count(); ++e) {
        const double x = f.fraction(s, d, e);
        if (x != 0.0) {
          doc.push_back({{"src", net.node(s).id}, {"dst", net.node(d).id}, {"edge", net.edge(e).id}, {"fraction", x}});
        }
      }
    }
  }
  return doc;
}

// Square matrix from CSV text (comma or whitespace separated rows).
inline SquareMatrix matrix_from_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    for (char& ch : line) {
      if (ch == ',' || ch == ';' || ch == '\t') ch = ' ';
    }
    std::istringstream ls(line);
    std::vector<double> row;
    double v;
    while (ls >> v) row.push_back(v);
    if (!ls.eof()) throw StructuralError("io", "non-numeric CSV cell in: " + line);
    if (!row.empty()) rows.push_back(std::move(row));
  }
  const int n = static_cast<int>(rows.size());
  SquareMatrix m(n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows[i].size()) != n) throw StructuralError("io", "matrix CSV is not square");
    for (int j = 0; j < n; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

inline SquareMatrix load_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw StructuralError("io", "cannot open " + path);
  return matrix_from_csv(in);
}

// One matrix per line, row-major, comma separated, full round-trip precision.
inline void write_matrix_row(std::ostream& out, const SquareMatrix& m) {
  std::ostringstream line;
  line.precision(17);
  bool first = true;
  for (double v : m.data()) {
    if (!first) line << ',';
    line << v;
    first = false;
  }
  out << line.str() << '\n';
}

}  // namespace tplot::io
