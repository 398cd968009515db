#include "aglearn/graph_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace aglearn {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

std::string to_graph_text(const Admg& g) {
  std::ostringstream out;
  out << "nodes: " << g.node_count() << "\n";
  for (auto [tail, head] : g.directed_edges()) out << tail << " -> " << head << "\n";
  for (auto [a, b] : g.bidirected_edges()) out << a << " <-> " << b << "\n";
  return out.str();
}

Admg from_graph_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int node_count = -1;
  std::vector<std::pair<int, int>> directed, bidirected;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    if (node_count < 0) {
      std::string tag;
      ls >> tag >> node_count;
      if (tag != "nodes:" || ls.fail() || node_count < 0)
        throw std::invalid_argument("graph text: expected 'nodes: <d>' header at line " +
                                    std::to_string(lineno));
      continue;
    }
    int a = -1, b = -1;
    std::string mark;
    ls >> a >> mark >> b;
    if (ls.fail())
      throw std::invalid_argument("graph text: malformed edge at line " + std::to_string(lineno));
    if (mark == "->") {
      directed.emplace_back(a, b);
    } else if (mark == "<->") {
      if (a > b) std::swap(a, b);
      bidirected.emplace_back(a, b);
    } else {
      throw std::invalid_argument("graph text: unknown edge mark '" + mark + "' at line " +
                                  std::to_string(lineno));
    }
  }
  if (node_count < 0) throw std::invalid_argument("graph text: missing 'nodes:' header");
  return Admg(node_count, directed, bidirected);
}

std::string to_graph_json(const Admg& g) {
  nlohmann::json j;
  j["nodes"] = g.node_count();
  j["directed"] = nlohmann::json::array();
  for (auto [tail, head] : g.directed_edges()) j["directed"].push_back({tail, head});
  j["bidirected"] = nlohmann::json::array();
  for (auto [a, b] : g.bidirected_edges()) j["bidirected"].push_back({a, b});
  return j.dump(2);
}

Admg from_graph_json(const std::string& json_text) {
  const nlohmann::json j = nlohmann::json::parse(json_text);
  std::vector<std::pair<int, int>> directed, bidirected;
  for (const auto& e : j.at("directed")) directed.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
  for (const auto& e : j.at("bidirected")) {
    int a = e.at(0).get<int>(), b = e.at(1).get<int>();
    if (a > b) std::swap(a, b);
    bidirected.emplace_back(a, b);
  }
  return Admg(j.at("nodes").get<int>(), directed, bidirected);
}

void save_graph(const Admg& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << (ends_with(path, ".json") ? to_graph_json(g) : to_graph_text(g));
  if (!out) throw std::runtime_error("write failed: " + path);
}

Admg load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return ends_with(path, ".json") ? from_graph_json(buf.str()) : from_graph_text(buf.str());
}

}  // namespace aglearn
