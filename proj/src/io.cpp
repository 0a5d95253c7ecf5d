#include "nbpk/io.hpp"

#include <fstream>
#include <stdexcept>

namespace nbpk {

nlohmann::json to_json(const GibbsSampleRecord& record) {
  const auto counts = record.final_config.counts();
  const auto m = record.afs.multiplicities();
  nlohmann::json out;
  out["seed"] = record.seed;
  out["n"] = record.final_config.total();
  out["k"] = record.k;
  out["counts"] = std::vector<int>(counts.begin(), counts.end());
  out["afs"] = std::vector<int>(m.begin(), m.end());
  if (record.v_trace) out["v_trace"] = *record.v_trace;
  return out;
}

nlohmann::json to_json(const AncestralEvent& event) {
  const auto counts = event.config_after.counts();
  nlohmann::json out;
  out["time"] = event.time;
  out["kind"] = to_string(event.kind);
  out["block_index"] = event.block_index;
  out["config_after"] = std::vector<int>(counts.begin(), counts.end());
  return out;
}

std::vector<Configuration> read_configurations(std::istream& in) {
  std::vector<Configuration> out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    try {
      out.push_back(Configuration::parse(line.substr(first)));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("line " + std::to_string(number) + ": " + e.what());
    }
  }
  return out;
}

std::vector<Configuration> read_configurations_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open counts file '" + path + "'");
  auto configs = read_configurations(in);
  if (configs.empty()) throw std::invalid_argument("counts file '" + path + "' holds no configurations");
  return configs;
}

}  // namespace nbpk
