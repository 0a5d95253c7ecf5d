#ifndef NBPK_IO_HPP
#define NBPK_IO_HPP

#include <istream>
#include <string>
#include <vector>

#include <json.hpp>

#include "nbpk/coalescent.hpp"
#include "nbpk/partitions.hpp"
#include "nbpk/sampler.hpp"

namespace nbpk {

/// {"seed", "n", "k", "counts", "afs"[, "v_trace"]}
nlohmann::json to_json(const GibbsSampleRecord& record);

/// {"time", "kind", "block_index", "config_after"}
nlohmann::json to_json(const AncestralEvent& event);

/// One configuration per nonblank line, comma separated. Lines starting
/// with '#' are skipped.
std::vector<Configuration> read_configurations(std::istream& in);
std::vector<Configuration> read_configurations_file(const std::string& path);

}  // namespace nbpk

#endif  // NBPK_IO_HPP
