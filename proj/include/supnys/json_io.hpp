#pragma once

#include "supnys/nystrom.hpp"
#include "supnys/ridge.hpp"
#include "supnys/selection.hpp"

#include "json.hpp"

#include <filesystem>
#include <string>

namespace supnys {

using json = nlohmann::json;

/// Serializes with every floating-point number written as a decimal with 17
/// significant digits, which round-trips doubles exactly.
std::string dump_json(const json &j, int indent = 2);

json read_json_file(const std::filesystem::path &path);
void write_json_file(const json &j, const std::filesystem::path &path);

json matrix_to_json(const Eigen::Ref<const Matrix> &M);
Matrix matrix_from_json(const json &j);
Points points_from_json(const json &j);

json to_json(const KernelConfig &cfg);
KernelConfig kernel_config_from_json(const json &j);

json to_json(const NystromMap &map);
NystromMap nystrom_map_from_json(const json &j);

json to_json(const StandardClassifier &clf);
StandardClassifier standard_classifier_from_json(const json &j);

json to_json(const Diagnostics &d);

}  // namespace supnys
