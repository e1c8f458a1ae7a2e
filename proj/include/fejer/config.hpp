#pragma once

#include <filesystem>

#include <json.hpp>

#include "fejer/funcspace.hpp"
#include "fejer/index_core.hpp"
#include "fejer/tensor_net.hpp"

namespace fejer {

// Function specs:
//   {"type":"trigpoly","terms":[{"index":{"1":1,"2":-1},"re":1,"im":0}]}
//   {"type":"spike","eps":{"1":0.1,"2":0.1}}
//   {"type":"grid","file":"samples.bin","sizes":[64,64]}
// "index" may also be a dense array [n_1, n_2, ...]. Grid files resolve
// relative to base_dir.
Function function_from_json(const nlohmann::json& j,
                            const std::filesystem::path& base_dir = {});

// Schedules: {"kind":"cube"}, {"kind":"regular","lambda":2},
// {"kind":"pringsheim"}, {"kind":"dregular","blocks":[[1,2],[3]],"lambda":2},
// or the bare kind name as a string.
Schedule schedule_from_json(const nlohmann::json& j);
nlohmann::json schedule_to_json(const Schedule& s);

// Tensor factors: [{"factor":{"grid":64},"net":{"kind":"fejer","degrees":[0,1,2,4]}}]
std::vector<OperatorNet> nets_from_json(const nlohmann::json& j);

nlohmann::json load_json(const std::filesystem::path& path);

}  // namespace fejer
