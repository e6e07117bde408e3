/*
 * Copyright 2026 The cubesplit authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef CUBESPLIT_JSON_IO_HPP
#define CUBESPLIT_JSON_IO_HPP

#include <json.hpp>
#include <string>
#include <vector>

#include "cubesplit/divisions.hpp"
#include "cubesplit/measures.hpp"

namespace cubesplit {

using Json = nlohmann::json;

/// {"breakpoints": [[per axis]], "values": [flat row-major], "mode": "signed"?}
Json density_to_json(const GridDensity& density);
GridDensity density_from_json(const Json& j);

/// A solver problem: {"k": int, "m": [per-axis cut budget], "measures": [...]}.
/// Densities are normalized to probability measures on load.
struct Instance {
    int k = 0;
    std::vector<int> m;
    MeasureSet measures;
};
Instance instance_from_json(const Json& j);
Json instance_to_json(const Instance& instance);

/// {"k": int, "cuts": [[per-axis sorted]], "labels": [flat row-major 1..k]}
Json division_to_json(const Division& division);
Division division_from_json(const Json& j);

/// {"beads": "AABB"} or {"beads": [1,1,2,2]}; letters map A->1, B->2, ...
std::vector<int> beads_from_json(const Json& j);

Json verify_report_to_json(const VerifyReport& report);

/// Parse with a line:column anchored error message on failure.
Json parse_json_text(const std::string& text);

} // namespace cubesplit

#endif
