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
#include "cubesplit/json_io.hpp"

#include <sstream>

namespace cubesplit {

namespace {

const Json& require(const Json& j, const char* key) {
    const auto it = j.find(key);
    if (it == j.end()) throw InvalidParameter(std::string("missing field \"") + key + "\"");
    return *it;
}

} // namespace

Json density_to_json(const GridDensity& density) {
    Json j;
    j["breakpoints"] = density.breakpoints();
    j["values"] = density.values();
    if (density.mode() == DensityMode::Signed) j["mode"] = "signed";
    return j;
}

GridDensity density_from_json(const Json& j) {
    const auto breakpoints = require(j, "breakpoints").get<std::vector<std::vector<double>>>();
    const auto values = require(j, "values").get<std::vector<double>>();
    DensityMode mode = DensityMode::Probability;
    if (j.contains("mode")) {
        const std::string m = j["mode"].get<std::string>();
        if (m == "signed")
            mode = DensityMode::Signed;
        else if (m != "probability")
            throw InvalidParameter("unknown density mode: " + m);
    }
    return GridDensity(breakpoints, values, mode);
}

Instance instance_from_json(const Json& j) {
    Instance instance;
    instance.k = require(j, "k").get<int>();
    instance.m = require(j, "m").get<std::vector<int>>();
    const Json& measures = require(j, "measures");
    if (!measures.is_array() || measures.empty())
        throw InvalidParameter("\"measures\" must be a nonempty array");
    std::vector<GridDensity> densities;
    densities.reserve(measures.size());
    for (const Json& mj : measures) densities.push_back(normalize(density_from_json(mj)));
    instance.measures = MeasureSet(std::move(densities));

    if (static_cast<int>(instance.m.size()) != instance.measures.dim)
        throw ShapeMismatch("\"m\" length does not match the measure dimension");
    long total = 0;
    for (int mi : instance.m) total += mi;
    const long need = static_cast<long>(instance.measures.size()) * (instance.k - 1);
    if (instance.k < 2 || total != need) {
        std::ostringstream os;
        os << "cut budget " << total << " != n(k-1) = " << need;
        throw BudgetMismatch(os.str());
    }
    return instance;
}

Json instance_to_json(const Instance& instance) {
    Json j;
    j["k"] = instance.k;
    j["m"] = instance.m;
    Json measures = Json::array();
    for (const auto& mu : instance.measures.measures) measures.push_back(density_to_json(mu));
    j["measures"] = std::move(measures);
    return j;
}

Json division_to_json(const Division& division) {
    Json j;
    j["k"] = division.k();
    j["cuts"] = division.cuts.cuts;
    j["labels"] = division.labeling.labels;
    return j;
}

Division division_from_json(const Json& j) {
    const int k = require(j, "k").get<int>();
    auto cuts = require(j, "cuts").get<std::vector<std::vector<double>>>();
    auto labels = require(j, "labels").get<std::vector<int>>();
    CutConfiguration cut_config(std::move(cuts));
    std::vector<int> shape = cut_config.counts();
    for (int& s : shape) ++s;
    return Division(std::move(cut_config), Labeling(k, std::move(shape), std::move(labels)));
}

std::vector<int> beads_from_json(const Json& j) {
    const Json& beads = j.is_object() ? require(j, "beads") : j;
    std::vector<int> result;
    if (beads.is_string()) {
        for (char c : beads.get<std::string>()) {
            if (c >= 'A' && c <= 'Z')
                result.push_back(c - 'A' + 1);
            else if (c >= 'a' && c <= 'z')
                result.push_back(c - 'a' + 1);
            else
                throw InvalidParameter("bead strings must use letters only");
        }
    } else if (beads.is_array()) {
        for (const Json& b : beads) result.push_back(b.get<int>());
    } else {
        throw InvalidParameter("\"beads\" must be a string or an integer array");
    }
    return result;
}

Json verify_report_to_json(const VerifyReport& report) {
    Json j;
    j["cut_counts"] = report.cut_counts;
    j["expected_counts"] = report.expected_counts;
    j["counts_ok"] = report.counts_ok;
    j["residual"] = report.residual;
    j["tolerance"] = report.tolerance;
    j["residual_ok"] = report.residual_ok;
    j["pass"] = report.pass;
    j["masses"] = report.masses;
    return j;
}

Json parse_json_text(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        // e.byte is a 1-based offset into the text
        std::size_t line = 1, column = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        std::ostringstream os;
        os << "parse error at line " << line << ", column " << column << ": " << e.what();
        throw InvalidParameter(os.str());
    }
}

} // namespace cubesplit
