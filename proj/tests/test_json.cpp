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
#include <doctest.h>

#include "cubesplit/json_io.hpp"
#include "oracles.hpp"

using namespace cubesplit;

TEST_CASE("density round trip") {
    Rng rng(67);
    for (int trial = 0; trial < 20; ++trial) {
        const int d = 1 + static_cast<int>(rng.next_below(3));
        const GridDensity density = oracles::random_density(rng, d, 5, rng.next_below(2) == 0);
        const GridDensity back = density_from_json(density_to_json(density));
        CHECK(back.breakpoints() == density.breakpoints());
        CHECK(back.values() == density.values());
        CHECK(back.mode() == density.mode());
    }
}

TEST_CASE("instance parsing validates the budget") {
    const Json good = Json::parse(R"({
      "k": 2,
      "m": [1],
      "measures": [{"breakpoints": [[0.0, 1.0]], "values": [2.0]}]
    })");
    const Instance instance = instance_from_json(good);
    CHECK(instance.k == 2);
    CHECK(instance.measures[0].total_mass() == doctest::Approx(1.0)); // normalized on load

    Json bad = good;
    bad["m"] = {2};
    CHECK_THROWS_AS(instance_from_json(bad), BudgetMismatch);

    Json missing = good;
    missing.erase("measures");
    CHECK_THROWS_AS(instance_from_json(missing), InvalidParameter);
}

TEST_CASE("division round trip") {
    const Json j = Json::parse(R"({"k": 2, "cuts": [[0.25, 0.75]], "labels": [1, 2, 1]})");
    const Division division = division_from_json(j);
    CHECK(division.k() == 2);
    CHECK(division.cuts.cuts[0] == std::vector<double>{0.25, 0.75});
    const Json back = division_to_json(division);
    CHECK(back["labels"] == j["labels"]);
    CHECK(back["cuts"] == j["cuts"]);

    const Json bad = Json::parse(R"({"k": 2, "cuts": [[0.5]], "labels": [1, 3]})");
    CHECK_THROWS_AS(division_from_json(bad), InvalidParameter);
}

TEST_CASE("bead parsing accepts strings and arrays") {
    CHECK(beads_from_json(Json::parse(R"({"beads": "AABB"})")) == std::vector<int>{1, 1, 2, 2});
    CHECK(beads_from_json(Json::parse(R"({"beads": [1, 1, 2, 2]})")) ==
          std::vector<int>{1, 1, 2, 2});
    CHECK(beads_from_json(Json::parse(R"("abc")")) == std::vector<int>{1, 2, 3});
    CHECK_THROWS_AS(beads_from_json(Json::parse(R"({"beads": "A B"})")), InvalidParameter);
}

TEST_CASE("parse errors carry line position") {
    try {
        parse_json_text("{\n  \"k\": 2,\n  broken\n}");
        FAIL("expected a parse error");
    } catch (const InvalidParameter& e) {
        const std::string what = e.what();
        CHECK(what.find("line 3") != std::string::npos);
    }
}
