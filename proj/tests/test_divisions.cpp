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

#include <algorithm>

#include "cubesplit/divisions.hpp"
#include "oracles.hpp"

using namespace cubesplit;

namespace {

Division make_division(std::vector<std::vector<double>> cuts, int k, std::vector<int> labels) {
    CutConfiguration cc(std::move(cuts));
    std::vector<int> shape = cc.counts();
    for (int& s : shape) ++s;
    return Division(std::move(cc), Labeling(k, std::move(shape), std::move(labels)));
}

MeasureSet uniform_measures(int n, int d) {
    std::vector<std::vector<double>> bp(d, {0.0, 1.0});
    std::vector<GridDensity> ms;
    for (int i = 0; i < n; ++i) ms.emplace_back(bp, std::vector<double>{1.0});
    return MeasureSet(std::move(ms));
}

} // namespace

TEST_CASE("elementary_box reads off the cut intervals") {
    using Cuts = std::vector<std::vector<double>>;
    const CutConfiguration one_cut(Cuts{{0.5}});
    const Box b0 = elementary_box(one_cut, std::vector<int>{0});
    CHECK(b0.lo == std::vector<double>{0.0});
    CHECK(b0.hi == std::vector<double>{0.5});

    const CutConfiguration grid(Cuts{{0.25, 0.75}, {}});
    const Box b = elementary_box(grid, std::vector<int>{1, 0});
    CHECK(b.lo == std::vector<double>{0.25, 0.0});
    CHECK(b.hi == std::vector<double>{0.75, 1.0});

    const CutConfiguration repeated(Cuts{{0.3, 0.3}});
    const Box degenerate = elementary_box(repeated, std::vector<int>{1});
    CHECK(degenerate.lo == std::vector<double>{0.3});
    CHECK(degenerate.hi == std::vector<double>{0.3});
    CHECK(degenerate.degenerate());

    CHECK_THROWS_AS(elementary_box(one_cut, std::vector<int>{2}), IndexOutOfRange);
}

TEST_CASE("evaluate on the halving division") {
    const MeasureSet uniform = uniform_measures(1, 1);
    const Division fair = make_division({{0.5}}, 2, {1, 2});
    const ResidualMatrix m = evaluate(fair, uniform);
    CHECK(m.at(0, 0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(m.at(0, 1) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(residual_norm(m) == doctest::Approx(0.0).epsilon(1e-15));

    const Division greedy = make_division({{0.5}}, 2, {1, 1});
    const ResidualMatrix g = evaluate(greedy, uniform);
    CHECK(g.at(0, 0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(g.at(0, 1) == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(residual_norm(g) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("evaluate the two-measure interleaved division") {
    std::vector<GridDensity> ms;
    ms.emplace_back(std::vector<std::vector<double>>{{0.0, 0.5, 1.0}}, std::vector<double>{2.0, 0.0});
    ms.emplace_back(std::vector<std::vector<double>>{{0.0, 0.5, 1.0}}, std::vector<double>{0.0, 2.0});
    const MeasureSet measures(std::move(ms));
    const Division division = make_division({{0.25, 0.75}}, 2, {1, 2, 1});
    CHECK(residual_norm(evaluate(division, measures)) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("verify reports counts and residual") {
    const MeasureSet uniform = uniform_measures(1, 1);
    const Division fair = make_division({{0.5}}, 2, {1, 2});

    const std::vector<int> expect_one{1};
    VerifyReport report = verify(fair, uniform, 1e-9, expect_one);
    CHECK(report.pass);
    CHECK(report.counts_ok);
    CHECK(report.masses[0][0] == doctest::Approx(0.5).epsilon(1e-12));

    const std::vector<int> expect_two{2};
    report = verify(fair, uniform, 1e-9, expect_two);
    CHECK_FALSE(report.pass);
    CHECK_FALSE(report.counts_ok);
    CHECK(report.residual_ok);
}

TEST_CASE("evaluate rejects mismatched dimensions") {
    const MeasureSet uniform2d = uniform_measures(1, 2);
    const Division fair = make_division({{0.5}}, 2, {1, 2});
    CHECK_THROWS_AS(evaluate(fair, uniform2d), ShapeMismatch);
}

TEST_CASE("sign representation") {
    const Division fair = make_division({{0.5}}, 2, {1, 2});
    CHECK(sign_representation(fair) == std::vector<int>{1, -1});
    const Division three = make_division({{0.25, 0.75}}, 2, {1, 2, 1});
    CHECK(sign_representation(three) == std::vector<int>{1, -1, 1});
    const Division k3 = make_division({{0.25, 0.75}}, 3, {1, 2, 3});
    CHECK_THROWS_AS(sign_representation(k3), NotTwoColors);
}

namespace {

Division random_division(Rng& rng, int d, int k, std::vector<int>& m_out) {
    m_out.resize(d);
    std::vector<std::vector<double>> cuts(d);
    for (int a = 0; a < d; ++a) {
        m_out[a] = static_cast<int>(rng.next_below(4));
        for (int i = 0; i < m_out[a]; ++i) cuts[a].push_back(rng.next_double());
        std::sort(cuts[a].begin(), cuts[a].end());
    }
    std::size_t boxes = 1;
    for (int a = 0; a < d; ++a) boxes *= m_out[a] + 1;
    std::vector<int> labels(boxes);
    for (auto& l : labels) l = static_cast<int>(rng.next_below(k)) + 1;
    return make_division(std::move(cuts), k, std::move(labels));
}

MeasureSet random_measures(Rng& rng, int n, int d) {
    std::vector<GridDensity> ms;
    for (int i = 0; i < n; ++i) ms.push_back(normalize(oracles::random_density(rng, d, 5)));
    return MeasureSet(std::move(ms));
}

} // namespace

TEST_CASE("residual rows sum to zero") {
    Rng rng(23);
    for (int trial = 0; trial < 50; ++trial) {
        const int d = 1 + static_cast<int>(rng.next_below(2));
        const int k = 2 + static_cast<int>(rng.next_below(3));
        const int n = 1 + static_cast<int>(rng.next_below(3));
        std::vector<int> m;
        const Division division = random_division(rng, d, k, m);
        const MeasureSet measures = random_measures(rng, n, d);
        const ResidualMatrix res = evaluate(division, measures);
        for (std::size_t j = 0; j < res.n; ++j) {
            double row = 0.0;
            for (std::size_t c = 0; c < res.k; ++c) row += res.at(j, c);
            CHECK(std::abs(row) < 1e-9);
        }
    }
}

TEST_CASE("permuting colors permutes residual columns") {
    Rng rng(29);
    for (int trial = 0; trial < 30; ++trial) {
        const int d = 1 + static_cast<int>(rng.next_below(2));
        const int k = 2 + static_cast<int>(rng.next_below(3));
        std::vector<int> m;
        Division division = random_division(rng, d, k, m);
        const MeasureSet measures = random_measures(rng, 2, d);
        const ResidualMatrix before = evaluate(division, measures);

        std::vector<int> perm(k);
        for (int c = 0; c < k; ++c) perm[c] = c + 1;
        for (int c = k - 1; c > 0; --c)
            std::swap(perm[c], perm[rng.next_below(c + 1)]);

        Division permuted = division;
        for (int& label : permuted.labeling.labels) label = perm[label - 1];
        const ResidualMatrix after = evaluate(permuted, measures);
        for (std::size_t j = 0; j < before.n; ++j)
            for (int c = 0; c < k; ++c)
                CHECK(after.at(j, perm[c] - 1) == doctest::Approx(before.at(j, c)).epsilon(1e-12));
        CHECK(residual_norm(after) == doctest::Approx(residual_norm(before)).epsilon(1e-12));
    }
}

TEST_CASE("gluing: duplicating a cut with its label leaves the residual unchanged") {
    Rng rng(31);
    for (int trial = 0; trial < 30; ++trial) {
        const int d = 1 + static_cast<int>(rng.next_below(2));
        const int k = 2 + static_cast<int>(rng.next_below(2));
        std::vector<int> m;
        Division division = random_division(rng, d, k, m);
        const MeasureSet measures = random_measures(rng, 2, d);
        const ResidualMatrix before = evaluate(division, measures);

        // insert a duplicate of an existing cut on a random axis (or of 0.0
        // when the axis has none) and duplicate the touching label slab
        const int axis = static_cast<int>(rng.next_below(d));
        const auto& axis_cuts = division.cuts.cuts[axis];
        const int pos = axis_cuts.empty() ? 0 : static_cast<int>(rng.next_below(axis_cuts.size()));
        const double value = axis_cuts.empty() ? 0.0 : axis_cuts[pos];

        std::vector<std::vector<double>> new_cuts = division.cuts.cuts;
        new_cuts[axis].insert(new_cuts[axis].begin() + pos, value);

        const auto& shape = division.labeling.shape;
        std::vector<int> new_shape = shape;
        new_shape[axis]++;
        std::size_t new_total = 1;
        for (int s : new_shape) new_total *= s;
        std::vector<int> new_labels(new_total);
        std::vector<int> idx(d, 0);
        for (std::size_t flat = 0; flat < new_total; ++flat) {
            std::vector<int> src = idx;
            if (src[axis] > pos) src[axis]--; // slabs at and after the copy shift by one
            std::size_t src_flat = 0;
            for (int a = 0; a < d; ++a) src_flat = src_flat * shape[a] + src[a];
            new_labels[flat] = division.labeling.labels[src_flat];
            for (int a = d - 1; a >= 0; --a) {
                if (++idx[a] < new_shape[a]) break;
                idx[a] = 0;
            }
        }
        const Division refined = make_division(std::move(new_cuts), k, std::move(new_labels));
        const ResidualMatrix after = evaluate(refined, measures);
        for (std::size_t j = 0; j < before.n; ++j)
            for (int c = 0; c < k; ++c)
                CHECK(after.at(j, c) == doctest::Approx(before.at(j, c)).epsilon(1e-12));
    }
}

TEST_CASE("k=2 fairness is equivalent to vanishing Hobby-Rice sums") {
    Rng rng(37);
    const MeasureSet measures = random_measures(rng, 2, 1);

    // fair: residual 0 iff every signed sum vanishes
    const Division fair = make_division({{0.5}}, 2, {1, 2});
    // build a genuinely fair division for a single uniform measure instead
    const MeasureSet uniform = uniform_measures(2, 1);
    const ResidualMatrix m = evaluate(fair, uniform);
    const std::vector<int> signs = sign_representation(fair);
    for (std::size_t j = 0; j < uniform.size(); ++j) {
        double signed_sum = 0.0;
        std::vector<int> idx(1, 0);
        for (int b = 0; b <= 1; ++b) {
            idx[0] = b;
            signed_sum += signs[b] * uniform[0].box_mass(elementary_box(fair.cuts, idx));
        }
        CHECK((residual_norm(m) == 0.0) == (std::abs(signed_sum) < 1e-15));
    }

    // unfair random division: some signed sum must not vanish
    std::vector<int> mm;
    for (int trial = 0; trial < 20; ++trial) {
        const Division division = random_division(rng, 1, 2, mm);
        const ResidualMatrix res = evaluate(division, measures);
        const std::vector<int> sg = sign_representation(division);
        double worst = 0.0;
        for (std::size_t j = 0; j < measures.size(); ++j) {
            double signed_sum = 0.0;
            for (std::size_t b = 0; b < sg.size(); ++b) {
                const std::vector<int> idx{static_cast<int>(b)};
                signed_sum += sg[b] * measures[j].box_mass(elementary_box(division.cuts, idx));
            }
            worst = std::max(worst, std::abs(signed_sum));
        }
        // |mu_j(A_1) - mu_j(A_2)| = 2 * |M[j][0]|
        CHECK(worst == doctest::Approx(2.0 * residual_norm(res)).epsilon(1e-10));
    }
}
