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
#include "cubesplit/divisions.hpp"

#include <algorithm>
#include <cmath>

namespace cubesplit {

CutConfiguration::CutConfiguration(std::vector<std::vector<double>> cuts_)
    : cuts(std::move(cuts_)) {
    for (const auto& axis : cuts) {
        for (double x : axis)
            if (!(x >= 0.0 && x <= 1.0)) throw OutOfRange("cut position outside [0,1]");
        if (!std::is_sorted(axis.begin(), axis.end()))
            throw InvalidParameter("cut positions must be sorted per axis");
    }
}

std::vector<int> CutConfiguration::counts() const {
    std::vector<int> m(cuts.size());
    for (std::size_t a = 0; a < cuts.size(); ++a) m[a] = static_cast<int>(cuts[a].size());
    return m;
}

std::size_t CutConfiguration::box_count() const {
    std::size_t b = 1;
    for (const auto& axis : cuts) b *= axis.size() + 1;
    return b;
}

Labeling::Labeling(int k_, std::vector<int> shape_, std::vector<int> labels_)
    : k(k_), shape(std::move(shape_)), labels(std::move(labels_)) {
    if (k < 1) throw InvalidParameter("color count must be positive");
    std::size_t len = 1;
    for (int s : shape) {
        if (s < 1) throw InvalidParameter("labeling shape entries must be positive");
        len *= static_cast<std::size_t>(s);
    }
    if (labels.size() != len) throw ShapeMismatch("labeling length does not match shape");
    for (int c : labels)
        if (c < 1 || c > k) throw InvalidParameter("label outside 1..k");
}

Division::Division(CutConfiguration cuts_, Labeling labeling_)
    : cuts(std::move(cuts_)), labeling(std::move(labeling_)) {
    const auto m = cuts.counts();
    if (labeling.shape.size() != m.size())
        throw ShapeMismatch("labeling dimension does not match cuts");
    for (std::size_t a = 0; a < m.size(); ++a)
        if (labeling.shape[a] != m[a] + 1)
            throw ShapeMismatch("labeling shape does not match cut counts");
}

Box elementary_box(const CutConfiguration& cuts, std::span<const int> index) {
    const int d = cuts.dim();
    if (static_cast<int>(index.size()) != d)
        throw IndexOutOfRange("multi-index dimension mismatch");
    std::vector<double> lo(d), hi(d);
    for (int a = 0; a < d; ++a) {
        const auto& axis = cuts.cuts[a];
        const int m = static_cast<int>(axis.size());
        const int j = index[a];
        if (j < 0 || j > m) throw IndexOutOfRange("multi-index outside 0..m");
        lo[a] = (j == 0) ? 0.0 : axis[j - 1];
        hi[a] = (j == m) ? 1.0 : axis[j];
    }
    return Box(std::move(lo), std::move(hi));
}

ResidualMatrix evaluate(const Division& division, const MeasureSet& measures) {
    if (division.dim() != measures.dim)
        throw ShapeMismatch("division and measures dimension mismatch");
    const int d = division.dim();
    const int k = division.k();
    const std::size_t n = measures.size();

    ResidualMatrix m;
    m.n = n;
    m.k = static_cast<std::size_t>(k);
    m.entries.assign(n * k, 0.0);

    std::vector<int> idx(d, 0);
    const auto& shape = division.labeling.shape;
    std::size_t flat = 0;
    const std::size_t nboxes = division.labeling.labels.size();
    while (flat < nboxes) {
        const Box box = elementary_box(division.cuts, idx);
        const int color = division.labeling.labels[flat];
        if (!box.degenerate()) {
            for (std::size_t j = 0; j < n; ++j)
                m.at(j, color - 1) += measures[j].box_mass(box);
        }
        ++flat;
        for (int a = d - 1; a >= 0; --a) {
            if (++idx[a] < shape[a]) break;
            idx[a] = 0;
        }
    }
    for (std::size_t j = 0; j < n; ++j)
        for (int c = 0; c < k; ++c) m.at(j, c) -= 1.0 / k;
    return m;
}

double residual_norm(const ResidualMatrix& m) {
    double r = 0.0;
    for (double e : m.entries) r = std::max(r, std::abs(e));
    return r;
}

VerifyReport verify(const Division& division, const MeasureSet& measures,
                    double tol, std::span<const int> expected_counts) {
    VerifyReport report;
    report.cut_counts = division.cuts.counts();
    report.expected_counts.assign(expected_counts.begin(), expected_counts.end());
    report.counts_ok = report.cut_counts == report.expected_counts;
    report.tolerance = tol;

    const ResidualMatrix m = evaluate(division, measures);
    report.residual = residual_norm(m);
    report.residual_ok = report.residual <= tol;
    report.pass = report.counts_ok && report.residual_ok;

    const int k = division.k();
    report.masses.assign(measures.size(), std::vector<double>(k, 0.0));
    for (std::size_t j = 0; j < measures.size(); ++j)
        for (int c = 0; c < k; ++c)
            report.masses[j][c] = m.at(j, c) + 1.0 / k;
    return report;
}

std::vector<int> sign_representation(const Division& division) {
    if (division.k() != 2) throw NotTwoColors("sign representation needs exactly 2 colors");
    std::vector<int> signs(division.labeling.labels.size());
    for (std::size_t i = 0; i < signs.size(); ++i)
        signs[i] = (division.labeling.labels[i] == 1) ? +1 : -1;
    return signs;
}

} // namespace cubesplit
