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
#include "cubesplit/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cubesplit {

Box::Box(std::vector<double> lo_, std::vector<double> hi_)
    : lo(std::move(lo_)), hi(std::move(hi_)) {
    if (lo.size() != hi.size())
        throw ShapeMismatch("box lo/hi dimension mismatch");
    for (std::size_t a = 0; a < lo.size(); ++a) {
        if (!(lo[a] >= 0.0 && hi[a] <= 1.0 && lo[a] <= hi[a]))
            throw OutOfRange("box not contained in the unit cube");
    }
}

double Box::volume() const {
    double v = 1.0;
    for (std::size_t a = 0; a < lo.size(); ++a) v *= hi[a] - lo[a];
    return v;
}

bool Box::degenerate() const {
    for (std::size_t a = 0; a < lo.size(); ++a)
        if (lo[a] == hi[a]) return true;
    return false;
}

GridDensity::GridDensity(std::vector<std::vector<double>> breakpoints,
                         std::vector<double> values, DensityMode mode)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values)), mode_(mode) {
    if (breakpoints_.empty())
        throw InvalidParameter("density needs at least one axis");
    if (breakpoints_.size() > kMaxDim)
        throw InvalidParameter("density dimension exceeds the supported maximum");
    std::size_t cells = 1;
    for (const auto& bp : breakpoints_) {
        if (bp.size() < 2 || bp.front() != 0.0 || bp.back() != 1.0)
            throw InvalidParameter("breakpoints must start at 0.0 and end at 1.0");
        for (std::size_t i = 0; i + 1 < bp.size(); ++i)
            if (!(bp[i] < bp[i + 1]))
                throw InvalidParameter("breakpoints must be strictly increasing");
        cells *= bp.size() - 1;
    }
    if (values_.size() != cells)
        throw ShapeMismatch("cell-value array length does not match the grid");
    if (mode_ == DensityMode::Probability) {
        for (double v : values_)
            if (v < 0.0) throw NegativeCell("negative cell value in probability mode");
    }
    build_prefix();
}

std::vector<int> GridDensity::cell_counts() const {
    std::vector<int> n(breakpoints_.size());
    for (std::size_t a = 0; a < breakpoints_.size(); ++a)
        n[a] = static_cast<int>(breakpoints_[a].size()) - 1;
    return n;
}

void GridDensity::build_prefix() {
    const int d = dim();
    prefix_shape_.resize(d);
    for (int a = 0; a < d; ++a)
        prefix_shape_[a] = static_cast<int>(breakpoints_[a].size()); // N_a + 1

    prefix_stride_.assign(d, 1);
    std::size_t total = 1;
    for (int a = d - 1; a >= 0; --a) {
        prefix_stride_[a] = total;
        total *= prefix_shape_[a];
    }
    prefix_.assign(total, 0.0);

    // Seed with per-cell masses at corner index (j+1 on every axis), then
    // accumulate along each axis in turn to get the summed-area table.
    const auto cells = cell_counts();
    std::vector<int> j(d, 0);
    std::size_t flat = 0;
    const std::size_t ncells = values_.size();
    while (flat < ncells) {
        double vol = 1.0;
        std::size_t idx = 0;
        for (int a = 0; a < d; ++a) {
            vol *= breakpoints_[a][j[a] + 1] - breakpoints_[a][j[a]];
            idx += static_cast<std::size_t>(j[a] + 1) * prefix_stride_[a];
        }
        prefix_[idx] = values_[flat] * vol;
        ++flat;
        for (int a = d - 1; a >= 0; --a) {
            if (++j[a] < cells[a]) break;
            j[a] = 0;
        }
    }
    for (int a = 0; a < d; ++a) {
        const std::size_t stride = prefix_stride_[a];
        for (std::size_t idx = 0; idx < total; ++idx) {
            const std::size_t coord = (idx / stride) % prefix_shape_[a];
            if (coord > 0) prefix_[idx] += prefix_[idx - stride];
        }
    }
    total_mass_ = prefix_.back();
}

double GridDensity::prefix_at(std::span<const int> corner) const {
    std::size_t idx = 0;
    for (int a = 0; a < dim(); ++a)
        idx += static_cast<std::size_t>(corner[a]) * prefix_stride_[a];
    return prefix_[idx];
}

double GridDensity::cdf(std::span<const double> point) const {
    const int d = dim();
    if (static_cast<int>(point.size()) != d)
        throw ShapeMismatch("point dimension mismatch");

    // Per axis: the grid interval containing the coordinate and the fraction
    // of that interval covered. [0,x] then splits into whole-cell prefixes
    // plus fractional boundary slabs; each of the 3^d choices (skip axis /
    // add fractional slab / subtract its lower corner) is one prefix lookup.
    int cell[kMaxDim];
    double frac[kMaxDim];
    for (int a = 0; a < d; ++a) {
        const double x = point[a];
        if (!(x >= 0.0 && x <= 1.0)) throw OutOfRange("cdf point outside the unit cube");
        const auto& bp = breakpoints_[a];
        int i = static_cast<int>(std::upper_bound(bp.begin(), bp.end(), x) - bp.begin()) - 1;
        if (i > static_cast<int>(bp.size()) - 2) i = static_cast<int>(bp.size()) - 2;
        cell[a] = i;
        frac[a] = (x - bp[i]) / (bp[i + 1] - bp[i]);
    }

    int state[kMaxDim] = {0}; // 0: prefix only, 1: +frac slab, 2: -frac slab
    double sum = 0.0;
    while (true) {
        double w = 1.0;
        std::size_t idx = 0;
        for (int a = 0; a < d; ++a) {
            switch (state[a]) {
            case 0: idx += static_cast<std::size_t>(cell[a]) * prefix_stride_[a]; break;
            case 1:
                idx += static_cast<std::size_t>(cell[a] + 1) * prefix_stride_[a];
                w *= frac[a];
                break;
            default:
                idx += static_cast<std::size_t>(cell[a]) * prefix_stride_[a];
                w *= -frac[a];
                break;
            }
        }
        if (w != 0.0) sum += w * prefix_[idx];
        int a = d - 1;
        for (; a >= 0; --a) {
            if (++state[a] <= 2) break;
            state[a] = 0;
        }
        if (a < 0) break;
    }
    return sum;
}

double GridDensity::box_mass(const Box& box) const {
    const int d = dim();
    if (box.dim() != d) throw ShapeMismatch("box dimension mismatch");
    if (box.degenerate()) return 0.0;

    double corner[kMaxDim];
    double sum = 0.0;
    for (unsigned mask = 0; mask < (1u << d); ++mask) {
        int ones = 0;
        for (int a = 0; a < d; ++a) {
            if (mask & (1u << a)) {
                corner[a] = box.hi[a];
                ++ones;
            } else {
                corner[a] = box.lo[a];
            }
        }
        const double sign = ((d - ones) % 2 == 0) ? 1.0 : -1.0;
        sum += sign * cdf({corner, static_cast<std::size_t>(d)});
    }
    return sum;
}

GridDensity normalize(const GridDensity& density) {
    const double total = density.total_mass();
    if (std::abs(total) < 1e-12) throw ZeroTotalMass("total mass is zero");
    std::vector<double> scaled = density.values();
    for (double& v : scaled) v /= total;
    return GridDensity(density.breakpoints(), std::move(scaled), density.mode());
}

MeasureSet::MeasureSet(std::vector<GridDensity> ms) : measures(std::move(ms)) {
    if (measures.empty()) throw InvalidParameter("measure set must be nonempty");
    dim = measures.front().dim();
    for (const auto& m : measures)
        if (m.dim() != dim) throw ShapeMismatch("measures must share a common dimension");
}

MeasureSet bead_necklace_to_measures(std::span<const int> beads, int n_colors) {
    if (beads.empty()) throw InvalidParameter("bead sequence must be nonempty");
    if (n_colors < 1) throw InvalidParameter("need at least one color");
    const int T = static_cast<int>(beads.size());
    for (int b : beads)
        if (b < 1 || b > n_colors) throw UnknownColor("bead color outside 1..n");

    std::vector<double> bp(T + 1);
    for (int p = 0; p <= T; ++p) bp[p] = static_cast<double>(p) / T;
    bp.front() = 0.0;
    bp.back() = 1.0;

    std::vector<GridDensity> ms;
    ms.reserve(n_colors);
    for (int c = 1; c <= n_colors; ++c) {
        std::vector<double> vals(T, 0.0);
        for (int p = 0; p < T; ++p)
            if (beads[p] == c) vals[p] = 1.0;
        ms.push_back(normalize(GridDensity({bp}, std::move(vals))));
    }
    return MeasureSet(std::move(ms));
}

} // namespace cubesplit
