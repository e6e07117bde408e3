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
#ifndef CUBESPLIT_MEASURES_HPP
#define CUBESPLIT_MEASURES_HPP

#include <span>
#include <vector>

#include "cubesplit/errors.hpp"

namespace cubesplit {

/// An axis-parallel closed box inside the unit cube. Degenerate boxes
/// (lo[i] == hi[i] on some axis) are allowed and carry zero mass.
struct Box {
    std::vector<double> lo;
    std::vector<double> hi;

    Box() = default;
    Box(std::vector<double> lo_, std::vector<double> hi_);

    int dim() const { return static_cast<int>(lo.size()); }
    double volume() const;
    bool degenerate() const;
};

enum class DensityMode {
    Probability, ///< cell values must be nonnegative
    Signed,      ///< signed densities allowed
};

/// Hard cap on the grid dimension; keeps evaluation buffers on the stack.
inline constexpr int kMaxDim = 16;

/// A piecewise-constant density on [0,1]^d over per-axis breakpoint grids.
///
/// Cell values are stored flattened row-major with axis 1 (the first axis)
/// most significant. A prefix-sum table of cell masses is built once so that
/// cdf() and box_mass() are exact up to floating rounding and cheap to
/// evaluate. Immutable after construction; safe to share across threads.
class GridDensity {
  public:
    GridDensity(std::vector<std::vector<double>> breakpoints,
                std::vector<double> values,
                DensityMode mode = DensityMode::Probability);

    int dim() const { return static_cast<int>(breakpoints_.size()); }
    DensityMode mode() const { return mode_; }
    const std::vector<std::vector<double>>& breakpoints() const { return breakpoints_; }
    const std::vector<double>& values() const { return values_; }

    /// Number of grid cells along each axis.
    std::vector<int> cell_counts() const;

    /// Sum over cells of value * cell volume.
    double total_mass() const { return total_mass_; }

    /// Mass of the corner box [0,x_1] x ... x [0,x_d].
    double cdf(std::span<const double> point) const;

    /// Mass of an arbitrary box inside the cube, by 2^d inclusion-exclusion
    /// over cdf at the box corners. Degenerate boxes return exactly 0.
    double box_mass(const Box& box) const;

  private:
    std::vector<std::vector<double>> breakpoints_;
    std::vector<double> values_; // one per cell, row-major, axis 1 most significant
    DensityMode mode_;
    double total_mass_ = 0.0;

    // prefix_[idx] over the (N_1+1) x ... x (N_d+1) corner grid: mass of the
    // union of all cells strictly below idx on every axis.
    std::vector<double> prefix_;
    std::vector<int> prefix_shape_;
    std::vector<std::size_t> prefix_stride_;

    void build_prefix();
    double prefix_at(std::span<const int> corner) const;
};

/// Scale values so the total mass becomes exactly 1. Breakpoints unchanged.
GridDensity normalize(const GridDensity& density);

/// An ordered collection of measures on a common cube; grids may differ.
struct MeasureSet {
    int dim = 0;
    std::vector<GridDensity> measures;

    MeasureSet() = default;
    MeasureSet(std::vector<GridDensity> ms);

    std::size_t size() const { return measures.size(); }
    const GridDensity& operator[](std::size_t i) const { return measures[i]; }
};

/// Embed a discrete bead necklace into d=1 measures: bead p of T becomes the
/// interval [p/T,(p+1)/T], and measure i is the normalized indicator density
/// of color i's beads. Colors are 1-based.
MeasureSet bead_necklace_to_measures(std::span<const int> beads, int n_colors);

} // namespace cubesplit

#endif
