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
#ifndef CUBESPLIT_SOLVER_HPP
#define CUBESPLIT_SOLVER_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "cubesplit/divisions.hpp"
#include "cubesplit/measures.hpp"

namespace cubesplit {

struct SolverConfig {
    double tolerance = 1e-6;
    /// Accepted residual after composing sub-solutions for composite k.
    double composite_tolerance = 1e-4;
    int restarts = 32;
    std::int64_t eval_budget = 100'000; // residual evaluations per restart
    std::uint64_t seed = 0;
    double initial_temperature = 0.1; // hop-acceptance annealing start
    double cooling = 0.95;            // temperature factor per hop
    double pattern_step = 0.5;        // initial cut pattern-search step
    double pattern_shrink = 0.5;
    /// Run restarts under OpenMP. The serial path is the reference; both
    /// produce bit-identical divisions.
    bool parallel_restarts = true;
};

/// How a composite k = k1*k2 problem splits its per-axis cut budgets: the
/// outer problem gets m^0, inner problem j gets m^j.
struct FactorPlan {
    int k1 = 0;
    int k2 = 0;
    std::vector<int> outer;              // length d, sums to n(k1-1)
    std::vector<std::vector<int>> inner; // k1 vectors, each sums to n(k2-1)
};

/// Deterministic block split: the per-axis unit budgets are concatenated in
/// axis order and the resulting sequence of length n(k1*k2 - 1) is cut into
/// consecutive blocks of sizes n(k1-1), n(k2-1), ..., n(k2-1).
FactorPlan allocate_cut_budgets(int n, int d, int k1, int k2, std::span<const int> m);

/// Find a fair division with exactly m_i cuts per axis and residual at most
/// config.tolerance (config.composite_tolerance for composite k), verified
/// against the original measures before returning. Prime k runs the direct
/// search; composite k recurses through the smallest prime factor.
/// Throws SearchExhausted when the budgets run out.
Division solve(const MeasureSet& measures, int k, std::span<const int> m,
               const SolverConfig& config = {});

/// The direct multi-start search (annealed labeling moves alternating with
/// cut pattern search). Restart 0 starts from equispaced cuts; later
/// restarts sample cut gaps from a uniform Dirichlet distribution.
Division solve_base(const MeasureSet& measures, int k, std::span<const int> m,
                    const SolverConfig& config = {});

/// Rescaled restriction of a measure onto a union of outer elementary boxes
/// (region[flat box index] != 0), on the grid refined by the outer cuts.
/// Regions of near-zero mass fall back to the uniform density on the region.
GridDensity restrict_measure(const GridDensity& density, const CutConfiguration& outer_cuts,
                             const std::vector<char>& region, int scale);

/// Merge an outer k1-division with k1 inner k2-divisions into a division by
/// k1*k2 colors; cell color = (outer class - 1) * k2 + inner class.
Division compose(const Division& outer, const std::vector<Division>& inners,
                 const FactorPlan& plan);

struct NecklaceSplit {
    std::vector<int> cuts;    // number of beads before each cut, increasing
    std::vector<int> thieves; // owner of each piece, 1..k
};

/// Exact discrete splitter: exhaustively searches cut placements at bead
/// boundaries (fewest cuts first, at most n(k-1)) and piece assignments so
/// every thief receives exactly count/k beads of every color. The oracle for
/// the continuous solver.
NecklaceSplit solve_discrete_1d(std::span<const int> beads, int k);

/// Evenly spread N units over d axes, earlier axes first: the block split
/// used when generating instances.
std::vector<int> default_axis_budgets(int total_cuts, int d);

} // namespace cubesplit

#endif
