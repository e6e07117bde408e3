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
#ifndef CUBESPLIT_TESTS_ORACLES_HPP
#define CUBESPLIT_TESTS_ORACLES_HPP

// Test-only reference implementations, deliberately independent of the
// library's evaluation paths.

#include <algorithm>
#include <vector>

#include "cubesplit/measures.hpp"
#include "cubesplit/polytope.hpp"
#include "cubesplit/rng.hpp"
#include "cubesplit/solver.hpp"

namespace cubesplit::oracles {

/// Riemann sum over the partition aligned with the density grid: iterates
/// every cell and accumulates value * overlap volume. Never touches the
/// prefix-sum table or cdf.
inline double box_mass_direct(const GridDensity& density, const Box& box) {
    const int d = density.dim();
    const auto counts = density.cell_counts();
    std::vector<int> idx(d, 0);
    double sum = 0.0;
    const std::size_t cells = density.values().size();
    for (std::size_t flat = 0; flat < cells; ++flat) {
        double overlap = 1.0;
        for (int a = 0; a < d; ++a) {
            const double lo = density.breakpoints()[a][idx[a]];
            const double hi = density.breakpoints()[a][idx[a] + 1];
            overlap *= std::max(0.0, std::min(hi, box.hi[a]) - std::max(lo, box.lo[a]));
        }
        sum += density.values()[flat] * overlap;
        for (int a = d - 1; a >= 0; --a) {
            if (++idx[a] < counts[a]) break;
            idx[a] = 0;
        }
    }
    return sum;
}

/// Random density with non-equispaced breakpoints.
inline GridDensity random_density(Rng& rng, int d, int max_cells_per_axis, bool allow_signed = false) {
    std::vector<std::vector<double>> breakpoints(d);
    for (int a = 0; a < d; ++a) {
        const int cells = 1 + static_cast<int>(rng.next_below(max_cells_per_axis));
        std::vector<double> bp{0.0, 1.0};
        while (static_cast<int>(bp.size()) < cells + 1) {
            const double x = rng.next_double();
            if (x > 1e-6 && x < 1.0 - 1e-6) bp.push_back(x);
        }
        std::sort(bp.begin(), bp.end());
        bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
        breakpoints[a] = bp;
    }
    std::size_t cells = 1;
    for (int a = 0; a < d; ++a) cells *= breakpoints[a].size() - 1;
    std::vector<double> values(cells);
    for (double& v : values)
        v = allow_signed ? 2.0 * rng.next_double() - 1.0 : rng.next_double();
    return GridDensity(std::move(breakpoints), std::move(values),
                       allow_signed ? DensityMode::Signed : DensityMode::Probability);
}

inline Box random_box(Rng& rng, int d) {
    std::vector<double> lo(d), hi(d);
    for (int a = 0; a < d; ++a) {
        double x = rng.next_double();
        double y = rng.next_double();
        if (x > y) std::swap(x, y);
        lo[a] = x;
        hi[a] = y;
    }
    return Box(std::move(lo), std::move(hi));
}

/// Check a discrete split by recounting beads piece by piece.
inline bool discrete_split_is_fair(std::span<const int> beads, int k, const NecklaceSplit& split) {
    int max_color = 0;
    for (int b : beads) max_color = std::max(max_color, b);
    std::vector<std::vector<int>> got(k, std::vector<int>(max_color + 1, 0));
    std::vector<int> total(max_color + 1, 0);
    for (int b : beads) total[b]++;

    std::vector<int> bounds{0};
    for (int c : split.cuts) bounds.push_back(c);
    bounds.push_back(static_cast<int>(beads.size()));
    if (!std::is_sorted(bounds.begin(), bounds.end())) return false;
    if (split.thieves.size() != bounds.size() - 1) return false;
    for (std::size_t p = 0; p + 1 < bounds.size(); ++p) {
        const int t = split.thieves[p];
        if (t < 1 || t > k) return false;
        for (int i = bounds[p]; i < bounds[p + 1]; ++i) got[t - 1][beads[i]]++;
    }
    for (int c = 1; c <= max_color; ++c)
        for (int t = 0; t < k; ++t)
            if (got[t][c] * k != total[c]) return false;
    return true;
}

/// Attachment set of a top labeling by brute force over all smaller
/// labelings: faces F with some f before g (lexicographically) agreeing with
/// g on F. Exponential; small bases only.
inline std::vector<int> lex_attachment_bruteforce(const FaceLattice& base, int k,
                                                  std::size_t g_rank) {
    const int nv = base.num_vertices();
    auto labels_of = [&](std::size_t rank) {
        std::vector<int> labels(nv);
        for (int pos = nv - 1; pos >= 0; --pos) {
            labels[pos] = static_cast<int>(rank % k) + 1;
            rank /= k;
        }
        return labels;
    };
    const std::vector<int> g = labels_of(g_rank);
    std::vector<char> in_set(base.size(), 0);
    for (std::size_t f_rank = 0; f_rank < g_rank; ++f_rank) {
        const std::vector<int> f = labels_of(f_rank);
        for (const auto& face : base.faces()) {
            if (face.id == base.top()) continue;
            bool agrees = true;
            for (int v : face.vertices)
                if (f[v] != g[v]) {
                    agrees = false;
                    break;
                }
            if (agrees) in_set[face.id] = 1;
        }
    }
    std::vector<int> result;
    for (std::size_t id = 0; id < in_set.size(); ++id)
        if (in_set[id]) result.push_back(static_cast<int>(id));
    return result;
}

} // namespace cubesplit::oracles

#endif
