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
#include "cubesplit/cell_complex.hpp"

#include <numeric>

namespace cubesplit {

std::vector<std::size_t> CellComplex::cell_counts() const {
    std::vector<std::size_t> counts(facets.size());
    for (std::size_t d = 0; d < facets.size(); ++d) counts[d] = facets[d].size();
    return counts;
}

std::size_t CellComplex::total_cells() const {
    std::size_t total = 0;
    for (const auto& level : facets) total += level.size();
    return total;
}

bool CellComplex::pure() const {
    const int d = dim();
    if (d < 0) return true;
    std::vector<std::vector<bool>> covered(facets.size());
    for (std::size_t level = 0; level < facets.size(); ++level)
        covered[level].assign(facets[level].size(), false);
    covered[d].assign(facets[d].size(), true);
    for (int level = d; level > 0; --level) {
        for (std::size_t i = 0; i < facets[level].size(); ++i) {
            if (!covered[level][i]) continue;
            for (std::int64_t f : facets[level][i]) covered[level - 1][f] = true;
        }
    }
    for (const auto& level : covered)
        for (bool c : level)
            if (!c) return false;
    return true;
}

std::size_t gf2_rank(std::size_t rows, const std::vector<std::vector<std::int64_t>>& columns) {
    if (rows == 0 || columns.empty()) return 0;
    const std::size_t words = (rows + 63) / 64;

    // pivot_cols[r] holds a reduced column whose lowest set bit is r.
    std::vector<std::vector<std::uint64_t>> pivot_cols(rows);
    std::vector<std::uint64_t> work(words);
    std::size_t rank = 0;

    auto lowest_bit = [&](const std::vector<std::uint64_t>& col) -> std::int64_t {
        for (std::size_t w = 0; w < words; ++w)
            if (col[w] != 0)
                return static_cast<std::int64_t>(w * 64 + static_cast<std::size_t>(__builtin_ctzll(col[w])));
        return -1;
    };

    for (const auto& support : columns) {
        std::fill(work.begin(), work.end(), 0);
        for (std::int64_t r : support) work[static_cast<std::size_t>(r) / 64] ^= 1ull << (r % 64);
        std::int64_t low = lowest_bit(work);
        while (low >= 0 && !pivot_cols[low].empty()) {
            const auto& pivot = pivot_cols[low];
            for (std::size_t w = 0; w < words; ++w) work[w] ^= pivot[w];
            low = lowest_bit(work);
        }
        if (low >= 0) {
            pivot_cols[low] = work;
            ++rank;
        }
    }
    return rank;
}

std::vector<long> betti_mod2(const CellComplex& complex) {
    const int d = complex.dim();
    const auto counts = complex.cell_counts();
    std::vector<std::size_t> ranks(d + 2, 0); // ranks[i] = rank of boundary_i
    for (int i = 1; i <= d; ++i) ranks[i] = gf2_rank(counts[i - 1], complex.facets[i]);

    std::vector<long> betti(d + 1, 0);
    for (int i = 0; i <= d; ++i) {
        const long nullity = static_cast<long>(counts[i]) - static_cast<long>(ranks[i]);
        betti[i] = nullity - static_cast<long>(ranks[i + 1]);
    }
    if (!betti.empty()) betti[0] -= 1; // reduced degree 0
    return betti;
}

std::size_t component_count(const CellComplex& complex) {
    // union-find over all cells, joining each cell with its facets
    const auto counts = complex.cell_counts();
    std::vector<std::size_t> offset(counts.size() + 1, 0);
    for (std::size_t d = 0; d < counts.size(); ++d) offset[d + 1] = offset[d] + counts[d];
    const std::size_t total = offset.back();
    if (total == 0) return 0;

    std::vector<std::size_t> parent(total);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    for (std::size_t d = 1; d < complex.facets.size(); ++d)
        for (std::size_t i = 0; i < complex.facets[d].size(); ++i)
            for (std::int64_t f : complex.facets[d][i]) {
                const std::size_t a = find(offset[d] + i);
                const std::size_t b = find(offset[d - 1] + static_cast<std::size_t>(f));
                if (a != b) parent[a] = b;
            }
    std::size_t components = 0;
    for (std::size_t x = 0; x < total; ++x)
        if (find(x) == x) ++components;
    return components;
}

} // namespace cubesplit
