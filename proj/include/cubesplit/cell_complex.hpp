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
#ifndef CUBESPLIT_CELL_COMPLEX_HPP
#define CUBESPLIT_CELL_COMPLEX_HPP

#include <cstdint>
#include <vector>

namespace cubesplit {

/// A finite graded regular cell complex, stored as the facet relation:
/// facets[d][i] lists the (d-1)-cells in the boundary of the i-th d-cell.
struct CellComplex {
    std::vector<std::vector<std::vector<std::int64_t>>> facets;

    int dim() const { return static_cast<int>(facets.size()) - 1; }
    std::vector<std::size_t> cell_counts() const;
    std::size_t total_cells() const;

    /// True if every cell lies under some top-dimensional cell.
    bool pure() const;
};

/// GF(2) matrix rank of a boundary operator given as column supports.
/// Columns are reduced against each other with 64-bit word bitsets.
std::size_t gf2_rank(std::size_t rows, const std::vector<std::vector<std::int64_t>>& columns);

/// Betti numbers over GF(2) via rank-nullity on the cellular chain complex.
/// The degree-0 entry is reduced (number of components minus one).
std::vector<long> betti_mod2(const CellComplex& complex);

/// Number of connected components of the 1-skeleton-equivalent incidence
/// graph (cells joined to their facets).
std::size_t component_count(const CellComplex& complex);

} // namespace cubesplit

#endif
