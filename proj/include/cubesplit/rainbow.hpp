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
#ifndef CUBESPLIT_RAINBOW_HPP
#define CUBESPLIT_RAINBOW_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cubesplit/cell_complex.hpp"
#include "cubesplit/polytope.hpp"

namespace cubesplit {

using BigInt = boost::multiprecision::cpp_int;

/// The rainbow complex of a base polytope: one cell (F, h) per face F and
/// vertex labeling h : verts(F) -> {1..k}. The facets of (F, h) are the
/// pairs (F', h|F') over the facets F' of F.
///
/// Cells of each dimension are stored in blocks per face, ordered by the
/// base lattice's face ids; within a block, labelings are ordered
/// lexicographically (first vertex most significant), so no hashing is
/// needed to locate a cell.
class RainbowComplex {
  public:
    RainbowComplex(const FaceLattice& base, int k, std::size_t max_cells);

    int k() const { return k_; }
    const FaceLattice& base() const { return base_; }
    const CellComplex& cells() const { return cells_; }

    struct CellRef {
        int face_id = -1;
        std::vector<int> labels; // over the face's sorted vertex list
    };
    CellRef decode(int dim, std::size_t index) const;
    std::size_t encode(int face_id, std::span<const int> labels) const;

  private:
    int k_;
    FaceLattice base_;
    CellComplex cells_;
    std::vector<std::vector<int>> faces_by_dim_;
    std::vector<std::size_t> face_offset_; // per face id, within its dimension
    std::vector<std::size_t> face_block_;  // per face id, k^{|verts|}
};

/// Construct the rainbow complex; throws TooLarge beyond max_cells.
RainbowComplex build(const FaceLattice& base, int k, std::size_t max_cells = 2'000'000);

/// Euler characteristic by alternating count over the base faces alone:
/// sum over F of (-1)^{dim F} k^{|verts F|}. Exact, no cell enumeration.
BigInt euler_direct(const FaceLattice& base, int k);

/// The closed-form f-vector expansion for a simplicial base:
/// f_0 k - f_1 k^2 + ... + (-1)^{d-1} f_{d-1} k^d + (-1)^d k^{d+1},
/// where fvec = (f_0, ..., f_{d-1}) is the boundary f-vector.
BigInt euler_paper_formula(std::span<const long> fvec, int k);

/// GF(2) Betti numbers of the rainbow complex; degree 0 is reduced.
std::vector<long> homology_mod2(const RainbowComplex& complex);

enum class TopCellType : std::uint8_t { First = 0, TypeA = 1, TypeB = 2 };

struct ShellingReport {
    int dim = 0;
    std::size_t top_cells = 0;
    std::size_t first_cells = 0;
    std::size_t type_a = 0;
    std::size_t type_b = 0;
    std::size_t sphere_count = 0; // == type_b
    bool ok = false;
    std::vector<TopCellType> classifications; // by lexicographic rank
    std::vector<std::string> failures;        // empty when ok
};

/// Classify every top cell of the lexicographic ordering as first / (a) /
/// (b), verify each attachment set two ways (directly from the labeling and
/// as boundary-minus-open-star), and certify type-(a) attachments connected
/// and GF(2)-acyclic. `parallel` toggles the OpenMP path; results are
/// identical either way.
ShellingReport lex_shelling_check(const FaceLattice& base, int k, bool parallel = true,
                                  std::size_t max_top_cells = 1'000'000);

struct SphereCrossCheck {
    std::size_t sphere_count = 0;
    long top_betti = 0;
    long euler_prediction = 0; // (-1)^d (chi - 1)
    bool lower_betti_vanish = false;
    bool ok = false;
    std::vector<long> betti;
};

/// Assert sphere count == top GF(2) Betti number == (-1)^d (chi - 1) and
/// that lower reduced Betti numbers vanish. Throws Mismatch on failure.
SphereCrossCheck sphere_count_crosscheck(const FaceLattice& base, int k,
                                         std::size_t max_cells = 2'000'000);

struct ActionReport {
    int p = 0;
    std::size_t cell_count = 0;
    std::size_t orbit_count = 0;
    bool free_action = false;
    bool facets_preserved = false;
    bool ok = false;
};

/// Verify the cyclic relabeling action (every label +1 mod p) maps cells to
/// cells, preserves the facet relation and fixes no cell. Requires k == p
/// prime. Throws NotPrime / FixedCellFound.
ActionReport zp_action_check(const RainbowComplex& complex, int p);

struct ConnectivityReport {
    std::vector<int> m;
    int expected_dim = 0; // |m|
    bool pure = false;
    std::vector<long> betti; // degree 0 reduced
    bool vanishing_ok = false;
    long top_betti = 0;
    bool ok = false;
};

/// Build the rainbow complex over the product of simplices given by m and
/// check the connectivity consequences: purity of dimension |m| and
/// vanishing reduced GF(2) Betti numbers below |m|.
ConnectivityReport connectivity_report(std::span<const int> m, int k,
                                       std::size_t max_cells = 2'000'000);

} // namespace cubesplit

#endif
