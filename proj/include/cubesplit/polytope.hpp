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
#ifndef CUBESPLIT_POLYTOPE_HPP
#define CUBESPLIT_POLYTOPE_HPP

#include <span>
#include <string>
#include <vector>

#include "cubesplit/errors.hpp"

namespace cubesplit {

struct Face {
    int id = -1;
    int dim = 0;
    std::vector<int> vertices; // sorted vertex ids
    std::vector<int> facets;   // ids of codimension-1 subfaces
};

/// A convex polytope given purely combinatorially: its faces (as vertex
/// sets), the facet relation, and a designated top face. The vertex ordering
/// is fixed at construction; the lexicographic shelling of the rainbow
/// complex is tied to it. Immutable after construction.
class FaceLattice {
  public:
    /// Build from vertex sets grouped by dimension (dimension 0 first; the
    /// last group must hold exactly the top face). Facet relations are
    /// derived from vertex-set inclusion.
    FaceLattice(int num_vertices, const std::vector<std::vector<std::vector<int>>>& faces_by_dim);

    int dim() const { return dim_; }
    int num_vertices() const { return num_vertices_; }
    const std::vector<Face>& faces() const { return faces_; }
    const Face& face(int id) const { return faces_[id]; }
    int top() const { return top_; }
    std::size_t size() const { return faces_.size(); }

    /// (f_0, ..., f_d); the top face is counted, so f_d = 1.
    const std::vector<long>& f_vector() const { return fvec_; }

    /// True if verts(inner) is a subset of verts(outer).
    bool is_subface(int inner, int outer) const;

    /// Minimal face whose vertex set contains all given vertices; -1 if none.
    int minimal_face_containing(std::span<const int> vertex_ids) const;

  private:
    int dim_ = 0;
    int num_vertices_ = 0;
    int top_ = -1;
    std::vector<Face> faces_; // sorted by dimension, ids equal positions
    std::vector<long> fvec_;
    std::vector<std::vector<bool>> vertex_mask_; // per face, bitmap over vertices
};

FaceLattice simplex(int nu);
FaceLattice cube(int d);
FaceLattice crosspolytope(int d);
FaceLattice polygon(int g);
FaceLattice product(const FaceLattice& p, const FaceLattice& q);

struct LatticeReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

/// Check the face-lattice invariants: unique top face, unique maximal common
/// subfaces, the diamond property, and the boundary Euler relation.
LatticeReport validate(const FaceLattice& lattice);

/// Parse CLI polytope specs: "simplex:2", "cube:3", "xpoly:2", "polygon:5",
/// "prod:simplex:2,simplex:1".
FaceLattice parse_polytope_spec(const std::string& spec);

} // namespace cubesplit

#endif
