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
#include <numeric>
#include <set>

#include "cubesplit/polytope.hpp"

using namespace cubesplit;

namespace {

/// Brute-force lattice isomorphism for tiny polytopes: try every vertex
/// bijection and compare face systems.
bool isomorphic(const FaceLattice& p, const FaceLattice& q) {
    if (p.num_vertices() != q.num_vertices()) return false;
    if (p.f_vector() != q.f_vector()) return false;
    std::vector<int> perm(p.num_vertices());
    std::iota(perm.begin(), perm.end(), 0);
    std::set<std::vector<int>> q_faces;
    for (const auto& f : q.faces()) q_faces.insert(f.vertices);
    do {
        bool match = true;
        for (const auto& f : p.faces()) {
            std::vector<int> image;
            image.reserve(f.vertices.size());
            for (int v : f.vertices) image.push_back(perm[v]);
            std::sort(image.begin(), image.end());
            if (!q_faces.count(image)) {
                match = false;
                break;
            }
        }
        if (match) return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

} // namespace

TEST_CASE("constructor f-vectors") {
    CHECK(cube(3).f_vector() == std::vector<long>{8, 12, 6, 1});
    CHECK(simplex(2).f_vector() == std::vector<long>{3, 3, 1});
    CHECK(simplex(0).f_vector() == std::vector<long>{1});
    CHECK(polygon(5).f_vector() == std::vector<long>{5, 5, 1});
    CHECK(crosspolytope(3).f_vector() == std::vector<long>{6, 12, 8, 1});
    CHECK(product(simplex(1), simplex(1)).f_vector() == std::vector<long>{4, 4, 1});
    CHECK(product(simplex(2), simplex(1)).f_vector() == std::vector<long>{6, 9, 5, 1});
}

TEST_CASE("crosspolytope(2) is the square") {
    CHECK(isomorphic(crosspolytope(2), polygon(4)));
    CHECK(isomorphic(cube(2), polygon(4)));
}

TEST_CASE("product with a point is the identity") {
    const FaceLattice prism = product(simplex(2), simplex(0));
    CHECK(isomorphic(prism, simplex(2)));
}

TEST_CASE("all constructors validate") {
    for (const auto& lattice :
         {simplex(0), simplex(1), simplex(3), cube(1), cube(2), cube(3), crosspolytope(2),
          crosspolytope(3), polygon(3), polygon(7), product(simplex(2), simplex(1)),
          product(cube(2), simplex(1)), product(simplex(1), product(simplex(1), simplex(1)))}) {
        const LatticeReport report = validate(lattice);
        const std::string first = report.violations.empty() ? std::string() : report.violations.front();
        INFO(first);
        CHECK(report.ok());
    }
}

TEST_CASE("validate flags a missing edge") {
    // square with one edge removed
    std::vector<std::vector<std::vector<int>>> faces(3);
    faces[0] = {{0}, {1}, {2}, {3}};
    faces[1] = {{0, 1}, {1, 2}, {2, 3}}; // {3,0} deleted
    faces[2] = {{0, 1, 2, 3}};
    const FaceLattice broken(4, faces);
    const LatticeReport report = validate(broken);
    CHECK_FALSE(report.ok());
}

TEST_CASE("product f-vector is the convolution") {
    const auto convolved = [](const FaceLattice& p, const FaceLattice& q) {
        const auto fp = p.f_vector();
        const auto fq = q.f_vector();
        std::vector<long> out(fp.size() + fq.size() - 1, 0);
        for (std::size_t i = 0; i < fp.size(); ++i)
            for (std::size_t j = 0; j < fq.size(); ++j) out[i + j] += fp[i] * fq[j];
        return out;
    };
    for (const auto& [p, q] : {std::pair{simplex(2), simplex(2)}, {cube(2), simplex(1)},
                               {polygon(5), simplex(1)}, {crosspolytope(2), simplex(2)}}) {
        CHECK(product(p, q).f_vector() == convolved(p, q));
    }
}

TEST_CASE("minimal containing face") {
    const FaceLattice square = cube(2);
    // vertices of cube(2): 0=(0,0), 1=(0,1), 2=(1,0), 3=(1,1)
    const std::vector<int> pair{0, 1};
    const int edge = square.minimal_face_containing(pair);
    CHECK(square.face(edge).dim == 1);
    const std::vector<int> diagonal{0, 3};
    CHECK(square.minimal_face_containing(diagonal) == square.top());
    const std::vector<int> one{2};
    CHECK(square.face(square.minimal_face_containing(one)).dim == 0);
}

TEST_CASE("polytope spec parsing") {
    CHECK(parse_polytope_spec("simplex:2").f_vector() == simplex(2).f_vector());
    CHECK(parse_polytope_spec("cube:3").f_vector() == cube(3).f_vector());
    CHECK(parse_polytope_spec("xpoly:2").f_vector() == crosspolytope(2).f_vector());
    CHECK(parse_polytope_spec("polygon:5").f_vector() == polygon(5).f_vector());
    CHECK(parse_polytope_spec("prod:simplex:2,simplex:1").f_vector() ==
          product(simplex(2), simplex(1)).f_vector());
    CHECK_THROWS_AS(parse_polytope_spec("teapot:3"), InvalidParameter);
    CHECK_THROWS_AS(parse_polytope_spec("polygon:2"), InvalidParameter);
    CHECK_THROWS_AS(parse_polytope_spec("simplex"), InvalidParameter);
}
