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
#include "cubesplit/polytope.hpp"

#include <algorithm>
#include <sstream>

namespace cubesplit {

namespace {

bool subset_of(const std::vector<int>& small, const std::vector<bool>& mask) {
    for (int v : small)
        if (!mask[v]) return false;
    return true;
}

} // namespace

FaceLattice::FaceLattice(int num_vertices,
                         const std::vector<std::vector<std::vector<int>>>& faces_by_dim)
    : num_vertices_(num_vertices) {
    if (faces_by_dim.empty() || num_vertices < 1)
        throw InvalidParameter("face lattice needs at least one vertex");
    dim_ = static_cast<int>(faces_by_dim.size()) - 1;

    for (int d = 0; d <= dim_; ++d) {
        for (const auto& verts : faces_by_dim[d]) {
            Face f;
            f.id = static_cast<int>(faces_.size());
            f.dim = d;
            f.vertices = verts;
            std::sort(f.vertices.begin(), f.vertices.end());
            faces_.push_back(std::move(f));
        }
    }

    vertex_mask_.resize(faces_.size());
    for (const auto& f : faces_) {
        std::vector<bool> mask(num_vertices_, false);
        for (int v : f.vertices) {
            if (v < 0 || v >= num_vertices_) throw InvalidParameter("vertex id out of range");
            mask[v] = true;
        }
        vertex_mask_[f.id] = std::move(mask);
    }

    // Facets by vertex-set inclusion against the previous dimension.
    std::vector<std::vector<int>> ids_by_dim(dim_ + 1);
    for (const auto& f : faces_) ids_by_dim[f.dim].push_back(f.id);
    for (auto& f : faces_) {
        if (f.dim == 0) continue;
        for (int g : ids_by_dim[f.dim - 1])
            if (subset_of(faces_[g].vertices, vertex_mask_[f.id])) f.facets.push_back(g);
    }

    fvec_.assign(dim_ + 1, 0);
    for (const auto& f : faces_) fvec_[f.dim]++;
    if (fvec_[dim_] != 1) throw InvalidParameter("expected exactly one top face");
    top_ = ids_by_dim[dim_].front();
    if (static_cast<int>(faces_[top_].vertices.size()) != num_vertices_)
        throw InvalidParameter("top face must contain all vertices");
}

bool FaceLattice::is_subface(int inner, int outer) const {
    return subset_of(faces_[inner].vertices, vertex_mask_[outer]);
}

int FaceLattice::minimal_face_containing(std::span<const int> vertex_ids) const {
    // Faces are sorted by dimension, so the first hit is minimal; it is
    // unique because faces are closed under intersection.
    for (const auto& f : faces_) {
        bool ok = true;
        for (int v : vertex_ids) {
            if (v < 0 || v >= num_vertices_ || !vertex_mask_[f.id][v]) {
                ok = false;
                break;
            }
        }
        if (ok) return f.id;
    }
    return -1;
}

FaceLattice simplex(int nu) {
    if (nu < 0 || nu > 20) throw InvalidParameter("simplex dimension must be in 0..20");
    const int nv = nu + 1;
    std::vector<std::vector<std::vector<int>>> faces(nu + 1);
    for (unsigned mask = 1; mask < (1u << nv); ++mask) {
        std::vector<int> verts;
        for (int v = 0; v < nv; ++v)
            if (mask & (1u << v)) verts.push_back(v);
        faces[verts.size() - 1].push_back(std::move(verts));
    }
    return FaceLattice(nv, faces);
}

FaceLattice cube(int d) {
    if (d < 1 || d > 16) throw InvalidParameter("cube dimension must be in 1..16");
    const int nv = 1 << d;
    std::vector<std::vector<std::vector<int>>> faces(d + 1);
    // A face fixes the coordinates in `fixed` to the bits of `vals`.
    for (unsigned fixed = 0; fixed < (1u << d); ++fixed) {
        const int fdim = d - __builtin_popcount(fixed);
        for (unsigned vals = 0;; vals = (vals - fixed) & fixed) {
            std::vector<int> verts;
            for (int v = 0; v < nv; ++v)
                if ((static_cast<unsigned>(v) & fixed) == (vals & fixed)) verts.push_back(v);
            faces[fdim].push_back(std::move(verts));
            if (vals == fixed) break;
        }
    }
    return FaceLattice(nv, faces);
}

FaceLattice crosspolytope(int d) {
    if (d < 1 || d > 16) throw InvalidParameter("crosspolytope dimension must be in 1..16");
    // Vertices 2i and 2i+1 are the +/- pair on axis i; proper faces pick a
    // sign on a nonempty subset of axes.
    const int nv = 2 * d;
    std::vector<std::vector<std::vector<int>>> faces(d + 1);
    for (unsigned axes = 1; axes < (1u << d); ++axes) {
        const int cnt = __builtin_popcount(axes);
        for (unsigned signs = 0;; signs = (signs - axes) & axes) {
            std::vector<int> verts;
            for (int i = 0; i < d; ++i)
                if (axes & (1u << i)) verts.push_back(2 * i + ((signs >> i) & 1u));
            faces[cnt - 1].push_back(std::move(verts));
            if (signs == axes) break;
        }
    }
    std::vector<int> all(nv);
    for (int v = 0; v < nv; ++v) all[v] = v;
    faces[d].push_back(std::move(all));
    return FaceLattice(nv, faces);
}

FaceLattice polygon(int g) {
    if (g < 3) throw InvalidParameter("polygon needs at least 3 vertices");
    std::vector<std::vector<std::vector<int>>> faces(3);
    std::vector<int> all(g);
    for (int v = 0; v < g; ++v) {
        faces[0].push_back({v});
        faces[1].push_back({v, (v + 1) % g});
        all[v] = v;
    }
    faces[2].push_back(std::move(all));
    return FaceLattice(g, faces);
}

FaceLattice product(const FaceLattice& p, const FaceLattice& q) {
    // Vertex (a,b) -> a * |verts(q)| + b, lexicographic in the pair.
    const int nvq = q.num_vertices();
    const int nv = p.num_vertices() * nvq;
    std::vector<std::vector<std::vector<int>>> faces(p.dim() + q.dim() + 1);
    for (const auto& fp : p.faces()) {
        for (const auto& fq : q.faces()) {
            std::vector<int> verts;
            verts.reserve(fp.vertices.size() * fq.vertices.size());
            for (int a : fp.vertices)
                for (int b : fq.vertices) verts.push_back(a * nvq + b);
            faces[fp.dim + fq.dim].push_back(std::move(verts));
        }
    }
    return FaceLattice(nv, faces);
}

LatticeReport validate(const FaceLattice& lattice) {
    LatticeReport report;
    const auto& faces = lattice.faces();
    const int d = lattice.dim();

    // one top face of full dimension containing everything
    int tops = 0;
    for (const auto& f : faces)
        if (f.dim == d) ++tops;
    if (tops != 1) report.violations.push_back("expected exactly one top face");
    if (static_cast<int>(lattice.face(lattice.top()).vertices.size()) != lattice.num_vertices())
        report.violations.push_back("top face does not contain all vertices");

    // unique maximal common subface for every pair
    const std::size_t nf = faces.size();
    for (std::size_t i = 0; i < nf; ++i) {
        for (std::size_t j = i + 1; j < nf; ++j) {
            std::vector<int> common;
            for (std::size_t h = 0; h < nf; ++h)
                if (lattice.is_subface(static_cast<int>(h), static_cast<int>(i)) &&
                    lattice.is_subface(static_cast<int>(h), static_cast<int>(j)))
                    common.push_back(static_cast<int>(h));
            int maximal = 0;
            for (int h : common) {
                bool is_max = true;
                for (int g : common)
                    if (g != h && lattice.is_subface(h, g)) is_max = false;
                if (is_max) ++maximal;
            }
            if (maximal > 1) {
                std::ostringstream os;
                os << "faces " << i << " and " << j << " have " << maximal
                   << " maximal common subfaces";
                report.violations.push_back(os.str());
            }
        }
    }

    // diamond property on every interval of length 2
    for (std::size_t low = 0; low < nf; ++low) {
        for (std::size_t high = 0; high < nf; ++high) {
            if (faces[high].dim != faces[low].dim + 2) continue;
            if (!lattice.is_subface(static_cast<int>(low), static_cast<int>(high))) continue;
            int middles = 0;
            for (std::size_t mid = 0; mid < nf; ++mid) {
                if (faces[mid].dim != faces[low].dim + 1) continue;
                if (lattice.is_subface(static_cast<int>(low), static_cast<int>(mid)) &&
                    lattice.is_subface(static_cast<int>(mid), static_cast<int>(high)))
                    ++middles;
            }
            if (middles != 2) {
                std::ostringstream os;
                os << "interval [" << low << "," << high << "] contains " << middles
                   << " faces instead of 2";
                report.violations.push_back(os.str());
            }
        }
    }
    // edges have exactly two endpoints (the bottom diamond with the empty face)
    for (const auto& f : faces)
        if (f.dim == 1 && f.vertices.size() != 2)
            report.violations.push_back("edge without exactly 2 vertices");

    // boundary Euler relation
    long euler = 0;
    const auto& fvec = lattice.f_vector();
    for (int i = 0; i < d; ++i) euler += (i % 2 == 0) ? fvec[i] : -fvec[i];
    const long expected = 1 - ((d % 2 == 0) ? 1 : -1);
    if (d > 0 && euler != expected) {
        std::ostringstream os;
        os << "boundary Euler relation violated: " << euler << " != " << expected;
        report.violations.push_back(os.str());
    }
    return report;
}

FaceLattice parse_polytope_spec(const std::string& spec) {
    if (spec.rfind("prod:", 0) == 0) {
        std::string rest = spec.substr(5);
        std::vector<FaceLattice> factors;
        std::size_t pos = 0;
        while (pos < rest.size()) {
            // factors are name:param pairs separated by commas
            std::size_t colon = rest.find(':', pos);
            if (colon == std::string::npos)
                throw InvalidParameter("bad product spec: " + spec);
            std::size_t comma = rest.find(',', colon);
            std::string token = rest.substr(pos, (comma == std::string::npos ? rest.size() : comma) - pos);
            factors.push_back(parse_polytope_spec(token));
            pos = (comma == std::string::npos) ? rest.size() : comma + 1;
        }
        if (factors.empty()) throw InvalidParameter("empty product spec");
        FaceLattice result = factors.front();
        for (std::size_t i = 1; i < factors.size(); ++i) result = product(result, factors[i]);
        return result;
    }
    const std::size_t colon = spec.find(':');
    if (colon == std::string::npos)
        throw InvalidParameter("polytope spec must look like name:param");
    const std::string name = spec.substr(0, colon);
    int param = 0;
    try {
        param = std::stoi(spec.substr(colon + 1));
    } catch (const std::exception&) {
        throw InvalidParameter("bad polytope parameter in: " + spec);
    }
    if (name == "simplex") return simplex(param);
    if (name == "cube") return cube(param);
    if (name == "xpoly") return crosspolytope(param);
    if (name == "polygon") return polygon(param);
    throw InvalidParameter("unknown polytope family: " + name);
}

} // namespace cubesplit
