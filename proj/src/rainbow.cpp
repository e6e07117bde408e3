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
#include "cubesplit/rainbow.hpp"

#include <algorithm>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cubesplit {

namespace {

BigInt pow_big(int base, std::size_t exp) {
    BigInt r = 1;
    for (std::size_t i = 0; i < exp; ++i) r *= base;
    return r;
}

bool is_prime(int p) {
    if (p < 2) return false;
    for (int q = 2; q * q <= p; ++q)
        if (p % q == 0) return false;
    return true;
}

/// Subcomplex of the proper faces of Q selected by `include`, rebuilt as a
/// standalone graded complex.
CellComplex face_subcomplex(const FaceLattice& q, const std::vector<char>& include) {
    int max_dim = -1;
    for (const auto& f : q.faces())
        if (f.id != q.top() && include[f.id] && f.dim > max_dim) max_dim = f.dim;
    CellComplex sub;
    if (max_dim < 0) return sub;
    sub.facets.resize(max_dim + 1);

    std::vector<std::int64_t> local(q.size(), -1);
    for (const auto& f : q.faces()) {
        if (f.id == q.top() || !include[f.id]) continue;
        local[f.id] = static_cast<std::int64_t>(sub.facets[f.dim].size());
        std::vector<std::int64_t> facets;
        facets.reserve(f.facets.size());
        for (int g : f.facets) {
            // downward closure: subfaces of an included face are included
            facets.push_back(local[g]);
        }
        sub.facets[f.dim].push_back(std::move(facets));
    }
    return sub;
}

} // namespace

RainbowComplex::RainbowComplex(const FaceLattice& base, int k, std::size_t max_cells)
    : k_(k), base_(base) {
    if (k < 1) throw InvalidParameter("color count must be positive");

    BigInt total = 0;
    for (const auto& f : base_.faces()) total += pow_big(k, f.vertices.size());
    if (total > max_cells) {
        std::ostringstream os;
        os << "rainbow complex would have " << total << " cells (limit " << max_cells << ")";
        throw TooLarge(os.str());
    }

    const int d = base_.dim();
    faces_by_dim_.assign(d + 1, {});
    for (const auto& f : base_.faces()) faces_by_dim_[f.dim].push_back(f.id);

    face_offset_.assign(base_.size(), 0);
    face_block_.assign(base_.size(), 0);
    std::vector<std::size_t> counts(d + 1, 0);
    for (int dim = 0; dim <= d; ++dim) {
        for (int fid : faces_by_dim_[dim]) {
            std::size_t block = 1;
            for (std::size_t i = 0; i < base_.face(fid).vertices.size(); ++i) block *= k;
            face_offset_[fid] = counts[dim];
            face_block_[fid] = block;
            counts[dim] += block;
        }
    }

    cells_.facets.resize(d + 1);
    for (int dim = 0; dim <= d; ++dim) cells_.facets[dim].resize(counts[dim]);

    std::vector<int> labels, sub_labels;
    for (int dim = 1; dim <= d; ++dim) {
        for (int fid : faces_by_dim_[dim]) {
            const Face& face = base_.face(fid);
            const auto& verts = face.vertices;
            // positions of each facet's vertices inside this face's list
            std::vector<std::vector<int>> proj(face.facets.size());
            for (std::size_t gi = 0; gi < face.facets.size(); ++gi) {
                const auto& gverts = base_.face(face.facets[gi]).vertices;
                proj[gi].reserve(gverts.size());
                for (int v : gverts) {
                    const auto it = std::lower_bound(verts.begin(), verts.end(), v);
                    proj[gi].push_back(static_cast<int>(it - verts.begin()));
                }
            }
            labels.assign(verts.size(), 1);
            for (std::size_t code = 0; code < face_block_[fid]; ++code) {
                auto& facet_cells = cells_.facets[dim][face_offset_[fid] + code];
                facet_cells.reserve(face.facets.size());
                for (std::size_t gi = 0; gi < face.facets.size(); ++gi) {
                    const int gid = face.facets[gi];
                    std::size_t gcode = 0;
                    for (int pos : proj[gi]) gcode = gcode * k + (labels[pos] - 1);
                    facet_cells.push_back(
                        static_cast<std::int64_t>(face_offset_[gid] + gcode));
                }
                // odometer over labels, last vertex least significant
                for (int pos = static_cast<int>(labels.size()) - 1; pos >= 0; --pos) {
                    if (++labels[pos] <= k) break;
                    labels[pos] = 1;
                }
            }
        }
    }
}

RainbowComplex::CellRef RainbowComplex::decode(int dim, std::size_t index) const {
    for (int fid : faces_by_dim_[dim]) {
        if (index < face_offset_[fid] || index >= face_offset_[fid] + face_block_[fid]) continue;
        CellRef ref;
        ref.face_id = fid;
        std::size_t code = index - face_offset_[fid];
        const std::size_t nv = base_.face(fid).vertices.size();
        ref.labels.assign(nv, 1);
        for (int pos = static_cast<int>(nv) - 1; pos >= 0; --pos) {
            ref.labels[pos] = static_cast<int>(code % k_) + 1;
            code /= k_;
        }
        return ref;
    }
    throw IndexOutOfRange("cell index out of range");
}

std::size_t RainbowComplex::encode(int face_id, std::span<const int> labels) const {
    std::size_t code = 0;
    for (int c : labels) {
        if (c < 1 || c > k_) throw InvalidParameter("label outside 1..k");
        code = code * k_ + (c - 1);
    }
    return face_offset_[face_id] + code;
}

RainbowComplex build(const FaceLattice& base, int k, std::size_t max_cells) {
    return RainbowComplex(base, k, max_cells);
}

BigInt euler_direct(const FaceLattice& base, int k) {
    BigInt chi = 0;
    for (const auto& f : base.faces()) {
        const BigInt term = pow_big(k, f.vertices.size());
        chi += (f.dim % 2 == 0) ? term : -term;
    }
    return chi;
}

BigInt euler_paper_formula(std::span<const long> fvec, int k) {
    const int d = static_cast<int>(fvec.size());
    BigInt chi = 0;
    for (int i = 0; i < d; ++i) {
        const BigInt term = fvec[i] * pow_big(k, i + 1);
        chi += (i % 2 == 0) ? term : -term;
    }
    const BigInt top = pow_big(k, d + 1);
    chi += (d % 2 == 0) ? top : -top;
    return chi;
}

std::vector<long> homology_mod2(const RainbowComplex& complex) {
    return betti_mod2(complex.cells());
}

ShellingReport lex_shelling_check(const FaceLattice& base, int k, bool parallel,
                                  std::size_t max_top_cells) {
    if (k < 1) throw InvalidParameter("color count must be positive");
    const int nv = base.num_vertices();
    if (nv > 62) throw TooLarge("too many vertices for the shelling checker");
    const BigInt tops_big = pow_big(k, nv);
    if (tops_big > max_top_cells) {
        std::ostringstream os;
        os << "k^" << nv << " = " << tops_big << " top cells exceed limit " << max_top_cells;
        throw TooLarge(os.str());
    }
    const std::size_t tops = static_cast<std::size_t>(tops_big);
    const std::size_t nfaces = base.size();
    const int top_id = base.top();

    // per-face vertex bitmasks
    std::vector<std::uint64_t> vmask(nfaces, 0);
    for (const auto& f : base.faces())
        for (int v : f.vertices) vmask[f.id] |= 1ull << v;

    // Attachment data per candidate minimal face F: the faces of
    // boundary(Q) \ open-Star(F), plus connectivity/acyclicity of that
    // subcomplex. Computed once per face, reused across top cells.
    struct FaceCache {
        std::vector<char> in_set;  // per face id; excludes the top face
        bool full_boundary = false;
        bool connected = false;
        bool acyclic = false;
    };
    std::vector<FaceCache> cache(nfaces);
    for (std::size_t fs = 0; fs < nfaces; ++fs) {
        FaceCache& c = cache[fs];
        c.in_set.assign(nfaces, 0);
        bool full = true;
        for (const auto& g : base.faces()) {
            if (g.id == top_id) continue;
            const bool contains_fs = (vmask[fs] & ~vmask[g.id]) == 0;
            c.in_set[g.id] = contains_fs ? 0 : 1;
            if (contains_fs) full = false;
        }
        c.full_boundary = full;
        const CellComplex sub = face_subcomplex(base, c.in_set);
        if (sub.total_cells() == 0) {
            c.connected = false;
            c.acyclic = false;
        } else {
            c.connected = component_count(sub) == 1;
            const auto betti = betti_mod2(sub);
            c.acyclic = std::all_of(betti.begin(), betti.end(), [](long b) { return b == 0; });
        }
    }

    ShellingReport report;
    report.dim = base.dim();
    report.top_cells = tops;
    report.classifications.assign(tops, TopCellType::First);

    std::vector<std::size_t> counts(3, 0);
    std::vector<std::pair<std::size_t, std::string>> failures;

    const auto& faces = base.faces();
    auto check_one = [&](std::size_t rank, std::vector<std::pair<std::size_t, std::string>>& fail_out)
        -> TopCellType {
        // decode labeling, first vertex most significant
        std::uint64_t s_mask = 0;
        std::size_t code = rank;
        for (int pos = nv - 1; pos >= 0; --pos) {
            const int label = static_cast<int>(code % k) + 1;
            code /= k;
            if (label != 1) s_mask |= 1ull << pos;
        }
        if (s_mask == 0) {
            if (rank != 0)
                fail_out.emplace_back(rank, "constant-1 labeling is not the lexicographic first");
            return TopCellType::First;
        }

        // minimal face containing S: first face (by dimension) covering s_mask
        int fs = -1;
        for (const auto& f : faces) {
            if ((s_mask & ~vmask[f.id]) == 0) {
                fs = f.id;
                break;
            }
        }
        if (fs < 0) {
            fail_out.emplace_back(rank, "no face contains the non-1 label set");
            return TopCellType::First;
        }
        const FaceCache& c = cache[fs];

        // attachment set straight from the labeling: proper faces omitting
        // some vertex of S
        bool equal = true;
        for (const auto& g : faces) {
            if (g.id == top_id) continue;
            const bool direct = (s_mask & ~vmask[g.id]) != 0;
            if (direct != (c.in_set[g.id] != 0)) {
                equal = false;
                break;
            }
        }
        if (!equal) {
            fail_out.emplace_back(rank,
                                  "attachment set differs from boundary minus open star");
        }

        if (fs == top_id) {
            if (!c.full_boundary)
                fail_out.emplace_back(rank, "type (b) attachment is not the full boundary");
            return TopCellType::TypeB;
        }
        if (c.full_boundary)
            fail_out.emplace_back(rank, "type (a) attachment covers the full boundary");
        if (!c.connected)
            fail_out.emplace_back(rank, "type (a) attachment set is disconnected");
        if (!c.acyclic)
            fail_out.emplace_back(rank, "type (a) attachment set has nonzero GF(2) homology");
        return TopCellType::TypeA;
    };

    if (parallel) {
#ifdef _OPENMP
#pragma omp parallel
        {
            std::vector<std::pair<std::size_t, std::string>> local_failures;
            std::vector<std::size_t> local_counts(3, 0);
#pragma omp for schedule(static)
            for (std::int64_t rank = 0; rank < static_cast<std::int64_t>(tops); ++rank) {
                const TopCellType t = check_one(static_cast<std::size_t>(rank), local_failures);
                report.classifications[rank] = t;
                local_counts[static_cast<int>(t)]++;
            }
#pragma omp critical
            {
                for (int i = 0; i < 3; ++i) counts[i] += local_counts[i];
                failures.insert(failures.end(), local_failures.begin(), local_failures.end());
            }
        }
#else
        parallel = false;
#endif
    }
    if (!parallel) {
        for (std::size_t rank = 0; rank < tops; ++rank) {
            const TopCellType t = check_one(rank, failures);
            report.classifications[rank] = t;
            counts[static_cast<int>(t)]++;
        }
    }

    std::sort(failures.begin(), failures.end());
    for (const auto& [rank, what] : failures) {
        std::ostringstream os;
        os << "top cell " << rank << ": " << what;
        report.failures.push_back(os.str());
    }
    report.first_cells = counts[0];
    report.type_a = counts[1];
    report.type_b = counts[2];
    report.sphere_count = report.type_b;
    report.ok = report.failures.empty() && report.first_cells == 1;
    if (report.first_cells != 1)
        report.failures.push_back("expected exactly one first cell");
    return report;
}

SphereCrossCheck sphere_count_crosscheck(const FaceLattice& base, int k,
                                         std::size_t max_cells) {
    SphereCrossCheck result;
    const ShellingReport shelling = lex_shelling_check(base, k, true, max_cells);
    const RainbowComplex complex = build(base, k, max_cells);
    result.betti = homology_mod2(complex);
    result.sphere_count = shelling.sphere_count;

    const int d = base.dim();
    result.top_betti = result.betti[d];
    const BigInt chi = euler_direct(base, k);
    BigInt prediction = chi - 1;
    if (d % 2 != 0) prediction = -prediction;
    result.euler_prediction = static_cast<long>(prediction);

    result.lower_betti_vanish = true;
    for (int i = 0; i < d; ++i)
        if (result.betti[i] != 0) result.lower_betti_vanish = false;

    result.ok = shelling.ok && result.lower_betti_vanish &&
                static_cast<long>(result.sphere_count) == result.top_betti &&
                result.top_betti == result.euler_prediction;
    if (!result.ok) {
        std::ostringstream os;
        os << "sphere count cross-check failed: shelling=" << result.sphere_count
           << " top betti=" << result.top_betti << " euler=" << result.euler_prediction;
        throw Mismatch(os.str());
    }
    return result;
}

ActionReport zp_action_check(const RainbowComplex& complex, int p) {
    if (!is_prime(p)) throw NotPrime("p must be prime");
    if (complex.k() != p) throw NotPrime("the cyclic action needs k == p");

    ActionReport report;
    report.p = p;
    report.cell_count = complex.cells().total_cells();
    report.facets_preserved = true;

    const auto& cells = complex.cells();
    const int d = cells.dim();
    std::size_t orbits = 0;
    for (int dim = 0; dim <= d; ++dim) {
        const std::size_t n = cells.facets[dim].size();
        std::vector<std::size_t> image(n);
        for (std::size_t i = 0; i < n; ++i) {
            auto ref = complex.decode(dim, i);
            for (int& c : ref.labels) c = (c % p) + 1;
            image[i] = complex.encode(ref.face_id, ref.labels);
            if (image[i] == i) throw FixedCellFound("cell fixed by the cyclic action");
        }
        // the action must commute with taking facets
        if (dim > 0) {
            const std::size_t m = cells.facets[dim - 1].size();
            std::vector<std::size_t> lower_image(m);
            for (std::size_t i = 0; i < m; ++i) {
                auto ref = complex.decode(dim - 1, i);
                for (int& c : ref.labels) c = (c % p) + 1;
                lower_image[i] = complex.encode(ref.face_id, ref.labels);
            }
            for (std::size_t i = 0; i < n; ++i) {
                std::vector<std::int64_t> a;
                for (std::int64_t f : cells.facets[dim][i])
                    a.push_back(static_cast<std::int64_t>(lower_image[f]));
                std::vector<std::int64_t> b = cells.facets[dim][image[i]];
                std::sort(a.begin(), a.end());
                std::sort(b.begin(), b.end());
                if (a != b) report.facets_preserved = false;
            }
        }
        // orbit sizes must all be exactly p
        std::vector<char> seen(n, 0);
        for (std::size_t i = 0; i < n; ++i) {
            if (seen[i]) continue;
            std::size_t len = 0;
            std::size_t cur = i;
            while (!seen[cur]) {
                seen[cur] = 1;
                cur = image[cur];
                ++len;
            }
            if (len % p != 0) throw FixedCellFound("orbit size not divisible by p");
            orbits += len / p;
        }
    }
    report.orbit_count = orbits;
    report.free_action = true;
    report.ok = report.facets_preserved && report.cell_count == orbits * p;
    return report;
}

ConnectivityReport connectivity_report(std::span<const int> m, int k, std::size_t max_cells) {
    ConnectivityReport report;
    report.m.assign(m.begin(), m.end());
    int total = 0;
    for (int mi : m) {
        if (mi < 0) throw InvalidParameter("simplex dimensions must be nonnegative");
        total += mi;
    }
    report.expected_dim = total;

    FaceLattice base = m.empty() ? simplex(0) : simplex(m[0]);
    for (std::size_t i = 1; i < m.size(); ++i) base = product(base, simplex(m[i]));

    const RainbowComplex complex = build(base, k, max_cells);
    report.pure = complex.cells().pure() && complex.cells().dim() == total;
    report.betti = homology_mod2(complex);
    report.vanishing_ok = true;
    for (int i = 0; i < total; ++i)
        if (report.betti[i] != 0) report.vanishing_ok = false;
    report.top_betti = report.betti[total];
    report.ok = report.pure && report.vanishing_ok;
    return report;
}

} // namespace cubesplit
