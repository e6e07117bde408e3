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
#ifndef CUBESPLIT_DIVISIONS_HPP
#define CUBESPLIT_DIVISIONS_HPP

#include <span>
#include <vector>

#include "cubesplit/measures.hpp"

namespace cubesplit {

/// Per-axis sorted cut positions in [0,1]. Repeats are allowed; the boxes of
/// a repeated cut are degenerate and carry zero mass.
struct CutConfiguration {
    std::vector<std::vector<double>> cuts; // cuts[axis], sorted ascending

    CutConfiguration() = default;
    explicit CutConfiguration(std::vector<std::vector<double>> cuts_);

    int dim() const { return static_cast<int>(cuts.size()); }
    /// Number of cuts per axis (m_1, ..., m_d).
    std::vector<int> counts() const;
    /// Number of elementary boxes, prod(m_i + 1).
    std::size_t box_count() const;
};

/// Color labels 1..k for the elementary boxes of a cut configuration,
/// flattened row-major with axis 1 most significant.
struct Labeling {
    int k = 0;
    std::vector<int> shape;  // (m_i + 1) per axis
    std::vector<int> labels; // values in 1..k

    Labeling() = default;
    Labeling(int k_, std::vector<int> shape_, std::vector<int> labels_);
};

/// A cut configuration together with a labeling of its elementary boxes.
struct Division {
    CutConfiguration cuts;
    Labeling labeling;

    Division() = default;
    Division(CutConfiguration cuts_, Labeling labeling_);

    int dim() const { return cuts.dim(); }
    int k() const { return labeling.k; }
};

/// The n x k matrix M[j][c] = mu_j(A_c) - 1/k. Zero iff the division is fair.
struct ResidualMatrix {
    std::size_t n = 0;
    std::size_t k = 0;
    std::vector<double> entries; // row-major

    double& at(std::size_t j, std::size_t c) { return entries[j * k + c]; }
    double at(std::size_t j, std::size_t c) const { return entries[j * k + c]; }
};

/// The closed box with per-axis interval [x_{j_a}, x_{j_a+1}], where x_0 = 0
/// and x_{m_a+1} = 1.
Box elementary_box(const CutConfiguration& cuts, std::span<const int> index);

/// Evaluate the residual matrix of a division against a measure set.
ResidualMatrix evaluate(const Division& division, const MeasureSet& measures);

/// Max over entries of |M[j][c]|; 0 iff the division is exactly fair.
double residual_norm(const ResidualMatrix& m);

struct VerifyReport {
    std::vector<int> cut_counts;
    std::vector<int> expected_counts;
    bool counts_ok = false;
    double residual = 0.0;
    double tolerance = 0.0;
    bool residual_ok = false;
    bool pass = false;
    /// masses[j][c] = mu_j(A_c); rows sum to the total mass of mu_j.
    std::vector<std::vector<double>> masses;
};

/// Check a division against measures: exact cut counts plus residual at tol.
/// Failures are reported, never thrown.
VerifyReport verify(const Division& division, const MeasureSet& measures,
                    double tol, std::span<const int> expected_counts);

/// Hobby-Rice sign sequence for k=2: color 1 -> +1, color 2 -> -1.
std::vector<int> sign_representation(const Division& division);

} // namespace cubesplit

#endif
