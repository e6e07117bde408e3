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
#include "cubesplit/solver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>

#include "cubesplit/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cubesplit {

namespace {

int smallest_prime_factor(int k) {
    for (int p = 2; p * p <= k; ++p)
        if (k % p == 0) return p;
    return k;
}

void validate_instance(const MeasureSet& measures, int k, std::span<const int> m) {
    if (k < 2) throw InvalidParameter("need at least two colors");
    if (static_cast<int>(m.size()) != measures.dim)
        throw ShapeMismatch("cut budget dimension does not match the measures");
    long total = 0;
    for (int mi : m) {
        if (mi < 0) throw InvalidParameter("cut budgets must be nonnegative");
        total += mi;
    }
    const long need = static_cast<long>(measures.size()) * (k - 1);
    if (total != need) {
        std::ostringstream os;
        os << "cut budget " << total << " != n(k-1) = " << need;
        throw BudgetMismatch(os.str());
    }
    for (const auto& mu : measures.measures) {
        if (mu.mode() != DensityMode::Probability)
            throw InvalidParameter("solver requires probability mode measures");
        if (std::abs(mu.total_mass() - 1.0) > 1e-6)
            throw InvalidParameter("measures must be normalized to total mass 1");
    }
}

/// Box-mass tensors for a fixed measure set and cut-count shape, reused
/// across many cut configurations. Evaluates every measure's cdf on the
/// corner grid of the cuts and takes 2^d differences per box.
class MassEvaluator {
  public:
    MassEvaluator(const MeasureSet& measures, std::span<const int> m)
        : measures_(&measures), d_(measures.dim), n_(measures.size()) {
        shape_.assign(m.begin(), m.end());
        for (int& s : shape_) ++s; // boxes per axis
        boxes_ = 1;
        corner_count_ = 1;
        corner_stride_.assign(d_, 1);
        for (int a = d_ - 1; a >= 0; --a) {
            corner_stride_[a] = corner_count_;
            corner_count_ *= shape_[a] + 1;
            boxes_ *= shape_[a];
        }
        corners_.resize(corner_count_);
        positions_.resize(d_);
    }

    std::size_t boxes() const { return boxes_; }

    /// masses is n x boxes, measure-major.
    void compute(const std::vector<std::vector<double>>& cuts, std::vector<double>& masses) {
        for (int a = 0; a < d_; ++a) {
            auto& pos = positions_[a];
            pos.clear();
            pos.push_back(0.0);
            pos.insert(pos.end(), cuts[a].begin(), cuts[a].end());
            pos.push_back(1.0);
        }
        masses.resize(n_ * boxes_);
        double point[kMaxDim];
        int idx[kMaxDim];
        for (std::size_t j = 0; j < n_; ++j) {
            const GridDensity& mu = (*measures_)[j];
            std::fill(idx, idx + d_, 0);
            for (std::size_t c = 0; c < corner_count_; ++c) {
                for (int a = 0; a < d_; ++a) point[a] = positions_[a][idx[a]];
                corners_[c] = mu.cdf({point, static_cast<std::size_t>(d_)});
                for (int a = d_ - 1; a >= 0; --a) {
                    if (++idx[a] <= shape_[a]) break;
                    idx[a] = 0;
                }
            }
            double* out = masses.data() + j * boxes_;
            std::fill(idx, idx + d_, 0);
            for (std::size_t b = 0; b < boxes_; ++b) {
                std::size_t base = 0;
                for (int a = 0; a < d_; ++a) base += static_cast<std::size_t>(idx[a]) * corner_stride_[a];
                double mass = 0.0;
                for (unsigned mask = 0; mask < (1u << d_); ++mask) {
                    std::size_t corner = base;
                    int ones = 0;
                    for (int a = 0; a < d_; ++a)
                        if (mask & (1u << a)) {
                            corner += corner_stride_[a];
                            ++ones;
                        }
                    mass += ((d_ - ones) % 2 == 0) ? corners_[corner] : -corners_[corner];
                }
                out[b] = mass;
                for (int a = d_ - 1; a >= 0; --a) {
                    if (++idx[a] < shape_[a]) break;
                    idx[a] = 0;
                }
            }
        }
    }

  private:
    const MeasureSet* measures_;
    int d_;
    std::size_t n_;
    std::vector<int> shape_;
    std::size_t boxes_ = 1;
    std::size_t corner_count_ = 1;
    std::vector<std::size_t> corner_stride_;
    std::vector<double> corners_;
    std::vector<std::vector<double>> positions_;
};

struct Objective {
    double max_abs = std::numeric_limits<double>::infinity();
    double sq = std::numeric_limits<double>::infinity();

    /// Cut moves descend on the sum of squares (its zeros are exactly the
    /// fair divisions, and unlike max-abs it has no minimax kinks that stall
    /// coordinate moves); max-abs breaks ties.
    bool better_for_cuts(const Objective& o) const {
        if (sq != o.sq) return sq < o.sq;
        return max_abs < o.max_abs;
    }
};

struct RestartResult {
    bool success = false;
    bool aborted = false;
    double residual = std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> cuts;
    std::vector<int> labels;
};

/// One restart of the alternating labeling / cut search.
class RestartSearch {
  public:
    RestartSearch(const MeasureSet& measures, int k, std::span<const int> m,
                  const SolverConfig& config, int restart_index,
                  const std::atomic<int>* winner)
        : measures_(measures), k_(k), config_(config), restart_(restart_index),
          winner_(winner), rng_(mix_seed(config.seed, static_cast<std::uint64_t>(restart_index))),
          evaluator_(measures, m) {
        m_.assign(m.begin(), m.end());
        d_ = static_cast<int>(m_.size());
        n_ = measures.size();
        boxes_ = evaluator_.boxes();
        internal_tol_ = config.tolerance * 0.999;

        // When the labeling space is small, the strong shakes walk it
        // through a seeded affine bijection, interleaved across restarts, so
        // the restart pool collectively enumerates every labeling.
        double space = 1.0;
        for (std::size_t b = 0; b < boxes_ && space <= 1e12; ++b) space *= k_;
        if (space <= 1e12) {
            label_space_ = 1;
            for (std::size_t b = 0; b < boxes_; ++b) label_space_ *= k_;
            std::uint64_t state = mix_seed(config.seed, 0x5eedu);
            stream_mult_ = splitmix64(state) % label_space_;
            stream_offset_ = splitmix64(state) % label_space_;
            auto coprime = [&](std::uint64_t x) {
                for (int p = 2; p <= k_; ++p)
                    if (k_ % p == 0 && x % p == 0) return false;
                return true;
            };
            while (stream_mult_ == 0 || !coprime(stream_mult_)) ++stream_mult_;
        }
    }

    RestartResult run() {
        init_state();
        evaluator_.compute(cuts_, masses_);
        recompute_colmass();
        ++evals_;
        snapshot_best();
        if (cur_.max_abs <= internal_tol_) return finish();

        greedy_labels();
        if (cur_.max_abs <= internal_tol_) return finish();
        cut_phase();
        if (cur_.max_abs <= internal_tol_) return finish();
        greedy_labels();
        if (cur_.max_abs <= internal_tol_) return finish();

        // basin hopping: perturb the labeling, let the cuts react, quench,
        // then accept or reject the whole hop at an annealed temperature.
        // Every few hops a strong shake resamples the labeling wholesale;
        // that is what finds solutions whose labelings are rare.
        Snapshot accepted = take_snapshot();
        double temperature = config_.initial_temperature;
        for (std::size_t hop = 0; evals_ < config_.eval_budget && !should_abort(); ++hop) {
            if (hop % 4 == 3) {
                shake();
            } else {
                perturb_labels(1 + static_cast<int>(rng_.next_below(3)));
            }
            cut_phase();
            if (cur_.max_abs <= internal_tol_) return finish();
            greedy_labels();
            if (cur_.max_abs <= internal_tol_) return finish();
            cut_phase();
            if (cur_.max_abs <= internal_tol_) return finish();

            const double delta = cur_.max_abs - accepted.obj.max_abs;
            bool accept = delta < 0.0;
            if (!accept) accept = rng_.next_double() < std::exp(-delta / temperature);
            if (accept)
                accepted = take_snapshot();
            else
                restore_snapshot(accepted);
            temperature *= config_.cooling;
            if (temperature < config_.initial_temperature * 1e-4)
                temperature = config_.initial_temperature;
        }
        return finish();
    }

  private:
    const MeasureSet& measures_;
    int k_;
    SolverConfig config_;
    int restart_;
    const std::atomic<int>* winner_;
    Rng rng_;
    MassEvaluator evaluator_;

    std::vector<int> m_;
    int d_ = 0;
    std::size_t n_ = 0;
    std::size_t boxes_ = 0;
    double internal_tol_ = 0.0;
    std::int64_t evals_ = 0;

    std::vector<std::vector<double>> cuts_;
    std::vector<int> labels_;
    std::vector<double> masses_;  // n x boxes
    std::vector<double> colmass_; // n x k
    Objective cur_;

    std::vector<std::vector<double>> best_cuts_;
    std::vector<int> best_labels_;
    double best_residual_ = std::numeric_limits<double>::infinity();

    // labeling enumeration stream for strong shakes (0 = space too large)
    std::uint64_t label_space_ = 0;
    std::uint64_t stream_mult_ = 1;
    std::uint64_t stream_offset_ = 0;
    std::uint64_t stream_pos_ = 0;
    std::uint64_t shake_count_ = 0;

    // scratch for cut trials
    std::vector<double> trial_masses_;
    std::vector<double> trial_colmass_;

    bool should_abort() const {
        return winner_ != nullptr &&
               winner_->load(std::memory_order_relaxed) < restart_;
    }

    void init_state() {
        cuts_.assign(d_, {});
        for (int a = 0; a < d_; ++a) {
            const int ma = m_[a];
            auto& axis = cuts_[a];
            axis.resize(ma);
            if (restart_ == 0) {
                for (int i = 0; i < ma; ++i)
                    axis[i] = static_cast<double>(i + 1) / (ma + 1);
            } else {
                // gaps from a uniform Dirichlet sample
                std::vector<double> gaps(ma + 1);
                double total = 0.0;
                for (int i = 0; i <= ma; ++i) {
                    gaps[i] = rng_.next_exponential();
                    total += gaps[i];
                }
                double acc = 0.0;
                for (int i = 0; i < ma; ++i) {
                    acc += gaps[i];
                    axis[i] = std::min(1.0, acc / total);
                }
            }
        }
        labels_.resize(boxes_);
        if (restart_ == 0) {
            for (std::size_t b = 0; b < boxes_; ++b)
                labels_[b] = static_cast<int>(b % k_) + 1;
        } else {
            for (std::size_t b = 0; b < boxes_; ++b)
                labels_[b] = static_cast<int>(rng_.next_below(k_)) + 1;
        }
    }

    void recompute_colmass() {
        colmass_.assign(n_ * k_, 0.0);
        for (std::size_t j = 0; j < n_; ++j) {
            const double* mass = masses_.data() + j * boxes_;
            double* col = colmass_.data() + j * k_;
            for (std::size_t b = 0; b < boxes_; ++b) col[labels_[b] - 1] += mass[b];
        }
        cur_ = objective_of(colmass_);
    }

    Objective objective_of(const std::vector<double>& colmass) const {
        Objective obj{0.0, 0.0};
        const double share = 1.0 / k_;
        for (double c : colmass) {
            const double e = c - share;
            obj.max_abs = std::max(obj.max_abs, std::abs(e));
            obj.sq += e * e;
        }
        return obj;
    }

    void snapshot_best() {
        if (cur_.max_abs < best_residual_) {
            best_residual_ = cur_.max_abs;
            best_cuts_ = cuts_;
            best_labels_ = labels_;
        }
    }

    // ---- labeling moves -------------------------------------------------

    void apply_recolor(std::size_t b, int to) {
        const int from = labels_[b];
        for (std::size_t j = 0; j < n_; ++j) {
            const double mass = masses_[j * boxes_ + b];
            colmass_[j * k_ + from - 1] -= mass;
            colmass_[j * k_ + to - 1] += mass;
        }
        labels_[b] = to;
    }

    void apply_swap(std::size_t b1, std::size_t b2) {
        const int c1 = labels_[b1];
        const int c2 = labels_[b2];
        for (std::size_t j = 0; j < n_; ++j) {
            const double m1 = masses_[j * boxes_ + b1];
            const double m2 = masses_[j * boxes_ + b2];
            colmass_[j * k_ + c1 - 1] += m2 - m1;
            colmass_[j * k_ + c2 - 1] += m1 - m2;
        }
        labels_[b1] = c2;
        labels_[b2] = c1;
    }

    struct Snapshot {
        std::vector<std::vector<double>> cuts;
        std::vector<int> labels;
        std::vector<double> masses;
        std::vector<double> colmass;
        Objective obj;
    };

    Snapshot take_snapshot() const { return {cuts_, labels_, masses_, colmass_, cur_}; }

    void restore_snapshot(const Snapshot& snap) {
        cuts_ = snap.cuts;
        labels_ = snap.labels;
        masses_ = snap.masses;
        colmass_ = snap.colmass;
        cur_ = snap.obj;
    }

    /// Strong shake: resample the labeling wholesale (from the enumeration
    /// stream when it exists) and restart the cuts.
    void shake() {
        if (label_space_ > 0) {
            const int restarts = std::max(config_.restarts, 1);
            for (int attempt = 0; attempt < 512; ++attempt) {
                const std::uint64_t global =
                    (stream_pos_++) * static_cast<std::uint64_t>(restarts) +
                    static_cast<std::uint64_t>(restart_);
                const std::uint64_t code = static_cast<std::uint64_t>(
                    (static_cast<unsigned __int128>(stream_mult_) * (global % label_space_) +
                     stream_offset_) %
                    label_space_);
                std::uint64_t rest = code;
                std::uint64_t used = 0;
                for (std::size_t b = 0; b < boxes_; ++b) {
                    const int color = static_cast<int>(rest % k_) + 1;
                    rest /= k_;
                    labels_[b] = color;
                    used |= 1ull << (color - 1);
                }
                if (used == (1ull << k_) - 1) break; // every color present
            }
        } else {
            for (std::size_t b = 0; b < boxes_; ++b)
                labels_[b] = static_cast<int>(rng_.next_below(k_)) + 1;
        }
        for (int a = 0; a < d_; ++a) {
            const std::size_t ma = cuts_[a].size();
            if (shake_count_ % 2 == 0) {
                for (std::size_t i = 0; i < ma; ++i)
                    cuts_[a][i] = static_cast<double>(i + 1) / (ma + 1);
            } else {
                std::vector<double> gaps(ma + 1);
                double total = 0.0;
                for (auto& g : gaps) {
                    g = rng_.next_exponential();
                    total += g;
                }
                double acc = 0.0;
                for (std::size_t i = 0; i < ma; ++i) {
                    acc += gaps[i];
                    cuts_[a][i] = std::min(1.0, acc / total);
                }
            }
        }
        ++shake_count_;
        evaluator_.compute(cuts_, masses_);
        recompute_colmass();
        ++evals_;
        snapshot_best();
    }

    /// Random recolor/swap moves applied unconditionally.
    void perturb_labels(int count) {
        for (int move = 0; move < count; ++move) {
            const bool recolor = boxes_ < 2 || rng_.next_below(2) == 0;
            if (recolor) {
                const std::size_t b = rng_.next_below(boxes_);
                int to = static_cast<int>(rng_.next_below(k_ - 1)) + 1;
                if (to >= labels_[b]) ++to;
                apply_recolor(b, to);
            } else {
                apply_swap(rng_.next_below(boxes_), rng_.next_below(boxes_));
            }
        }
        cur_ = objective_of(colmass_);
        ++evals_;
        snapshot_best();
    }

    /// Strict-descent sweeps over all single recolors and pair swaps.
    void greedy_labels() {
        bool improved = true;
        int sweeps = 0;
        while (improved && ++sweeps <= 8 && evals_ < config_.eval_budget) {
            if (should_abort()) return;
            improved = false;
            for (std::size_t b = 0; b < boxes_ && evals_ < config_.eval_budget; ++b) {
                for (int c = 1; c <= k_; ++c) {
                    const int from = labels_[b];
                    if (c == from) continue;
                    const Objective before = cur_;
                    apply_recolor(b, c);
                    cur_ = objective_of(colmass_);
                    ++evals_;
                    if (cur_.max_abs < before.max_abs) {
                        improved = true;
                        snapshot_best();
                        if (cur_.max_abs <= internal_tol_) return;
                    } else {
                        apply_recolor(b, from);
                        cur_ = before;
                    }
                }
            }
            for (std::size_t b1 = 0; b1 + 1 < boxes_ && evals_ < config_.eval_budget; ++b1) {
                for (std::size_t b2 = b1 + 1; b2 < boxes_ && evals_ < config_.eval_budget; ++b2) {
                    if (labels_[b1] == labels_[b2]) continue;
                    const Objective before = cur_;
                    apply_swap(b1, b2);
                    cur_ = objective_of(colmass_);
                    ++evals_;
                    if (cur_.max_abs < before.max_abs) {
                        improved = true;
                        snapshot_best();
                        if (cur_.max_abs <= internal_tol_) return;
                    } else {
                        apply_swap(b1, b2);
                        cur_ = before;
                    }
                }
            }
            recompute_colmass();
        }
    }

    // ---- cut moves -------------------------------------------------------

    Objective evaluate_cuts(const std::vector<std::vector<double>>& cuts) {
        evaluator_.compute(cuts, trial_masses_);
        trial_colmass_.assign(n_ * k_, 0.0);
        for (std::size_t j = 0; j < n_; ++j) {
            const double* mass = trial_masses_.data() + j * boxes_;
            double* col = trial_colmass_.data() + j * k_;
            for (std::size_t b = 0; b < boxes_; ++b) col[labels_[b] - 1] += mass[b];
        }
        ++evals_;
        return objective_of(trial_colmass_);
    }

    /// Solve (A + lambda I) x = b in place; A is small, dense, symmetric.
    static bool solve_damped(std::vector<double>& a, std::vector<double>& b, double lambda) {
        const std::size_t c = b.size();
        for (std::size_t i = 0; i < c; ++i) a[i * c + i] += lambda;
        for (std::size_t col = 0; col < c; ++col) {
            std::size_t pivot = col;
            for (std::size_t row = col + 1; row < c; ++row)
                if (std::abs(a[row * c + col]) > std::abs(a[pivot * c + col])) pivot = row;
            if (std::abs(a[pivot * c + col]) < 1e-300) return false;
            if (pivot != col) {
                for (std::size_t j = 0; j < c; ++j) std::swap(a[col * c + j], a[pivot * c + j]);
                std::swap(b[col], b[pivot]);
            }
            const double inv = 1.0 / a[col * c + col];
            for (std::size_t row = col + 1; row < c; ++row) {
                const double f = a[row * c + col] * inv;
                if (f == 0.0) continue;
                for (std::size_t j = col; j < c; ++j) a[row * c + j] -= f * a[col * c + j];
                b[row] -= f * b[col];
            }
        }
        for (std::size_t col = c; col-- > 0;) {
            double sum = b[col];
            for (std::size_t j = col + 1; j < c; ++j) sum -= a[col * c + j] * b[j];
            b[col] = sum / a[col * c + col];
        }
        return true;
    }

    /// Damped Gauss-Newton refinement of the cut positions. The residual
    /// entries are piecewise multilinear in the cuts, so a numeric Jacobian
    /// is locally exact and the iteration homes in on a zero quadratically
    /// where the coordinate pattern search only zigzags along valleys.
    void gauss_newton_polish() {
        std::vector<std::pair<int, std::size_t>> coords;
        for (int a = 0; a < d_; ++a)
            for (std::size_t i = 0; i < cuts_[a].size(); ++i) coords.emplace_back(a, i);
        const std::size_t c = coords.size();
        if (c == 0) return;
        const std::size_t rows = n_ * k_;
        std::vector<double> jac(rows * c);
        std::vector<double> base(rows), normal(c * c), rhs(c);
        std::vector<std::vector<double>> trial = cuts_;
        double lambda = 1e-8;

        for (int iter = 0; iter < 48 && evals_ < config_.eval_budget; ++iter) {
            if (should_abort()) return;
            const double share = 1.0 / k_;
            for (std::size_t r = 0; r < rows; ++r) base[r] = colmass_[r] - share;

            const double h = 1e-6;
            for (std::size_t ci = 0; ci < c; ++ci) {
                const auto& [a, i] = coords[ci];
                const double x = cuts_[a][i];
                const double hh = (x + h <= 1.0) ? h : -h;
                trial[a][i] = x + hh;
                // deliberately unsorted: the Jacobian needs the raw coordinate
                evaluator_.compute(trial, trial_masses_);
                ++evals_;
                for (std::size_t j = 0; j < n_; ++j) {
                    const double* mass = trial_masses_.data() + j * boxes_;
                    for (int col = 0; col < k_; ++col) {
                        double sum = 0.0;
                        for (std::size_t b = 0; b < boxes_; ++b)
                            if (labels_[b] == col + 1) sum += mass[b];
                        jac[(j * k_ + col) * c + ci] = (sum - share - base[j * k_ + col]) / hh;
                    }
                }
                trial[a][i] = x;
            }

            for (std::size_t p = 0; p < c; ++p) {
                rhs[p] = 0.0;
                for (std::size_t r = 0; r < rows; ++r) rhs[p] -= jac[r * c + p] * base[r];
                for (std::size_t q = 0; q <= p; ++q) {
                    double sum = 0.0;
                    for (std::size_t r = 0; r < rows; ++r)
                        sum += jac[r * c + p] * jac[r * c + q];
                    normal[p * c + q] = sum;
                    normal[q * c + p] = sum;
                }
            }

            bool accepted = false;
            while (lambda <= 1e8 && evals_ < config_.eval_budget) {
                std::vector<double> a_copy = normal;
                std::vector<double> step = rhs;
                if (!solve_damped(a_copy, step, lambda)) break;
                for (std::size_t ci = 0; ci < c; ++ci) {
                    const auto& [a, i] = coords[ci];
                    trial[a][i] = std::clamp(cuts_[a][i] + step[ci], 0.0, 1.0);
                }
                for (int a = 0; a < d_; ++a) std::sort(trial[a].begin(), trial[a].end());
                const Objective obj = evaluate_cuts(trial);
                if (obj.better_for_cuts(cur_)) {
                    cuts_ = trial;
                    masses_.swap(trial_masses_);
                    colmass_.swap(trial_colmass_);
                    cur_ = obj;
                    snapshot_best();
                    lambda = std::max(lambda * 0.25, 1e-12);
                    accepted = true;
                    break;
                }
                trial = cuts_;
                lambda *= 8.0;
            }
            if (!accepted || cur_.max_abs <= internal_tol_) return;
        }
    }

    bool try_cut_move(std::vector<std::vector<double>>& trial, int axis, std::size_t i,
                      double delta) {
        const double x = cuts_[axis][i];
        const double moved = std::clamp(x + delta, 0.0, 1.0);
        if (moved == x) return false;
        trial[axis][i] = moved;
        std::sort(trial[axis].begin(), trial[axis].end());
        const Objective obj = evaluate_cuts(trial);
        if (obj.better_for_cuts(cur_)) {
            cuts_[axis] = trial[axis];
            masses_.swap(trial_masses_);
            colmass_.swap(trial_colmass_);
            cur_ = obj;
            snapshot_best();
            return true;
        }
        trial[axis] = cuts_[axis];
        return false;
    }

    /// Coordinate pattern search with shrinking step; trial positions are
    /// clamped to [0,1] and the axis re-sorted after each move. When single
    /// moves stall, coupled two-cut moves are tried before shrinking.
    void cut_phase() {
        const double hard_floor = std::min(1e-9, config_.tolerance * 0.01);
        // flat list of (axis, cut) coordinates
        std::vector<std::pair<int, std::size_t>> coords;
        for (int a = 0; a < d_; ++a)
            for (std::size_t i = 0; i < cuts_[a].size(); ++i) coords.emplace_back(a, i);

        double step = config_.pattern_step;
        std::vector<std::vector<double>> trial = cuts_;
        // the coarse ladder only has to reach the basin; the Gauss-Newton
        // polish below does the fine work, so its effort is capped
        const std::int64_t ladder_budget =
            evals_ + 200 + 150 * static_cast<std::int64_t>(coords.size());
        const auto ladder_done = [&] {
            return evals_ >= std::min(ladder_budget, config_.eval_budget);
        };
        while (step >= std::max(hard_floor, cur_.max_abs * 0.05) && !ladder_done()) {
            bool level_active = true;
            while (level_active && !ladder_done()) {
                if (should_abort()) return;
                level_active = false;
                for (const auto& [a, i] : coords) {
                    for (const double dir : {+1.0, -1.0}) {
                        if (try_cut_move(trial, a, i, dir * step)) level_active = true;
                        if (cur_.max_abs <= internal_tol_) return;
                        if (evals_ >= config_.eval_budget) return;
                    }
                }
                if (level_active) continue;
                // single moves are stuck; try coupled pairs
                for (std::size_t p = 0; p < coords.size() && !level_active; ++p) {
                    for (std::size_t q = p + 1; q < coords.size() && !level_active; ++q) {
                        const auto& [a1, i1] = coords[p];
                        const auto& [a2, i2] = coords[q];
                        for (const double d1 : {+1.0, -1.0}) {
                            for (const double d2 : {+1.0, -1.0}) {
                                const double x1 = cuts_[a1][i1];
                                const double x2 = cuts_[a2][i2];
                                const double m1 = std::clamp(x1 + d1 * step, 0.0, 1.0);
                                trial[a1][i1] = m1;
                                std::sort(trial[a1].begin(), trial[a1].end());
                                // second coordinate indexes the updated axis;
                                // reuse the original position value
                                auto& axis2 = trial[a2];
                                const auto it = std::find(axis2.begin(), axis2.end(), x2);
                                if (it != axis2.end())
                                    *it = std::clamp(x2 + d2 * step, 0.0, 1.0);
                                std::sort(axis2.begin(), axis2.end());
                                const Objective obj = evaluate_cuts(trial);
                                if (obj.better_for_cuts(cur_)) {
                                    cuts_[a1] = trial[a1];
                                    cuts_[a2] = trial[a2];
                                    masses_.swap(trial_masses_);
                                    colmass_.swap(trial_colmass_);
                                    cur_ = obj;
                                    snapshot_best();
                                    level_active = true;
                                } else {
                                    trial[a1] = cuts_[a1];
                                    trial[a2] = cuts_[a2];
                                }
                                if (cur_.max_abs <= internal_tol_) return;
                                if (evals_ >= config_.eval_budget) return;
                                if (level_active) break;
                            }
                            if (level_active) break;
                        }
                    }
                }
            }
            step *= config_.pattern_shrink;
        }
        gauss_newton_polish();
    }

    RestartResult finish() {
        RestartResult result;
        result.cuts = best_cuts_;
        result.labels = best_labels_;
        result.residual = best_residual_;
        result.success = best_residual_ <= config_.tolerance;
        return result;
    }
};

Division make_division(const std::vector<std::vector<double>>& cuts,
                       const std::vector<int>& labels, int k) {
    CutConfiguration cut_config(cuts);
    std::vector<int> shape = cut_config.counts();
    for (int& s : shape) ++s;
    return Division(std::move(cut_config), Labeling(k, std::move(shape), labels));
}

Division run_restarts(const MeasureSet& measures, int k, std::span<const int> m,
                      const SolverConfig& config) {
    if (config.restarts < 1) throw InvalidParameter("need at least one restart");
    if (config.eval_budget < 1) throw InvalidParameter("evaluation budget must be positive");
    if (config.tolerance <= 0) throw InvalidParameter("tolerance must be positive");

    const int restarts = config.restarts;
    std::vector<RestartResult> results(restarts);
    std::atomic<int> winner{std::numeric_limits<int>::max()};

    bool parallel = config.parallel_restarts;
#ifndef _OPENMP
    parallel = false;
#endif
    if (parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1)
        for (int r = 0; r < restarts; ++r) {
            if (winner.load() < r) {
                results[r].aborted = true;
                continue;
            }
            RestartSearch search(measures, k, m, config, r, &winner);
            results[r] = search.run();
            if (results[r].success) {
                int expected = winner.load();
                while (r < expected && !winner.compare_exchange_weak(expected, r)) {
                }
            }
        }
#endif
    } else {
        for (int r = 0; r < restarts; ++r) {
            RestartSearch search(measures, k, m, config, r, nullptr);
            results[r] = search.run();
            if (results[r].success) {
                winner.store(r);
                break;
            }
        }
    }

    // deterministic merge: the first succeeding restart wins; otherwise the
    // best (residual, index) pair is reported with the failure
    for (int r = 0; r < restarts; ++r) {
        if (results[r].success) {
            Division division = make_division(results[r].cuts, results[r].labels, k);
            const double residual = residual_norm(evaluate(division, measures));
            if (residual <= config.tolerance) return division;
        }
    }
    double best = std::numeric_limits<double>::infinity();
    int best_index = -1;
    for (int r = 0; r < restarts; ++r) {
        if (results[r].aborted) continue;
        if (results[r].residual < best) {
            best = results[r].residual;
            best_index = r;
        }
    }
    std::ostringstream os;
    os << "no division within tolerance " << config.tolerance << " after " << restarts
       << " restarts; best residual " << best << " (restart " << best_index << ")";
    throw SearchExhausted(os.str());
}

} // namespace

std::vector<int> default_axis_budgets(int total_cuts, int d) {
    if (d < 1) throw InvalidParameter("dimension must be positive");
    std::vector<int> m(d);
    for (int a = 0; a < d; ++a)
        m[a] = total_cuts / d + (a < total_cuts % d ? 1 : 0);
    return m;
}

FactorPlan allocate_cut_budgets(int n, int d, int k1, int k2, std::span<const int> m) {
    if (n < 1 || d < 1) throw InvalidParameter("need n >= 1 and d >= 1");
    if (k1 < 2 || k2 < 2) throw InvalidParameter("factor pair entries must be at least 2");
    if (static_cast<int>(m.size()) != d) throw ShapeMismatch("budget vector length != d");
    long total = 0;
    for (int mi : m) total += mi;
    const long need = static_cast<long>(n) * (k1 * k2 - 1);
    if (total != need) {
        std::ostringstream os;
        os << "cut budget " << total << " != n(k1*k2 - 1) = " << need;
        throw BudgetMismatch(os.str());
    }

    // unit budgets in axis order, cut into consecutive blocks
    std::vector<int> axis_of;
    axis_of.reserve(total);
    for (int a = 0; a < d; ++a)
        for (int i = 0; i < m[a]; ++i) axis_of.push_back(a);

    FactorPlan plan;
    plan.k1 = k1;
    plan.k2 = k2;
    std::size_t pos = 0;
    auto take_block = [&](long size) {
        std::vector<int> tally(d, 0);
        for (long i = 0; i < size; ++i) tally[axis_of[pos++]]++;
        return tally;
    };
    plan.outer = take_block(static_cast<long>(n) * (k1 - 1));
    plan.inner.reserve(k1);
    for (int j = 0; j < k1; ++j) plan.inner.push_back(take_block(static_cast<long>(n) * (k2 - 1)));
    return plan;
}

Division solve_base(const MeasureSet& measures, int k, std::span<const int> m,
                    const SolverConfig& config) {
    validate_instance(measures, k, m);
    return run_restarts(measures, k, m, config);
}

GridDensity restrict_measure(const GridDensity& density, const CutConfiguration& outer_cuts,
                             const std::vector<char>& region, int scale) {
    const int d = density.dim();
    if (outer_cuts.dim() != d) throw ShapeMismatch("cuts dimension mismatch");
    if (region.size() != outer_cuts.box_count())
        throw ShapeMismatch("region size does not match the outer box count");

    // refine the grid by the outer cut positions
    std::vector<std::vector<double>> refined(d);
    for (int a = 0; a < d; ++a) {
        refined[a] = density.breakpoints()[a];
        refined[a].insert(refined[a].end(), outer_cuts.cuts[a].begin(), outer_cuts.cuts[a].end());
        std::sort(refined[a].begin(), refined[a].end());
        refined[a].erase(std::unique(refined[a].begin(), refined[a].end()), refined[a].end());
    }

    std::vector<int> ncells(d);
    std::size_t cells = 1;
    for (int a = 0; a < d; ++a) {
        ncells[a] = static_cast<int>(refined[a].size()) - 1;
        cells *= ncells[a];
    }

    const auto original_counts = density.cell_counts();
    std::vector<std::size_t> orig_stride(d, 1), outer_stride(d, 1);
    for (int a = d - 2; a >= 0; --a) {
        orig_stride[a] = orig_stride[a + 1] * original_counts[a + 1];
        outer_stride[a] = outer_stride[a + 1] * (outer_cuts.cuts[a + 1].size() + 1);
    }

    std::vector<double> values(cells, 0.0);
    std::vector<char> selected(cells, 0);
    double total = 0.0;
    double region_volume = 0.0;
    std::vector<int> idx(d, 0);
    for (std::size_t flat = 0; flat < cells; ++flat) {
        double volume = 1.0;
        std::size_t orig_flat = 0;
        std::size_t outer_flat = 0;
        for (int a = 0; a < d; ++a) {
            const double lo = refined[a][idx[a]];
            const double hi = refined[a][idx[a] + 1];
            const double center = 0.5 * (lo + hi);
            volume *= hi - lo;
            const auto& obp = density.breakpoints()[a];
            int oc = static_cast<int>(std::upper_bound(obp.begin(), obp.end(), center) -
                                      obp.begin()) - 1;
            oc = std::clamp(oc, 0, original_counts[a] - 1);
            orig_flat += static_cast<std::size_t>(oc) * orig_stride[a];
            const auto& axis_cuts = outer_cuts.cuts[a];
            const int ob = static_cast<int>(std::upper_bound(axis_cuts.begin(), axis_cuts.end(),
                                                             center) - axis_cuts.begin());
            outer_flat += static_cast<std::size_t>(ob) * outer_stride[a];
        }
        if (region[outer_flat]) {
            selected[flat] = 1;
            region_volume += volume;
            values[flat] = scale * density.values()[orig_flat];
            total += values[flat] * volume;
        }
        for (int a = d - 1; a >= 0; --a) {
            if (++idx[a] < ncells[a]) break;
            idx[a] = 0;
        }
    }

    if (region_volume <= 0.0) throw EmptyRegion("region has zero volume");
    if (std::abs(total) < 1e-9) {
        // fairness on a null region is vacuous; use the uniform placeholder
        for (std::size_t flat = 0; flat < cells; ++flat)
            values[flat] = selected[flat] ? 1.0 : 0.0;
    }
    return normalize(GridDensity(std::move(refined), std::move(values), density.mode()));
}

Division compose(const Division& outer, const std::vector<Division>& inners,
                 const FactorPlan& plan) {
    const int d = outer.dim();
    const int k1 = plan.k1;
    const int k2 = plan.k2;
    if (outer.k() != k1) throw ShapeMismatch("outer division color count != k1");
    if (static_cast<int>(inners.size()) != k1)
        throw ShapeMismatch("expected one inner division per outer class");
    if (outer.cuts.counts() != plan.outer)
        throw ShapeMismatch("outer cut counts do not match the plan");
    for (int j = 0; j < k1; ++j) {
        if (inners[j].dim() != d) throw ShapeMismatch("inner division dimension mismatch");
        if (inners[j].k() != k2) throw ShapeMismatch("inner division color count != k2");
        if (inners[j].cuts.counts() != plan.inner[j])
            throw ShapeMismatch("inner cut counts do not match the plan");
    }

    std::vector<std::vector<double>> merged(d);
    for (int a = 0; a < d; ++a) {
        merged[a] = outer.cuts.cuts[a];
        for (int j = 0; j < k1; ++j)
            merged[a].insert(merged[a].end(), inners[j].cuts.cuts[a].begin(),
                             inners[j].cuts.cuts[a].end());
        std::sort(merged[a].begin(), merged[a].end());
    }
    CutConfiguration merged_cuts(std::move(merged));

    const auto locate = [d](const CutConfiguration& cuts, std::span<const double> center) {
        std::size_t flat = 0;
        for (int a = 0; a < d; ++a) {
            const auto& axis = cuts.cuts[a];
            const std::size_t i =
                std::upper_bound(axis.begin(), axis.end(), center[a]) - axis.begin();
            flat = flat * (axis.size() + 1) + i;
        }
        return flat;
    };

    std::vector<int> shape = merged_cuts.counts();
    for (int& s : shape) ++s;
    std::size_t nboxes = merged_cuts.box_count();
    std::vector<int> labels(nboxes);
    std::vector<int> idx(d, 0);
    std::vector<double> center(d);
    for (std::size_t flat = 0; flat < nboxes; ++flat) {
        const Box box = elementary_box(merged_cuts, idx);
        for (int a = 0; a < d; ++a) center[a] = 0.5 * (box.lo[a] + box.hi[a]);
        const std::size_t outer_box = locate(outer.cuts, center);
        const int j1 = outer.labeling.labels[outer_box];
        const std::size_t inner_box = locate(inners[j1 - 1].cuts, center);
        const int j2 = inners[j1 - 1].labeling.labels[inner_box];
        labels[flat] = (j1 - 1) * k2 + j2;
        for (int a = d - 1; a >= 0; --a) {
            if (++idx[a] < shape[a]) break;
            idx[a] = 0;
        }
    }
    return Division(std::move(merged_cuts), Labeling(k1 * k2, std::move(shape), std::move(labels)));
}

Division solve(const MeasureSet& measures, int k, std::span<const int> m,
               const SolverConfig& config) {
    validate_instance(measures, k, m);
    const int p = smallest_prime_factor(k);
    if (p == k) return solve_base(measures, k, m, config);

    const int n = static_cast<int>(measures.size());
    const int d = measures.dim;
    const int k2 = k / p;
    const FactorPlan plan = allocate_cut_budgets(n, d, p, k2, m);

    SolverConfig outer_config = config;
    outer_config.seed = mix_seed(config.seed, 0x0u);
    const Division outer = solve(measures, p, plan.outer, outer_config);

    std::vector<Division> inners;
    inners.reserve(p);
    for (int j = 1; j <= p; ++j) {
        std::vector<char> region(outer.cuts.box_count(), 0);
        for (std::size_t b = 0; b < region.size(); ++b)
            region[b] = outer.labeling.labels[b] == j ? 1 : 0;
        std::vector<GridDensity> restricted;
        restricted.reserve(n);
        for (int i = 0; i < n; ++i)
            restricted.push_back(restrict_measure(measures[i], outer.cuts, region, p));
        SolverConfig inner_config = config;
        inner_config.seed = mix_seed(config.seed, static_cast<std::uint64_t>(j));
        inners.push_back(
            solve(MeasureSet(std::move(restricted)), k2, plan.inner[j - 1], inner_config));
    }

    Division division = compose(outer, inners, plan);
    const double residual = residual_norm(evaluate(division, measures));
    if (residual > config.composite_tolerance) {
        std::ostringstream os;
        os << "composed division has residual " << residual << " above "
           << config.composite_tolerance;
        throw SearchExhausted(os.str());
    }
    return division;
}

NecklaceSplit solve_discrete_1d(std::span<const int> beads, int k) {
    if (beads.empty()) throw InvalidParameter("bead sequence must be nonempty");
    if (k < 2) throw InvalidParameter("need at least two thieves");
    const int T = static_cast<int>(beads.size());

    // compress colors to 0..n-1
    std::vector<int> palette;
    for (int b : beads) {
        if (b < 1) throw UnknownColor("bead colors must be positive");
        if (std::find(palette.begin(), palette.end(), b) == palette.end()) palette.push_back(b);
    }
    std::sort(palette.begin(), palette.end());
    const int n = static_cast<int>(palette.size());

    std::vector<int> counts(n, 0);
    std::vector<int> color_of(T);
    for (int i = 0; i < T; ++i) {
        const int c = static_cast<int>(std::lower_bound(palette.begin(), palette.end(), beads[i]) -
                                       palette.begin());
        color_of[i] = c;
        counts[c]++;
    }
    for (int c = 0; c < n; ++c)
        if (counts[c] % k != 0) throw NotDivisible("every color count must be divisible by k");

    const int max_cuts = std::min(n * (k - 1), T - 1);

    // brute-force size guard: C(T-1, n(k-1)) * k^(n(k-1)+1)
    double guard = 1.0;
    for (int i = 0; i < n * (k - 1); ++i)
        guard *= static_cast<double>(std::max(1, T - 1 - i)) / (i + 1);
    for (int i = 0; i <= n * (k - 1); ++i) guard *= k;
    if (guard > 1e8) throw TooLarge("necklace too large for exhaustive search");

    std::vector<int> quota(n);
    for (int c = 0; c < n; ++c) quota[c] = counts[c] / k;

    // prefix counts per color
    std::vector<std::vector<int>> prefix(n, std::vector<int>(T + 1, 0));
    for (int i = 0; i < T; ++i) {
        for (int c = 0; c < n; ++c) prefix[c][i + 1] = prefix[c][i];
        prefix[color_of[i]][i + 1]++;
    }

    std::vector<std::vector<int>> used(k, std::vector<int>(n, 0));
    std::vector<int> owners;

    // assign pieces to thieves, thieves numbered in order of first use
    auto assign = [&](auto&& self, const std::vector<std::array<int, 2>>& pieces,
                      std::size_t i, int max_used) -> bool {
        if (i == pieces.size()) return true;
        const int lo = pieces[i][0];
        const int hi = pieces[i][1];
        const int limit = std::min(k, max_used + 1);
        for (int t = 0; t < limit; ++t) {
            bool fits = true;
            for (int c = 0; c < n && fits; ++c)
                if (used[t][c] + prefix[c][hi] - prefix[c][lo] > quota[c]) fits = false;
            if (!fits) continue;
            for (int c = 0; c < n; ++c) used[t][c] += prefix[c][hi] - prefix[c][lo];
            owners[i] = t + 1;
            if (self(self, pieces, i + 1, std::max(max_used, t + 1))) return true;
            for (int c = 0; c < n; ++c) used[t][c] -= prefix[c][hi] - prefix[c][lo];
        }
        return false;
    };

    for (int c = 0; c <= max_cuts; ++c) {
        // combinations of c distinct boundaries out of 1..T-1, in lex order
        std::vector<int> comb(c);
        for (int i = 0; i < c; ++i) comb[i] = i + 1;
        while (true) {
            std::vector<std::array<int, 2>> pieces;
            int prev = 0;
            for (int b : comb) {
                pieces.push_back({prev, b});
                prev = b;
            }
            pieces.push_back({prev, T});

            for (auto& row : used) std::fill(row.begin(), row.end(), 0);
            owners.assign(pieces.size(), 0);
            if (assign(assign, pieces, 0, 0)) {
                NecklaceSplit split;
                split.cuts = comb;
                split.thieves = owners;
                return split;
            }

            // next combination
            int i = c - 1;
            while (i >= 0 && comb[i] == T - 1 - (c - 1 - i)) --i;
            if (i < 0) break;
            comb[i]++;
            for (int j = i + 1; j < c; ++j) comb[j] = comb[j - 1] + 1;
        }
    }
    throw Error("internal error: no discrete split found within n(k-1) cuts");
}

} // namespace cubesplit
