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
#include <chrono>
#include <iomanip>
#include <iostream>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "cubesplit/rainbow.hpp"
#include "cubesplit/rng.hpp"
#include "cubesplit/solver.hpp"

using namespace cubesplit;

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

MeasureSet random_measures(std::uint64_t seed, int n, int d, int cells) {
    Rng rng(mix_seed(seed, 0xcafe));
    std::vector<std::vector<double>> breakpoints(d);
    for (int a = 0; a < d; ++a) {
        breakpoints[a].resize(cells + 1);
        for (int i = 0; i <= cells; ++i) breakpoints[a][i] = static_cast<double>(i) / cells;
        breakpoints[a].front() = 0.0;
        breakpoints[a].back() = 1.0;
    }
    std::size_t count = 1;
    for (int a = 0; a < d; ++a) count *= cells;
    std::vector<GridDensity> densities;
    for (int i = 0; i < n; ++i) {
        std::vector<double> values(count);
        for (double& v : values) v = rng.next_double();
        densities.push_back(normalize(GridDensity(breakpoints, std::move(values))));
    }
    return MeasureSet(std::move(densities));
}

void bench_solver() {
    std::cout << "-- solver: parallel restarts vs serial reference --\n";
    std::cout << std::left << std::setw(28) << "instance" << std::setw(12) << "serial s"
              << std::setw(12) << "openmp s" << std::setw(10) << "speedup" << "match\n";
    int id = 0;
    for (const auto& [n, d, k] : {std::tuple{2, 2, 3}, {3, 2, 2}, {3, 1, 3}, {2, 2, 4}}) {
        const MeasureSet measures = random_measures(1000 + id, n, d, 6);
        const std::vector<int> m = default_axis_budgets(n * (k - 1), d);
        SolverConfig config;
        config.seed = 42 + id;

        config.parallel_restarts = false;
        auto t0 = std::chrono::steady_clock::now();
        const Division serial = solve(measures, k, m, config);
        const double t_serial = seconds_since(t0);

        config.parallel_restarts = true;
        t0 = std::chrono::steady_clock::now();
        const Division parallel = solve(measures, k, m, config);
        const double t_parallel = seconds_since(t0);

        const bool match = serial.cuts.cuts == parallel.cuts.cuts &&
                           serial.labeling.labels == parallel.labeling.labels;
        std::ostringstream name;
        name << "n=" << n << " d=" << d << " k=" << k;
        std::cout << std::setw(28) << name.str() << std::setw(12) << t_serial << std::setw(12)
                  << t_parallel << std::setw(10) << (t_parallel > 0 ? t_serial / t_parallel : 0.0)
                  << (match ? "yes" : "NO") << "\n";
        ++id;
    }
}

void bench_shelling() {
    std::cout << "\n-- shelling checker: parallel vs serial reference --\n";
    std::cout << std::left << std::setw(28) << "base" << std::setw(12) << "serial s"
              << std::setw(12) << "openmp s" << std::setw(10) << "speedup" << "match\n";
    for (const auto& [spec, k] :
         {std::pair{std::string("cube:2"), 3}, {std::string("cube:3"), 2},
          {std::string("cube:3"), 3}, {std::string("prod:simplex:2,simplex:2"), 3}}) {
        const FaceLattice base = parse_polytope_spec(spec);
        auto t0 = std::chrono::steady_clock::now();
        const ShellingReport serial = lex_shelling_check(base, k, false);
        const double t_serial = seconds_since(t0);
        t0 = std::chrono::steady_clock::now();
        const ShellingReport parallel = lex_shelling_check(base, k, true);
        const double t_parallel = seconds_since(t0);
        const bool match = serial.sphere_count == parallel.sphere_count &&
                           serial.classifications == parallel.classifications &&
                           serial.ok == parallel.ok;
        std::ostringstream name;
        name << spec << " k=" << k;
        std::cout << std::setw(28) << name.str() << std::setw(12) << t_serial << std::setw(12)
                  << t_parallel << std::setw(10) << (t_parallel > 0 ? t_serial / t_parallel : 0.0)
                  << (match ? "yes" : "NO") << "\n";
    }
}

} // namespace

int main() {
#ifdef _OPENMP
    std::cout << "OpenMP threads: " << omp_get_max_threads() << "\n\n";
#else
    std::cout << "built without OpenMP; both columns run the serial path\n\n";
#endif
    std::cout << std::setprecision(4);
    bench_solver();
    bench_shelling();
    return 0;
}
