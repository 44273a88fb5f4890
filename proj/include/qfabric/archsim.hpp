// Copyright 2026 The qfabric Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qfabric/bench.hpp"
#include "qfabric/tech.hpp"

namespace qfabric {

enum class Variant { qla, cqla, fullymux };

Variant parse_arch_variant(std::string_view name);
std::string_view arch_variant_name(Variant v);

enum class Replacement { lru, random };

struct ArchConfig {
    Variant variant = Variant::fullymux;
    /// Serial generators per home cell (qla) or per cache slot (cqla).
    int zero_replication = 1;
    int pi8_replication = 1;
    /// Encoded qubits held in the compute cache (cqla).
    int cache_size = 16;
    Replacement replacement = Replacement::lru;
    /// Teleport channels between memory and cache; misses queue on them.
    int transfer_channels = 1;
    /// Teleport time per transfer; negative selects 2 x QEC interaction.
    Micros teleport_time = -1;
    /// Encoded zeros consumed per teleport.
    int teleport_ancillae = 2;
    /// Pipelined factory counts (fullymux); fractional counts are rates.
    double zero_factories = 0;
    double pi8_factories = 0;
    /// Factory port to data; negative selects 5 t_move + t_turn.
    Micros distribution_latency = -1;

    void validate() const;
};

struct SimResult {
    Micros exec_time = 0;
    Micros ancilla_stall_time = 0;
    std::vector<double> factory_utilization;
    std::uint64_t cache_misses = 0;
    std::uint64_t events_processed = 0;
    std::uint64_t zero_consumed = 0;
    std::uint64_t pi8_consumed = 0;
    /// Ancillae finished by exec_time and left unused.
    std::uint64_t zero_left = 0;
    std::uint64_t pi8_left = 0;

    double mean_utilization() const;
};

/// Serial generator unit for one home cell: one basic zero encoder.
struct GeneratorUnit {
    Micros period = 0;
    int area = 0;
};
GeneratorUnit zero_generator(const TechProfile &profile);
/// A zero encoder chained with one unit of each pi/8 stage.
GeneratorUnit pi8_generator(const TechProfile &profile);

Micros distribution_latency(const ArchConfig &cfg, const TechProfile &profile);
Micros teleport_time(const ArchConfig &cfg, const TechProfile &profile);

/// Throws ModelError when some required ancilla type has no producer.
SimResult simulate(const DataflowGraph &g, const ArchConfig &cfg, const TechProfile &profile,
                   std::uint64_t seed = 0);

struct SweepPoint {
    double area = 0;
    ArchConfig config;
    /// False when the budget cannot build one generator of each needed type.
    bool feasible = false;
    SimResult result;
};

/// Fraction of factory area given to zero production, from the graph's
/// speed-of-data demand ratio.
double zero_area_fraction(const DataflowGraph &g, const TechProfile &profile);

ArchConfig config_for_area(const DataflowGraph &g, Variant v, double area, const TechProfile &profile,
                           const ArchConfig &base = {});

std::vector<SweepPoint> sweep_area(const DataflowGraph &g, Variant v, const std::vector<double> &areas,
                                   const TechProfile &profile, std::uint64_t seed = 0, const ArchConfig &base = {},
                                   unsigned workers = 0);

/// Smallest area in [lo, hi] whose simulated time is at most `target`, by
/// bisection on a log scale to `rel_tol`. Returns a negative value when even
/// `hi` misses the target.
double area_to_reach(const DataflowGraph &g, Variant v, Micros target, double lo, double hi,
                     const TechProfile &profile, std::uint64_t seed = 0, const ArchConfig &base = {},
                     double rel_tol = 1e-3);

/// Log grid from lo to hi inclusive with `per_decade` points per decade.
std::vector<double> log_area_grid(double lo, double hi, int per_decade);
std::vector<double> fig12_areas();

std::string sweep_csv_header();
std::string sweep_csv_rows(Variant v, const std::vector<SweepPoint> &points);

}  // namespace qfabric
