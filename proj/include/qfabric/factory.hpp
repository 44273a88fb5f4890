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

#ifndef QFABRIC_FACTORY_HPP
#define QFABRIC_FACTORY_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "qfabric/steane.hpp"
#include "qfabric/tech.hpp"

namespace qfabric {

/// How match_units sizes a stage.
///
/// anchor: exactly one unit; its capacity sets the target flow.
/// fit: as many units as the anchor flow can keep busy (at least one); the
///      pipeline flow is then capped by the fitted capacity.
/// cover: the fewest units whose capacity carries the pipeline flow.
enum class MatchRole { anchor, fit, cover };

struct StageSpec {
    std::string name;
    SymbolicLatency latency_expr;
    int internal_stages = 1;
    int qubits_per_set = 1;
    int in_qubits_per_set = 1;
    int out_qubits_per_set = 1;
    double survival = 1.0;
    int unit_area = 1;
    int unit_height = 1;
    /// Physical input qubits this stage consumes per pipeline item.
    double load = 1.0;
    MatchRole role = MatchRole::cover;
    /// Pipeline level; stages on one level sit side by side between the same crossbars.
    int level = 0;
};

struct StageMetrics {
    Micros latency = 0;
    double in_bw = 0;
    double out_bw = 0;
    int area = 0;
};

/// Bandwidths are physical qubits per ms.
StageMetrics stage_metrics(const StageSpec &s, const TechProfile &profile);

/// Throws ModelError when no anchor exists or a demand would need an
/// unbounded unit count.
std::vector<int> match_units(const std::vector<StageSpec> &stages, const TechProfile &profile);

/// Pipeline items per ms that `units` copies of `s` can absorb.
double stage_item_capacity(const StageSpec &s, int units, const TechProfile &profile);

struct FactoryStage {
    StageSpec spec;
    int units = 1;
    StageMetrics metrics;

    int total_height() const { return units * spec.unit_height; }
    int total_area() const { return units * spec.unit_area; }
};

struct FactoryDesign {
    std::string kind;
    std::vector<FactoryStage> stages;
    std::vector<int> crossbar_heights;
    std::vector<int> crossbar_columns;
    std::vector<int> crossbar_areas;
    /// Average traversal: half the height in moves plus one turn.
    std::vector<Micros> crossbar_latency;
    int functional_area = 0;
    int total_area = 0;
    /// Encoded ancillae per ms.
    double throughput = 0;
    /// Pipeline items per ms through the matched stages.
    double item_flow = 0;
    /// Encoded outputs per pipeline item.
    double yield = 1.0;
    Micros output_latency = 0;
    /// Encoded zeros consumed per ms (pi/8 factory only).
    double zero_input_rate = 0;

    int crossbar_area() const;
};

std::vector<StageSpec> zero_factory_stages();
std::vector<StageSpec> pi8_factory_stages();
SymbolicLatency simple_factory_latency();

FactoryDesign build_simple_factory(const TechProfile &profile);
FactoryDesign build_zero_factory(const TechProfile &profile);
FactoryDesign build_pi8_factory(const TechProfile &profile);
FactoryDesign build_factory(const std::string &kind, const TechProfile &profile);

struct AreaBreakdown {
    double data_area = 0;
    double qec_factory_area = 0;
    double pi8_factory_area = 0;

    double total() const { return data_area + qec_factory_area + pi8_factory_area; }
    double data_percent() const;
    double qec_percent() const;
    double pi8_percent() const;
};

/// Factory area to sustain the given encoded-ancilla rates. The pi/8 share
/// includes the zero factories feeding the pi/8 factories. Fractional
/// factory counts are allowed.
AreaBreakdown area_for_bandwidth(double zero_bw, double pi8_bw, const TechProfile &profile, double data_area = 0);

/// Movement inserted on every qubit still active at `before_slot`, just
/// ahead of its first op at or after that slot.
struct MovementPhase {
    std::int64_t before_slot = 0;
    int moves = 0;
    int turns = 0;
};

/// Inserts the movement and reschedules the circuit as soon as possible.
PhysicalCircuit insert_movement(const PhysicalCircuit &circuit, const std::vector<MovementPhase> &phases);

/// Basic encoder with the per-qubit movement of the pipelined zero factory:
/// the Zero Prep unit, the first crossbar, and the CX unit's schedule.
PhysicalCircuit movement_annotated_basic_prep(const TechProfile &profile);

std::string factory_csv(const FactoryDesign &design);
/// Tables 5 to 8 as CSV. Throws std::invalid_argument for other numbers.
std::string factory_table(int table, const TechProfile &profile);

}  // namespace qfabric

#endif
