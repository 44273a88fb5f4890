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

#ifndef QFABRIC_BENCH_HPP
#define QFABRIC_BENCH_HPP

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "qfabric/tech.hpp"

namespace qfabric {

enum class GateKind : std::uint8_t { prep, X, Z, H, S, Sdg, T, Tdg, CX, CCX, Rk };

struct EncodedGate {
    GateKind kind;
    std::array<std::uint32_t, 3> operands{};
    std::uint8_t arity = 1;
    /// Rotation exponent for Rk (phase pi/2^{k-1}); negative for the inverse.
    std::int8_t k = 0;

    bool transversal() const { return kind != GateKind::T && kind != GateKind::Tdg && kind != GateKind::Rk; }
    bool operator==(const EncodedGate &other) const = default;
};

std::string gate_name(const EncodedGate &g);

struct DataflowGraph {
    std::uint32_t num_data_qubits = 0;
    std::vector<EncodedGate> gates;
    /// preds[i]: earlier gates sharing an operand with gate i (latest per operand).
    std::vector<std::vector<std::uint32_t>> preds;
    /// Last gate index per qubit, or -1; maintained by add().
    std::vector<std::int64_t> last_use;

    /// Appends a gate and records its dependencies.
    void add(const EncodedGate &g);
    std::vector<std::vector<std::uint32_t>> successors() const;
    bool operator==(const DataflowGraph &other) const = default;
};

enum class BenchKind { qrca, qcla, qft };
BenchKind parse_bench_kind(std::string_view name);
std::string_view bench_kind_name(BenchKind kind);

struct QftOptions {
    /// Controlled rotations with k above this are dropped.
    int max_controlled_k = 6;
    int synth_max_len = 30;
    double synth_eps = 1e-4;
};

/// Reversible form: CCX, CX and prep only (adders), or H/CX/Rk (QFT).
DataflowGraph build_reversible(BenchKind kind, std::uint32_t width, const QftOptions &opts = {});

/// Clifford+T form. Toffolis use the 6-CX, 7-T decomposition; each
/// controlled rotation becomes three half-angle rotations and a CX, and
/// rotations finer than T become H/T words from the synthesis search.
DataflowGraph build_circuit(BenchKind kind, std::uint32_t width, const QftOptions &opts = {});
DataflowGraph expand_to_clifford_t(const DataflowGraph &g, const QftOptions &opts = {});

struct GateCounts {
    std::uint64_t cx = 0;
    std::uint64_t transversal_1q = 0;
    std::uint64_t non_transversal = 0;
    std::uint64_t preps = 0;
    std::uint64_t total = 0;
};
GateCounts count_gates(const DataflowGraph &g);

/// Per-gate costs at the speed of data.
struct LatencyModel {
    Micros qec_interact = 0;
    Micros ancilla_prep = 0;
    Micros data_latency(const EncodedGate &g) const;
    TechProfile profile;
};

/// Movement allowance inside the data region per QEC step, in units of t_turn.
/// Data cells sit beside their QEC ancilla ports, so none is charged.
inline constexpr int kQecTurnOverhead = 0;

LatencyModel latency_model(const TechProfile &profile);

struct Characterization {
    std::uint64_t gates = 0;
    std::uint64_t critical_gates = 0;
    Micros data_op_latency = 0;
    Micros qec_interact_latency = 0;
    Micros ancilla_prep_latency = 0;
    double zero_bw_avg = 0;
    double pi8_bw_avg = 0;
    double nontransversal_fraction = 0;

    Micros speed_of_data() const { return data_op_latency + qec_interact_latency; }
    Micros serial_total() const { return speed_of_data() + ancilla_prep_latency; }
    double data_share() const;
    double qec_share() const;
    double prep_share() const;
};

Characterization characterize(const DataflowGraph &g, const TechProfile &profile);

/// Encoded zeros requested per bucket when running ASAP at the speed of data.
std::vector<std::uint64_t> demand_profile(const DataflowGraph &g, const TechProfile &profile, Micros bucket);

/// List schedule where each QEC waits for two encoded zeros from a steady
/// stream of `bw` ancillae per ms (stock accumulates from time zero).
Micros bandwidth_limited_runtime(const DataflowGraph &g, const TechProfile &profile, double bw);

void write_graph(std::ostream &out, const DataflowGraph &g);
DataflowGraph read_graph(std::istream &in);

std::string characterization_csv_header();
std::string characterization_csv_row(const std::string &circuit, const Characterization &c);

}  // namespace qfabric

#endif
