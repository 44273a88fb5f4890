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

#include "qfabric/factory.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace qfabric {

namespace {

using K = LatencyKind;

constexpr double kVerifySurvival = 0.998;
constexpr int kMaxUnits = 1000000;

StageSpec spec(std::string name, SymbolicLatency expr, int stages, int in, int out, double survival, int area,
               int height, double load, MatchRole role, int level) {
    StageSpec s;
    s.name = std::move(name);
    s.latency_expr = expr;
    s.internal_stages = stages;
    s.qubits_per_set = std::max(in, out);
    s.in_qubits_per_set = in;
    s.out_qubits_per_set = out;
    s.survival = survival;
    s.unit_area = area;
    s.unit_height = height;
    s.load = load;
    s.role = role;
    s.level = level;
    return s;
}

std::string fmt(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

FactoryDesign assemble(std::string kind, std::vector<StageSpec> specs, const std::vector<int> &columns,
                       double yield, const TechProfile &profile) {
    FactoryDesign d;
    d.kind = std::move(kind);
    d.yield = yield;
    auto units = match_units(specs, profile);
    int levels = 0;
    for (std::size_t i = 0; i < specs.size(); ++i) {
        d.stages.push_back(FactoryStage{specs[i], units[i], stage_metrics(specs[i], profile)});
        levels = std::max(levels, specs[i].level + 1);
    }
    std::vector<int> level_height(levels, 0);
    std::vector<Micros> level_latency(levels, 0);
    d.item_flow = 1e300;
    for (const auto &st : d.stages) {
        level_height[st.spec.level] += st.total_height();
        level_latency[st.spec.level] = std::max(level_latency[st.spec.level], st.metrics.latency);
        d.functional_area += st.total_area();
        d.item_flow = std::min(d.item_flow, stage_item_capacity(st.spec, st.units, profile));
    }
    if (columns.size() + 1 != static_cast<std::size_t>(levels))
        throw std::invalid_argument("one crossbar column count per level boundary");
    d.output_latency = 0;
    for (auto l : level_latency) d.output_latency += l;
    for (int b = 0; b + 1 < levels; ++b) {
        int h = std::max(level_height[b], level_height[b + 1]);
        d.crossbar_heights.push_back(h);
        d.crossbar_columns.push_back(columns[b]);
        d.crossbar_areas.push_back(h * columns[b]);
        d.crossbar_latency.push_back(profile.t_move() * h / 2 + profile.t_turn());
        d.output_latency += d.crossbar_latency.back();
    }
    d.total_area = d.functional_area + d.crossbar_area();
    d.throughput = d.item_flow * yield;
    return d;
}

}  // namespace

StageMetrics stage_metrics(const StageSpec &s, const TechProfile &profile) {
    if (!(s.survival > 0 && s.survival <= 1)) throw std::invalid_argument("survival must lie in (0, 1]");
    if (s.internal_stages < 1) throw std::invalid_argument("a unit has at least one internal stage");
    StageMetrics m;
    m.latency = eval_latency(s.latency_expr, profile);
    if (m.latency <= 0) throw std::invalid_argument("stage latency must be positive");
    double per_ms = 1000.0 * s.internal_stages / static_cast<double>(m.latency);
    m.in_bw = s.in_qubits_per_set * per_ms;
    m.out_bw = s.out_qubits_per_set * s.survival * per_ms;
    m.area = s.unit_area;
    return m;
}

double stage_item_capacity(const StageSpec &s, int units, const TechProfile &profile) {
    if (!(s.load > 0)) throw std::invalid_argument("stage load must be positive");
    return units * stage_metrics(s, profile).in_bw / s.load;
}

std::vector<int> match_units(const std::vector<StageSpec> &stages, const TechProfile &profile) {
    if (stages.empty()) throw std::invalid_argument("pipeline has no stages");
    std::vector<int> units(stages.size(), 0);
    std::ptrdiff_t anchor = -1;
    for (std::size_t i = 0; i < stages.size(); ++i) {
        if (stages[i].role != MatchRole::anchor) continue;
        if (anchor >= 0) throw ModelError("pipeline has more than one anchor stage");
        anchor = static_cast<std::ptrdiff_t>(i);
    }
    if (anchor < 0) throw ModelError("pipeline has no anchor stage");
    units[anchor] = 1;
    double anchor_rate = stage_item_capacity(stages[anchor], 1, profile);
    double flow = anchor_rate;

    auto checked = [&](double want, const StageSpec &s) {
        if (!std::isfinite(want) || want > kMaxUnits) throw ModelError("stage '" + s.name + "' needs an unbounded unit count");
        return static_cast<int>(want);
    };
    for (std::size_t i = 0; i < stages.size(); ++i) {
        if (stages[i].role != MatchRole::fit) continue;
        double unit_cap = stage_item_capacity(stages[i], 1, profile);
        units[i] = std::max(1, checked(std::floor(anchor_rate / unit_cap + 1e-9), stages[i]));
        flow = std::min(flow, units[i] * unit_cap);
    }
    for (std::size_t i = 0; i < stages.size(); ++i) {
        if (stages[i].role != MatchRole::cover) continue;
        double unit_cap = stage_item_capacity(stages[i], 1, profile);
        units[i] = std::max(1, checked(std::ceil(flow / unit_cap - 1e-9), stages[i]));
    }
    return units;
}

int FactoryDesign::crossbar_area() const {
    int a = 0;
    for (auto x : crossbar_areas) a += x;
    return a;
}

std::vector<StageSpec> zero_factory_stages() {
    // A pipeline item is one candidate block: 7 encoded qubits plus a 3-qubit cat.
    const double s = kVerifySurvival;
    return {
        spec("Zero Prep", {{K::prep, 1}, {K::one_qubit, 1}, {K::turn, 2}, {K::move, 1}}, 1, 1, 1, 1.0, 1, 1, 10,
             MatchRole::cover, 0),
        spec("CX Stage", {{K::two_qubit, 3}, {K::turn, 6}, {K::move, 5}}, 3, 7, 7, 1.0, 28, 4, 7, MatchRole::anchor, 1),
        spec("Cat State Prep", {{K::two_qubit, 2}, {K::turn, 4}, {K::move, 2}}, 2, 3, 3, 1.0, 6, 2, 3,
             MatchRole::cover, 1),
        spec("Verification", {{K::measure, 1}, {K::two_qubit, 1}, {K::turn, 2}, {K::move, 2}}, 1, 10, 7, s, 10, 10, 10,
             MatchRole::cover, 2),
        spec("B/P Correction", {{K::measure, 1}, {K::two_qubit, 2}, {K::turn, 6}, {K::move, 8}}, 1, 21, 7, 1.0, 21, 21,
             7 * s, MatchRole::cover, 3),
    };
}

std::vector<StageSpec> pi8_factory_stages() {
    // A pipeline item is one pi/8 ancilla: an encoded zero plus a 7-qubit cat.
    SymbolicLatency cat{{K::two_qubit, 7}, {K::turn, 14}, {K::move, 8}};
    return {
        spec("Cat State Prepare", cat, 1, 7, 7, 1.0, 12, 6, 7, MatchRole::fit, 0),
        spec("Transversal CX/CS/CZ/pi/8", {{K::two_qubit, 3}, {K::turn, 2}, {K::move, 3}}, 1, 14, 14, 1.0, 7, 7, 14,
             MatchRole::anchor, 1),
        spec("Decode (plus Store)", cat, 1, 14, 8, 1.0, 19, 13, 14, MatchRole::cover, 2),
        spec("H/M/Transversal Z", {{K::measure, 1}, {K::one_qubit, 2}, {K::turn, 2}, {K::move, 2}}, 1, 8, 7, 1.0, 8, 8,
             8, MatchRole::cover, 3),
    };
}

SymbolicLatency simple_factory_latency() {
    return {{K::prep, 1}, {K::measure, 2}, {K::two_qubit, 6}, {K::one_qubit, 2}, {K::turn, 8}, {K::move, 30}};
}

FactoryDesign build_simple_factory(const TechProfile &profile) {
    // Three gate rows and six channel rows, ten macroblocks wide; one ancilla
    // (three candidate blocks of 10 qubits) in flight at a time.
    auto s = spec("Simple Factory", simple_factory_latency(), 1, 30, 7, 1.0, 90, 9, 30, MatchRole::anchor, 0);
    return assemble("simple", {s}, {}, 1.0, profile);
}

FactoryDesign build_zero_factory(const TechProfile &profile) {
    // Stage 1 funnels into the small Stage 2, so that crossbar has one column.
    return assemble("zero", zero_factory_stages(), {1, 2, 2}, kVerifySurvival / 3.0, profile);
}

FactoryDesign build_pi8_factory(const TechProfile &profile) {
    auto d = assemble("pi8", pi8_factory_stages(), {2, 2, 2}, 1.0, profile);
    d.zero_input_rate = d.throughput;
    return d;
}

FactoryDesign build_factory(const std::string &kind, const TechProfile &profile) {
    if (kind == "simple") return build_simple_factory(profile);
    if (kind == "zero") return build_zero_factory(profile);
    if (kind == "pi8") return build_pi8_factory(profile);
    throw std::invalid_argument("unknown factory kind: " + kind);
}

double AreaBreakdown::data_percent() const { return total() > 0 ? 100.0 * data_area / total() : 0.0; }
double AreaBreakdown::qec_percent() const { return total() > 0 ? 100.0 * qec_factory_area / total() : 0.0; }
double AreaBreakdown::pi8_percent() const { return total() > 0 ? 100.0 * pi8_factory_area / total() : 0.0; }

AreaBreakdown area_for_bandwidth(double zero_bw, double pi8_bw, const TechProfile &profile, double data_area) {
    if (zero_bw < 0 || pi8_bw < 0 || data_area < 0) throw std::invalid_argument("bandwidths must be non-negative");
    auto zero = build_zero_factory(profile);
    auto pi8 = build_pi8_factory(profile);
    AreaBreakdown a;
    a.data_area = data_area;
    a.qec_factory_area = zero_bw / zero.throughput * zero.total_area;
    a.pi8_factory_area = pi8_bw / pi8.throughput * pi8.total_area + pi8_bw / zero.throughput * zero.total_area;
    return a;
}

PhysicalCircuit insert_movement(const PhysicalCircuit &c, const std::vector<MovementPhase> &phases) {
    std::vector<MovementPhase> sorted = phases;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const auto &a, const auto &b) { return a.before_slot < b.before_slot; });
    PhysicalCircuit out = c;
    out.ops.clear();
    std::vector<std::size_t> emitted(c.num_qubits, 0);
    std::vector<bool> active(c.num_qubits, false);
    std::vector<std::size_t> new_begin(c.ops.size() + 1, 0);

    auto emit_phase = [&](std::uint32_t q, const MovementPhase &ph) {
        for (int i = 0; i < ph.turns; ++i) out.ops.push_back(PhysOp{OpKind::turn, {q, 0}, 1, 0, -1});
        for (int i = 0; i < ph.moves; ++i) out.ops.push_back(PhysOp{OpKind::move, {q, 0}, 1, 0, -1});
    };
    for (std::size_t i = 0; i < c.ops.size(); ++i) {
        const auto &op = c.ops[i];
        new_begin[i] = out.ops.size();
        for (std::uint8_t k = 0; k < op.arity; ++k) {
            auto q = op.qubits[k];
            active[q] = true;
            while (emitted[q] < sorted.size() && sorted[emitted[q]].before_slot <= op.timeslot)
                emit_phase(q, sorted[emitted[q]++]);
        }
        out.ops.push_back(op);
    }
    // Qubits idle at the end still make the remaining trips.
    for (std::uint32_t q = 0; q < c.num_qubits; ++q)
        while (active[q] && emitted[q] < sorted.size()) emit_phase(q, sorted[emitted[q]++]);
    new_begin[c.ops.size()] = out.ops.size();
    for (auto &s : out.segments) {
        s.begin = new_begin[s.begin];
        s.end = s.end == c.ops.size() ? out.ops.size() : new_begin[s.end];
    }

    std::vector<std::int64_t> ready(c.num_qubits, -1), meas_time;
    for (auto &op : out.ops) {
        std::int64_t slot = ready[op.qubits[0]] + 1;
        if (op.arity == 2) slot = std::max(slot, ready[op.qubits[1]] + 1);
        if (op.conditional_on >= 0) slot = std::max(slot, meas_time[op.conditional_on] + 1);
        op.timeslot = slot;
        for (std::uint8_t k = 0; k < op.arity; ++k) ready[op.qubits[k]] = slot;
        if (op.kind == OpKind::measure) meas_time.push_back(slot);
    }
    validate(out);
    return out;
}

PhysicalCircuit movement_annotated_basic_prep(const TechProfile &profile) {
    auto design = build_zero_factory(profile);
    const auto &zp = design.stages[0].spec.latency_expr;
    const auto &cx = design.stages[1].spec.latency_expr;
    auto basic = basic_zero_prep();

    std::vector<std::int64_t> rounds;
    for (const auto &op : basic.ops)
        if (op.kind == OpKind::CX && (rounds.empty() || rounds.back() != op.timeslot)) rounds.push_back(op.timeslot);
    auto n = static_cast<int>(rounds.size());

    std::vector<MovementPhase> phases;
    for (int r = 0; r < n; ++r) {
        MovementPhase ph{rounds[r], 0, 0};
        // The CX unit's moves and turns, spread over its rounds.
        ph.moves = static_cast<int>((cx.coeff(K::move) + n - 1 - r) / n);
        ph.turns = static_cast<int>((cx.coeff(K::turn) + n - 1 - r) / n);
        if (r == 0) {
            ph.moves += static_cast<int>(zp.coeff(K::move)) + design.crossbar_heights[0] / 2;
            ph.turns += static_cast<int>(zp.coeff(K::turn)) + 1;
        }
        phases.push_back(ph);
    }
    return insert_movement(basic, phases);
}

std::string factory_csv(const FactoryDesign &d) {
    std::ostringstream out;
    out << "stage,name,units,latency_us,in_bw,out_bw,area\n";
    int units = 0;
    for (const auto &st : d.stages) {
        units += st.units;
        out << st.spec.level + 1 << ',' << st.spec.name << ',' << st.units << ',' << st.metrics.latency << ','
            << fmt(st.units * st.metrics.in_bw, 1) << ',' << fmt(st.units * st.metrics.out_bw, 1) << ','
            << st.total_area() << '\n';
    }
    for (std::size_t b = 0; b < d.crossbar_areas.size(); ++b) {
        out << "xbar" << b + 1 << ",crossbar," << d.crossbar_columns[b] << ',' << d.crossbar_latency[b] << ",,,"
            << d.crossbar_areas[b] << '\n';
    }
    out << "total," << d.kind << ',' << units << ',' << d.output_latency << ",," << fmt(d.throughput, 3) << ','
        << d.total_area << '\n';
    return out.str();
}

std::string factory_table(int table, const TechProfile &profile) {
    static const std::map<std::string, std::string> count_names = {{"Zero Prep", "Zero Prepare"},
                                                                   {"Cat State Prep", "Cat State Prepare"}};
    std::ostringstream out;
    switch (table) {
        case 5:
        case 7: {
            auto specs = table == 5 ? zero_factory_stages() : pi8_factory_stages();
            out << (table == 5 ? "Functional Unit,Symbolic Latency,Latency (us),Stages,In BW,Out BW,Area\n"
                               : "Stage,Symbolic Latency,Latency (us),In BW,Out BW,Area\n");
            for (const auto &s : specs) {
                auto m = stage_metrics(s, profile);
                out << s.name << ',' << s.latency_expr.to_string() << ',' << m.latency << ',';
                if (table == 5) out << s.internal_stages << ',';
                out << fmt(m.in_bw, 1) << ',' << fmt(m.out_bw, 1) << ',' << m.area << '\n';
            }
            break;
        }
        case 6:
        case 8: {
            auto d = table == 6 ? build_zero_factory(profile) : build_pi8_factory(profile);
            out << (table == 6 ? "Functional Unit" : "Stage") << ",Unit Count,Total Height,Total Area\n";
            for (const auto &st : d.stages) {
                auto it = count_names.find(st.spec.name);
                out << (table == 6 && it != count_names.end() ? it->second : st.spec.name) << ',' << st.units << ','
                    << st.total_height() << ',' << st.total_area() << '\n';
            }
            break;
        }
        default: throw std::invalid_argument("factory tables are 5, 6, 7 and 8");
    }
    return out.str();
}

}  // namespace qfabric
