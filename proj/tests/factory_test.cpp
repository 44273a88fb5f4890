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

#include <gtest/gtest.h>

#include <cmath>

#include "qfabric/mc.hpp"

using namespace qfabric;

namespace {

const TechProfile kIon = TechProfile::ion_trap_default();

// Physical qubits per ms for `qubits` per set, `stages` sets in flight, latency in us.
double bw(int qubits, int stages, double latency, double survival = 1.0) {
    return qubits * survival * stages / latency * 1000.0;
}

}  // namespace

TEST(factory, zero_stage_rows) {
    auto specs = zero_factory_stages();
    ASSERT_EQ(specs.size(), 5u);
    const Micros latency[] = {73, 95, 62, 82, 138};
    const double in[] = {13.7, 221.1, 96.8, 122.0, 152.2};
    const double out[] = {13.7, 221.1, 96.8, 85.2, 50.7};
    const int area[] = {1, 28, 6, 10, 21};
    for (std::size_t i = 0; i < specs.size(); ++i) {
        auto m = stage_metrics(specs[i], kIon);
        ASSERT_EQ(m.latency, latency[i]) << specs[i].name;
        ASSERT_NEAR(m.in_bw, in[i], 0.05) << specs[i].name;
        ASSERT_NEAR(m.out_bw, out[i], 0.05) << specs[i].name;
        ASSERT_EQ(m.area, area[i]);
    }
    auto cx = stage_metrics(specs[1], kIon);
    ASSERT_DOUBLE_EQ(cx.in_bw, bw(7, 3, 95));
    ASSERT_DOUBLE_EQ(stage_metrics(specs[3], kIon).out_bw, bw(7, 1, 82, 0.998));
}

TEST(factory, pi8_stage_rows) {
    auto specs = pi8_factory_stages();
    const Micros latency[] = {218, 53, 218, 74};
    const double in[] = {32.1, 264.2, 64.2, 108.1};
    const double out[] = {32.1, 264.2, 36.7, 94.6};
    const int area[] = {12, 7, 19, 8};
    for (std::size_t i = 0; i < specs.size(); ++i) {
        auto m = stage_metrics(specs[i], kIon);
        ASSERT_EQ(m.latency, latency[i]) << specs[i].name;
        ASSERT_NEAR(m.in_bw, in[i], 0.05) << specs[i].name;
        ASSERT_NEAR(m.out_bw, out[i], 0.05) << specs[i].name;
        ASSERT_EQ(m.area, area[i]);
    }
}

TEST(factory, unit_counts) {
    ASSERT_EQ(match_units(zero_factory_stages(), kIon), (std::vector<int>{24, 1, 1, 3, 2}));
    ASSERT_EQ(match_units(pi8_factory_stages(), kIon), (std::vector<int>{4, 1, 4, 2}));
    auto single = zero_factory_stages();
    single.resize(2);
    single.erase(single.begin());
    ASSERT_EQ(match_units(single, kIon), std::vector<int>{1});
}

TEST(factory, zero_matching_by_hand) {
    // Candidate blocks per ms through one CX unit, then each stage's need.
    double flow = bw(7, 3, 95) / 7;
    ASSERT_EQ(std::ceil(flow * 10 / bw(1, 1, 73)), 24);
    ASSERT_EQ(std::ceil(flow * 3 / bw(3, 2, 62)), 1);
    ASSERT_EQ(std::ceil(flow * 10 / bw(10, 1, 82)), 3);
    ASSERT_EQ(std::ceil(flow * 7 * 0.998 / bw(21, 1, 138)), 2);
}

TEST(factory, matching_is_minimal) {
    for (const auto &specs : {zero_factory_stages(), pi8_factory_stages()}) {
        auto units = match_units(specs, kIon);
        double flow = 1e300;
        for (std::size_t i = 0; i < specs.size(); ++i)
            flow = std::min(flow, stage_item_capacity(specs[i], units[i], kIon));
        double anchor_cap = 0;
        for (std::size_t i = 0; i < specs.size(); ++i)
            if (specs[i].role == MatchRole::anchor) anchor_cap = stage_item_capacity(specs[i], 1, kIon);
        for (std::size_t i = 0; i < specs.size(); ++i) {
            ASSERT_GE(stage_item_capacity(specs[i], units[i], kIon), flow - 1e-9);
            if (specs[i].role == MatchRole::cover && units[i] > 1)
                ASSERT_LT(stage_item_capacity(specs[i], units[i] - 1, kIon), flow - 1e-9) << specs[i].name;
            if (specs[i].role == MatchRole::fit)
                ASSERT_GT(stage_item_capacity(specs[i], units[i] + 1, kIon), anchor_cap) << specs[i].name;
        }
    }
}

TEST(factory, zero_factory) {
    auto d = build_zero_factory(kIon);
    ASSERT_EQ(d.crossbar_areas, (std::vector<int>{24, 60, 84}));
    ASSERT_EQ(d.crossbar_area(), 168);
    ASSERT_EQ(d.functional_area, 130);
    ASSERT_EQ(d.total_area, 298);
    ASSERT_NEAR(d.throughput, 221.1 / 7 * 0.998 / 3, 0.01);
    ASSERT_NEAR(d.throughput, 10.5, 0.1);
    // 73 + 95 + 82 + 138 plus three crossbar trips.
    ASSERT_EQ(d.output_latency, 388 + (12 + 10) + (15 + 10) + (21 + 10));
}

TEST(factory, pi8_factory) {
    auto d = build_pi8_factory(kIon);
    ASSERT_EQ(d.crossbar_areas, (std::vector<int>{48, 104, 104}));
    ASSERT_EQ(d.crossbar_area(), 256);
    ASSERT_EQ(d.functional_area, 147);
    ASSERT_EQ(d.total_area, 403);
    ASSERT_NEAR(d.throughput, 4 * bw(7, 1, 218) / 7, 1e-9);
    ASSERT_NEAR(d.throughput, 18.3, 0.1);
    ASSERT_EQ(d.zero_input_rate, d.throughput);
}

TEST(factory, simple_factory) {
    auto d = build_simple_factory(kIon);
    ASSERT_EQ(d.output_latency, 323);
    ASSERT_EQ(d.total_area, 90);
    ASSERT_NEAR(d.throughput, 3.1, 0.05);
    ASSERT_DOUBLE_EQ(d.throughput, 1000.0 / 323);
    auto z = build_zero_factory(kIon);
    double ratio = (d.throughput / d.total_area) / (z.throughput / z.total_area);
    ASSERT_NEAR(ratio, 1.0, 0.05);
    ASSERT_THROW(build_factory("steam", kIon), std::invalid_argument);
}

TEST(factory, slower_turns_shift_latencies) {
    auto slow = kIon.with("t_turn", 20);
    auto d = build_zero_factory(slow);
    ASSERT_EQ(d.stages[1].metrics.latency, 95 + 60);
    ASSERT_EQ(d.total_area, d.functional_area + d.crossbar_area());
    ASSERT_EQ(d.stages[1].units, 1);
}

TEST(factory, table9_areas) {
    struct Row {
        double zero, pi8, qec_area, pi8_area;
    };
    const Row rows[] = {{34.8, 7.0, 986.9, 354.7}, {306.1, 62.7, 8682.2, 3154.4}, {36.8, 8.6, 1043.5, 433.7}};
    for (const auto &r : rows) {
        auto a = area_for_bandwidth(r.zero, r.pi8, kIon);
        ASSERT_NEAR(a.qec_factory_area / r.qec_area, 1.0, 0.01);
        ASSERT_NEAR(a.pi8_factory_area / r.pi8_area, 1.0, 0.02);
    }
    auto none = area_for_bandwidth(0, 0, kIon);
    ASSERT_EQ(none.total(), 0.0);
    auto one = area_for_bandwidth(build_zero_factory(kIon).throughput, 0, kIon);
    ASSERT_NEAR(one.qec_factory_area, 298.0, 1e-9);
    ASSERT_NEAR(area_for_bandwidth(10.507, 0, kIon).qec_factory_area, 298.0, 0.1);
    auto with_data = area_for_bandwidth(34.8, 7.0, kIon, 679);
    ASSERT_NEAR(with_data.data_percent() + with_data.qec_percent() + with_data.pi8_percent(), 100.0, 1e-9);
    ASSERT_THROW(area_for_bandwidth(-1, 0, kIon), std::invalid_argument);
}

TEST(factory, match_errors) {
    auto specs = zero_factory_stages();
    specs[1].role = MatchRole::cover;
    ASSERT_THROW(match_units(specs, kIon), ModelError);
    specs[1].role = MatchRole::anchor;
    specs[2].role = MatchRole::anchor;
    ASSERT_THROW(match_units(specs, kIon), ModelError);
    specs = zero_factory_stages();
    specs[0].load = 1e9;
    ASSERT_THROW(match_units(specs, kIon), ModelError);
    ASSERT_THROW(match_units({}, kIon), std::invalid_argument);
}

TEST(factory, movement_annotation) {
    auto c = movement_annotated_basic_prep(kIon);
    // Per qubit: Zero Prep (1 move, 2 turns), crossbar (12 moves, 1 turn), CX unit (5 moves, 6 turns).
    ASSERT_EQ(c.count(OpKind::move), 7u * 18);
    ASSERT_EQ(c.count(OpKind::turn), 7u * 9);
    ASSERT_EQ(c.count(OpKind::CX), 9u);
    validate(c);
    auto quiet = kIon.with("p_gate", 0).with("p_move", 0);
    ASSERT_EQ(run_trials(c, 100, quiet, 1).logical_errors, 0u);
    ASSERT_EQ(c.segments[0].begin, 0u);
    ASSERT_EQ(c.segments[0].end, c.ops.size());
}

TEST(factory, insert_movement_keeps_order) {
    auto base = prep_variant(PrepVariant::verify_only);
    auto moved = insert_movement(base, {{0, 1, 0}, {3, 2, 1}});
    validate(moved);
    ASSERT_EQ(moved.count(OpKind::move), 10u * 3);
    ASSERT_EQ(moved.count(OpKind::turn), 10u);
    ASSERT_EQ(moved.checks, base.checks);
    ASSERT_EQ(moved.count_segments("verify"), 1u);
}

TEST(factory, tables) {
    auto t5 = factory_table(5, kIon);
    ASSERT_NE(t5.find("CX Stage,3 t_2q + 6 t_turn + 5 t_move,95,3,221.1,221.1,28\n"), std::string::npos);
    ASSERT_NE(factory_table(6, kIon).find("Zero Prepare,24,24,24\n"), std::string::npos);
    ASSERT_NE(factory_table(7, kIon).find("Decode (plus Store),7 t_2q + 14 t_turn + 8 t_move,218,64.2,36.7,19\n"),
              std::string::npos);
    ASSERT_NE(factory_table(8, kIon).find("Decode (plus Store),4,52,76\n"), std::string::npos);
    ASSERT_THROW(factory_table(9, kIon), std::invalid_argument);
    auto csv = factory_csv(build_zero_factory(kIon));
    ASSERT_EQ(csv.rfind("stage,name,units,latency_us,in_bw,out_bw,area\n", 0), 0u);
    ASSERT_NE(csv.find("total,zero,31,466,,10.505,298\n"), std::string::npos);
}
