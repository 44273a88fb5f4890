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

#include "qfabric/mc.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <complex>

using namespace qfabric;

namespace {

using Mat = std::array<std::array<std::complex<double>, 4>, 4>;
using Mat2 = std::array<std::array<std::complex<double>, 2>, 2>;

Mat kron(const Mat2 &a, const Mat2 &b) {
    Mat m{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) m[2 * i + k][2 * j + l] = a[i][j] * b[k][l];
    return m;
}

Mat mul(const Mat &a, const Mat &b) {
    Mat m{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k) m[i][j] += a[i][k] * b[k][j];
    return m;
}

Mat dagger(const Mat &a) {
    Mat m{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) m[i][j] = std::conj(a[j][i]);
    return m;
}

Mat2 pauli_matrix(int p) {
    const std::complex<double> i1(0, 1);
    switch (p) {
        case 1: return Mat2{{{0, 1}, {1, 0}}};
        case 2: return Mat2{{{1, 0}, {0, -1}}};
        case 3: return Mat2{{{0, -i1}, {i1, 0}}};
        default: return Mat2{{{1, 0}, {0, 1}}};
    }
}

// Qubit 0 is the most significant tensor factor.
Mat two_qubit_pauli(int p0, int p1) { return kron(pauli_matrix(p0), pauli_matrix(p1)); }

// Finds the Pauli equal to m up to a global phase.
std::pair<int, int> identify(const Mat &m) {
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            Mat p = two_qubit_pauli(a, b);
            std::complex<double> ratio = 0;
            bool ok = true;
            for (int i = 0; i < 4 && ok; ++i) {
                for (int j = 0; j < 4 && ok; ++j) {
                    if (std::abs(p[i][j]) < 1e-9) {
                        ok = std::abs(m[i][j]) < 1e-9;
                    } else {
                        auto r = m[i][j] / p[i][j];
                        if (ratio == std::complex<double>(0)) ratio = r;
                        ok = std::abs(r - ratio) < 1e-9;
                    }
                }
            }
            if (ok) return {a, b};
        }
    }
    return {-1, -1};
}

Mat gate_matrix(const PhysOp &op) {
    const double r = 1 / std::sqrt(2.0);
    Mat2 id = pauli_matrix(0);
    Mat2 h{{{r, r}, {r, -r}}};
    Mat2 s{{{1, 0}, {0, std::complex<double>(0, 1)}}};
    Mat2 single = op.kind == OpKind::H ? h : s;
    if (op.kind == OpKind::CX) {
        Mat m{};
        for (int i = 0; i < 4; ++i) {
            int b0 = i >> 1, b1 = i & 1;
            int out;
            if (op.qubits[0] == 0) out = b0 << 1 | (b1 ^ b0);
            else out = (b0 ^ b1) << 1 | b1;
            m[out][i] = 1;
        }
        return m;
    }
    return op.qubits[0] == 0 ? kron(single, id) : kron(id, single);
}

int pauli_bits(int p) { return p == 3 ? 3 : p; }  // X=1, Z=2, Y=3 in both encodings

PhysicalCircuit identity_block_circuit() {
    PhysicalCircuit c;
    c.num_qubits = 7;
    for (std::uint32_t q = 0; q < 7; ++q) c.outputs.push_back(q);
    return c;
}

}  // namespace

TEST(mc, propagate_matches_conjugation_oracle) {
    std::vector<PhysOp> ops = {
        {OpKind::H, {0, 0}, 1, 0, -1}, {OpKind::H, {1, 0}, 1, 0, -1}, {OpKind::S, {0, 0}, 1, 0, -1},
        {OpKind::S, {1, 0}, 1, 0, -1}, {OpKind::CX, {0, 1}, 2, 0, -1}, {OpKind::CX, {1, 0}, 2, 0, -1},
    };
    for (const auto &op : ops) {
        Mat u = gate_matrix(op);
        for (int a = 0; a < 4; ++a) {
            for (int b = 0; b < 4; ++b) {
                auto [ea, eb] = identify(mul(mul(u, two_qubit_pauli(a, b)), dagger(u)));
                ASSERT_GE(ea, 0);
                PauliFrame f(2);
                f.apply(0, static_cast<Pauli>(pauli_bits(a)));
                f.apply(1, static_cast<Pauli>(pauli_bits(b)));
                auto g = propagate(f, op);
                ASSERT_EQ(static_cast<int>(g.at(0)), pauli_bits(ea)) << op_kind_name(op.kind) << " " << a << b;
                ASSERT_EQ(static_cast<int>(g.at(1)), pauli_bits(eb)) << op_kind_name(op.kind) << " " << a << b;
            }
        }
    }
}

TEST(mc, propagate_transparent_and_prep) {
    PauliFrame f(2);
    f.apply(0, Pauli::Y);
    for (auto kind : {OpKind::T, OpKind::X, OpKind::Z, OpKind::measure, OpKind::move, OpKind::turn})
        ASSERT_EQ(propagate(f, PhysOp{kind, {0, 0}, 1, 0, -1}), f);
    ASSERT_TRUE(propagate(f, PhysOp{OpKind::prep0, {0, 0}, 1, 0, -1}).is_identity());
    PauliFrame id(2);
    ASSERT_TRUE(propagate(id, PhysOp{OpKind::CX, {0, 1}, 2, 0, -1}).is_identity());
}

TEST(mc, classify_exhaustive_weight_two) {
    // Oracle: minimum weight over the stabilizer coset of each part.
    std::vector<std::uint8_t> stabilizers;
    const std::uint8_t rows[3] = {0b1010101, 0b1100110, 0b1111000};
    for (int m = 0; m < 8; ++m) {
        std::uint8_t s = 0;
        for (int r = 0; r < 3; ++r)
            if (m >> r & 1) s ^= rows[r];
        stabilizers.push_back(s);
    }
    auto min_weight = [&](std::uint8_t p) {
        int best = 99;
        for (auto s : stabilizers) best = std::min(best, __builtin_popcount(p ^ s));
        return best;
    };
    std::vector<std::uint8_t> patterns;
    for (int p = 0; p < 128; ++p)
        if (__builtin_popcount(p) <= 2) patterns.push_back(static_cast<std::uint8_t>(p));
    ASSERT_EQ(patterns.size(), 29u);
    for (auto xp : patterns) {
        for (auto zp : patterns) {
            Outcome want = Outcome::corrected;
            if (xp == 0 && zp == 0) want = Outcome::clean;
            if (min_weight(xp) >= 2 || min_weight(zp) >= 2) want = Outcome::logical_error;
            PauliFrame f(7);
            for (int i = 0; i < 7; ++i) {
                f.x[i] = xp >> i & 1;
                f.z[i] = zp >> i & 1;
            }
            ASSERT_EQ(classify(f), want) << int(xp) << " " << int(zp);
        }
    }
}

TEST(mc, noiseless_runs_are_clean) {
    auto quiet = TechProfile::ion_trap_default().with("p_gate", 0).with("p_move", 0);
    for (auto v : {PrepVariant::basic, PrepVariant::correct_only, PrepVariant::verify_only,
                   PrepVariant::verify_correct}) {
        auto s = run_trials(prep_variant(v), 1000, quiet, 1);
        ASSERT_EQ(s.accepted, 1000u);
        ASSERT_EQ(s.logical_errors, 0u);
        ASSERT_EQ(run_with_faults(prep_variant(v), {}).outcome, Outcome::clean);
    }
}

TEST(mc, inject_statistics) {
    auto p = TechProfile::ion_trap_default().with("p_gate", 0.01).with("p_move", 0.002);
    PhysOp gate{OpKind::CX, {0, 1}, 2, 0, -1};
    PhysOp move{OpKind::move, {0, 0}, 1, 0, -1};
    const int n = 200000;
    int gate_faults = 0, move_faults = 0;
    std::array<int, 4> kinds{};
    for (int t = 0; t < n; ++t) {
        TrialRng rng(99, t);
        if (auto f = inject(gate, p, rng)) {
            ++gate_faults;
            ASSERT_EQ(f->count, 2);
            ++kinds[static_cast<int>(f->paulis[0])];
        }
        if (inject(move, p, rng)) ++move_faults;
    }
    auto within = [](int k, double mean) { return std::abs(k - mean) <= 5 * std::sqrt(mean); };
    ASSERT_TRUE(within(gate_faults, n * 0.01));
    ASSERT_TRUE(within(move_faults, n * 0.002));
    ASSERT_EQ(kinds[0], 0);
    for (int k = 1; k < 4; ++k) ASSERT_TRUE(within(kinds[k], gate_faults / 3.0));

    TrialRng rng(1, 1);
    auto silent = TechProfile::ion_trap_default().with("p_gate", 0).with("p_move", 0);
    for (int t = 0; t < 1000; ++t) ASSERT_FALSE(inject(gate, silent, rng).has_value());
    ASSERT_EQ(fault_probability(move, TechProfile::ion_trap_default()), 1e-6);
}

TEST(mc, measurement_fault_flips_outcome) {
    auto c = prep_variant(PrepVariant::verify_only);
    std::size_t first_meas = 0;
    while (c.ops[first_meas].kind != OpKind::measure) ++first_meas;
    Fault f;
    f.count = 1;
    f.qubits[0] = c.ops[first_meas].qubits[0];
    f.paulis[0] = Pauli::X;
    ASSERT_FALSE(run_with_faults(c, {{first_meas, f}}).accepted);
}

TEST(mc, single_output_errors_are_corrected) {
    auto c = basic_zero_prep();
    std::size_t last = c.ops.size() - 1;
    Fault f;
    f.count = 2;
    f.qubits = c.ops[last].qubits;
    f.paulis = {Pauli::Y, Pauli::I};
    ASSERT_EQ(run_with_faults(c, {{last, f}}).outcome, Outcome::corrected);
}

TEST(mc, correction_repairs_target_errors) {
    // A fault on the kept block right after encoding is removed by the correction rounds.
    auto c = prep_variant(PrepVariant::correct_only);
    const auto &seg = c.segments[1];
    ASSERT_EQ(seg.label, "basic");
    std::size_t last = seg.end - 1;
    Fault f;
    f.count = 2;
    f.qubits = c.ops[last].qubits;
    // Coset decoding leaves a stabilizer at worst.
    f.paulis = {Pauli::X, Pauli::X};
    ASSERT_EQ(run_with_faults(c, {{last, f}}).outcome, Outcome::corrected);
    f.paulis = {Pauli::Z, Pauli::I};
    ASSERT_TRUE(run_with_faults(c, {{last, f}}).output_frame.is_identity());
    // Weight-2 Z leaves a logical Z residual: the phase round decodes single errors only.
    f.paulis = {Pauli::Y, Pauli::Y};
    auto r = run_with_faults(c, {{last, f}});
    std::uint8_t xp = 0;
    for (int i = 0; i < 7; ++i) xp |= static_cast<std::uint8_t>(r.output_frame.x[i] << i);
    ASSERT_EQ(hamming_syndrome(xp), 0);
    ASSERT_FALSE(is_logical_pattern(xp));
    ASSERT_EQ(r.outcome, Outcome::logical_error);
}

TEST(mc, determinism_and_splitting) {
    auto c = prep_variant(PrepVariant::verify_only);
    auto p = TechProfile::ion_trap_default().scaled_errors(20);
    auto a = run_trials(c, 40000, p, 5, 1);
    auto b = run_trials(c, 40000, p, 5, 3);
    ASSERT_EQ(a, b);
    auto merged = run_trial_range(c, 0, 20000, p, 5);
    merged += run_trial_range(c, 20000, 20000, p, 5);
    ASSERT_EQ(merged, a);
    ASSERT_NE(run_trials(c, 40000, p, 6, 2), a);
}

TEST(mc, errors) {
    PhysicalCircuit empty;
    empty.num_qubits = 1;
    ASSERT_THROW(run_trials(empty, 10, TechProfile::ion_trap_default(), 0), std::invalid_argument);
    ASSERT_THROW(run_trials(basic_zero_prep(), 0, TechProfile::ion_trap_default(), 0), std::invalid_argument);
    ASSERT_THROW(classify(PauliFrame(3)), std::invalid_argument);
    ASSERT_EQ(run_with_faults(identity_block_circuit(), {}).outcome, Outcome::clean);
}

TEST(mc, first_order_scaling) {
    auto base = TechProfile::ion_trap_default();
    auto c = basic_zero_prep();
    auto lo = run_trials(c, 400000, base, 11);
    auto hi = run_trials(c, 400000, base.scaled_errors(10), 11);
    double ratio = hi.rate() / lo.rate();
    ASSERT_GE(ratio, 5.0);
    ASSERT_LE(ratio, 20.0);
}

TEST(mc, wilson) {
    auto ci = wilson_interval(0, 100);
    ASSERT_EQ(ci.low, 0.0);
    ASSERT_NEAR(ci.high, 0.0370, 1e-4);
    auto mid = wilson_interval(50, 100);
    ASSERT_NEAR(mid.low, 0.4038, 1e-4);
    ASSERT_NEAR(mid.high, 0.5962, 1e-4);
}

TEST(mc, csv_row) {
    ErrorStats s{1000, 998, 2};
    ASSERT_EQ(stats_csv_header(), "circuit,variant,trials,accepted,logical_errors,rate,ci_low,ci_high");
    auto row = stats_csv_row("zero_prep", "verify_only", s);
    ASSERT_EQ(row.rfind("zero_prep,verify_only,1000,998,2,2.004008e-03,", 0), 0u);
}
