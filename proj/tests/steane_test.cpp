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

#include "qfabric/steane.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <bitset>
#include <map>
#include <set>
#include <sstream>

using namespace qfabric;

namespace {

// Pauli string over up to 32 qubits, signs dropped.
struct PauliString {
    std::uint32_t x = 0;
    std::uint32_t z = 0;
};

// Heisenberg-picture stabilizer tracking, written independently of the
// frame propagator: every prep adds Z_q, gates conjugate the generators.
std::vector<PauliString> evolve_stabilizers(const PhysicalCircuit &c) {
    std::vector<PauliString> gens;
    for (const auto &op : c.ops) {
        std::uint32_t a = 1u << op.qubits[0];
        auto conj = [&](PauliString &p) {
            bool px = p.x & a, pz = p.z & a;
            switch (op.kind) {
                case OpKind::H:
                    p.x = (p.x & ~a) | (pz ? a : 0);
                    p.z = (p.z & ~a) | (px ? a : 0);
                    break;
                case OpKind::CX: {
                    std::uint32_t t = 1u << op.qubits[1];
                    if (px) p.x ^= t;
                    if (p.z & t) p.z ^= a;
                    break;
                }
                default: break;
            }
        };
        if (op.kind == OpKind::prep0) {
            for (auto &g : gens) {
                g.x &= ~a;
                g.z &= ~a;
            }
            gens.push_back(PauliString{0, a});
            continue;
        }
        for (auto &g : gens) conj(g);
    }
    return gens;
}

// Rank over GF(2) of symplectic vectors packed as (x << 32) | z.
int gf2_rank(std::vector<std::uint64_t> rows) {
    int rank = 0;
    for (int bit = 63; bit >= 0; --bit) {
        std::uint64_t mask = 1ULL << bit;
        auto pivot = std::find_if(rows.begin() + rank, rows.end(), [&](auto r) { return r & mask; });
        if (pivot == rows.end()) continue;
        std::swap(*pivot, rows[rank]);
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (static_cast<int>(i) != rank && (rows[i] & mask)) rows[i] ^= rows[rank];
        ++rank;
    }
    return rank;
}

std::uint64_t pack(PauliString p) { return static_cast<std::uint64_t>(p.x) << 32 | p.z; }

// Generators of the logical-zero stabilizer group on a 7-qubit block.
std::vector<std::uint64_t> logical_zero_group(std::uint32_t offset) {
    std::vector<std::uint64_t> rows;
    for (int bit = 0; bit < 3; ++bit) {
        std::uint32_t support = 0;
        for (int pos = 1; pos <= 7; ++pos)
            if (pos >> bit & 1) support |= 1u << (pos - 1 + offset);
        rows.push_back(pack({support, 0}));
        rows.push_back(pack({0, support}));
    }
    rows.push_back(pack({0, 0x7Fu << offset}));
    return rows;
}

void expect_block_is_logical_zero(const PhysicalCircuit &c, std::uint32_t offset) {
    std::vector<std::uint64_t> gens;
    for (auto g : evolve_stabilizers(c)) gens.push_back(pack(g));
    int base = gf2_rank(gens);
    for (auto row : logical_zero_group(offset)) {
        auto with = gens;
        with.push_back(row);
        ASSERT_EQ(gf2_rank(with), base) << "block stabilizer missing";
    }
}

}  // namespace

TEST(steane, basic_zero_prep_structure) {
    auto c = basic_zero_prep();
    ASSERT_EQ(c.num_qubits, 7u);
    ASSERT_EQ(c.count(OpKind::prep0), 7u);
    ASSERT_EQ(c.count(OpKind::H), 3u);
    ASSERT_EQ(c.count(OpKind::CX), 9u);
    std::map<std::int64_t, std::vector<PhysOp>> rounds;
    for (const auto &op : c.ops)
        if (op.kind == OpKind::CX) rounds[op.timeslot].push_back(op);
    ASSERT_EQ(rounds.size(), 3u);
    for (const auto &[slot, ops] : rounds) {
        ASSERT_EQ(ops.size(), 3u);
        std::set<std::uint32_t> touched;
        for (const auto &op : ops) {
            touched.insert(op.qubits[0]);
            touched.insert(op.qubits[1]);
        }
        ASSERT_EQ(touched.size(), 6u) << "round at slot " << slot << " shares a qubit";
    }
}

TEST(steane, basic_zero_prep_stabilizes_logical_zero) {
    expect_block_is_logical_zero(basic_zero_prep(), 0);
}

TEST(steane, variants) {
    ASSERT_EQ(prep_variant(PrepVariant::basic), basic_zero_prep());

    auto vo = prep_variant(PrepVariant::verify_only);
    ASSERT_EQ(vo.num_qubits, 10u);
    ASSERT_EQ(vo.outputs.size(), 7u);
    ASSERT_EQ(vo.discards.size(), 3u);
    ASSERT_EQ(vo.checks.size(), 1u);
    expect_block_is_logical_zero(vo, 0);

    auto vc = prep_variant(PrepVariant::verify_correct);
    ASSERT_EQ(vc.count_segments("basic"), 3u);
    ASSERT_EQ(vc.count_segments("verify"), 3u);
    ASSERT_EQ(vc.corrections.size(), 2u);
    ASSERT_EQ(vc.num_qubits, 30u);

    auto co = prep_variant(PrepVariant::correct_only);
    ASSERT_EQ(co.count_segments("basic"), 3u);
    ASSERT_EQ(co.count_segments("verify"), 0u);
    ASSERT_EQ(co.checks.size(), 0u);
    ASSERT_EQ(co.corrections.size(), 2u);
}

TEST(steane, verification_measures_a_stabilizer) {
    // The measured cat parity is Z on positions 3, 4, 7, a logical Z,
    // which stabilizes the encoded zero.
    std::uint8_t support = 0b1001100;
    ASSERT_TRUE(is_logical_pattern(support));
}

TEST(steane, io_partition) {
    for (auto v : {PrepVariant::basic, PrepVariant::correct_only, PrepVariant::verify_only,
                   PrepVariant::verify_correct}) {
        auto c = prep_variant(v);
        std::set<std::uint32_t> out(c.outputs.begin(), c.outputs.end());
        std::set<std::uint32_t> dis(c.discards.begin(), c.discards.end());
        for (auto q : out) ASSERT_EQ(dis.count(q), 0u);
        for (const auto &op : c.ops)
            for (std::uint8_t k = 0; k < op.arity; ++k)
                ASSERT_TRUE(out.count(op.qubits[k]) || dis.count(op.qubits[k]));
    }
}

TEST(steane, cat_prep) {
    ASSERT_EQ(cat_prep(3).count(OpKind::CX), 2u);
    ASSERT_EQ(cat_prep(7).count(OpKind::CX), 6u);
    auto one = cat_prep(1);
    ASSERT_EQ(one.count(OpKind::CX), 0u);
    ASSERT_EQ(one.count(OpKind::H), 1u);
    ASSERT_THROW(cat_prep(0), std::invalid_argument);

    // GHZ stabilizers: X on all qubits and Z_i Z_{i+1}.
    auto c = cat_prep(4);
    std::vector<std::uint64_t> gens;
    for (auto g : evolve_stabilizers(c)) gens.push_back(pack(g));
    int base = gf2_rank(gens);
    std::vector<std::uint64_t> expect = {pack({0xF, 0}), pack({0, 0x3}), pack({0, 0x6}), pack({0, 0xC})};
    for (auto row : expect) {
        auto with = gens;
        with.push_back(row);
        ASSERT_EQ(gf2_rank(with), base);
    }
}

TEST(steane, pi8_circuit_structure) {
    auto c = pi8_ancilla_circuit();
    ASSERT_EQ(c.num_qubits, 14u);
    ASSERT_EQ(c.inputs.size(), 7u);
    ASSERT_EQ(c.segments.size(), 4u);
    ASSERT_EQ(c.segments[0].label, "cat");
    ASSERT_EQ(c.segments[3].label, "hmz");
    std::size_t meas = 0, cond_z = 0;
    for (std::size_t i = c.segments[3].begin; i < c.segments[3].end; ++i) {
        const auto &op = c.ops[i];
        if (op.kind == OpKind::measure) ++meas;
        if (op.kind == OpKind::Z && op.conditional_on == 0) ++cond_z;
    }
    ASSERT_EQ(meas, 1u);
    ASSERT_EQ(cond_z, 7u);
    ASSERT_EQ(c.num_measurements(), 1u);
}

TEST(steane, decode_single_errors) {
    ASSERT_FALSE(decode_syndrome({0, 0}).x_qubit.has_value());
    ASSERT_FALSE(decode_syndrome({0, 0}).z_qubit.has_value());
    for (std::uint32_t q = 0; q < 7; ++q) {
        std::uint8_t pattern = static_cast<std::uint8_t>(1u << q);
        auto fix = decode_syndrome({hamming_syndrome(pattern), hamming_syndrome(pattern)});
        ASSERT_EQ(fix.x_qubit.value(), q);
        ASSERT_EQ(fix.z_qubit.value(), q);
    }
}

TEST(steane, decode_pairs_become_logical) {
    int pairs = 0;
    for (std::uint32_t a = 0; a < 7; ++a) {
        for (std::uint32_t b = a + 1; b < 7; ++b) {
            std::uint8_t pattern = static_cast<std::uint8_t>(1u << a | 1u << b);
            auto fix = decode_syndrome({hamming_syndrome(pattern), 0});
            std::uint8_t residual = pattern ^ static_cast<std::uint8_t>(1u << fix.x_qubit.value());
            ASSERT_EQ(std::bitset<8>(residual).count(), 3u);
            ASSERT_TRUE(is_logical_pattern(residual));
            ++pairs;
        }
    }
    ASSERT_EQ(pairs, 21);
}

TEST(steane, text_round_trip) {
    for (const auto &c : {prep_variant(PrepVariant::verify_correct), pi8_ancilla_circuit(), cat_prep(5)}) {
        auto text = circuit_to_text(c);
        std::istringstream in(text);
        auto back = read_circuit(in);
        ASSERT_EQ(back, c);
        ASSERT_EQ(circuit_to_text(back), text);
    }
}

TEST(steane, text_format_lines) {
    auto text = circuit_to_text(pi8_ancilla_circuit());
    ASSERT_NE(text.find(" measure 7\n"), std::string::npos);
    ASSERT_NE(text.find(" Z 0 cond=0\n"), std::string::npos);
    ASSERT_NE(text.find(" CX 7,8\n"), std::string::npos);
}

TEST(steane, validate_rejects_bad_order) {
    auto c = basic_zero_prep();
    c.ops[10].timeslot = 0;
    ASSERT_THROW(validate(c), std::invalid_argument);
    auto d = basic_zero_prep();
    d.discards.push_back(d.outputs[0]);
    ASSERT_THROW(validate(d), std::invalid_argument);
    ASSERT_THROW(parse_variant("bogus"), std::invalid_argument);
}
