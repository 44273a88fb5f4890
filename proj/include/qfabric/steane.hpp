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

#ifndef QFABRIC_STEANE_HPP
#define QFABRIC_STEANE_HPP

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qfabric {

/// Physical qubits per encoded qubit.
inline constexpr std::uint32_t kBlockSize = 7;

enum class OpKind : std::uint8_t { prep0, H, X, Z, S, T, CX, measure, move, turn };

std::string_view op_kind_name(OpKind kind);
OpKind parse_op_kind(std::string_view name);

struct PhysOp {
    OpKind kind;
    std::array<std::uint32_t, 2> qubits{};
    std::uint8_t arity = 1;
    std::int64_t timeslot = 0;
    /// Index of the measurement this op is conditioned on, or -1.
    std::int32_t conditional_on = -1;

    bool is_gate() const { return kind != OpKind::move && kind != OpKind::turn; }
    bool operator==(const PhysOp &other) const = default;
};

/// Parity check over measurement results. The trial is rejected when the
/// XOR of the listed outcomes differs from the noiseless value (0).
struct ParityCheck {
    std::vector<std::uint32_t> measurements;
    bool operator==(const ParityCheck &other) const = default;
};

enum class PauliBasis : std::uint8_t { X, Z };

/// Decode a transversally measured block and apply the fix to `targets`.
///
/// `basis` is the Pauli applied as the fix. When `coset` is set the measured
/// block carried a logical zero, so the decoder works in the even-weight
/// subcode and can also repair a logical flip on the target.
struct BlockCorrection {
    PauliBasis basis;
    std::array<std::uint32_t, kBlockSize> measurements{};
    std::array<std::uint32_t, kBlockSize> targets{};
    bool coset = false;
    bool operator==(const BlockCorrection &other) const = default;
};

/// Half-open op range with a label (e.g. "basic", "verify", "cat").
struct Segment {
    std::string label;
    std::size_t begin;
    std::size_t end;
    bool operator==(const Segment &other) const = default;
};

struct PhysicalCircuit {
    std::uint32_t num_qubits = 0;
    std::vector<PhysOp> ops;
    std::vector<std::uint32_t> inputs;
    std::vector<std::uint32_t> outputs;
    std::vector<std::uint32_t> discards;
    std::vector<ParityCheck> checks;
    std::vector<BlockCorrection> corrections;
    std::vector<Segment> segments;

    std::size_t count(OpKind kind) const;
    std::size_t num_measurements() const { return count(OpKind::measure); }
    std::size_t count_segments(std::string_view label) const;
    std::int64_t depth() const;

    bool operator==(const PhysicalCircuit &other) const = default;
};

/// Checks timeslot ordering, qubit bounds, arity, and the
/// outputs/discards partition. Throws std::invalid_argument.
void validate(const PhysicalCircuit &circuit);

/// Syndrome of a 7-bit error pattern (bit i is qubit i). The value is the
/// 1-based Hamming position of a single error, or 0.
std::uint8_t hamming_syndrome(std::uint8_t pattern);

/// x_checks flag X errors, z_checks flag Z errors.
struct Syndrome {
    std::uint8_t x_checks = 0;
    std::uint8_t z_checks = 0;
};

struct Correction {
    std::optional<std::uint32_t> x_qubit;
    std::optional<std::uint32_t> z_qubit;
};

Correction decode_syndrome(Syndrome s);

/// A 7-bit pattern with zero syndrome and odd weight is a logical operator;
/// zero syndrome and even weight is a stabilizer.
bool is_logical_pattern(std::uint8_t pattern);

PhysicalCircuit basic_zero_prep();
PhysicalCircuit cat_prep(std::uint32_t n);

enum class PrepVariant : std::uint8_t { basic, correct_only, verify_only, verify_correct };
std::string_view variant_name(PrepVariant v);
PrepVariant parse_variant(std::string_view name);
PhysicalCircuit prep_variant(PrepVariant v);

/// Encoded pi/8 ancilla from an input encoded zero (qubits 0..6, listed in
/// `inputs`) and a 7-qubit cat state.
PhysicalCircuit pi8_ancilla_circuit();

void write_circuit(std::ostream &out, const PhysicalCircuit &circuit);
std::string circuit_to_text(const PhysicalCircuit &circuit);
PhysicalCircuit read_circuit(std::istream &in);

}  // namespace qfabric

#endif
