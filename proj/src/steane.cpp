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

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace qfabric {

namespace {

constexpr std::array<std::string_view, 10> kOpNames = {"prep0", "H", "X", "Z", "S",
                                                       "T",     "CX", "measure", "move", "turn"};

// Encoder CX rounds, as 0-based (control, target). Generators sit at
// Hamming positions 1, 2 and 4.
constexpr std::array<std::array<std::array<std::uint32_t, 2>, 3>, 3> kEncoderRounds = {{
    {{{0, 2}, {1, 5}, {3, 6}}},
    {{{0, 4}, {1, 6}, {3, 5}}},
    {{{0, 6}, {1, 2}, {3, 4}}},
}};

// Z-type logical support used by the 3-qubit verification (positions 3, 4, 7).
constexpr std::array<std::uint32_t, 3> kVerifySupport = {2, 3, 6};

class Builder {
   public:
    std::uint32_t alloc(std::uint32_t n) {
        std::uint32_t first = circuit_.num_qubits;
        circuit_.num_qubits += n;
        ready_.resize(circuit_.num_qubits, -1);
        return first;
    }

    void op(OpKind kind, std::uint32_t q, std::int32_t cond = -1) {
        std::int64_t slot = ready_[q] + 1;
        if (cond >= 0) slot = std::max(slot, meas_time_[cond] + 1);
        ready_[q] = slot;
        circuit_.ops.push_back(PhysOp{kind, {q, 0}, 1, slot, cond});
    }

    void cx(std::uint32_t c, std::uint32_t t) {
        std::int64_t slot = std::max(ready_[c], ready_[t]) + 1;
        ready_[c] = ready_[t] = slot;
        circuit_.ops.push_back(PhysOp{OpKind::CX, {c, t}, 2, slot, -1});
    }

    std::uint32_t measure(std::uint32_t q) {
        op(OpKind::measure, q);
        meas_time_.push_back(ready_[q]);
        return static_cast<std::uint32_t>(meas_time_.size() - 1);
    }

    void begin(std::string label) {
        circuit_.segments.push_back(Segment{std::move(label), circuit_.ops.size(), circuit_.ops.size()});
    }
    void end() { circuit_.segments.back().end = circuit_.ops.size(); }

    PhysicalCircuit &circuit() { return circuit_; }

    PhysicalCircuit finish() {
        validate(circuit_);
        return std::move(circuit_);
    }

   private:
    PhysicalCircuit circuit_;
    std::vector<std::int64_t> ready_;
    std::vector<std::int64_t> meas_time_;
};

using Block = std::array<std::uint32_t, kBlockSize>;

Block encode_zero(Builder &b) {
    Block q;
    std::uint32_t first = b.alloc(kBlockSize);
    for (std::uint32_t i = 0; i < kBlockSize; ++i) q[i] = first + i;
    b.begin("basic");
    for (auto x : q) b.op(OpKind::prep0, x);
    for (auto g : {0u, 1u, 3u}) b.op(OpKind::H, q[g]);
    for (const auto &round : kEncoderRounds)
        for (const auto &[c, t] : round) b.cx(q[c], q[t]);
    b.end();
    return q;
}

void emit_cat(Builder &b, std::uint32_t first, std::uint32_t n) {
    for (std::uint32_t i = 0; i < n; ++i) b.op(OpKind::prep0, first + i);
    b.op(OpKind::H, first);
    for (std::uint32_t i = 0; i + 1 < n; ++i) b.cx(first + i, first + i + 1);
}

void verify_block(Builder &b, const Block &q) {
    std::uint32_t cat = b.alloc(3);
    b.begin("verify");
    emit_cat(b, cat, 3);
    for (std::uint32_t i = 0; i < 3; ++i) b.op(OpKind::H, cat + i);
    for (std::uint32_t i = 0; i < 3; ++i) b.cx(q[kVerifySupport[i]], cat + i);
    ParityCheck check;
    for (std::uint32_t i = 0; i < 3; ++i) check.measurements.push_back(b.measure(cat + i));
    b.end();
    b.circuit().checks.push_back(std::move(check));
}

void bit_correct(Builder &b, const Block &target, const Block &helper) {
    b.begin("bit_correct");
    BlockCorrection fix{PauliBasis::X, {}, target, true};
    for (std::uint32_t i = 0; i < kBlockSize; ++i) b.cx(target[i], helper[i]);
    for (std::uint32_t i = 0; i < kBlockSize; ++i) fix.measurements[i] = b.measure(helper[i]);
    b.end();
    b.circuit().corrections.push_back(fix);
}

void phase_correct(Builder &b, const Block &target, const Block &helper) {
    b.begin("phase_correct");
    BlockCorrection fix{PauliBasis::Z, {}, target, false};
    for (std::uint32_t i = 0; i < kBlockSize; ++i) b.cx(helper[i], target[i]);
    for (std::uint32_t i = 0; i < kBlockSize; ++i) b.op(OpKind::H, helper[i]);
    for (std::uint32_t i = 0; i < kBlockSize; ++i) fix.measurements[i] = b.measure(helper[i]);
    b.end();
    b.circuit().corrections.push_back(fix);
}

void finish_io(Builder &b, const Block &out) {
    auto &c = b.circuit();
    c.outputs.assign(out.begin(), out.end());
    for (std::uint32_t q = 0; q < c.num_qubits; ++q)
        if (std::find(out.begin(), out.end(), q) == out.end()) c.discards.push_back(q);
}

std::vector<std::uint32_t> parse_id_list(std::string_view text) {
    std::vector<std::uint32_t> ids;
    std::string item;
    std::istringstream in{std::string(text)};
    while (std::getline(in, item, ',')) {
        if (item.empty()) continue;
        ids.push_back(static_cast<std::uint32_t>(std::stoul(item)));
    }
    return ids;
}

void write_ids(std::ostream &out, const std::vector<std::uint32_t> &ids, char sep) {
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i) out << sep;
        out << ids[i];
    }
}

template <std::size_t N>
std::array<std::uint32_t, N> to_array(const std::vector<std::uint32_t> &v) {
    if (v.size() != N) throw std::invalid_argument("expected " + std::to_string(N) + " ids");
    std::array<std::uint32_t, N> a{};
    std::copy(v.begin(), v.end(), a.begin());
    return a;
}

}  // namespace

std::string_view op_kind_name(OpKind kind) { return kOpNames[static_cast<std::size_t>(kind)]; }

OpKind parse_op_kind(std::string_view name) {
    for (std::size_t k = 0; k < kOpNames.size(); ++k)
        if (kOpNames[k] == name) return static_cast<OpKind>(k);
    throw std::invalid_argument("unknown op kind: " + std::string(name));
}

std::size_t PhysicalCircuit::count(OpKind kind) const {
    return static_cast<std::size_t>(std::count_if(ops.begin(), ops.end(), [&](const PhysOp &o) { return o.kind == kind; }));
}

std::size_t PhysicalCircuit::count_segments(std::string_view label) const {
    return static_cast<std::size_t>(
        std::count_if(segments.begin(), segments.end(), [&](const Segment &s) { return s.label == label; }));
}

std::int64_t PhysicalCircuit::depth() const {
    std::int64_t d = 0;
    for (const auto &o : ops) d = std::max(d, o.timeslot + 1);
    return d;
}

void validate(const PhysicalCircuit &c) {
    std::vector<std::int64_t> last(c.num_qubits, -1);
    std::vector<std::int64_t> meas_slot;
    std::vector<bool> used(c.num_qubits, false);
    for (const auto &o : c.ops) {
        bool two = o.kind == OpKind::CX;
        if (o.arity != (two ? 2 : 1)) throw std::invalid_argument("op arity does not match its kind");
        for (std::uint8_t k = 0; k < o.arity; ++k) {
            if (o.qubits[k] >= c.num_qubits) throw std::invalid_argument("op qubit out of range");
            if (o.timeslot <= last[o.qubits[k]]) throw std::invalid_argument("op timeslot violates qubit order");
        }
        if (two && o.qubits[0] == o.qubits[1]) throw std::invalid_argument("CX needs two distinct qubits");
        if (o.conditional_on >= 0) {
            if (static_cast<std::size_t>(o.conditional_on) >= meas_slot.size() ||
                o.timeslot <= meas_slot[o.conditional_on]) {
                throw std::invalid_argument("conditioned op precedes its measurement");
            }
        }
        for (std::uint8_t k = 0; k < o.arity; ++k) {
            last[o.qubits[k]] = o.timeslot;
            used[o.qubits[k]] = true;
        }
        if (o.kind == OpKind::measure) meas_slot.push_back(o.timeslot);
    }
    std::vector<int> role(c.num_qubits, 0);
    for (auto q : c.outputs) {
        if (q >= c.num_qubits) throw std::invalid_argument("output qubit out of range");
        role[q] |= 1;
    }
    for (auto q : c.discards) {
        if (q >= c.num_qubits) throw std::invalid_argument("discard qubit out of range");
        if (role[q] & 1) throw std::invalid_argument("qubit is both output and discard");
        role[q] |= 2;
    }
    for (std::uint32_t q = 0; q < c.num_qubits; ++q)
        if (used[q] && role[q] == 0) throw std::invalid_argument("qubit is neither output nor discard");
    auto check_meas = [&](std::uint32_t m) {
        if (m >= meas_slot.size()) throw std::invalid_argument("measurement id out of range");
    };
    for (const auto &ch : c.checks)
        for (auto m : ch.measurements) check_meas(m);
    for (const auto &fix : c.corrections) {
        for (auto m : fix.measurements) check_meas(m);
        for (auto q : fix.targets)
            if (q >= c.num_qubits) throw std::invalid_argument("correction target out of range");
    }
    for (const auto &s : c.segments)
        if (s.begin > s.end || s.end > c.ops.size()) throw std::invalid_argument("segment out of range");
}

std::uint8_t hamming_syndrome(std::uint8_t pattern) {
    std::uint8_t s = 0;
    for (std::uint8_t i = 0; i < kBlockSize; ++i)
        if (pattern >> i & 1) s ^= static_cast<std::uint8_t>(i + 1);
    return s;
}

Correction decode_syndrome(Syndrome s) {
    if (s.x_checks > 7 || s.z_checks > 7) throw std::invalid_argument("syndrome has 3 bits per type");
    Correction fix;
    if (s.x_checks) fix.x_qubit = s.x_checks - 1u;
    if (s.z_checks) fix.z_qubit = s.z_checks - 1u;
    return fix;
}

bool is_logical_pattern(std::uint8_t pattern) {
    return hamming_syndrome(pattern) == 0 && (__builtin_popcount(pattern & 0x7F) & 1);
}

PhysicalCircuit basic_zero_prep() {
    Builder b;
    Block q = encode_zero(b);
    finish_io(b, q);
    return b.finish();
}

PhysicalCircuit cat_prep(std::uint32_t n) {
    if (n == 0) throw std::invalid_argument("cat state needs at least one qubit");
    Builder b;
    b.alloc(n);
    b.begin("cat");
    emit_cat(b, 0, n);
    b.end();
    for (std::uint32_t q = 0; q < n; ++q) b.circuit().outputs.push_back(q);
    return b.finish();
}

std::string_view variant_name(PrepVariant v) {
    switch (v) {
        case PrepVariant::basic: return "basic";
        case PrepVariant::correct_only: return "correct_only";
        case PrepVariant::verify_only: return "verify_only";
        case PrepVariant::verify_correct: return "verify_correct";
    }
    return "?";
}

PrepVariant parse_variant(std::string_view name) {
    for (auto v : {PrepVariant::basic, PrepVariant::correct_only, PrepVariant::verify_only,
                   PrepVariant::verify_correct})
        if (variant_name(v) == name) return v;
    throw std::invalid_argument("unknown prep variant: " + std::string(name));
}

PhysicalCircuit prep_variant(PrepVariant v) {
    if (v == PrepVariant::basic) return basic_zero_prep();
    Builder b;
    if (v == PrepVariant::verify_only) {
        Block q = encode_zero(b);
        verify_block(b, q);
        finish_io(b, q);
        return b.finish();
    }
    // Block 1 is kept; block 0 repairs its bit flips, block 2 its phase flips.
    std::array<Block, 3> blocks;
    for (auto &blk : blocks) blk = encode_zero(b);
    if (v == PrepVariant::verify_correct)
        for (const auto &blk : blocks) verify_block(b, blk);
    bit_correct(b, blocks[1], blocks[0]);
    phase_correct(b, blocks[1], blocks[2]);
    finish_io(b, blocks[1]);
    return b.finish();
}

PhysicalCircuit pi8_ancilla_circuit() {
    Builder b;
    Block data;
    std::uint32_t first = b.alloc(kBlockSize);
    for (std::uint32_t i = 0; i < kBlockSize; ++i) data[i] = first + i;
    std::uint32_t cat = b.alloc(kBlockSize);

    b.begin("cat");
    emit_cat(b, cat, kBlockSize);
    b.end();

    b.begin("transversal");
    for (std::uint32_t i = 0; i < kBlockSize; ++i) {
        std::uint32_t c = cat + i, d = data[i];
        // Controlled-Z.
        b.op(OpKind::H, d);
        b.cx(c, d);
        b.op(OpKind::H, d);
        // Controlled-S; the T-dagger on d is written as Z S T.
        b.op(OpKind::T, c);
        b.op(OpKind::T, d);
        b.cx(c, d);
        b.op(OpKind::Z, d);
        b.op(OpKind::S, d);
        b.op(OpKind::T, d);
        b.cx(c, d);
        // Controlled-X, then the phase kick on the cat qubit.
        b.cx(c, d);
        b.op(OpKind::T, c);
    }
    b.end();

    b.begin("decode");
    for (std::uint32_t i = kBlockSize - 1; i > 0; --i) b.cx(cat + i - 1, cat + i);
    b.end();

    b.begin("hmz");
    b.op(OpKind::H, cat);
    auto m = static_cast<std::int32_t>(b.measure(cat));
    for (auto d : data) b.op(OpKind::Z, d, m);
    b.end();

    auto &c = b.circuit();
    c.inputs.assign(data.begin(), data.end());
    finish_io(b, data);
    return b.finish();
}

void write_circuit(std::ostream &out, const PhysicalCircuit &c) {
    out << "qubits " << c.num_qubits << '\n';
    if (!c.inputs.empty()) {
        out << "inputs ";
        write_ids(out, c.inputs, ',');
        out << '\n';
    }
    for (const auto &o : c.ops) {
        out << o.timeslot << ' ' << op_kind_name(o.kind) << ' ' << o.qubits[0];
        if (o.arity == 2) out << ',' << o.qubits[1];
        if (o.conditional_on >= 0) out << " cond=" << o.conditional_on;
        out << '\n';
    }
    for (const auto &ch : c.checks) {
        out << "check meas=";
        write_ids(out, ch.measurements, ',');
        out << '\n';
    }
    for (const auto &fix : c.corrections) {
        out << (fix.basis == PauliBasis::X ? "decode_x" : "decode_z") << " meas=";
        write_ids(out, {fix.measurements.begin(), fix.measurements.end()}, ',');
        out << " target=";
        write_ids(out, {fix.targets.begin(), fix.targets.end()}, ',');
        if (fix.coset) out << " coset";
        out << '\n';
    }
    for (const auto &s : c.segments) out << "segment " << s.label << ' ' << s.begin << ' ' << s.end << '\n';
    out << "outputs ";
    write_ids(out, c.outputs, ',');
    out << "\ndiscards ";
    write_ids(out, c.discards, ',');
    out << '\n';
}

std::string circuit_to_text(const PhysicalCircuit &c) {
    std::ostringstream out;
    write_circuit(out, c);
    return out.str();
}

PhysicalCircuit read_circuit(std::istream &in) {
    PhysicalCircuit c;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream fields(line);
        std::string head;
        if (!(fields >> head)) continue;
        std::string rest;
        if (head == "qubits") {
            fields >> c.num_qubits;
        } else if (head == "inputs" || head == "outputs" || head == "discards") {
            fields >> rest;
            auto ids = parse_id_list(rest);
            (head == "inputs" ? c.inputs : head == "outputs" ? c.outputs : c.discards) = ids;
        } else if (head == "check") {
            fields >> rest;
            if (rest.rfind("meas=", 0) != 0) throw std::invalid_argument("check line needs meas=");
            c.checks.push_back(ParityCheck{parse_id_list(rest.substr(5))});
        } else if (head == "decode_x" || head == "decode_z") {
            BlockCorrection fix{head == "decode_x" ? PauliBasis::X : PauliBasis::Z, {}, {}, false};
            while (fields >> rest) {
                if (rest.rfind("meas=", 0) == 0) {
                    fix.measurements = to_array<kBlockSize>(parse_id_list(rest.substr(5)));
                } else if (rest.rfind("target=", 0) == 0) {
                    fix.targets = to_array<kBlockSize>(parse_id_list(rest.substr(7)));
                } else if (rest == "coset") {
                    fix.coset = true;
                } else {
                    throw std::invalid_argument("bad decode field: " + rest);
                }
            }
            c.corrections.push_back(fix);
        } else if (head == "segment") {
            Segment s;
            fields >> s.label >> s.begin >> s.end;
            c.segments.push_back(s);
        } else {
            PhysOp o{};
            o.timeslot = std::stoll(head);
            std::string kind;
            fields >> kind >> rest;
            o.kind = parse_op_kind(kind);
            auto qs = parse_id_list(rest);
            if (qs.empty() || qs.size() > 2) throw std::invalid_argument("op needs 1 or 2 qubits");
            o.arity = static_cast<std::uint8_t>(qs.size());
            for (std::size_t k = 0; k < qs.size(); ++k) o.qubits[k] = qs[k];
            o.conditional_on = -1;
            if (fields >> rest) {
                if (rest.rfind("cond=", 0) != 0) throw std::invalid_argument("bad op field: " + rest);
                o.conditional_on = std::stoi(rest.substr(5));
            }
            c.ops.push_back(o);
        }
    }
    validate(c);
    return c;
}

}  // namespace qfabric
