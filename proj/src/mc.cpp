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

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace qfabric {

namespace {

std::uint64_t splitmix(std::uint64_t &state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint8_t correction_pattern(std::uint8_t flips, bool coset) {
    std::uint8_t s = hamming_syndrome(flips);
    std::uint8_t fix = s ? static_cast<std::uint8_t>(1u << (s - 1)) : 0;
    if (coset && (__builtin_popcount(flips ^ fix) & 1)) fix ^= 0x7F;
    return fix;
}

// Geometric skipping over the ops of one probability class.
void sample_class(const std::vector<std::uint32_t> &ops, double p, TrialRng &rng, std::vector<std::uint32_t> &hits) {
    if (p <= 0 || ops.empty()) return;
    double log_q = std::log1p(-p);
    std::uint64_t pos = 0;
    while (true) {
        double gap = std::floor(std::log1p(-rng.uniform()) / log_q);
        if (gap >= static_cast<double>(ops.size() - pos)) return;
        pos += static_cast<std::uint64_t>(gap);
        hits.push_back(ops[pos]);
        ++pos;
        if (pos >= ops.size()) return;
    }
}

Fault draw_paulis(const PhysOp &op, TrialRng &rng) {
    Fault f;
    f.count = op.arity;
    for (std::uint8_t k = 0; k < op.arity; ++k) {
        f.qubits[k] = op.qubits[k];
        f.paulis[k] = op.kind == OpKind::measure ? Pauli::X : static_cast<Pauli>(1 + rng.below(3));
    }
    return f;
}

void check_runnable(const PhysicalCircuit &c) {
    if (c.outputs.empty()) throw std::invalid_argument("circuit has no outputs");
}

}  // namespace

bool PauliFrame::is_identity() const {
    return std::all_of(x.begin(), x.end(), [](auto b) { return b == 0; }) &&
           std::all_of(z.begin(), z.end(), [](auto b) { return b == 0; });
}

void propagate_in_place(PauliFrame &f, const PhysOp &op) {
    auto a = op.qubits[0];
    switch (op.kind) {
        case OpKind::H: std::swap(f.x[a], f.z[a]); break;
        case OpKind::S: f.z[a] ^= f.x[a]; break;
        case OpKind::CX: {
            auto t = op.qubits[1];
            f.x[t] ^= f.x[a];
            f.z[a] ^= f.z[t];
            break;
        }
        case OpKind::prep0:
            f.x[a] = 0;
            f.z[a] = 0;
            break;
        case OpKind::X:
        case OpKind::Z:
        case OpKind::T:
        case OpKind::measure:
        case OpKind::move:
        case OpKind::turn: break;
    }
}

PauliFrame propagate(PauliFrame frame, const PhysOp &op) {
    propagate_in_place(frame, op);
    return frame;
}

TrialRng::TrialRng(std::uint64_t seed, std::uint64_t trial) {
    std::uint64_t s = seed;
    std::uint64_t key = splitmix(s);
    state_ = key ^ (trial * 0xD1B54A32D192ED03ULL);
    splitmix(state_);
}

std::uint64_t TrialRng::next() { return splitmix(state_); }

double TrialRng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::uint32_t TrialRng::below(std::uint32_t n) {
    return static_cast<std::uint32_t>((static_cast<unsigned __int128>(next()) * n) >> 64);
}

double fault_probability(const PhysOp &op, const TechProfile &profile) {
    return op.is_gate() ? profile.p_gate() : profile.p_move();
}

std::optional<Fault> inject(const PhysOp &op, const TechProfile &profile, TrialRng &rng) {
    if (rng.uniform() >= fault_probability(op, profile)) return std::nullopt;
    return draw_paulis(op, rng);
}

Outcome classify_patterns(std::uint8_t xp, std::uint8_t zp) {
    if (xp == 0 && zp == 0) return Outcome::clean;
    for (auto p : {xp, zp}) {
        std::uint8_t s = hamming_syndrome(p);
        std::uint8_t residual = s ? static_cast<std::uint8_t>(p ^ (1u << (s - 1))) : p;
        if (is_logical_pattern(residual)) return Outcome::logical_error;
    }
    return Outcome::corrected;
}

Outcome classify(const PauliFrame &frame) {
    if (frame.size() != kBlockSize) throw std::invalid_argument("classify expects a 7-qubit frame");
    std::uint8_t xp = 0, zp = 0;
    for (std::size_t i = 0; i < kBlockSize; ++i) {
        xp |= static_cast<std::uint8_t>(frame.x[i] << i);
        zp |= static_cast<std::uint8_t>(frame.z[i] << i);
    }
    return classify_patterns(xp, zp);
}

TrialResult run_with_faults(const PhysicalCircuit &c, const std::vector<std::pair<std::size_t, Fault>> &faults) {
    PauliFrame frame(c.num_qubits);
    std::vector<std::uint8_t> flips;
    flips.reserve(c.num_measurements());
    auto next_fault = faults.begin();
    for (std::size_t i = 0; i < c.ops.size(); ++i) {
        const auto &op = c.ops[i];
        const Fault *fault = nullptr;
        if (next_fault != faults.end() && next_fault->first == i) {
            fault = &next_fault->second;
            ++next_fault;
        }
        if (op.kind == OpKind::measure) {
            if (fault) frame.apply(fault->qubits[0], fault->paulis[0]);
            flips.push_back(frame.x[op.qubits[0]]);
            continue;
        }
        if (op.conditional_on >= 0) {
            if (flips.at(op.conditional_on)) {
                if (op.kind == OpKind::X) frame.apply(op.qubits[0], Pauli::X);
                else if (op.kind == OpKind::Z) frame.apply(op.qubits[0], Pauli::Z);
                else throw std::invalid_argument("only X and Z may be conditioned on a measurement");
            }
        } else {
            propagate_in_place(frame, op);
        }
        if (fault)
            for (std::uint8_t k = 0; k < fault->count; ++k) frame.apply(fault->qubits[k], fault->paulis[k]);
    }

    TrialResult result;
    for (const auto &check : c.checks) {
        std::uint8_t parity = 0;
        for (auto m : check.measurements) parity ^= flips[m];
        if (parity) {
            result.accepted = false;
            return result;
        }
    }
    for (const auto &fix : c.corrections) {
        std::uint8_t pattern = 0;
        for (std::size_t i = 0; i < kBlockSize; ++i) pattern |= static_cast<std::uint8_t>(flips[fix.measurements[i]] << i);
        std::uint8_t apply = correction_pattern(pattern, fix.coset);
        for (std::size_t i = 0; i < kBlockSize; ++i)
            if (apply >> i & 1) frame.apply(fix.targets[i], fix.basis == PauliBasis::X ? Pauli::X : Pauli::Z);
    }
    result.output_frame = PauliFrame(c.outputs.size());
    for (std::size_t i = 0; i < c.outputs.size(); ++i) {
        result.output_frame.x[i] = frame.x[c.outputs[i]];
        result.output_frame.z[i] = frame.z[c.outputs[i]];
    }
    if (c.outputs.size() == kBlockSize) {
        result.outcome = classify(result.output_frame);
    } else {
        result.outcome = result.output_frame.is_identity() ? Outcome::clean : Outcome::logical_error;
    }
    return result;
}

Interval wilson_interval(std::uint64_t k, std::uint64_t n) {
    if (n == 0) return {0.0, 1.0};
    constexpr double z = 1.959963984540054;
    double nn = static_cast<double>(n);
    double p = static_cast<double>(k) / nn;
    double denom = 1 + z * z / nn;
    double centre = (p + z * z / (2 * nn)) / denom;
    double half = z * std::sqrt(p * (1 - p) / nn + z * z / (4 * nn * nn)) / denom;
    double low = k == 0 ? 0.0 : std::max(0.0, centre - half);
    double high = k == n ? 1.0 : std::min(1.0, centre + half);
    return {low, high};
}

ErrorStats &ErrorStats::operator+=(const ErrorStats &o) {
    trials += o.trials;
    accepted += o.accepted;
    logical_errors += o.logical_errors;
    return *this;
}

ErrorStats run_trial_range(const PhysicalCircuit &c, std::uint64_t first, std::uint64_t count,
                           const TechProfile &profile, std::uint64_t seed) {
    check_runnable(c);
    std::vector<std::uint32_t> gate_ops, move_ops;
    for (std::uint32_t i = 0; i < c.ops.size(); ++i) (c.ops[i].is_gate() ? gate_ops : move_ops).push_back(i);

    ErrorStats stats;
    stats.trials = count;
    std::vector<std::uint32_t> hits;
    std::vector<std::pair<std::size_t, Fault>> faults;
    for (std::uint64_t t = first; t < first + count; ++t) {
        TrialRng rng(seed, t);
        hits.clear();
        sample_class(gate_ops, profile.p_gate(), rng, hits);
        sample_class(move_ops, profile.p_move(), rng, hits);
        if (hits.empty()) {
            ++stats.accepted;
            continue;
        }
        std::sort(hits.begin(), hits.end());
        faults.clear();
        for (auto i : hits) faults.emplace_back(i, draw_paulis(c.ops[i], rng));
        auto r = run_with_faults(c, faults);
        if (!r.accepted) continue;
        ++stats.accepted;
        if (r.outcome == Outcome::logical_error) ++stats.logical_errors;
    }
    return stats;
}

ErrorStats run_trials(const PhysicalCircuit &c, std::uint64_t n, const TechProfile &profile, std::uint64_t seed,
                      unsigned workers) {
    if (n == 0) throw std::invalid_argument("trial count must be positive");
    check_runnable(c);
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, n));
    std::vector<ErrorStats> parts(workers);
    std::vector<std::thread> pool;
    std::uint64_t chunk = n / workers, extra = n % workers, start = 0;
    for (unsigned w = 0; w < workers; ++w) {
        std::uint64_t len = chunk + (w < extra ? 1 : 0);
        pool.emplace_back([&, w, start, len] { parts[w] = run_trial_range(c, start, len, profile, seed); });
        start += len;
    }
    for (auto &th : pool) th.join();
    ErrorStats total;
    for (const auto &p : parts) total += p;
    return total;
}

std::string stats_csv_header() { return "circuit,variant,trials,accepted,logical_errors,rate,ci_low,ci_high"; }

std::string stats_csv_row(const std::string &circuit, const std::string &variant, const ErrorStats &s) {
    auto ci = s.ci95();
    char buf[128];
    std::snprintf(buf, sizeof buf, "%.6e,%.6e,%.6e", s.rate(), ci.low, ci.high);
    std::ostringstream out;
    out << circuit << ',' << variant << ',' << s.trials << ',' << s.accepted << ',' << s.logical_errors << ',' << buf;
    return out.str();
}

}  // namespace qfabric
