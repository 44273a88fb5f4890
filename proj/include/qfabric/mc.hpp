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

#ifndef QFABRIC_MC_HPP
#define QFABRIC_MC_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qfabric/steane.hpp"
#include "qfabric/tech.hpp"

namespace qfabric {

/// Single-qubit Pauli as (x, z) bits: X = 1, Z = 2, Y = 3.
enum class Pauli : std::uint8_t { I = 0, X = 1, Z = 2, Y = 3 };

struct PauliFrame {
    std::vector<std::uint8_t> x;
    std::vector<std::uint8_t> z;

    explicit PauliFrame(std::size_t n = 0) : x(n, 0), z(n, 0) {}
    std::size_t size() const { return x.size(); }
    bool is_identity() const;
    Pauli at(std::size_t q) const { return static_cast<Pauli>(x[q] | z[q] << 1); }
    void apply(std::size_t q, Pauli p) {
        x[q] ^= static_cast<std::uint8_t>(p) & 1;
        z[q] ^= static_cast<std::uint8_t>(p) >> 1;
    }
    bool operator==(const PauliFrame &other) const = default;
};

/// Conjugates the frame through one noiseless op. Measurement outcomes and
/// conditional actions are the caller's concern.
void propagate_in_place(PauliFrame &frame, const PhysOp &op);
PauliFrame propagate(PauliFrame frame, const PhysOp &op);

/// Counter-based stream: trial `t` under seed `s` always sees the same draws.
class TrialRng {
   public:
    TrialRng(std::uint64_t seed, std::uint64_t trial);
    std::uint64_t next();
    /// Uniform in [0, 1).
    double uniform();
    std::uint32_t below(std::uint32_t n);

   private:
    std::uint64_t state_;
};

struct Fault {
    std::uint8_t count = 0;
    std::array<std::uint32_t, 2> qubits{};
    std::array<Pauli, 2> paulis{};
};

/// Fault probability for one op: p_move for move/turn, p_gate otherwise.
double fault_probability(const PhysOp &op, const TechProfile &profile);

/// Draws whether `op` faults and, if so, an independent uniform X/Y/Z per
/// involved qubit. Measurement faults are a bit flip before readout.
std::optional<Fault> inject(const PhysOp &op, const TechProfile &profile, TrialRng &rng);

enum class Outcome : std::uint8_t { clean, corrected, logical_error };

/// Decodes the X and Z parts of a 7-qubit residual independently.
Outcome classify(const PauliFrame &frame);
Outcome classify_patterns(std::uint8_t x_pattern, std::uint8_t z_pattern);

struct TrialResult {
    bool accepted = true;
    Outcome outcome = Outcome::clean;
    PauliFrame output_frame;
};

/// Executes one trial with an explicit fault list (op index, fault), sorted
/// by op index. Block corrections are applied after the last op.
TrialResult run_with_faults(const PhysicalCircuit &circuit, const std::vector<std::pair<std::size_t, Fault>> &faults);

struct Interval {
    double low = 0;
    double high = 0;
};

/// Wilson score interval at 95%.
Interval wilson_interval(std::uint64_t successes, std::uint64_t n);

struct ErrorStats {
    std::uint64_t trials = 0;
    std::uint64_t accepted = 0;
    std::uint64_t logical_errors = 0;

    double rate() const { return accepted ? static_cast<double>(logical_errors) / accepted : 0.0; }
    Interval ci95() const { return wilson_interval(logical_errors, accepted); }
    double rejection_rate() const { return trials ? 1.0 - static_cast<double>(accepted) / trials : 0.0; }
    Interval rejection_ci95() const { return wilson_interval(trials - accepted, trials); }

    ErrorStats &operator+=(const ErrorStats &other);
    bool operator==(const ErrorStats &other) const = default;
};

/// Trials [first, first + count) of the stream under `seed`.
ErrorStats run_trial_range(const PhysicalCircuit &circuit, std::uint64_t first, std::uint64_t count,
                           const TechProfile &profile, std::uint64_t seed);

/// `workers` = 0 picks the hardware concurrency. The result does not depend on it.
ErrorStats run_trials(const PhysicalCircuit &circuit, std::uint64_t n, const TechProfile &profile,
                      std::uint64_t seed, unsigned workers = 0);

std::string stats_csv_header();
std::string stats_csv_row(const std::string &circuit, const std::string &variant, const ErrorStats &stats);

}  // namespace qfabric

#endif
