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

#ifndef QFABRIC_TECH_HPP
#define QFABRIC_TECH_HPP

#include <array>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace qfabric {

/// Durations are whole microseconds.
using Micros = std::int64_t;

/// Raised when a model cannot produce a result (infeasible matching,
/// deadlock, malformed input files).
class ModelError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

enum class LatencyKind : std::uint8_t { one_qubit, two_qubit, measure, prep, move, turn };

inline constexpr std::array<LatencyKind, 6> kAllLatencyKinds = {
    LatencyKind::one_qubit, LatencyKind::two_qubit, LatencyKind::measure,
    LatencyKind::prep,      LatencyKind::move,      LatencyKind::turn};

std::string_view latency_symbol(LatencyKind kind);

/// Physical operation latencies and error probabilities for one technology.
///
/// Values are fixed at construction; `with` returns a modified copy.
class TechProfile {
   public:
    /// Validates every field; throws std::invalid_argument on a non-positive
    /// duration or a probability outside [0, 1).
    TechProfile(Micros t_1q, Micros t_2q, Micros t_meas, Micros t_prep, Micros t_move, Micros t_turn,
                double p_gate, double p_move);

    /// Trapped-ion values used throughout the analyses.
    static TechProfile ion_trap_default();

    Micros t_1q() const { return durations_[0]; }
    Micros t_2q() const { return durations_[1]; }
    Micros t_meas() const { return durations_[2]; }
    Micros t_prep() const { return durations_[3]; }
    Micros t_move() const { return durations_[4]; }
    Micros t_turn() const { return durations_[5]; }
    double p_gate() const { return p_gate_; }
    double p_move() const { return p_move_; }

    Micros duration(LatencyKind kind) const { return durations_[static_cast<std::size_t>(kind)]; }

    /// Copy with one key replaced. Keys are the override-file keys.
    TechProfile with(std::string_view key, double value) const;

    /// Copy with both error probabilities multiplied by `factor`.
    TechProfile scaled_errors(double factor) const;

    bool operator==(const TechProfile &other) const = default;

   private:
    std::array<Micros, 6> durations_;
    double p_gate_;
    double p_move_;
};

/// Reads `key=value` lines over `base`. Blank lines and `#` comments are
/// skipped. Unknown keys and malformed values raise ModelError.
TechProfile parse_profile_overrides(std::istream &in, const TechProfile &base);
TechProfile load_profile_file(const std::string &path, const TechProfile &base);
std::string profile_to_text(const TechProfile &profile);

/// A latency written as integer multiples of the profile's op durations,
/// e.g. t_prep + 2 t_meas + 6 t_2q.
class SymbolicLatency {
   public:
    SymbolicLatency() = default;
    SymbolicLatency(std::initializer_list<std::pair<LatencyKind, std::int64_t>> terms);

    std::int64_t coeff(LatencyKind kind) const { return coeffs_[static_cast<std::size_t>(kind)]; }
    SymbolicLatency &add(LatencyKind kind, std::int64_t count);
    bool empty() const;

    SymbolicLatency operator+(const SymbolicLatency &other) const;
    bool operator==(const SymbolicLatency &other) const = default;

    /// Rendering matching the tables: "3 t_2q + 6 t_turn + 5 t_move".
    std::string to_string() const;

   private:
    std::array<std::int64_t, 6> coeffs_{};
};

Micros eval_latency(const SymbolicLatency &expr, const TechProfile &profile);

}  // namespace qfabric

#endif
