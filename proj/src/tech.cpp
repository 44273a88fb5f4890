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

#include "qfabric/tech.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace qfabric {

namespace {

constexpr std::array<std::string_view, 8> kProfileKeys = {"t_1q",   "t_2q",   "t_meas", "t_prep",
                                                          "t_move", "t_turn", "p_gate", "p_move"};

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

}  // namespace

std::string_view latency_symbol(LatencyKind kind) {
    switch (kind) {
        case LatencyKind::one_qubit: return "t_1q";
        case LatencyKind::two_qubit: return "t_2q";
        case LatencyKind::measure: return "t_meas";
        case LatencyKind::prep: return "t_prep";
        case LatencyKind::move: return "t_move";
        case LatencyKind::turn: return "t_turn";
    }
    return "?";
}

TechProfile::TechProfile(Micros t_1q, Micros t_2q, Micros t_meas, Micros t_prep, Micros t_move, Micros t_turn,
                         double p_gate, double p_move)
    : durations_{t_1q, t_2q, t_meas, t_prep, t_move, t_turn}, p_gate_(p_gate), p_move_(p_move) {
    for (std::size_t k = 0; k < durations_.size(); ++k) {
        if (durations_[k] <= 0) {
            throw std::invalid_argument(std::string(kProfileKeys[k]) + " must be positive");
        }
    }
    if (!(p_gate >= 0 && p_gate < 1)) throw std::invalid_argument("p_gate must lie in [0, 1)");
    if (!(p_move >= 0 && p_move < 1)) throw std::invalid_argument("p_move must lie in [0, 1)");
}

TechProfile TechProfile::ion_trap_default() { return TechProfile(1, 10, 50, 51, 1, 10, 1e-4, 1e-6); }

TechProfile TechProfile::with(std::string_view key, double value) const {
    auto d = durations_;
    double pg = p_gate_, pm = p_move_;
    bool found = false;
    for (std::size_t k = 0; k < 6; ++k) {
        if (key == kProfileKeys[k]) {
            if (value != std::floor(value)) {
                throw std::invalid_argument(std::string(key) + " must be a whole number of microseconds");
            }
            d[k] = static_cast<Micros>(value);
            found = true;
        }
    }
    if (key == "p_gate") {
        pg = value;
        found = true;
    } else if (key == "p_move") {
        pm = value;
        found = true;
    }
    if (!found) throw std::invalid_argument("unknown profile key: " + std::string(key));
    return TechProfile(d[0], d[1], d[2], d[3], d[4], d[5], pg, pm);
}

TechProfile TechProfile::scaled_errors(double factor) const {
    return TechProfile(durations_[0], durations_[1], durations_[2], durations_[3], durations_[4], durations_[5],
                       p_gate_ * factor, p_move_ * factor);
}

TechProfile parse_profile_overrides(std::istream &in, const TechProfile &base) {
    TechProfile result = base;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view = trim(line);
        if (view.empty() || view.front() == '#') continue;
        auto eq = view.find('=');
        if (eq == std::string_view::npos) {
            throw ModelError("profile line " + std::to_string(line_no) + ": expected key=value");
        }
        auto key = trim(view.substr(0, eq));
        auto text = trim(view.substr(eq + 1));
        double value = 0;
        auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec != std::errc() || end != text.data() + text.size()) {
            throw ModelError("profile line " + std::to_string(line_no) + ": bad value '" + std::string(text) + "'");
        }
        try {
            result = result.with(key, value);
        } catch (const std::invalid_argument &e) {
            throw ModelError("profile line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return result;
}

TechProfile load_profile_file(const std::string &path, const TechProfile &base) {
    std::ifstream in(path);
    if (!in) throw ModelError("cannot open profile file: " + path);
    return parse_profile_overrides(in, base);
}

std::string profile_to_text(const TechProfile &profile) {
    std::ostringstream out;
    for (std::size_t k = 0; k < 6; ++k) out << kProfileKeys[k] << '=' << profile.duration(kAllLatencyKinds[k]) << '\n';
    out << "p_gate=" << profile.p_gate() << '\n' << "p_move=" << profile.p_move() << '\n';
    return out.str();
}

SymbolicLatency::SymbolicLatency(std::initializer_list<std::pair<LatencyKind, std::int64_t>> terms) {
    for (const auto &[kind, count] : terms) add(kind, count);
}

SymbolicLatency &SymbolicLatency::add(LatencyKind kind, std::int64_t count) {
    if (count < 0) throw std::invalid_argument("latency coefficients are non-negative");
    coeffs_[static_cast<std::size_t>(kind)] += count;
    return *this;
}

bool SymbolicLatency::empty() const {
    for (auto c : coeffs_)
        if (c != 0) return false;
    return true;
}

SymbolicLatency SymbolicLatency::operator+(const SymbolicLatency &other) const {
    SymbolicLatency sum = *this;
    for (std::size_t k = 0; k < coeffs_.size(); ++k) sum.coeffs_[k] += other.coeffs_[k];
    return sum;
}

std::string SymbolicLatency::to_string() const {
    // Table order: prep, meas, 2q, 1q, turn, move.
    static constexpr std::array<LatencyKind, 6> order = {LatencyKind::prep,      LatencyKind::measure,
                                                         LatencyKind::two_qubit, LatencyKind::one_qubit,
                                                         LatencyKind::turn,      LatencyKind::move};
    std::string out;
    for (auto kind : order) {
        auto c = coeff(kind);
        if (c == 0) continue;
        if (!out.empty()) out += " + ";
        if (c != 1) out += std::to_string(c) + " ";
        out += latency_symbol(kind);
    }
    return out.empty() ? "0" : out;
}

Micros eval_latency(const SymbolicLatency &expr, const TechProfile &profile) {
    Micros total = 0;
    for (auto kind : kAllLatencyKinds) total += expr.coeff(kind) * profile.duration(kind);
    return total;
}

}  // namespace qfabric
