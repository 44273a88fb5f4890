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

#ifndef QFABRIC_SYNTH_HPP
#define QFABRIC_SYNTH_HPP

#include <string>
#include <vector>

namespace qfabric {

/// H/T word in time order: "HT" applies H first. `met` is false when the
/// search bound ran out before reaching the requested accuracy.
struct GateSequence {
    std::string symbols;
    double distance = 0;
    bool met = true;

    std::size_t length() const { return symbols.size(); }
};

/// Phase of the rotation diag(1, e^{i theta}) addressed by exponent k, so that
/// k = 3 is the T gate and k = 2 the S gate.
double rotation_phase(int k);

/// min over phi of || U - e^{i phi} diag(1, e^{i theta}) ||, operator norm.
double unitary_distance_phase(const std::string &symbols, double theta);
double unitary_distance(const GateSequence &seq, int k);

/// Shortest word within `eps` of the target, found by breadth-first search
/// over exact unitaries. Every returned word is free of HH and of T runs of
/// length 8 because any such word has a shorter equivalent.
GateSequence search_ht_phase(double theta, int max_len, double eps);
GateSequence search_ht(int k, int max_len, double eps);

/// Best distance achievable with words of length <= L, for L = 0..max_len.
std::vector<double> best_distance_by_length(int k, int max_len);

/// Expected CX count for the recursive correction cascade of a pi/2^k rotation.
double cascade_expected_cx(int k);

std::string synth_csv_header();
std::string synth_csv_row(int k, int max_len, double eps, const GateSequence &seq);

}  // namespace qfabric

#endif
