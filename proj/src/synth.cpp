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

#include "qfabric/synth.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <unordered_set>

namespace qfabric {

namespace {

using Cplx = std::complex<double>;

// a0 + a1 w + a2 w^2 + a3 w^3 with w = e^{i pi/4}.
using Ring = std::array<std::int64_t, 4>;

Ring times_omega(const Ring &a) { return {-a[3], a[0], a[1], a[2]}; }

bool divisible_by_sqrt2(const Ring &a) { return ((a[0] - a[2]) & 1) == 0 && ((a[1] - a[3]) & 1) == 0; }

// a / sqrt2, computed as a (w - w^3) / 2.
Ring div_sqrt2(const Ring &a) { return {(a[1] - a[3]) / 2, (a[0] + a[2]) / 2, (a[1] + a[3]) / 2, (a[2] - a[0]) / 2}; }

Cplx to_complex(const Ring &a) {
    static const std::array<Cplx, 4> w = {Cplx(1, 0), std::polar(1.0, std::numbers::pi / 4), Cplx(0, 1),
                                          std::polar(1.0, 3 * std::numbers::pi / 4)};
    Cplx z = 0;
    for (int i = 0; i < 4; ++i) z += static_cast<double>(a[i]) * w[i];
    return z;
}

// Entries over Z[w] with shared denominator sqrt2^n, reduced.
struct Exact {
    std::array<Ring, 4> e;  // row major
    int n = 0;

    static Exact identity() {
        Exact u;
        u.e = {Ring{1, 0, 0, 0}, Ring{0, 0, 0, 0}, Ring{0, 0, 0, 0}, Ring{1, 0, 0, 0}};
        return u;
    }

    void reduce() {
        while (n > 0 && std::all_of(e.begin(), e.end(), divisible_by_sqrt2)) {
            for (auto &r : e) r = div_sqrt2(r);
            --n;
        }
    }

    Exact then_h() const {
        Exact u;
        for (int c = 0; c < 2; ++c) {
            for (int i = 0; i < 4; ++i) {
                u.e[c][i] = e[c][i] + e[2 + c][i];
                u.e[2 + c][i] = e[c][i] - e[2 + c][i];
            }
        }
        u.n = n + 1;
        u.reduce();
        return u;
    }

    Exact then_t() const {
        Exact u = *this;
        u.e[2] = times_omega(e[2]);
        u.e[3] = times_omega(e[3]);
        return u;
    }

    // Key invariant under global phases w^m.
    std::array<std::int64_t, 17> key() const {
        std::array<std::int64_t, 17> best{};
        bool first = true;
        Exact v = *this;
        for (int m = 0; m < 8; ++m) {
            std::array<std::int64_t, 17> k{};
            for (int r = 0; r < 4; ++r)
                for (int i = 0; i < 4; ++i) k[4 * r + i] = v.e[r][i];
            k[16] = n;
            if (first || k < best) best = k;
            first = false;
            for (auto &r : v.e) r = times_omega(r);
        }
        return best;
    }

    std::array<Cplx, 4> numeric() const {
        double scale = std::pow(std::numbers::sqrt2, -n);
        return {to_complex(e[0]) * scale, to_complex(e[1]) * scale, to_complex(e[2]) * scale,
                to_complex(e[3]) * scale};
    }
};

struct KeyHash {
    std::size_t operator()(const std::array<std::int64_t, 17> &k) const {
        std::uint64_t h = 1469598103934665603ULL;
        for (auto v : k) {
            h ^= static_cast<std::uint64_t>(v);
            h *= 1099511628211ULL;
        }
        return static_cast<std::size_t>(h);
    }
};

double distance_to(const std::array<Cplx, 4> &u, double theta) {
    // |tr(V^dagger U)| for V = diag(1, e^{i theta}).
    Cplx tr = u[0] + std::polar(1.0, -theta) * u[3];
    double a = std::min(2.0, std::abs(tr));
    return std::sqrt(std::max(0.0, 2.0 - a));
}

Exact exact_of(const std::string &symbols) {
    Exact u = Exact::identity();
    for (char s : symbols) {
        if (s == 'H') u = u.then_h();
        else if (s == 'T') u = u.then_t();
        else throw std::invalid_argument(std::string("unknown gate symbol: ") + s);
    }
    return u;
}

struct Node {
    Exact u;
    std::string word;
};

// Visits each distinct unitary once, in order of shortest word length.
template <typename Visit>
void breadth_first(int max_len, Visit visit) {
    std::unordered_set<std::array<std::int64_t, 17>, KeyHash> seen;
    std::vector<Node> frontier{{Exact::identity(), ""}};
    seen.insert(frontier[0].u.key());
    for (int len = 0;; ++len) {
        for (const auto &node : frontier)
            if (visit(len, node)) return;
        if (len == max_len) return;
        std::vector<Node> next;
        for (const auto &node : frontier) {
            for (char s : {'H', 'T'}) {
                Exact v = s == 'H' ? node.u.then_h() : node.u.then_t();
                if (seen.insert(v.key()).second) next.push_back({v, node.word + s});
            }
        }
        frontier = std::move(next);
    }
}

}  // namespace

double rotation_phase(int k) { return std::numbers::pi / std::ldexp(1.0, k - 1); }

double unitary_distance_phase(const std::string &symbols, double theta) {
    return distance_to(exact_of(symbols).numeric(), theta);
}

double unitary_distance(const GateSequence &seq, int k) { return unitary_distance_phase(seq.symbols, rotation_phase(k)); }

GateSequence search_ht_phase(double theta, int max_len, double eps) {
    if (max_len < 0) throw std::invalid_argument("max_len must be non-negative");
    if (!(eps > 0)) throw std::invalid_argument("eps must be positive");
    GateSequence best{"", distance_to(Exact::identity().numeric(), theta), false};
    breadth_first(max_len, [&](int, const Node &node) {
        double d = distance_to(node.u.numeric(), theta);
        if (d < best.distance) best = {node.word, d, false};
        if (d <= eps) {
            best = {node.word, d, true};
            return true;
        }
        return false;
    });
    return best;
}

GateSequence search_ht(int k, int max_len, double eps) {
    if (k < 2) throw std::invalid_argument("rotation exponent must be at least 2");
    return search_ht_phase(rotation_phase(k), max_len, eps);
}

std::vector<double> best_distance_by_length(int k, int max_len) {
    if (max_len < 0) throw std::invalid_argument("max_len must be non-negative");
    double theta = rotation_phase(k);
    std::vector<double> best(static_cast<std::size_t>(max_len) + 1, 2.0);
    breadth_first(max_len, [&](int len, const Node &node) {
        best[len] = std::min(best[len], distance_to(node.u.numeric(), theta));
        return false;
    });
    for (std::size_t i = 1; i < best.size(); ++i) best[i] = std::min(best[i], best[i - 1]);
    return best;
}

double cascade_expected_cx(int k) {
    if (k < 2) throw std::invalid_argument("rotation exponent must be at least 2");
    double sum = 0;
    for (int i = 0; i <= k - 2; ++i) sum += std::ldexp(1.0, -i);
    return sum;
}

std::string synth_csv_header() { return "k,max_len,eps,best_sequence,length,distance"; }

std::string synth_csv_row(int k, int max_len, double eps, const GateSequence &seq) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%g,%zu,%.9e", eps, seq.length(), seq.distance);
    std::string row = std::to_string(k) + "," + std::to_string(max_len) + ",";
    std::string tail(buf);
    auto comma = tail.find(',');
    return row + tail.substr(0, comma) + "," + seq.symbols + tail.substr(comma);
}

}  // namespace qfabric
