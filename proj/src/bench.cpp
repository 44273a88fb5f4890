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

#include "qfabric/bench.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <queue>
#include <sstream>
#include <stdexcept>

#include "qfabric/factory.hpp"
#include "qfabric/synth.hpp"

namespace qfabric {

namespace {

EncodedGate g1(GateKind kind, std::uint32_t q) { return EncodedGate{kind, {q, 0, 0}, 1, 0}; }
EncodedGate g2(GateKind kind, std::uint32_t a, std::uint32_t b) { return EncodedGate{kind, {a, b, 0}, 2, 0}; }
EncodedGate ccx(std::uint32_t a, std::uint32_t b, std::uint32_t c) {
    return EncodedGate{GateKind::CCX, {a, b, c}, 3, 0};
}

int floor_log2(std::uint32_t n) { return n ? 31 - std::countl_zero(n) : 0; }

// Vedral-Barenco-Ekert ripple-carry adder: a (n), b (n + 1 with the
// overflow bit), carries c (n). The carries and b_n start as fresh zeros.
DataflowGraph ripple_carry(std::uint32_t n) {
    DataflowGraph g;
    g.num_data_qubits = 3 * n + 1;
    auto a = [&](std::uint32_t i) { return i; };
    auto b = [&](std::uint32_t i) { return n + i; };
    auto c = [&](std::uint32_t i) { return i < n ? 2 * n + 1 + i : b(n); };
    for (std::uint32_t i = 0; i < n; ++i) g.add(g1(GateKind::prep, c(i)));
    g.add(g1(GateKind::prep, b(n)));

    auto carry = [&](std::uint32_t i) {
        g.add(ccx(a(i), b(i), c(i + 1)));
        g.add(g2(GateKind::CX, a(i), b(i)));
        g.add(ccx(c(i), b(i), c(i + 1)));
    };
    auto carry_inverse = [&](std::uint32_t i) {
        g.add(ccx(c(i), b(i), c(i + 1)));
        g.add(g2(GateKind::CX, a(i), b(i)));
        g.add(ccx(a(i), b(i), c(i + 1)));
    };
    auto sum = [&](std::uint32_t i) {
        g.add(g2(GateKind::CX, a(i), b(i)));
        g.add(g2(GateKind::CX, c(i), b(i)));
    };
    for (std::uint32_t i = 0; i < n; ++i) carry(i);
    g.add(g2(GateKind::CX, a(n - 1), b(n - 1)));
    sum(n - 1);
    for (std::uint32_t i = n - 1; i-- > 0;) {
        carry_inverse(i);
        sum(i);
    }
    return g;
}

// Draper-Kutin-Rains-Svore out-of-place carry-lookahead adder: a (n), b (n),
// z (n + 1) receives the sum, X holds the propagate tree. z and X start as
// fresh zeros; b is restored at the end.
DataflowGraph carry_lookahead(std::uint32_t n) {
    const int logn = floor_log2(n);
    DataflowGraph g;
    auto a = [&](std::uint32_t i) { return i; };
    auto b = [&](std::uint32_t i) { return n + i; };
    auto z = [&](std::uint32_t i) { return 2 * n + i; };
    std::uint32_t next = 3 * n + 1;
    // P_t[m] for t >= 1 and 1 <= m < floor(n / 2^t) - 1 lives in X.
    std::map<std::pair<int, std::uint32_t>, std::uint32_t> xreg;
    for (int t = 1; t < logn; ++t)
        for (std::uint32_t m = 1; m < (n >> t); ++m) xreg[{t, m}] = next++;
    g.num_data_qubits = next;
    auto P = [&](int t, std::uint32_t m) { return t == 0 ? b(m) : xreg.at({t, m}); };

    for (std::uint32_t i = 0; i <= n; ++i) g.add(g1(GateKind::prep, z(i)));
    for (const auto &[key, q] : xreg) g.add(g1(GateKind::prep, q));

    for (std::uint32_t i = 0; i < n; ++i) g.add(ccx(a(i), b(i), z(i + 1)));
    for (std::uint32_t i = 1; i < n; ++i) g.add(g2(GateKind::CX, a(i), b(i)));

    auto p_rounds = [&] {
        for (int t = 1; t < logn; ++t)
            for (std::uint32_t m = 1; m < (n >> t); ++m) g.add(ccx(P(t - 1, 2 * m), P(t - 1, 2 * m + 1), P(t, m)));
    };
    p_rounds();
    for (int t = 1; t <= logn; ++t) {
        for (std::uint32_t m = 0; m < (n >> t); ++m) {
            std::uint32_t hi = (m << t) + (1u << t), mid = (m << t) + (1u << (t - 1));
            g.add(ccx(z(mid), P(t - 1, 2 * m + 1), z(hi)));
        }
    }
    for (int t = floor_log2(2 * n / 3); t >= 1; --t) {
        for (std::uint32_t m = 1; m <= (n - (1u << (t - 1))) >> t; ++m) {
            std::uint32_t lo = m << t, mid = (m << t) + (1u << (t - 1));
            g.add(ccx(z(lo), P(t - 1, 2 * m), z(mid)));
        }
    }
    for (int t = logn - 1; t >= 1; --t)
        for (std::uint32_t m = 1; m < (n >> t); ++m) g.add(ccx(P(t - 1, 2 * m), P(t - 1, 2 * m + 1), P(t, m)));

    for (std::uint32_t i = 1; i < n; ++i) g.add(g2(GateKind::CX, b(i), z(i)));
    g.add(g2(GateKind::CX, a(0), z(0)));
    g.add(g2(GateKind::CX, b(0), z(0)));
    for (std::uint32_t i = 1; i < n; ++i) g.add(g2(GateKind::CX, a(i), b(i)));
    return g;
}

DataflowGraph fourier(std::uint32_t n, const QftOptions &opts) {
    DataflowGraph g;
    g.num_data_qubits = n;
    for (std::uint32_t j = 0; j < n; ++j) {
        g.add(g1(GateKind::H, j));
        for (int k = 2; k <= opts.max_controlled_k && j + k - 1 < n; ++k) {
            EncodedGate cr = g2(GateKind::Rk, j + k - 1, j);
            cr.k = static_cast<std::int8_t>(k);
            g.add(cr);
        }
    }
    return g;
}

void expand_toffoli(DataflowGraph &out, std::uint32_t a, std::uint32_t b, std::uint32_t c) {
    using G = GateKind;
    out.add(g1(G::H, c));
    out.add(g2(G::CX, b, c));
    out.add(g1(G::Tdg, c));
    out.add(g2(G::CX, a, c));
    out.add(g1(G::T, c));
    out.add(g2(G::CX, b, c));
    out.add(g1(G::Tdg, c));
    out.add(g2(G::CX, a, c));
    out.add(g1(G::Tdg, b));
    out.add(g1(G::T, c));
    out.add(g1(G::H, c));
    out.add(g2(G::CX, a, b));
    out.add(g1(G::Tdg, b));
    out.add(g2(G::CX, a, b));
    out.add(g1(G::T, a));
    out.add(g1(G::S, b));
}

class RotationExpander {
   public:
    explicit RotationExpander(const QftOptions &opts) : opts_(opts) {}

    void emit(DataflowGraph &out, int k, std::uint32_t q) {
        int mag = std::abs(k);
        bool inverse = k < 0;
        if (mag <= 1) {
            if (mag == 1) out.add(g1(GateKind::Z, q));
            return;
        }
        if (mag == 2) {
            out.add(g1(inverse ? GateKind::Sdg : GateKind::S, q));
            return;
        }
        if (mag == 3) {
            out.add(g1(inverse ? GateKind::Tdg : GateKind::T, q));
            return;
        }
        auto it = words_.find(k);
        if (it == words_.end()) {
            double theta = (inverse ? -1 : 1) * rotation_phase(mag);
            it = words_.emplace(k, search_ht_phase(theta, opts_.synth_max_len, opts_.synth_eps).symbols).first;
        }
        const std::string &word = it->second;
        for (std::size_t i = 0; i < word.size();) {
            if (word[i] == 'H') {
                out.add(g1(GateKind::H, q));
                ++i;
                continue;
            }
            // A run of T^r folds into Clifford powers plus at most one T or Tdg.
            std::size_t j = i;
            while (j < word.size() && word[j] == 'T') ++j;
            emit_t_power(out, static_cast<int>((j - i) % 8), q);
            i = j;
        }
    }

   private:
    static void emit_t_power(DataflowGraph &out, int r, std::uint32_t q) {
        static const std::vector<GateKind> table[8] = {
            {}, {GateKind::T}, {GateKind::S}, {GateKind::S, GateKind::T}, {GateKind::Z}, {GateKind::Z, GateKind::T},
            {GateKind::Sdg}, {GateKind::Tdg},
        };
        for (auto kind : table[r]) out.add(g1(kind, q));
    }

    QftOptions opts_;
    std::map<int, std::string> words_;
};

struct Asap {
    std::vector<Micros> start;
    std::vector<Micros> end;
    std::vector<std::int64_t> critical_pred;
};

Asap schedule_asap(const DataflowGraph &g, const LatencyModel &lm) {
    Asap s;
    std::size_t n = g.gates.size();
    s.start.assign(n, 0);
    s.end.assign(n, 0);
    s.critical_pred.assign(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        for (auto p : g.preds[i]) {
            if (s.end[p] > s.start[i] || (s.end[p] == s.start[i] && s.critical_pred[i] >= 0 && p < s.critical_pred[i])) {
                s.start[i] = s.end[p];
                s.critical_pred[i] = p;
            }
        }
        s.end[i] = s.start[i] + lm.data_latency(g.gates[i]) + lm.qec_interact;
    }
    return s;
}

}  // namespace

std::string gate_name(const EncodedGate &g) {
    switch (g.kind) {
        case GateKind::prep: return "prep";
        case GateKind::X: return "X";
        case GateKind::Z: return "Z";
        case GateKind::H: return "H";
        case GateKind::S: return "S";
        case GateKind::Sdg: return "Sdg";
        case GateKind::T: return "T";
        case GateKind::Tdg: return "Tdg";
        case GateKind::CX: return "CX";
        case GateKind::CCX: return "CCX";
        case GateKind::Rk: return "R" + std::to_string(std::abs(g.k)) + (g.k < 0 ? "dg" : "");
    }
    return "?";
}

void DataflowGraph::add(const EncodedGate &g) {
    auto index = static_cast<std::uint32_t>(gates.size());
    std::vector<std::uint32_t> deps;
    for (std::uint8_t k = 0; k < g.arity; ++k) {
        auto q = g.operands[k];
        if (q >= num_data_qubits) throw std::invalid_argument("gate operand out of range");
        for (std::uint8_t j = 0; j < k; ++j)
            if (g.operands[j] == q) throw std::invalid_argument("gate operands must be distinct");
        if (last_use.size() < num_data_qubits) last_use.resize(num_data_qubits, -1);
        if (last_use[q] >= 0) {
            auto p = static_cast<std::uint32_t>(last_use[q]);
            if (std::find(deps.begin(), deps.end(), p) == deps.end()) deps.push_back(p);
        }
        last_use[q] = index;
    }
    std::sort(deps.begin(), deps.end());
    gates.push_back(g);
    preds.push_back(std::move(deps));
}

std::vector<std::vector<std::uint32_t>> DataflowGraph::successors() const {
    std::vector<std::vector<std::uint32_t>> succ(gates.size());
    for (std::uint32_t i = 0; i < gates.size(); ++i)
        for (auto p : preds[i]) succ[p].push_back(i);
    return succ;
}

BenchKind parse_bench_kind(std::string_view name) {
    if (name == "qrca") return BenchKind::qrca;
    if (name == "qcla") return BenchKind::qcla;
    if (name == "qft") return BenchKind::qft;
    throw std::invalid_argument("unsupported benchmark: " + std::string(name));
}

std::string_view bench_kind_name(BenchKind kind) {
    switch (kind) {
        case BenchKind::qrca: return "qrca";
        case BenchKind::qcla: return "qcla";
        case BenchKind::qft: return "qft";
    }
    return "?";
}

DataflowGraph build_reversible(BenchKind kind, std::uint32_t width, const QftOptions &opts) {
    if (width < 1) throw std::invalid_argument("benchmark width must be at least 1");
    switch (kind) {
        case BenchKind::qrca: return ripple_carry(width);
        case BenchKind::qcla: return carry_lookahead(width);
        case BenchKind::qft: return fourier(width, opts);
    }
    throw std::invalid_argument("unsupported benchmark");
}

DataflowGraph expand_to_clifford_t(const DataflowGraph &g, const QftOptions &opts) {
    DataflowGraph out;
    out.num_data_qubits = g.num_data_qubits;
    RotationExpander rot(opts);
    for (const auto &gate : g.gates) {
        if (gate.kind == GateKind::CCX) {
            expand_toffoli(out, gate.operands[0], gate.operands[1], gate.operands[2]);
        } else if (gate.kind == GateKind::Rk && gate.arity == 2) {
            // Controlled R_k: half-angle rotations on both qubits around one CX.
            auto c = gate.operands[0], t = gate.operands[1];
            int half = (gate.k < 0 ? -1 : 1) * (std::abs(gate.k) + 1);
            rot.emit(out, half, c);
            rot.emit(out, half, t);
            out.add(g2(GateKind::CX, c, t));
            rot.emit(out, -half, t);
        } else if (gate.kind == GateKind::Rk) {
            rot.emit(out, gate.k, gate.operands[0]);
        } else {
            out.add(gate);
        }
    }
    return out;
}

DataflowGraph build_circuit(BenchKind kind, std::uint32_t width, const QftOptions &opts) {
    return expand_to_clifford_t(build_reversible(kind, width, opts), opts);
}

GateCounts count_gates(const DataflowGraph &g) {
    GateCounts c;
    for (const auto &gate : g.gates) {
        ++c.total;
        if (gate.kind == GateKind::prep) ++c.preps;
        else if (gate.kind == GateKind::CX) ++c.cx;
        else if (!gate.transversal()) ++c.non_transversal;
        else if (gate.arity == 1) ++c.transversal_1q;
    }
    return c;
}

Micros LatencyModel::data_latency(const EncodedGate &g) const {
    switch (g.kind) {
        case GateKind::prep: return 0;
        case GateKind::CX: return profile.t_2q();
        case GateKind::CCX: throw std::invalid_argument("expand Toffolis before scheduling");
        case GateKind::T:
        case GateKind::Tdg:
        case GateKind::Rk:
            // Transversal CX with the pi/8 ancilla, readout, conditional fix-up.
            return profile.t_2q() + profile.t_meas() + profile.t_1q();
        default: return profile.t_1q();
    }
}

LatencyModel latency_model(const TechProfile &profile) {
    LatencyModel lm{0, 0, profile};
    // Bit then phase correction: each is a transversal CX, readout, and fix-up.
    lm.qec_interact = 2 * (profile.t_2q() + profile.t_meas() + profile.t_1q()) + kQecTurnOverhead * profile.t_turn();
    lm.ancilla_prep = build_zero_factory(profile).output_latency;
    return lm;
}

double Characterization::data_share() const {
    return serial_total() ? 100.0 * data_op_latency / serial_total() : 0.0;
}
double Characterization::qec_share() const {
    return serial_total() ? 100.0 * qec_interact_latency / serial_total() : 0.0;
}
double Characterization::prep_share() const {
    return serial_total() ? 100.0 * ancilla_prep_latency / serial_total() : 0.0;
}

Characterization characterize(const DataflowGraph &g, const TechProfile &profile) {
    Characterization c;
    if (g.gates.empty()) return c;
    auto lm = latency_model(profile);
    auto s = schedule_asap(g, lm);
    std::size_t last = 0;
    for (std::size_t i = 1; i < g.gates.size(); ++i)
        if (s.end[i] > s.end[last]) last = i;
    for (std::int64_t i = static_cast<std::int64_t>(last); i >= 0; i = s.critical_pred[i]) {
        ++c.critical_gates;
        c.data_op_latency += lm.data_latency(g.gates[i]);
    }
    c.qec_interact_latency = static_cast<Micros>(c.critical_gates) * lm.qec_interact;
    c.ancilla_prep_latency = static_cast<Micros>(c.critical_gates) * lm.ancilla_prep;
    auto counts = count_gates(g);
    c.gates = counts.total;
    double runtime_ms = c.speed_of_data() / 1000.0;
    c.zero_bw_avg = 2.0 * counts.total / runtime_ms;
    c.pi8_bw_avg = counts.non_transversal / runtime_ms;
    c.nontransversal_fraction = 100.0 * counts.non_transversal / counts.total;
    return c;
}

std::vector<std::uint64_t> demand_profile(const DataflowGraph &g, const TechProfile &profile, Micros bucket) {
    if (bucket <= 0) throw std::invalid_argument("bucket must be positive");
    std::vector<std::uint64_t> series;
    if (g.gates.empty()) return series;
    auto lm = latency_model(profile);
    auto s = schedule_asap(g, lm);
    for (std::size_t i = 0; i < g.gates.size(); ++i) {
        auto at = static_cast<std::size_t>((s.start[i] + lm.data_latency(g.gates[i])) / bucket);
        if (series.size() <= at) series.resize(at + 1, 0);
        series[at] += 2;
    }
    return series;
}

Micros bandwidth_limited_runtime(const DataflowGraph &g, const TechProfile &profile, double bw) {
    if (!(bw > 0)) throw std::invalid_argument("bandwidth must be positive");
    if (g.gates.empty()) return 0;
    auto lm = latency_model(profile);
    auto succ = g.successors();
    std::size_t n = g.gates.size();
    std::vector<std::size_t> waiting(n);
    std::vector<double> ready(n, 0.0);
    using Item = std::pair<double, std::uint32_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    for (std::uint32_t i = 0; i < n; ++i) {
        waiting[i] = g.preds[i].size();
        if (waiting[i] == 0) queue.push({static_cast<double>(lm.data_latency(g.gates[i])), i});
    }
    const double us_per_ancilla = 1000.0 / bw;
    std::uint64_t consumed = 0;
    double finish = 0;
    while (!queue.empty()) {
        auto [request, i] = queue.top();
        queue.pop();
        consumed += 2;
        double start = std::max(request, consumed * us_per_ancilla);
        double end = start + static_cast<double>(lm.qec_interact);
        finish = std::max(finish, end);
        for (auto s : succ[i]) {
            ready[s] = std::max(ready[s], end);
            if (--waiting[s] == 0) queue.push({ready[s] + lm.data_latency(g.gates[s]), s});
        }
    }
    return static_cast<Micros>(std::ceil(finish - 1e-9));
}

void write_graph(std::ostream &out, const DataflowGraph &g) {
    out << "qubits " << g.num_data_qubits << '\n';
    for (const auto &gate : g.gates) {
        out << "gate " << gate_name(gate) << ' ';
        for (std::uint8_t k = 0; k < gate.arity; ++k) out << (k ? "," : "") << gate.operands[k];
        out << '\n';
    }
}

DataflowGraph read_graph(std::istream &in) {
    static const std::map<std::string, GateKind> kinds = {
        {"prep", GateKind::prep}, {"X", GateKind::X},     {"Z", GateKind::Z},   {"H", GateKind::H},
        {"S", GateKind::S},       {"Sdg", GateKind::Sdg}, {"T", GateKind::T},   {"Tdg", GateKind::Tdg},
        {"CX", GateKind::CX},     {"CCX", GateKind::CCX},
    };
    DataflowGraph g;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream fields(line);
        std::string head, name, ops;
        if (!(fields >> head)) continue;
        if (head == "qubits") {
            fields >> g.num_data_qubits;
            continue;
        }
        if (head != "gate" || !(fields >> name >> ops)) throw std::invalid_argument("bad graph line: " + line);
        EncodedGate gate{GateKind::X, {}, 0, 0};
        if (auto it = kinds.find(name); it != kinds.end()) {
            gate.kind = it->second;
        } else if (name.size() > 1 && name[0] == 'R') {
            bool inverse = name.size() > 3 && name.ends_with("dg");
            gate.kind = GateKind::Rk;
            int k = std::stoi(name.substr(1, name.size() - 1 - (inverse ? 2 : 0)));
            gate.k = static_cast<std::int8_t>(inverse ? -k : k);
        } else {
            throw std::invalid_argument("unknown gate: " + name);
        }
        std::istringstream list(ops);
        std::string item;
        while (std::getline(list, item, ',')) {
            if (gate.arity == 3) throw std::invalid_argument("too many operands: " + line);
            gate.operands[gate.arity++] = static_cast<std::uint32_t>(std::stoul(item));
        }
        if (gate.arity == 0) throw std::invalid_argument("gate needs operands: " + line);
        g.add(gate);
    }
    return g;
}

std::string characterization_csv_header() {
    return "circuit,gates,critical_gates,data_op_us,data_op_pct,qec_interact_us,qec_interact_pct,ancilla_prep_us,"
           "ancilla_prep_pct,zero_bw,pi8_bw,nontransversal_pct";
}

std::string characterization_csv_row(const std::string &circuit, const Characterization &c) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s,%llu,%llu,%lld,%.1f,%lld,%.1f,%lld,%.1f,%.1f,%.1f,%.1f", circuit.c_str(),
                  static_cast<unsigned long long>(c.gates), static_cast<unsigned long long>(c.critical_gates),
                  static_cast<long long>(c.data_op_latency), c.data_share(),
                  static_cast<long long>(c.qec_interact_latency), c.qec_share(),
                  static_cast<long long>(c.ancilla_prep_latency), c.prep_share(), c.zero_bw_avg, c.pi8_bw_avg,
                  c.nontransversal_fraction);
    return buf;
}

}  // namespace qfabric
