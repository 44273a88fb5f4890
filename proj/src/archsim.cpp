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

#include "qfabric/archsim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "qfabric/factory.hpp"
#include "qfabric/mc.hpp"

namespace qfabric {

namespace {

constexpr double kNever = std::numeric_limits<double>::infinity();

// Ancilla j of a stream is ready at (floor(j / servers) + 1) * period.
// Production starts at time zero and finished ancillae wait indefinitely.
struct Stream {
    double period = kNever;
    std::int64_t servers = 0;
    std::uint64_t taken = 0;

    bool producing() const { return servers > 0 && std::isfinite(period); }

    double take(std::uint64_t k) {
        taken += k;
        return static_cast<double>((taken - 1) / servers + 1) * period;
    }
    std::uint64_t produced_by(double t) const {
        if (!producing()) return 0;
        return static_cast<std::uint64_t>(std::floor(t / period + 1e-9)) * servers;
    }
    double utilization(double t) const {
        if (!producing() || t <= 0) return 0.0;
        return std::min(1.0, static_cast<double>(taken) * period / (t * servers));
    }
};

Stream rate_stream(double per_ms) {
    Stream s;
    if (per_ms > 0) {
        s.period = 1000.0 / per_ms;
        s.servers = 1;
    }
    return s;
}

Stream generator_stream(const GeneratorUnit &unit, int replication) {
    Stream s;
    if (replication > 0) {
        s.period = static_cast<double>(unit.period);
        s.servers = replication;
    }
    return s;
}

struct Cache {
    std::vector<std::int64_t> occupant;  // qubit per slot or -1
    std::vector<std::int64_t> slot_of;   // slot per qubit or -1
    std::vector<std::uint64_t> last_touch;
    std::vector<double> channel_free;
};

class Simulator {
   public:
    Simulator(const DataflowGraph &g, const ArchConfig &cfg, const TechProfile &profile, std::uint64_t seed)
        : g_(g), cfg_(cfg), lm_(latency_model(profile)), seed_(seed) {
        dist_ = static_cast<double>(distribution_latency(cfg, profile));
        tele_ = static_cast<double>(teleport_time(cfg, profile));
        auto zu = zero_generator(profile);
        auto pu = pi8_generator(profile);
        std::size_t cells = 1;
        if (cfg.variant == Variant::qla) cells = g.num_data_qubits;
        if (cfg.variant == Variant::cqla) cells = static_cast<std::size_t>(cfg.cache_size);
        if (cfg.variant == Variant::fullymux) {
            zero_.push_back(rate_stream(cfg.zero_factories * build_zero_factory(profile).throughput));
            pi8_.push_back(rate_stream(cfg.pi8_factories * build_pi8_factory(profile).throughput));
        } else {
            zero_.assign(cells, generator_stream(zu, cfg.zero_replication));
            pi8_.assign(cells, generator_stream(pu, cfg.pi8_replication));
        }
        if (cfg.variant == Variant::cqla) {
            cache_.occupant.assign(cells, -1);
            cache_.slot_of.assign(g.num_data_qubits, -1);
            cache_.last_touch.assign(cells, 0);
            cache_.channel_free.assign(static_cast<std::size_t>(cfg.transfer_channels), 0.0);
        }
        qubit_ready_.assign(g.num_data_qubits, 0.0);
    }

    SimResult run() {
        check_supply();
        SimResult r;
        auto succ = g_.successors();
        std::size_t n = g_.gates.size();
        std::vector<std::size_t> waiting(n);
        std::vector<double> ready(n, 0.0);
        using Event = std::tuple<double, int, std::uint32_t>;
        std::priority_queue<Event, std::vector<Event>, std::greater<>> queue;
        for (std::uint32_t i = 0; i < n; ++i) {
            waiting[i] = g_.preds[i].size();
            if (waiting[i] == 0) queue.push({0.0, 0, i});
        }
        double finish = 0;
        while (!queue.empty()) {
            auto [t, rank, i] = queue.top();
            queue.pop();
            ++r.events_processed;
            double end = execute(i, t, r);
            finish = std::max(finish, end);
            for (auto s : succ[i]) {
                ready[s] = std::max(ready[s], end);
                if (--waiting[s] == 0) queue.push({ready[s], 0, s});
            }
        }
        r.exec_time = static_cast<Micros>(std::ceil(finish - 1e-6));
        r.ancilla_stall_time = static_cast<Micros>(std::llround(stall_));
        for (const auto *pools : {&zero_, &pi8_}) {
            for (const auto &s : *pools) {
                if (s.producing()) r.factory_utilization.push_back(s.utilization(finish));
            }
        }
        for (const auto &s : zero_) {
            r.zero_consumed += s.taken;
            r.zero_left += s.produced_by(finish) - std::min(s.produced_by(finish), s.taken);
        }
        for (const auto &s : pi8_) {
            r.pi8_consumed += s.taken;
            r.pi8_left += s.produced_by(finish) - std::min(s.produced_by(finish), s.taken);
        }
        return r;
    }

   private:
    void check_supply() const {
        bool needs_pi8 = false;
        for (const auto &gate : g_.gates)
            if (!gate.transversal()) needs_pi8 = true;
        auto dead = [](const std::vector<Stream> &pools) {
            return std::any_of(pools.begin(), pools.end(), [](const Stream &s) { return !s.producing(); });
        };
        if (!g_.gates.empty() && dead(zero_)) throw ModelError("no encoded zero production: stalled forever");
        if (needs_pi8 && dead(pi8_)) throw ModelError("no pi/8 ancilla production: stalled forever");
    }

    // Index of the generator cell serving qubit q.
    std::size_t cell(std::uint32_t q) const {
        switch (cfg_.variant) {
            case Variant::qla: return q;
            case Variant::cqla: return static_cast<std::size_t>(cache_.slot_of[q]);
            case Variant::fullymux: return 0;
        }
        return 0;
    }

    // Brings q into the cache, evicting a victim that is not in `pinned`.
    void load(std::uint32_t q, double t, const EncodedGate &gate, SimResult &r) {
        if (cache_.slot_of[q] >= 0) return;
        ++r.cache_misses;
        auto &slots = cache_.occupant;
        std::int64_t slot = -1;
        for (std::size_t s = 0; s < slots.size() && slot < 0; ++s)
            if (slots[s] < 0) slot = static_cast<std::int64_t>(s);
        auto channel = std::min_element(cache_.channel_free.begin(), cache_.channel_free.end());
        double start = std::max(t, *channel);
        if (slot < 0) {
            std::vector<std::size_t> eligible;
            for (std::size_t s = 0; s < slots.size(); ++s) {
                bool pinned = false;
                for (std::uint8_t k = 0; k < gate.arity; ++k) pinned |= slots[s] == gate.operands[k];
                if (!pinned) eligible.push_back(s);
            }
            std::size_t victim = eligible.front();
            if (cfg_.replacement == Replacement::random) {
                TrialRng rng(seed_, r.cache_misses);
                victim = eligible[rng.below(static_cast<std::uint32_t>(eligible.size()))];
            } else {
                for (auto s : eligible)
                    if (cache_.last_touch[s] < cache_.last_touch[victim]) victim = s;
            }
            auto out = static_cast<std::uint32_t>(slots[victim]);
            // Write-back teleport from the victim's slot.
            double wb = std::max(start, qubit_ready_[out]);
            wb = std::max(wb, zero_[victim].take(cfg_.teleport_ancillae));
            start = wb + tele_;
            qubit_ready_[out] = start;
            cache_.slot_of[out] = -1;
            ++r.events_processed;
            slot = static_cast<std::int64_t>(victim);
        }
        auto s = static_cast<std::size_t>(slot);
        double in = std::max({start, qubit_ready_[q], zero_[s].take(cfg_.teleport_ancillae)});
        qubit_ready_[q] = in + tele_;
        *channel = qubit_ready_[q];
        slots[s] = q;
        cache_.slot_of[q] = slot;
        ++r.events_processed;
    }

    double execute(std::uint32_t i, double t, SimResult &r) {
        const auto &gate = g_.gates[i];
        if (cfg_.variant == Variant::cqla) {
            for (std::uint8_t k = 0; k < gate.arity; ++k) load(gate.operands[k], t, gate, r);
            ++tick_;
            for (std::uint8_t k = 0; k < gate.arity; ++k)
                cache_.last_touch[static_cast<std::size_t>(cache_.slot_of[gate.operands[k]])] = tick_;
        }
        double start = t;
        for (std::uint8_t k = 0; k < gate.arity; ++k) start = std::max(start, qubit_ready_[gate.operands[k]]);
        // Operands meet at the target's home cell; the control rides back under the QEC.
        if (cfg_.variant == Variant::qla && gate.arity == 2) start += dist_;
        auto home = cell(gate.operands[gate.arity - 1]);
        if (!gate.transversal()) {
            // The pi/8 ancilla is fetched ahead of need; only production can stall.
            double arrive = pi8_[cfg_.variant == Variant::fullymux ? 0 : home].take(1) + dist_;
            if (arrive > start) {
                stall_ += arrive - start;
                start = arrive;
            }
        }
        double data_end = start + static_cast<double>(lm_.data_latency(gate));
        double ancilla = zero_[cfg_.variant == Variant::fullymux ? 0 : home].take(2);
        double delivered = std::max(data_end, ancilla) + dist_;
        stall_ += std::max(0.0, ancilla - data_end);
        double end = delivered + static_cast<double>(lm_.qec_interact);
        for (std::uint8_t k = 0; k < gate.arity; ++k) qubit_ready_[gate.operands[k]] = end;
        return end;
    }

    const DataflowGraph &g_;
    ArchConfig cfg_;
    LatencyModel lm_;
    std::uint64_t seed_;
    double dist_ = 0;
    double tele_ = 0;
    std::vector<Stream> zero_;
    std::vector<Stream> pi8_;
    Cache cache_;
    std::vector<double> qubit_ready_;
    std::uint64_t tick_ = 0;
    double stall_ = 0;
};

}  // namespace

Variant parse_arch_variant(std::string_view name) {
    if (name == "qla") return Variant::qla;
    if (name == "cqla") return Variant::cqla;
    if (name == "fullymux") return Variant::fullymux;
    throw std::invalid_argument("unknown microarchitecture: " + std::string(name));
}

std::string_view arch_variant_name(Variant v) {
    switch (v) {
        case Variant::qla: return "qla";
        case Variant::cqla: return "cqla";
        case Variant::fullymux: return "fullymux";
    }
    return "?";
}

void ArchConfig::validate() const {
    if (zero_replication < 0 || pi8_replication < 0) throw std::invalid_argument("replication must be non-negative");
    if (cache_size < 2) throw std::invalid_argument("cache_size must be at least 2");
    if (transfer_channels < 1) throw std::invalid_argument("transfer_channels must be at least 1");
    if (teleport_ancillae < 0) throw std::invalid_argument("teleport_ancillae must be non-negative");
    if (!(zero_factories >= 0) || !(pi8_factories >= 0)) throw std::invalid_argument("factory counts must be >= 0");
}

double SimResult::mean_utilization() const {
    if (factory_utilization.empty()) return 0.0;
    double sum = 0;
    for (double u : factory_utilization) sum += u;
    return sum / static_cast<double>(factory_utilization.size());
}

GeneratorUnit zero_generator(const TechProfile &profile) {
    auto f = build_simple_factory(profile);
    return GeneratorUnit{f.output_latency, f.total_area};
}

GeneratorUnit pi8_generator(const TechProfile &profile) {
    GeneratorUnit unit = zero_generator(profile);
    for (const auto &spec : pi8_factory_stages()) {
        unit.period += stage_metrics(spec, profile).latency;
        unit.area += spec.unit_area;
    }
    return unit;
}

Micros distribution_latency(const ArchConfig &cfg, const TechProfile &profile) {
    return cfg.distribution_latency >= 0 ? cfg.distribution_latency : 5 * profile.t_move() + profile.t_turn();
}

Micros teleport_time(const ArchConfig &cfg, const TechProfile &profile) {
    return cfg.teleport_time >= 0 ? cfg.teleport_time : 2 * latency_model(profile).qec_interact;
}

SimResult simulate(const DataflowGraph &g, const ArchConfig &cfg, const TechProfile &profile, std::uint64_t seed) {
    cfg.validate();
    if (cfg.variant == Variant::cqla) {
        for (const auto &gate : g.gates)
            if (gate.arity > cfg.cache_size) throw std::invalid_argument("gate wider than the compute cache");
    }
    return Simulator(g, cfg, profile, seed).run();
}

double zero_area_fraction(const DataflowGraph &g, const TechProfile &profile) {
    auto c = characterize(g, profile);
    auto a = area_for_bandwidth(c.zero_bw_avg, c.pi8_bw_avg, profile);
    double total = a.qec_factory_area + a.pi8_factory_area;
    return total > 0 ? a.qec_factory_area / total : 1.0;
}

namespace {

ArchConfig config_with_fraction(const DataflowGraph &g, Variant v, double area, double fz,
                                const TechProfile &profile, const ArchConfig &base) {
    ArchConfig cfg = base;
    cfg.variant = v;
    double zero_area = area * fz, pi8_area = area * (1.0 - fz);
    if (v == Variant::fullymux) {
        double zero_per_rate = area_for_bandwidth(1.0, 0.0, profile).qec_factory_area;
        double pi8_per_rate = area_for_bandwidth(0.0, 1.0, profile).pi8_factory_area;
        cfg.zero_factories = zero_area / zero_per_rate / build_zero_factory(profile).throughput;
        cfg.pi8_factories = pi8_area / pi8_per_rate / build_pi8_factory(profile).throughput;
        return cfg;
    }
    double cells = v == Variant::qla ? static_cast<double>(g.num_data_qubits) : cfg.cache_size;
    cfg.zero_replication = static_cast<int>(std::floor(zero_area / (cells * zero_generator(profile).area) + 1e-9));
    cfg.pi8_replication = static_cast<int>(std::floor(pi8_area / (cells * pi8_generator(profile).area) + 1e-9));
    return cfg;
}

}  // namespace

ArchConfig config_for_area(const DataflowGraph &g, Variant v, double area, const TechProfile &profile,
                           const ArchConfig &base) {
    return config_with_fraction(g, v, area, zero_area_fraction(g, profile), profile, base);
}

std::vector<SweepPoint> sweep_area(const DataflowGraph &g, Variant v, const std::vector<double> &areas,
                                   const TechProfile &profile, std::uint64_t seed, const ArchConfig &base,
                                   unsigned workers) {
    if (!std::is_sorted(areas.begin(), areas.end())) throw std::invalid_argument("areas must be ascending");
    double fz = zero_area_fraction(g, profile);
    std::vector<SweepPoint> points(areas.size());
    auto run_point = [&](std::size_t i) {
        auto &p = points[i];
        p.area = areas[i];
        p.config = config_with_fraction(g, v, areas[i], fz, profile, base);
        try {
            p.result = simulate(g, p.config, profile, seed);
            p.feasible = true;
        } catch (const ModelError &) {
            p.feasible = false;
        }
    };
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(1, areas.size())));
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < areas.size(); i += workers) run_point(i);
        });
    for (auto &t : pool) t.join();
    return points;
}

double area_to_reach(const DataflowGraph &g, Variant v, Micros target, double lo, double hi,
                     const TechProfile &profile, std::uint64_t seed, const ArchConfig &base, double rel_tol) {
    if (!(lo > 0) || hi < lo) throw std::invalid_argument("bad area bracket");
    double fz = zero_area_fraction(g, profile);
    auto reaches = [&](double area) {
        try {
            return simulate(g, config_with_fraction(g, v, area, fz, profile, base), profile, seed).exec_time <= target;
        } catch (const ModelError &) {
            return false;
        }
    };
    if (!reaches(hi)) return -1.0;
    if (reaches(lo)) return lo;
    while (hi / lo > 1.0 + rel_tol) {
        double mid = std::sqrt(lo * hi);
        (reaches(mid) ? hi : lo) = mid;
    }
    return hi;
}

std::vector<double> log_area_grid(double lo, double hi, int per_decade) {
    if (!(lo > 0) || hi < lo || per_decade < 1) throw std::invalid_argument("bad area grid");
    std::vector<double> out;
    double steps = std::round(std::log10(hi / lo) * per_decade);
    for (int i = 0; i <= static_cast<int>(steps); ++i) out.push_back(lo * std::pow(10.0, i / double(per_decade)));
    return out;
}

std::vector<double> fig12_areas() { return log_area_grid(1e2, 1e7, 4); }

std::string sweep_csv_header() { return "variant,area,exec_time_us,stall_us,cache_misses,utilization"; }

std::string sweep_csv_rows(Variant v, const std::vector<SweepPoint> &points) {
    std::string out;
    char buf[192];
    for (const auto &p : points) {
        if (p.feasible) {
            std::snprintf(buf, sizeof buf, "%s,%.6g,%lld,%lld,%llu,%.6f\n", std::string(arch_variant_name(v)).c_str(),
                          p.area, static_cast<long long>(p.result.exec_time),
                          static_cast<long long>(p.result.ancilla_stall_time),
                          static_cast<unsigned long long>(p.result.cache_misses), p.result.mean_utilization());
        } else {
            std::snprintf(buf, sizeof buf, "%s,%.6g,inf,inf,0,0.000000\n", std::string(arch_variant_name(v)).c_str(),
                          p.area);
        }
        out += buf;
    }
    return out;
}

}  // namespace qfabric
