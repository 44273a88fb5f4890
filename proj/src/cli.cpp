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

#include "qfabric/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

#include "qfabric/archsim.hpp"
#include "qfabric/bench.hpp"
#include "qfabric/factory.hpp"
#include "qfabric/mc.hpp"
#include "qfabric/steane.hpp"
#include "qfabric/synth.hpp"
#include "qfabric/tech.hpp"

namespace qfabric::cli {

namespace {

std::string fmt(const char *spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

std::vector<std::string> split(const std::string &line, char sep) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, sep)) out.push_back(cell);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

struct Options {
    std::string profile_path;
    std::string out_path;
    bool json = false;
    bool pretty = false;
    std::uint64_t seed = kDefaultSeed;
    unsigned workers = 0;

    std::string circuit = "qrca";
    std::uint32_t width = 32;
    int synth_max_len = QftOptions{}.synth_max_len;
    double synth_eps = QftOptions{}.synth_eps;

    Micros bucket = 1000;
    double bw_lo = 1, bw_hi = 1e4;
    int per_decade = 4;

    std::string kind = "zero";
    int table = 0;

    std::string benchmark = "qrca";
    double zero_bw = -1, pi8_bw = -1;

    std::string variant = "basic";
    std::uint64_t trials = 100000;
    double error_scale = 1.0;

    int k = 3;
    int max_len = 30;
    double eps = 1e-4;

    std::string arch = "fullymux";
    double area = -1;
    double area_lo = 1e2, area_hi = 1e7;
    bool fig12 = false;
    ArchConfig config;
};

QftOptions qft_options(const Options &o) {
    QftOptions q;
    q.synth_max_len = o.synth_max_len;
    q.synth_eps = o.synth_eps;
    return q;
}

TechProfile load_profile(const Options &o) {
    auto base = TechProfile::ion_trap_default();
    if (!o.profile_path.empty()) return load_profile_file(o.profile_path, base);
    if (const char *env = std::getenv("QFABRIC_PROFILE"); env && *env) return load_profile_file(env, base);
    return base;
}

std::vector<BenchKind> circuits(const std::string &name) {
    if (name == "all") return {BenchKind::qrca, BenchKind::qcla, BenchKind::qft};
    return {parse_bench_kind(name)};
}

Table cmd_profile(const Options &o) {
    auto p = load_profile(o);
    Table t{{"key", "value"}, {}};
    for (const auto &line : split(profile_to_text(p), '\n')) {
        if (line.empty()) continue;
        auto eq = line.find('=');
        t.rows.push_back({line.substr(0, eq), line.substr(eq + 1)});
    }
    return t;
}

Table cmd_characterize(const Options &o) {
    auto p = load_profile(o);
    std::string text = characterization_csv_header() + "\n";
    for (auto kind : circuits(o.circuit)) {
        auto c = characterize(build_circuit(kind, o.width, qft_options(o)), p);
        text += characterization_csv_row(std::string(bench_kind_name(kind)), c) + "\n";
    }
    return parse_csv(text);
}

Table cmd_demand(const Options &o) {
    auto p = load_profile(o);
    Table t{{"circuit", "bucket", "start_us", "zero_ancillae"}, {}};
    for (auto kind : circuits(o.circuit)) {
        auto series = demand_profile(build_circuit(kind, o.width, qft_options(o)), p, o.bucket);
        for (std::size_t i = 0; i < series.size(); ++i)
            t.rows.push_back({std::string(bench_kind_name(kind)), std::to_string(i),
                              std::to_string(static_cast<long long>(i) * o.bucket), std::to_string(series[i])});
    }
    return t;
}

Table cmd_bwsweep(const Options &o) {
    auto p = load_profile(o);
    Table t{{"circuit", "bw_per_ms", "runtime_us", "speed_of_data_us"}, {}};
    for (auto kind : circuits(o.circuit)) {
        auto g = build_circuit(kind, o.width, qft_options(o));
        auto speed = characterize(g, p).speed_of_data();
        for (double bw : log_area_grid(o.bw_lo, o.bw_hi, o.per_decade))
            t.rows.push_back({std::string(bench_kind_name(kind)), fmt("%.6g", bw),
                              std::to_string(bandwidth_limited_runtime(g, p, bw)), std::to_string(speed)});
    }
    return t;
}

Table cmd_factory(const Options &o) {
    auto p = load_profile(o);
    if (o.table != 0) return parse_csv(factory_table(o.table, p));
    return parse_csv(factory_csv(build_factory(o.kind, p)));
}

Table cmd_area(const Options &o) {
    auto p = load_profile(o);
    Table t{{"benchmark", "zero_bw", "pi8_bw", "data_area", "qec_factory_area", "pi8_factory_area", "data_pct",
             "qec_pct", "pi8_pct"},
            {}};
    for (auto kind : circuits(o.benchmark)) {
        auto g = build_circuit(kind, o.width, qft_options(o));
        auto c = characterize(g, p);
        double zbw = o.zero_bw >= 0 ? o.zero_bw : c.zero_bw_avg;
        double pbw = o.pi8_bw >= 0 ? o.pi8_bw : c.pi8_bw_avg;
        auto a = area_for_bandwidth(zbw, pbw, p, 7.0 * g.num_data_qubits);
        t.rows.push_back({std::string(bench_kind_name(kind)), fmt("%.1f", zbw), fmt("%.1f", pbw),
                          fmt("%.1f", a.data_area), fmt("%.1f", a.qec_factory_area), fmt("%.1f", a.pi8_factory_area),
                          fmt("%.1f", a.data_percent()), fmt("%.1f", a.qec_percent()), fmt("%.1f", a.pi8_percent())});
    }
    return t;
}

Table cmd_mc(const Options &o) {
    auto p = load_profile(o).scaled_errors(o.error_scale);
    std::vector<std::string> names;
    if (o.variant == "all") names = {"basic", "correct_only", "verify_only", "verify_correct"};
    else names = {o.variant};
    std::string text = stats_csv_header() + "\n";
    for (const auto &name : names) {
        PhysicalCircuit c;
        std::string circuit = "zero";
        if (name == "pi8") {
            c = pi8_ancilla_circuit();
            circuit = "pi8";
        } else if (name == "annotated") {
            c = movement_annotated_basic_prep(p);
        } else {
            c = prep_variant(parse_variant(name));
        }
        text += stats_csv_row(circuit, name, run_trials(c, o.trials, p, o.seed, o.workers)) + "\n";
    }
    return parse_csv(text);
}

Table cmd_synth(const Options &o) {
    auto seq = search_ht(o.k, o.max_len, o.eps);
    return parse_csv(synth_csv_header() + "\n" + synth_csv_row(o.k, o.max_len, o.eps, seq) + "\n");
}

std::vector<Variant> archs(const std::string &name) {
    if (name == "all") return {Variant::fullymux, Variant::qla, Variant::cqla};
    return {parse_arch_variant(name)};
}

Table cmd_sim(const Options &o) {
    auto p = load_profile(o);
    Table t{{"circuit", "variant", "area", "exec_time_us", "stall_us", "cache_misses", "utilization", "events"}, {}};
    auto g = build_circuit(parse_bench_kind(o.circuit), o.width, qft_options(o));
    for (auto v : archs(o.arch)) {
        ArchConfig cfg = o.config;
        cfg.variant = v;
        if (o.area >= 0) cfg = config_for_area(g, v, o.area, p, cfg);
        auto r = simulate(g, cfg, p, o.seed);
        t.rows.push_back({o.circuit, std::string(arch_variant_name(v)), o.area >= 0 ? fmt("%.6g", o.area) : "",
                          std::to_string(r.exec_time), std::to_string(r.ancilla_stall_time),
                          std::to_string(r.cache_misses), fmt("%.6f", r.mean_utilization()),
                          std::to_string(r.events_processed)});
    }
    return t;
}

Table cmd_sweep(const Options &o) {
    auto p = load_profile(o);
    auto g = build_circuit(parse_bench_kind(o.circuit), o.width, qft_options(o));
    auto areas = o.fig12 ? fig12_areas() : log_area_grid(o.area_lo, o.area_hi, o.per_decade);
    std::string text = sweep_csv_header() + "\n";
    for (auto v : o.fig12 ? archs("all") : archs(o.arch))
        text += sweep_csv_rows(v, sweep_area(g, v, areas, p, o.seed, o.config, o.workers));
    return parse_csv(text);
}

void add_bench_flags(CLI::App *sub, Options &o, bool all_allowed) {
    sub->add_option("--circuit", o.circuit, all_allowed ? "qrca, qcla, qft or all" : "qrca, qcla or qft")
        ->capture_default_str();
    sub->add_option("--width", o.width, "operand width in bits")->capture_default_str()->check(CLI::PositiveNumber);
    sub->add_option("--synth-max-len", o.synth_max_len, "rotation search depth")->capture_default_str();
    sub->add_option("--synth-eps", o.synth_eps, "rotation accuracy")->capture_default_str();
}

void add_arch_flags(CLI::App *sub, Options &o) {
    auto &c = o.config;
    sub->add_option("--zero-replication", c.zero_replication, "zero generators per cell (qla, cqla)");
    sub->add_option("--pi8-replication", c.pi8_replication, "pi/8 generators per cell (qla, cqla)");
    sub->add_option("--cache-size", c.cache_size, "compute cache slots (cqla)")->capture_default_str();
    sub->add_option("--channels", c.transfer_channels, "teleport channels (cqla)")->capture_default_str();
    sub->add_option("--teleport-us", c.teleport_time, "teleport time; default 2 x QEC interaction");
    sub->add_option("--zero-factories", c.zero_factories, "pipelined zero factories (fullymux)");
    sub->add_option("--pi8-factories", c.pi8_factories, "pipelined pi/8 factories (fullymux)");
    sub->add_option("--distribution-us", c.distribution_latency, "port-to-data latency; default 5 t_move + t_turn");
    sub->add_option("--replacement", c.replacement, "lru or random")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, Replacement>{{"lru", Replacement::lru}, {"random", Replacement::random}}));
}

}  // namespace

Table parse_csv(const std::string &text) {
    Table t;
    bool have_header = false;
    for (const auto &line : split(text, '\n')) {
        if (line.empty()) continue;
        if (!have_header) {
            t.header = split(line, ',');
            have_header = true;
        } else {
            t.rows.push_back(split(line, ','));
        }
    }
    return t;
}

std::string to_csv(const Table &t) {
    std::string out;
    auto line = [&](const std::vector<std::string> &cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? "," : "") + cells[i];
        out += '\n';
    };
    line(t.header);
    for (const auto &r : t.rows) line(r);
    return out;
}

std::string to_json(const Table &t, bool pretty) {
    auto rows = nlohmann::ordered_json::array();
    for (const auto &r : t.rows) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < t.header.size(); ++i) {
            const std::string cell = i < r.size() ? r[i] : "";
            char *end = nullptr;
            double v = cell.empty() ? 0.0 : std::strtod(cell.c_str(), &end);
            if (!cell.empty() && end && *end == '\0' && std::isfinite(v)) {
                if (cell.find_first_of(".eE") == std::string::npos) obj[t.header[i]] = std::stoll(cell);
                else obj[t.header[i]] = v;
            } else if (cell.empty()) {
                obj[t.header[i]] = nullptr;
            } else {
                obj[t.header[i]] = cell;
            }
        }
        rows.push_back(std::move(obj));
    }
    return rows.dump(pretty ? 2 : -1) + "\n";
}

std::string to_pretty(const Table &t) {
    std::vector<std::size_t> w(t.header.size(), 0);
    auto widen = [&](const std::vector<std::string> &cells) {
        if (cells.size() > w.size()) w.resize(cells.size(), 0);
        for (std::size_t i = 0; i < cells.size(); ++i) w[i] = std::max(w[i], cells[i].size());
    };
    widen(t.header);
    for (const auto &r : t.rows) widen(r);
    std::string out;
    auto line = [&](const std::vector<std::string> &cells) {
        std::string s;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) s += "  ";
            s += cells[i] + std::string(w[i] - cells[i].size(), ' ');
        }
        while (!s.empty() && s.back() == ' ') s.pop_back();
        out += s + '\n';
    };
    line(t.header);
    for (const auto &r : t.rows) line(r);
    return out;
}

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    Options o;
    CLI::App app{"qfabric: fault-tolerant ion-trap microarchitecture models"};
    app.require_subcommand(1, 1);
    app.fallthrough();
    app.add_option("--profile", o.profile_path, "technology override file (else $QFABRIC_PROFILE)");
    app.add_option("--out", o.out_path, "write output here instead of stdout");
    app.add_flag("--json", o.json, "emit JSON instead of CSV");
    app.add_flag("--pretty", o.pretty, "human-readable table (or indented JSON)");
    app.add_option("--seed", o.seed, "random seed")->capture_default_str();
    app.add_option("--workers", o.workers, "worker threads; 0 = all cores")->capture_default_str();

    std::function<Table()> action;

    auto *prof = app.add_subcommand("profile", "print the technology profile in effect");
    prof->callback([&] { action = [&] { return cmd_profile(o); }; });

    auto *ch = app.add_subcommand("characterize", "latency split and speed-of-data ancilla bandwidths");
    add_bench_flags(ch, o, true);
    ch->callback([&] { action = [&] { return cmd_characterize(o); }; });

    auto *dm = app.add_subcommand("demand", "encoded-zero demand per time bucket at speed of data");
    add_bench_flags(dm, o, true);
    dm->add_option("--bucket", o.bucket, "bucket width in us")->capture_default_str()->check(CLI::PositiveNumber);
    dm->callback([&] { action = [&] { return cmd_demand(o); }; });

    auto *bw = app.add_subcommand("bwsweep", "runtime against a steady encoded-zero supply");
    add_bench_flags(bw, o, true);
    bw->add_option("--bw-lo", o.bw_lo, "lowest rate, ancillae/ms")->capture_default_str()->check(CLI::PositiveNumber);
    bw->add_option("--bw-hi", o.bw_hi, "highest rate, ancillae/ms")->capture_default_str()->check(CLI::PositiveNumber);
    bw->add_option("--per-decade", o.per_decade, "grid points per decade")->capture_default_str();
    bw->callback([&] { action = [&] { return cmd_bwsweep(o); }; });

    auto *fa = app.add_subcommand("factory", "factory stages, unit counts and totals");
    fa->add_option("--kind", o.kind, "simple, zero or pi8")
        ->capture_default_str()
        ->check(CLI::IsMember({"simple", "zero", "pi8"}));
    fa->add_option("--table", o.table, "stage table 5, 6, 7 or 8")->check(CLI::IsMember({5, 6, 7, 8}));
    fa->callback([&] { action = [&] { return cmd_factory(o); }; });

    auto *ar = app.add_subcommand("area", "factory area needed for a benchmark's bandwidths");
    ar->add_option("--benchmark", o.benchmark, "qrca, qcla, qft or all")->capture_default_str();
    ar->add_option("--width", o.width, "operand width in bits")->capture_default_str();
    ar->add_option("--zero-bw", o.zero_bw, "override zero bandwidth, ancillae/ms");
    ar->add_option("--pi8-bw", o.pi8_bw, "override pi/8 bandwidth, ancillae/ms");
    ar->add_option("--synth-max-len", o.synth_max_len, "rotation search depth")->capture_default_str();
    ar->callback([&] { action = [&] { return cmd_area(o); }; });

    auto *mc = app.add_subcommand("mc", "Monte Carlo error rate of an ancilla preparation circuit");
    mc->add_option("--variant", o.variant,
                   "basic, correct_only, verify_only, verify_correct, annotated, pi8 or all")
        ->capture_default_str();
    mc->add_option("--trials", o.trials, "trial count")->capture_default_str()->check(CLI::PositiveNumber);
    mc->add_option("--error-scale", o.error_scale, "multiply both error rates")->capture_default_str();
    mc->callback([&] { action = [&] { return cmd_mc(o); }; });

    auto *sy = app.add_subcommand("synth", "shortest H/T word for the pi/2^(k-1) phase rotation");
    sy->add_option("--k", o.k, "rotation index, >= 2")->capture_default_str();
    sy->add_option("--max-len", o.max_len, "longest word searched")->capture_default_str();
    sy->add_option("--eps", o.eps, "accept the first word within this distance")->capture_default_str();
    sy->callback([&] { action = [&] { return cmd_synth(o); }; });

    auto *si = app.add_subcommand("sim", "one microarchitecture simulation");
    add_bench_flags(si, o, false);
    si->add_option("--arch", o.arch, "qla, cqla, fullymux or all")->capture_default_str();
    si->add_option("--area", o.area, "factory area budget in macroblocks (overrides counts)");
    add_arch_flags(si, o);
    si->callback([&] { action = [&] { return cmd_sim(o); }; });

    auto *sw = app.add_subcommand("sweep", "execution time against factory area");
    add_bench_flags(sw, o, false);
    sw->add_option("--arch", o.arch, "qla, cqla, fullymux or all")->capture_default_str();
    sw->add_option("--area-lo", o.area_lo, "smallest budget")->capture_default_str()->check(CLI::PositiveNumber);
    sw->add_option("--area-hi", o.area_hi, "largest budget")->capture_default_str()->check(CLI::PositiveNumber);
    sw->add_option("--per-decade", o.per_decade, "grid points per decade")->capture_default_str();
    sw->add_flag("--fig12", o.fig12, "all three variants on the standard log grid");
    add_arch_flags(sw, o);
    sw->callback([&] { action = [&] { return cmd_sweep(o); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp &e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << "\n" << "run with --help for usage\n";
        return kUsage;
    }

    std::string text;
    try {
        Table t = action();
        if (o.json) text = to_json(t, o.pretty);
        else if (o.pretty) text = to_pretty(t);
        else text = to_csv(t);
    } catch (const ModelError &e) {
        err << "model error: " << e.what() << "\n";
        return kModelFailure;
    } catch (const std::invalid_argument &e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return kModelFailure;
    }

    if (o.out_path.empty()) {
        out << text;
    } else {
        std::ofstream file(o.out_path, std::ios::binary);
        if (!file || !(file << text)) {
            err << "error: cannot write " << o.out_path << "\n";
            return kModelFailure;
        }
    }
    return kOk;
}

}  // namespace qfabric::cli
