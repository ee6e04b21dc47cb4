// Copyright 2026 The qcsim Authors
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

// Sweeps of logical idle experiments over distance, dephasing rate and noise mode.
//
// Config files are "key = value" lines; lists are comma separated and '#' starts a comment.

#pragma once

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcsim/decoder.hpp"
#include "qcsim/oracles/pauli_frame.hpp"
#include "qcsim/shot_engine.hpp"
#include "qcsim/surface_code.hpp"
#include "qcsim/tomography.hpp"

namespace qcsim {

struct SweepConfig {
    std::vector<int> distances = {3};
    std::vector<double> rates = {0.0};
    std::vector<DephasingMode> modes = {DephasingMode::Twirled};
    std::uint64_t shots = 10000;  // 0 means: derive from target_epsilon
    double target_epsilon = 0.0;
    std::uint64_t seed = 1;
    NoiseModel noise;  // rate and mode are overwritten per point
    std::string output_dir = "results";

    void validate() const {
        if (distances.empty() || rates.empty() || modes.empty()) throw std::invalid_argument("empty sweep axis");
        for (int d : distances)
            if (d < 3 || d % 2 == 0) throw std::invalid_argument("distances must be odd and >= 3");
        for (double r : rates)
            if (!(r >= 0.0) || !std::isfinite(r)) throw std::invalid_argument("rates must be finite and >= 0");
        if (shots == 0 && !(target_epsilon > 0.0)) throw std::invalid_argument("need shots >= 1 or target_epsilon > 0");
        NoiseModel n = noise;
        n.rate = 0.0;
        n.validate();
    }
};

inline const char* mode_name(DephasingMode m) { return m == DephasingMode::Coherent ? "coherent" : "twirled"; }

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

inline std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

inline double parse_double(const std::string& key, const std::string& v) {
    std::size_t pos = 0;
    double x = 0;
    try {
        x = std::stod(v, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != v.size()) throw std::invalid_argument("bad number for " + key + ": '" + v + "'");
    return x;
}

inline std::uint64_t parse_uint(const std::string& key, const std::string& v) {
    if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos)
        throw std::invalid_argument("bad integer for " + key + ": '" + v + "'");
    return std::stoull(v);
}

}  // namespace detail

inline SweepConfig parse_config(std::istream& is) {
    SweepConfig c;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (const auto h = line.find('#'); h != std::string::npos) line.resize(h);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("config line " + std::to_string(lineno) + " has no '='");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string val = detail::trim(line.substr(eq + 1));
        if (key == "distances") {
            c.distances.clear();
            for (const auto& s : detail::split_list(val)) c.distances.push_back(static_cast<int>(detail::parse_uint(key, s)));
        } else if (key == "rates") {
            c.rates.clear();
            for (const auto& s : detail::split_list(val)) c.rates.push_back(detail::parse_double(key, s));
        } else if (key == "mode") {
            if (val == "coherent") c.modes = {DephasingMode::Coherent};
            else if (val == "twirled") c.modes = {DephasingMode::Twirled};
            else if (val == "both") c.modes = {DephasingMode::Coherent, DephasingMode::Twirled};
            else throw std::invalid_argument("mode must be coherent, twirled or both");
        } else if (key == "shots") {
            c.shots = detail::parse_uint(key, val);
        } else if (key == "target_epsilon") {
            c.target_epsilon = detail::parse_double(key, val);
        } else if (key == "seed") {
            c.seed = detail::parse_uint(key, val);
        } else if (key == "p_init") {
            c.noise.p_init = detail::parse_double(key, val);
        } else if (key == "p_1q") {
            c.noise.p_1q = detail::parse_double(key, val);
        } else if (key == "p_2q") {
            c.noise.p_2q = detail::parse_double(key, val);
        } else if (key == "p_meas") {
            c.noise.p_meas = detail::parse_double(key, val);
        } else if (key == "output_dir") {
            c.output_dir = val;
        } else {
            throw std::invalid_argument("unknown config key '" + key + "'");
        }
    }
    c.validate();
    return c;
}

inline SweepConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open config " + path);
    return parse_config(f);
}

inline constexpr std::array<LogicalState, 4> kInputStates = {LogicalState::Zero, LogicalState::One, LogicalState::Plus,
                                                            LogicalState::Minus};
inline constexpr std::array<char, 3> kObservables = {'X', 'Y', 'Z'};

struct PointSpec {
    int distance = 3;
    double rate = 0.0;
    DephasingMode mode = DephasingMode::Twirled;
    std::uint64_t index = 0;  // position in the sweep, part of the stream key
};

struct InputResult {
    LogicalState state;
    std::array<Estimate, 3> obs;  // X_L, Y_L, Z_L
};

struct PointResult {
    PointSpec spec;
    std::vector<InputResult> inputs;  // in kInputStates order
    LogicalChannel raw, unital;
    Acceptance accept_raw, accept_unital;
    DiamondEstimate diamond;  // of the unital channel
};

/// Decoded logical expectations for one input state: each shot contributes
/// w <bra|P_L|ket> times the sign of the decoder's predicted flip of P_L.
inline InputResult run_input(const PointSpec& p, LogicalState state, const NoiseModel& base, std::uint64_t shots,
                             double target_epsilon, std::uint64_t seed, unsigned workers) {
    NoiseModel model = base;
    model.rate = p.rate;
    model.mode = p.mode;
    const MemoryExperiment ex = build_memory_experiment(p.distance, state, model);
    const SurfaceDecoder dec(ex.patch, ex.layout);
    const std::vector<PauliOperator> obs = {ex.patch.logical('X'), ex.patch.logical('Y'), ex.patch.logical('Z')};
    if (shots == 0) shots = std::max<std::uint64_t>(2, shots_needed(target_epsilon, ex.circuit));
    const StreamKey key{seed, p.index, static_cast<std::uint64_t>(state)};
    const auto acc = run_blocks(3, shots, key, workers, [&](Rng& rng, std::span<cplx> out) {
        const ShotResult r = run_shot(ex.circuit, obs, rng);
        if (r.aborted) return false;
        const LogicalFlips f = logical_flips(dec.decode_record(r.record), ex.patch);
        for (std::size_t k = 0; k < 3; ++k) out[k] = (f[kObservables[k]] ? -1.0 : 1.0) * r.weight * r.values[k];
        return true;
    });
    InputResult res{state, {}};
    for (std::size_t k = 0; k < 3; ++k) res.obs[k] = acc.estimate(k);
    return res;
}

inline ExpectationTable table_of(const std::vector<InputResult>& inputs) {
    ExpectationTable t;
    for (const auto& in : inputs)
        for (std::size_t k = 0; k < 3; ++k)
            t.set(static_cast<std::size_t>(in.state), k, {in.obs[k].mean.real(), in.obs[k].stddev, in.obs[k].shots});
    return t;
}

inline PointResult run_point(const PointSpec& p, const SweepConfig& cfg, unsigned workers) {
    PointResult out;
    out.spec = p;
    for (LogicalState s : kInputStates)
        out.inputs.push_back(run_input(p, s, cfg.noise, cfg.shots, cfg.target_epsilon, cfg.seed, workers));
    const ExpectationTable t = table_of(out.inputs);
    out.raw = ptm_from_expectations(t);
    out.unital = ptm_from_expectations(force_unital(t));
    for (LogicalChannel* c : {&out.raw, &out.unital}) {
        c->distance = p.distance;
        c->rate = p.rate;
        c->mode = mode_name(p.mode);
    }
    out.accept_raw = acceptability(out.raw);
    out.accept_unital = acceptability(out.unital);
    out.diamond = diamond_error_with_uncertainty(out.unital);
    return out;
}

/// Grid points in (distance, rate, mode) order.
inline std::vector<PointSpec> sweep_points(const SweepConfig& cfg) {
    std::vector<PointSpec> pts;
    for (int d : cfg.distances)
        for (double r : cfg.rates)
            for (DephasingMode m : cfg.modes) pts.push_back({d, r, m, pts.size()});
    return pts;
}

// ---- CSV output ----

inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

inline void write_expectations_header(std::ostream& os) {
    os << "d,rate,mode,input_state,observable,mean_re,mean_im,stddev,shots\n";
}

inline void write_expectations(std::ostream& os, const PointResult& r) {
    for (const auto& in : r.inputs)
        for (std::size_t k = 0; k < 3; ++k) {
            const auto& e = in.obs[k];
            os << r.spec.distance << ',' << fmt(r.spec.rate) << ',' << mode_name(r.spec.mode) << ','
               << logical_state_name(in.state) << ',' << kObservables[k] << "_L," << fmt(e.mean.real()) << ','
               << fmt(e.mean.imag()) << ',' << fmt(e.stddev) << ',' << e.shots << '\n';
        }
}

inline void write_channels_header(std::ostream& os) {
    os << "d,rate,mode";
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) os << ",N" << a << b;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) os << ",s" << a << b;
    os << ",accepted,diamond_error,diamond_stddev\n";
}

/// One row; the unital-forced channel by default, the raw one when `raw` is set.
inline void write_channel(std::ostream& os, const PointResult& r, bool raw = false) {
    const LogicalChannel& c = raw ? r.raw : r.unital;
    const Acceptance& acc = raw ? r.accept_raw : r.accept_unital;
    const DiamondEstimate d = raw ? DiamondEstimate{diamond_error(r.raw.ptm), 0.0} : r.diamond;
    os << r.spec.distance << ',' << fmt(r.spec.rate) << ',' << mode_name(r.spec.mode);
    for (const auto& row : c.ptm)
        for (double v : row) os << ',' << fmt(v);
    for (const auto& row : c.stddev)
        for (double v : row) os << ',' << fmt(v);
    os << ',' << (acc.accepted ? 1 : 0) << ',' << fmt(d.value) << ',' << fmt(d.stddev) << '\n';
}

inline void write_variance_header(std::ostream& os) { os << "d,rate,mode,input_state,observable,scaled_stddev,shots\n"; }

/// stddev * sqrt(N): flat when noise is stochastic, growing once coherent terms dominate.
inline void write_variance(std::ostream& os, const PointResult& r) {
    for (const auto& in : r.inputs)
        for (std::size_t k = 0; k < 3; ++k) {
            const auto& e = in.obs[k];
            os << r.spec.distance << ',' << fmt(r.spec.rate) << ',' << mode_name(r.spec.mode) << ','
               << logical_state_name(in.state) << ',' << kObservables[k] << "_L,"
               << fmt(e.stddev * std::sqrt(static_cast<double>(e.shots))) << ',' << e.shots << '\n';
        }
}

inline void write_histogram(std::ostream& os, const std::map<std::int64_t, std::size_t>& h) {
    os << "duration_us,count\n";
    for (auto [gap, n] : h) os << format_us(gap) << ',' << n << '\n';
}

namespace detail {

inline std::ofstream open_out(const std::filesystem::path& p) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + p.string());
    return f;
}

}  // namespace detail

/// Runs every point and writes expectations.csv, channels.csv, channels_raw.csv and
/// variance.csv into the output directory. `progress` is called after each point.
template <typename Progress>
std::vector<PointResult> run_sweep(const SweepConfig& cfg, unsigned workers, Progress&& progress) {
    cfg.validate();
    namespace fs = std::filesystem;
    const fs::path dir(cfg.output_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());
    auto ex = detail::open_out(dir / "expectations.csv");
    auto ch = detail::open_out(dir / "channels.csv");
    auto raw = detail::open_out(dir / "channels_raw.csv");
    auto var = detail::open_out(dir / "variance.csv");
    write_expectations_header(ex);
    write_channels_header(ch);
    write_channels_header(raw);
    write_variance_header(var);
    std::vector<PointResult> results;
    for (const auto& p : sweep_points(cfg)) {
        results.push_back(run_point(p, cfg, workers));
        write_expectations(ex, results.back());
        write_channel(ch, results.back());
        write_channel(raw, results.back(), true);
        write_variance(var, results.back());
        progress(results.back());
    }
    for (auto* f : {&ex, &ch, &raw, &var}) {
        f->flush();
        if (!*f) throw std::runtime_error("write failed in " + dir.string());
    }
    return results;
}

inline std::vector<PointResult> run_sweep(const SweepConfig& cfg, unsigned workers = 1) {
    return run_sweep(cfg, workers, [](const PointResult&) {});
}

/// Exhaustive single-fault injection through the decoder; returns the number of faults that
/// leave a logical error.
inline std::size_t decode_selftest(int d, std::size_t* checked = nullptr) {
    NoiseModel m;
    m.rate = 0.043;
    m.mode = DephasingMode::Twirled;
    std::size_t bad = 0, total = 0;
    for (LogicalState s : {LogicalState::Zero, LogicalState::Plus}) {
        const auto ex = build_memory_experiment(d, s, m);
        const SurfaceDecoder dec(ex.patch, ex.layout);
        const auto X = ex.patch.logical('X'), Z = ex.patch.logical('Z');
        for (const auto& f : oracle::enumerate_faults(ex.circuit)) {
            const auto fs = oracle::propagate_faults(ex.circuit, {f});
            const auto flips = logical_flips(dec.decode_record(fs.flips), ex.patch);
            const bool wrong = (!fs.frame.commutes_with(X) != flips.x) || (!fs.frame.commutes_with(Z) != flips.z);
            bad += wrong;
            ++total;
        }
    }
    if (checked) *checked = total;
    return bad;
}

}  // namespace qcsim
