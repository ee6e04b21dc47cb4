// Acceptance checks, one PASS/FAIL line per criterion. Pass criterion numbers as arguments to
// run a subset; with no arguments all ten run.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <thread>

#include "qcsim/ch_state.hpp"
#include "qcsim/decoder.hpp"
#include "qcsim/oracles/dense.hpp"
#include "qcsim/oracles/pauli_frame.hpp"
#include "qcsim/shot_engine.hpp"
#include "qcsim/surface_code.hpp"
#include "qcsim/sweep.hpp"
#include "qcsim/tomography.hpp"

using namespace qcsim;

namespace {

struct Verdict {
    bool pass;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

unsigned workers() { return std::max(1u, std::thread::hardware_concurrency()); }

// ---- 1 ----
Verdict phase_exact_core() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(1001);
    static constexpr GateKind kOne[] = {GateKind::H, GateKind::S, GateKind::Sdg, GateKind::X, GateKind::Y, GateKind::Z};
    static constexpr GateKind kTwo[] = {GateKind::CX, GateKind::CZ, GateKind::SWAP};
    double worst = 0;
    for (int c = 0; c < 1000; ++c) {
        const std::size_t n = 1 + rng() % 6;
        const std::size_t gates = rng() % 501;
        StabilizerStateCH ch(n);
        oracle::DenseStatevector dense(n);
        for (std::size_t g = 0; g < gates; ++g) {
            CliffordGate gate = gate1(kOne[rng() % 6], static_cast<std::uint32_t>(rng() % n));
            if (n >= 2 && rng() % 3 == 0) {
                const auto a = static_cast<std::uint32_t>(rng() % n);
                auto b = static_cast<std::uint32_t>(rng() % n);
                while (b == a) b = static_cast<std::uint32_t>(rng() % n);
                gate = gate2(kTwo[rng() % 3], a, b);
            }
            ch.apply(gate);
            dense.apply(gate);
        }
        const auto a = ch.to_dense();
        for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - dense.amplitudes()[i]));
    }
    const double t = seconds_since(t0);
    return {worst <= 1e-9 && t < 60, fmt("max amplitude error %.3g over 1000 circuits, %.2f s", worst, t)};
}

// ---- 2 ----
Verdict estimator_unbiased() {
    const auto t0 = Clock::now();
    NoisyCircuit c(1);
    c.add_gate(gate1(GateKind::H, 0));
    c.add_channel(dephasing_channel(0.3), {0});
    const std::uint64_t N = 1000000;
    const auto acc = estimate_observables(c, {PauliOperator::parse("X")}, N, {2002, 0, 0}, workers());
    const auto e = acc.estimate(0);
    const double want = std::cos(0.3);
    const double bound = c.extent_product() / double(N);
    const double var = e.stddev * e.stddev;
    const double t = seconds_since(t0);
    const bool ok = std::abs(e.mean.real() - want) <= 5 * e.stddev && var <= bound && t < 60;
    return {ok, fmt("mean %.6f vs %.6f (%.2f sigma), variance %.3g <= bound %.3g, %.1f s", e.mean.real(), want,
                    std::abs(e.mean.real() - want) / e.stddev, var, bound, t)};
}

// ---- 3 ----
Verdict branching_examples() {
    Rng rng = make_stream({3003});
    const auto Z = PauliOperator::parse("Z"), X = PauliOperator::parse("X");
    auto plus = [] { return apply_clifford(init_zero(1), gate1(GateKind::H, 0)); };
    auto one = [] { return apply_clifford(init_zero(1), gate1(GateKind::X, 0)); };
    double err = 0;
    bool ok = true;
    {
        auto k = init_zero(1), b = init_zero(1);
        const auto o = measure_pauli(k, b, Z, rng);
        ok &= !o.bit;
        err = std::max(err, std::abs(o.w - 1.0));
    }
    for (int t = 0; t < 100; ++t) {
        auto k = plus(), b = plus();
        const auto o = measure_pauli(k, b, Z, rng);
        err = std::max(err, std::abs(o.w - 1.0));
        err = std::max(err, std::abs(k.expectation(Z) - (o.bit ? -1.0 : 1.0)));
    }
    for (int t = 0; t < 100; ++t) {
        auto k = plus(), b = init_zero(1);
        const auto o = measure_pauli(k, b, Z, rng);
        ok &= !o.bit;
        err = std::max(err, std::abs(o.w - std::sqrt(0.5)));
    }
    {
        auto k = one(), b = one();
        err = std::max(err, std::abs(reset_pauli(k, b, Z, X, rng) - 1.0));
        err = std::max(err, std::abs(k.expectation(Z) - 1.0));
    }
    for (int t = 0; t < 100; ++t) {
        auto k = plus(), b = plus();
        err = std::max(err, std::abs(reset_pauli(k, b, Z, X, rng) - 1.0));
        err = std::max(err, std::abs(k.expectation(Z) - 1.0));
    }
    for (int t = 0; t < 100; ++t) {
        auto k = plus(), b = init_zero(1);
        err = std::max(err, std::abs(reset_pauli(k, b, Z, X, rng) - std::sqrt(0.5)));
        err = std::max(err, std::abs(std::abs(inner_product(k, init_zero(1))) - 1.0));
        err = std::max(err, std::abs(std::abs(inner_product(b, init_zero(1))) - 1.0));
    }
    return {ok && err <= 1e-12, fmt("max deviation %.3g over the measure and reset examples", err)};
}

// ---- 4 ----
Verdict stochastic_cross_oracle() {
    const auto t0 = Clock::now();
    NoiseModel m;
    m.rate = 0.043;
    m.mode = DephasingMode::Twirled;
    const std::uint64_t N = 100000;
    bool ok = true;
    std::string detail;
    for (auto [st, which] : {std::pair{LogicalState::Zero, 'Z'}, std::pair{LogicalState::Plus, 'X'}}) {
        const auto ex = build_memory_experiment(3, st, m);
        const SurfaceDecoder dec(ex.patch, ex.layout);
        const PauliOperator L = ex.patch.logical(which);
        // shot engine: decoded <L> = 1 - 2 p_fail
        const auto acc = run_blocks(1, N, {4004, 0, std::uint64_t(st)}, workers(), [&](Rng& rng, std::span<cplx> out) {
            const auto r = run_shot(ex.circuit, {L}, rng);
            if (r.aborted) return false;
            const bool flip = logical_flips(dec.decode_record(r.record), ex.patch)[which];
            out[0] = (flip ? -1.0 : 1.0) * r.weight * r.values[0];
            return true;
        });
        const double p_se = 0.5 * (1.0 - acc.estimate(0).mean.real());
        Rng rng = make_stream({4005, std::uint64_t(st)});
        std::uint64_t fails = 0;
        for (std::uint64_t s = 0; s < N; ++s) {
            const auto fs = oracle::pauli_frame_sample(ex.circuit, rng);
            const bool flip = logical_flips(dec.decode_record(fs.flips), ex.patch)[which];
            fails += (!fs.frame.commutes_with(L)) != flip;
        }
        const double p_pf = double(fails) / double(N);
        const double p = 0.5 * (p_se + p_pf);
        const double sigma = std::sqrt(std::max(p * (1 - p), 1.0 / N) * 2.0 / N);
        const bool agree = std::abs(p_se - p_pf) <= 3 * sigma;
        ok &= agree;
        detail += fmt("%s_L flip: engine %.5f frame %.5f (%.2f sigma); ", which == 'Z' ? "Z" : "X", p_se, p_pf,
                      std::abs(p_se - p_pf) / sigma);
    }
    const double t = seconds_since(t0);
    ok &= t < 600;
    return {ok, detail + fmt("%.0f s", t)};
}

// ---- 5 ----
Verdict decoder_soundness() {
    const auto t0 = Clock::now();
    std::size_t checked = 0;
    const std::size_t bad = decode_selftest(3, &checked);
    NoiseModel m;
    m.rate = 0.043;
    m.mode = DephasingMode::Twirled;
    const auto ex = build_memory_experiment(3, LogicalState::Zero, m);
    const SurfaceDecoder dec(ex.patch, ex.layout);
    const auto faults = oracle::enumerate_faults(ex.circuit);
    std::mt19937_64 rng(5005);
    std::size_t compared = 0, mismatched = 0;
    for (int set = 0; set < 1000; ++set) {
        std::vector<oracle::FaultLocation> fl;
        const int k = 1 + int(rng() % 6);
        for (int i = 0; i < k; ++i) fl.push_back(faults[rng() % faults.size()]);
        const auto fs = oracle::propagate_faults(ex.circuit, fl);
        for (const DecodingGraph* g : {&dec.x_graph(), &dec.z_graph()}) {
            const BitVec syn = detectors_from_record(fs.flips, ex.layout, *g);
            std::vector<std::size_t> defects;
            syn.for_each_set([&](std::size_t u) { defects.push_back(u); });
            if (defects.size() > 12) continue;
            ++compared;
            mismatched += !(match_defects(*g, defects).cost == brute_force_matching_cost(*g, defects));
        }
    }
    return {bad == 0 && mismatched == 0,
            fmt("%zu of %zu single faults decode wrongly; %zu of %zu syndromes differ from brute force, %.1f s", bad,
                checked, mismatched, compared, seconds_since(t0))};
}

// ---- 6 ----
Verdict diamond_oracles() {
    auto diag = [](double a, double b, double c, double d) {
        Mat4 m{};
        m[0][0] = a, m[1][1] = b, m[2][2] = c, m[3][3] = d;
        return m;
    };
    Mat4 rot = diag(1, std::cos(0.2), std::cos(0.2), 1);
    rot[1][2] = -std::sin(0.2);
    rot[2][1] = std::sin(0.2);
    const double d_id = diamond_error(identity_ptm());
    const double d_bf = diamond_error(diag(1, 1, 0.98, 0.98));
    const double d_rot = diamond_error(rot);
    const double d_dep = diamond_error(diag(1, 0, 0, 0));
    const bool ok = std::abs(d_id) <= 1e-9 && std::abs(d_bf - 0.02) <= 1e-5 && std::abs(d_rot - 0.1996668) <= 1e-5 &&
                    std::abs(d_dep - 1.5) <= 1e-4;
    return {ok, fmt("identity %.3g, bit flip %.8f, Z rotation %.8f, depolarizing %.8f", d_id, d_bf, d_rot, d_dep)};
}

PointResult point(int d, double rate, DephasingMode mode, std::uint64_t shots, std::uint64_t seed) {
    SweepConfig cfg;
    cfg.shots = shots;
    cfg.seed = seed;
    return run_point({d, rate, mode, 0}, cfg, workers());
}

// ---- 7 ----
Verdict error_suppression() {
    const auto t0 = Clock::now();
    const auto p3 = point(3, 0.043, DephasingMode::Twirled, 1000000, 7007);
    const auto p5 = point(5, 0.043, DephasingMode::Twirled, 1000000, 7007);
    const double hi5 = p5.diamond.value + 2 * p5.diamond.stddev;
    const double lo3 = p3.diamond.value - 2 * p3.diamond.stddev;
    return {hi5 < lo3, fmt("D(d=3) = %.6f +- %.6f, D(d=5) = %.6f +- %.6f (2 sigma), %.0f s", p3.diamond.value,
                           2 * p3.diamond.stddev, p5.diamond.value, 2 * p5.diamond.stddev, seconds_since(t0))};
}

// ---- 8 ----
Verdict coherent_twirled_agreement() {
    const auto t0 = Clock::now();
    const auto pc = point(3, 0.043, DephasingMode::Coherent, 1000000, 8008);
    const auto pt = point(3, 0.043, DephasingMode::Twirled, 1000000, 8008);
    const double gap = std::abs(pc.diamond.value - pt.diamond.value);
    const double tol = 2 * (pc.diamond.stddev + pt.diamond.stddev);

    NoiseModel m;
    m.rate = 0.043;
    m.mode = DephasingMode::Coherent;
    const auto ex = build_memory_experiment(3, LogicalState::Plus, m);
    Rng rng = make_stream({8009});
    double worst = 0;
    int split = 0;
    for (int s = 0; s < 20000; ++s) {
        const auto r = run_shot(ex.circuit, {ex.patch.logical('X')}, rng);
        if (r.aborted) continue;
        split += r.norm_product != 1.0;
        const double gate_part = std::abs(r.weight) / r.measurement_factor;
        worst = std::max(worst, std::abs(gate_part - r.norm_product) / r.norm_product);
    }
    return {gap <= tol && worst <= 1e-9,
            fmt("coherent %.6f, twirled %.6f, |diff| %.6f <= %.6f; max relative |w| deviation %.3g over %d coherent "
                "shots, %.0f s",
                pc.diamond.value, pt.diamond.value, gap, tol, worst, split, seconds_since(t0))};
}

// ---- 9 ----
Verdict coherent_rotation_signature() {
    const auto t0 = Clock::now();
    const std::uint64_t N = 10000000;
    SweepConfig cfg;
    cfg.shots = N;
    cfg.seed = 9009;
    struct Q {
        LogicalState state;
        std::size_t obs;
        const char* name;
    };
    const Q qs[2] = {{LogicalState::Minus, 0, "<X_L>_-"}, {LogicalState::Plus, 1, "<Y_L>_+"}};
    bool coherent_signal = false, twirled_signal = false;
    std::string detail;
    for (DephasingMode mode : {DephasingMode::Coherent, DephasingMode::Twirled}) {
        for (const auto& q : qs) {
            const PointSpec p{3, 50.0, mode, 0};
            const auto r = run_input(p, q.state, cfg.noise, N, 0.0, cfg.seed, workers());
            const auto& e = r.obs[q.obs];
            const bool sig = std::abs(e.mean.real()) > 2 * e.stddev;
            (mode == DephasingMode::Coherent ? coherent_signal : twirled_signal) |= sig;
            detail += fmt("%s %s = %.5f +- %.5f; ", mode_name(mode), q.name, e.mean.real(), 2 * e.stddev);
        }
    }
    return {coherent_signal && !twirled_signal, detail + fmt("%.0f s", seconds_since(t0))};
}

// ---- 10 ----
Verdict histogram_properties() {
    std::vector<double> frac, mean;
    std::size_t distinct_max = 0;
    for (int d : {3, 5, 7}) {
        const auto h = idle_histogram(generate_idle(build_patch(d), std::size_t(d)));
        double n = 0, s = 0, above = 0;
        for (auto [g, c] : h) {
            n += c;
            s += double(g) * c;
            if (g > 1'000'000) above += c;
        }
        distinct_max = std::max(distinct_max, h.size());
        frac.push_back(above / n);
        mean.push_back(s / n);
    }
    const bool ok = distinct_max <= 12 && frac[0] > 0 && frac[2] < frac[0] && mean[0] > mean[1] && mean[1] > mean[2];
    return {ok, fmt("distinct gaps <= %zu; >1 ms fraction %.4f/%.4f/%.4f; mean gap %.1f/%.1f/%.1f us (d=3/5/7)",
                    distinct_max, frac[0], frac[1], frac[2], mean[0] / 1e3, mean[1] / 1e3, mean[2] / 1e3)};
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
        {"phase-exact core", phase_exact_core},
        {"estimator unbiasedness", estimator_unbiased},
        {"measurement/reset branching", branching_examples},
        {"stochastic cross-oracle", stochastic_cross_oracle},
        {"decoder soundness", decoder_soundness},
        {"diamond-error oracle suite", diamond_oracles},
        {"error suppression d=5 vs d=3", error_suppression},
        {"coherent/twirled agreement", coherent_twirled_agreement},
        {"coherent logical rotation signature", coherent_rotation_signature},
        {"idle histogram properties", histogram_properties},
    };
    std::vector<int> which;
    for (int i = 1; i < argc; ++i) which.push_back(std::stoi(argv[i]));
    if (which.empty())
        for (int i = 1; i <= 10; ++i) which.push_back(i);
    int failed = 0;
    for (int k : which) {
        if (k < 1 || k > 10) {
            std::fprintf(stderr, "no criterion %d\n", k);
            return 2;
        }
        Verdict v{false, ""};
        try {
            v = criteria[k - 1].second();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        std::printf("criterion %d %s: %s  [%s]\n", k, criteria[k - 1].first, v.pass ? "PASS" : "FAIL", v.detail.c_str());
        std::fflush(stdout);
        failed += !v.pass;
    }
    return failed ? 1 : 0;
}
