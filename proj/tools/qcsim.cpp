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

// qcsim command line: sweep, histogram, decode-selftest.

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "qcsim/sweep.hpp"

namespace {

struct Common {
    std::string config;
    std::string out;
    std::uint64_t seed = 0;
    bool seed_set = false;
    unsigned workers = 1;
    int distance = 0;
};

qcsim::SweepConfig resolve(const Common& c) {
    qcsim::SweepConfig cfg;
    if (!c.config.empty()) cfg = qcsim::load_config(c.config);
    if (c.seed_set) cfg.seed = c.seed;
    if (!c.out.empty()) cfg.output_dir = c.out;
    if (c.distance) cfg.distances = {c.distance};
    cfg.validate();
    return cfg;
}

int cmd_sweep(const Common& c) {
    const auto cfg = resolve(c);
    const auto t0 = std::chrono::steady_clock::now();
    qcsim::run_sweep(cfg, c.workers, [&](const qcsim::PointResult& r) {
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::cerr << "d=" << r.spec.distance << " rate=" << r.spec.rate << " mode=" << qcsim::mode_name(r.spec.mode)
                  << " diamond=" << r.diamond.value << " +- " << 2 * r.diamond.stddev
                  << " accepted=" << r.accept_unital.accepted << " (" << s << " s)\n";
    });
    std::cerr << "wrote " << cfg.output_dir << "\n";
    return 0;
}

int cmd_histogram(const Common& c) {
    const auto cfg = resolve(c);
    namespace fs = std::filesystem;
    fs::create_directories(cfg.output_dir);
    for (int d : cfg.distances) {
        const auto h = qcsim::idle_histogram(qcsim::generate_idle(qcsim::build_patch(d), static_cast<std::size_t>(d)));
        const fs::path p = fs::path(cfg.output_dir) / ("histogram_d" + std::to_string(d) + ".csv");
        std::ofstream f(p);
        if (!f) throw std::runtime_error("cannot write " + p.string());
        qcsim::write_histogram(f, h);
        std::cerr << "wrote " << p.string() << "\n";
    }
    return 0;
}

int cmd_selftest(const Common& c) {
    const std::vector<int> ds = c.distance ? std::vector<int>{c.distance} : resolve(c).distances;
    int rc = 0;
    for (int d : ds) {
        std::size_t total = 0;
        const std::size_t bad = qcsim::decode_selftest(d, &total);
        std::cout << "d=" << d << " single faults " << total << " logical errors " << bad << "\n";
        if (bad) rc = 1;
    }
    return rc;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Logical idle experiments on rotated surface codes with coherent noise"};
    app.require_subcommand(1);
    Common common;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", common.config, "sweep config file");
        sub->add_option("--out", common.out, "output directory (overrides output_dir)");
        sub->add_option("--seed", common.seed, "master seed (overrides seed)")->each([&](const std::string&) {
            common.seed_set = true;
        });
        sub->add_option("--workers", common.workers, "worker threads, 0 for all cores")->check(CLI::NonNegativeNumber);
        sub->add_option("--distance", common.distance, "single code distance (overrides distances)");
    };
    auto* sweep = app.add_subcommand("sweep", "run a sweep and write CSV results");
    auto* hist = app.add_subcommand("histogram", "write idle-gap histograms as duration_us,count");
    auto* self = app.add_subcommand("decode-selftest", "inject every single fault and decode it");
    for (auto* s : {sweep, hist, self}) add_common(s);

    CLI11_PARSE(app, argc, argv);
    try {
        if (*sweep) return cmd_sweep(common);
        if (*hist) return cmd_histogram(common);
        if (*self) return cmd_selftest(common);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
