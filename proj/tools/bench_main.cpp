// Benchmark: OpenMP sweep kernels against the serial reference on the
// workloads that dominate scenario runtime.

#include <chrono>
#include <cstdio>

#include "aqec/scenarios.hpp"

using namespace aqec;

namespace {

template <typename Fn>
double time_ms(Fn&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

void row(const char* name, double serial_ms, double parallel_ms) {
    std::printf("%-28s %10.1f ms %10.1f ms %8.2fx\n", name, serial_ms, parallel_ms,
                serial_ms / parallel_ms);
}

}  // namespace

int main() {
    std::printf("threads available: %d (OpenMP %s)\n\n", hardware_threads(),
                openmp_enabled ? "on" : "off");
    std::printf("%-28s %13s %13s %9s\n", "workload", "serial", "openmp", "speedup");

    {
        const GalleryEntry g = gallery("ad4");
        const KrausChannel rec = transpose_channel(g.code, g.noise);
        OptimizerOptions opts;
        opts.restarts = 64;
        opts.seed = 7;
        double eta_serial = 0.0, eta_parallel = 0.0;
        opts.mode = ExecMode::serial;
        const double ts = time_ms([&] { eta_serial = eta_code(g.code, g.noise, rec, opts).eta; });
        opts.mode = ExecMode::parallel;
        const double tp = time_ms([&] { eta_parallel = eta_code(g.code, g.noise, rec, opts).eta; });
        row("eta_code ad4 (64 restarts)", ts, tp);
        if (eta_serial != eta_parallel) std::printf("  MISMATCH: %.17g vs %.17g\n", eta_serial, eta_parallel);
    }

    {
        const GalleryEntry g = gallery("ad4");
        const double ts = time_ms([&] {
            for (int i = 0; i < 20; ++i) residuals(g.code, g.noise, ExecMode::serial);
        });
        const double tp = time_ms([&] {
            for (int i = 0; i < 20; ++i) residuals(g.code, g.noise, ExecMode::parallel);
        });
        row("residual grid ad4 (x20)", ts, tp);
    }

    {
        const GalleryEntry g = gallery("gauge422");
        ScenarioConfig cfg;
        cfg.seed = 11;
        cfg.mode = ExecMode::serial;
        double ds = 0.0, dp = 0.0;
        const double ts = time_ms([&] { ds = estimate_delta(g.code, g.noise, cfg, 32, 500).delta; });
        cfg.mode = ExecMode::parallel;
        const double tp = time_ms([&] { dp = estimate_delta(g.code, g.noise, cfg, 32, 500).delta; });
        row("estimate_delta gauge422", ts, tp);
        if (ds != dp) std::printf("  MISMATCH: %.17g vs %.17g\n", ds, dp);
    }

    return 0;
}
