// Benchmarks the OpenMP kernels against their serial reference
// implementations and checks that both produce identical results.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "fmsat/backdoor.hpp"
#include "fmsat/enumerate.hpp"
#include "fmsat/experiment.hpp"
#include "fmsat/generate.hpp"
#include "fmsat/profile.hpp"

#if defined(_OPENMP)
#include <omp.h>
#endif

using namespace fmsat;

namespace {

double time_ms(const std::function<void()>& fn) {
    auto start = std::chrono::steady_clock::now();
    fn();
    auto stop = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(stop - start).count();
}

void report(const std::string& name, double serial_ms, double parallel_ms, bool equal) {
    std::printf("%-28s serial %9.1f ms   openmp %9.1f ms   speedup %5.2fx   %s\n", name.c_str(),
                serial_ms, parallel_ms, parallel_ms > 0 ? serial_ms / parallel_ms : 0.0,
                equal ? "results match" : "RESULTS DIFFER");
}

}  // namespace

int main(int argc, char** argv) {
    bool quick = argc > 1 && std::string(argv[1]) == "--quick";
#if defined(_OPENMP)
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (built without OpenMP)\n");
#endif

    OracleLimits big{30, 1ull << 34};

    {
        GenSpec spec;
        spec.n = quick ? 20 : 24;
        spec.density = 2.0;
        spec.seed = 7;
        Formula f = random_ksat(spec);
        std::vector<int> proj;
        for (int v = 1; v <= spec.n / 2; ++v) proj.push_back(v);
        std::uint64_t serial_count = 0, parallel_count = 0;
        double ts = time_ms(
            [&] { serial_count = brute_force_count(f, proj, big, ExecMode::Serial); });
        double tp = time_ms(
            [&] { parallel_count = brute_force_count(f, proj, big, ExecMode::Parallel); });
        report("brute_force_count", ts, tp, serial_count == parallel_count);
    }

    {
        GenSpec spec;
        spec.n = quick ? 20 : 24;
        spec.density = 2.5;
        spec.seed = 11;
        Formula f = random_ksat(spec);
        BackboneResult rs, rp;
        double ts = time_ms([&] { rs = backbone_brute(f, big, ExecMode::Serial); });
        double tp = time_ms([&] { rp = backbone_brute(f, big, ExecMode::Parallel); });
        bool equal = rs.satisfiable == rp.satisfiable && rs.status == rp.status;
        report("backbone_brute", ts, tp, equal);
    }

    {
        GenSpec spec;
        spec.n = quick ? 12 : 14;
        spec.density = 1.5;
        spec.seed = 3;
        Formula f = random_ksat(spec);
        StrongBackdoorResult rs, rp;
        double ts = time_ms([&] { rs = max_strong_s_backdoor_brute(f, ExecMode::Serial); });
        double tp = time_ms([&] { rp = max_strong_s_backdoor_brute(f, ExecMode::Parallel); });
        report("max_strong_s_backdoor", ts, tp, rs.size == rp.size && rs.vars == rp.vars);
    }

    {
        GenSpec spec;
        spec.n = quick ? 40 : 60;
        spec.density = 3.0;
        spec.seed = 5;
        Formula f = random_ksat(spec);
        OracleConfig serial_oracle, parallel_oracle;
        serial_oracle.mode = ExecMode::Serial;
        parallel_oracle.mode = ExecMode::Parallel;
        RestrictedReport rs, rp;
        double ts = time_ms([&] { rs = restricted_count(f, serial_oracle); });
        double tp = time_ms([&] { rp = restricted_count(f, parallel_oracle); });
        bool equal = rs.satisfiable == rp.satisfiable && rs.forced == rp.forced;
        report("restricted_count", ts, tp, equal);
    }

    {
        std::vector<double> densities{3.0, 4.0, 5.0};
        int instances = quick ? 10 : 40;
        ExperimentReport rs, rp;
        double ts = time_ms([&] {
            rs = run_phase_transition(60, densities, instances, 42, ExecMode::Serial);
        });
        double tp = time_ms([&] {
            rp = run_phase_transition(60, densities, instances, 42, ExecMode::Parallel);
        });
        report("run_phase_transition", ts, tp, rs.to_json() == rp.to_json());
    }

    return 0;
}
