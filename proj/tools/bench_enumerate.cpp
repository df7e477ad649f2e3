#include <chrono>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "kpn/entropy.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"compare serial and OpenMP joint-outcome enumeration"};
    std::string scheme = "composite";
    unsigned n = 3;
    std::optional<std::uint64_t> q;
    std::uint64_t budget = 1'000'000'000ULL;
    app.add_option("--scheme", scheme, "sigma1|sigma2|composite");
    app.add_option("--n", n, "number of pawns");
    app.add_option("--q", q, "prime modulus (default: smallest prime > 2n-1)");
    app.add_option("--budget", budget, "enumeration budget");
    CLI11_PARSE(app, argc, argv);

    const kpn::Prime modulus =
        q ? kpn::Prime(*q) : kpn::Prime::smallest_greater_than(2ULL * n - 1);
    const kpn::SchemeSpec spec(kpn::scheme_kind_from_string(scheme), n, modulus);

    std::cout << "scheme=" << scheme << " n=" << n << " q=" << modulus.value << "\n";
#ifdef _OPENMP
    std::cout << "threads=" << omp_get_max_threads() << "\n";
#else
    std::cout << "threads=1 (built without OpenMP)\n";
#endif

    auto t0 = Clock::now();
    const kpn::CountTable serial = kpn::enumerate_joint_serial(spec, budget);
    const double serial_s = seconds_since(t0);
    std::cout << "serial:   " << serial.total << " outcomes in " << serial_s << " s\n";

    t0 = Clock::now();
    const kpn::CountTable parallel = kpn::enumerate_joint(spec, budget);
    const double parallel_s = seconds_since(t0);
    std::cout << "parallel: " << parallel.total << " outcomes in " << parallel_s << " s\n";

    if (serial.counts != parallel.counts || serial.total != parallel.total) {
        std::cout << "MISMATCH between serial and parallel tables\n";
        return 1;
    }
    std::cout << "tables identical; speedup " << serial_s / parallel_s << "x\n";
    return 0;
}
