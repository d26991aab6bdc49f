// Acceptance battery: runs every criterion and prints one pass/fail line per
// criterion. Exit code 0 iff all pass. Seed via SHTUKA_SEED (default 1).
#include "shtuka/suites.hpp"

#include <cstdio>
#include <cstdlib>

int main() {
    std::uint64_t seed = 1;
    if (const char* env = std::getenv("SHTUKA_SEED")) seed = std::strtoull(env, nullptr, 10);
    auto results = shtuka::run_acceptance_suite(seed);
    int failures = 0;
    for (const auto& r : results) {
        std::printf("[%s] criterion %2zu: %s (%s)\n", r.pass ? "PASS" : "FAIL", r.index,
                    r.name.c_str(), r.detail.c_str());
        if (!r.pass) ++failures;
    }
    std::printf("acceptance: %zu criteria, %d failed (seed %llu)\n", results.size(), failures,
                static_cast<unsigned long long>(seed));
    return failures == 0 ? 0 : 1;
}
