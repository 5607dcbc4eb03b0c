// Acceptance gate: runs every criterion against the built-in default
// configuration and prints one PASS/FAIL line per criterion. Exit status 0
// only when all of them hold.
#include <algorithm>
#include <cstdio>
#include <exception>
#include <iostream>
#include <thread>

#include "sbm/config.hpp"
#include "sbm/validate.hpp"

int main() {
    try {
        sbm::ExperimentConfig cfg = sbm::ExperimentConfig::from_string("", "<defaults>");
        unsigned hw = std::thread::hardware_concurrency();
        int threads = static_cast<int>(std::clamp(hw == 0 ? 1u : hw, 1u, 16u));
        std::cout << "acceptance suite: gamma = " << cfg.params.gamma << ", " << threads
                  << " worker thread(s)\n"
                  << std::flush;

        sbm::ValidationReport rep = sbm::run_acceptance(cfg, threads, &std::cout);

        std::printf("%d/%zu criteria passed in %.1f s (%d tracked solves, min increment %.3g)\n",
                    static_cast<int>(std::count_if(rep.criteria.begin(), rep.criteria.end(),
                                                   [](const auto& c) { return c.pass; })),
                    rep.criteria.size(), rep.wall_seconds, rep.solve_count,
                    rep.min_picard_increment);
        return rep.all_pass ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "acceptance suite aborted: " << e.what() << "\n";
        return 1;
    }
}
