// Command line front end. All functionality sits behind the C interface in
// sbm/sbm.h; this file only maps flags to run options and statuses to exit
// codes (0 ok, 1 criterion failed, 2 configuration, 3 no convergence, 4 other).
#include <array>
#include <cstdint>
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "sbm/sbm.h"

namespace {

struct Common {
    std::string config;
    std::string out;
    std::string format;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = 0;
    bool quiet = false;
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("-c,--config", c.config,
                    "experiment configuration (INI); built-in defaults when omitted")
        ->check(CLI::ExistingFile);
    sub->add_option("--seed", c.seed, "override the [sim] seed");
    sub->add_option("-j,--threads", c.threads,
                    "worker threads (0: all hardware threads, capped at 16)");
    sub->add_option("-o,--out", c.out,
                    "output directory (default: config, then $SBM_OUT_DIR, then ./out)");
    sub->add_option("--format", c.format, "comma list drawn from csv,json");
    sub->add_flag("-q,--quiet", c.quiet, "suppress progress and summary output");
}

int run(sbm_status (*fn)(sbm_experiment*, const sbm_run_options*), const Common& c) {
    sbm_experiment* e = nullptr;
    sbm_status s = c.config.empty() ? sbm_experiment_parse("", "<defaults>", &e)
                                    : sbm_experiment_load(c.config.c_str(), &e);
    if (s == SBM_OK && c.seed_set) s = sbm_experiment_set_seed(e, c.seed);
    if (s == SBM_OK) {
        sbm_run_options opt{};
        opt.out_dir = c.out.empty() ? nullptr : c.out.c_str();
        opt.threads = c.threads;
        opt.format = c.format.empty() ? nullptr : c.format.c_str();
        opt.quiet = c.quiet ? 1 : 0;
        s = fn(e, &opt);
    }
    if (s != SBM_OK)
        std::fprintf(stderr, "error (%s): %s\n", sbm_status_name(s), sbm_last_error());
    sbm_experiment_free(e);
    switch (s) {
        case SBM_OK: return 0;
        case SBM_CRITERION_FAILED: return 1;
        case SBM_CONFIG_ERROR: return 2;
        case SBM_NO_CONVERGENCE: return 3;
        default: return 4;
    }
}

struct Command {
    const char* name;
    const char* help;
    sbm_status (*fn)(sbm_experiment*, const sbm_run_options*);
    Common opts;
    CLI::App* sub = nullptr;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for a branching measure process with infinite mean"};
    app.set_version_flag("--version", sbm_version());
    app.require_subcommand(1);

    std::array<Command, 5> commands{{
        {"solve", "integrate the log-Laplace equation and write the solution slices",
         &sbm_run_solve, {}, nullptr},
        {"simulate", "run branching particle replicates and empirical functionals",
         &sbm_run_simulate, {}, nullptr},
        {"explosion", "tabulate, sample, and test the explosion-time law",
         &sbm_run_explosion, {}, nullptr},
        {"density", "compare mollified density pairings against the solver",
         &sbm_run_density, {}, nullptr},
        {"validate", "run the acceptance criteria and write the report",
         &sbm_run_validate, {}, nullptr},
    }};
    for (Command& cmd : commands) {
        cmd.sub = app.add_subcommand(cmd.name, cmd.help);
        add_common(cmd.sub, cmd.opts);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;  // bad invocation is a configuration error
    }

    for (Command& cmd : commands)
        if (cmd.sub->parsed()) {
            cmd.opts.seed_set = cmd.sub->count("--seed") > 0;
            return run(cmd.fn, cmd.opts);
        }
    return 2;
}
