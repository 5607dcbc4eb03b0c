#include "sbm/sbm.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <iostream>
#include <new>
#include <string>
#include <thread>

#include "sbm/config.hpp"
#include "sbm/errors.hpp"
#include "sbm/experiment.hpp"
#include "sbm/explosion.hpp"
#include "sbm/nonlinearity.hpp"

struct sbm_experiment {
    sbm::ExperimentConfig cfg;
};

namespace {

thread_local std::string g_last_error;

void set_error(std::string msg) { g_last_error = std::move(msg); }

sbm_status fail(sbm_status s, std::string msg) {
    set_error(std::move(msg));
    return s;
}

// Runs fn, translating exceptions into status codes. Clears the error slot on
// success so callers can rely on sbm_last_error() reflecting the last call.
template <typename Fn>
sbm_status guarded(Fn&& fn) {
    try {
        sbm_status s = fn();
        if (s == SBM_OK) set_error("");
        return s;
    } catch (const sbm::ConfigError& e) {
        return fail(SBM_CONFIG_ERROR, e.what());
    } catch (const sbm::NonConvergenceError& e) {
        return fail(SBM_NO_CONVERGENCE, e.what());
    } catch (const sbm::IoError& e) {
        return fail(SBM_IO_ERROR, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(SBM_DOMAIN_ERROR, e.what());
    } catch (const std::bad_alloc&) {
        return fail(SBM_INTERNAL_ERROR, "out of memory");
    } catch (const std::exception& e) {
        return fail(SBM_INTERNAL_ERROR, e.what());
    } catch (...) {
        return fail(SBM_INTERNAL_ERROR, "unknown failure");
    }
}

sbm_status check_gamma(double gamma_) {
    if (!(gamma_ > 0.0) || !(gamma_ < 1.0))
        return fail(SBM_DOMAIN_ERROR, "gamma must lie in (0,1)");
    return SBM_OK;
}

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return static_cast<int>(std::clamp<unsigned>(hw == 0 ? 1 : hw, 1u, 16u));
}

using Runner = sbm::RunOutcome (*)(sbm::ExperimentConfig, const sbm::RunOptions&);

sbm_status run_with(Runner runner, sbm_experiment* e, const sbm_run_options* opt) {
    if (!e) return fail(SBM_CONFIG_ERROR, "experiment handle is null");
    return guarded([&]() -> sbm_status {
        sbm::RunOptions ro;
        const char* env_dir = std::getenv("SBM_OUT_DIR");
        if (opt && opt->out_dir && *opt->out_dir) {
            ro.out_dir = opt->out_dir;
        } else if (!e->cfg.outputs.directory.empty()) {
            ro.out_dir = e->cfg.outputs.directory;
        } else if (env_dir && *env_dir) {
            ro.out_dir = env_dir;
        } else {
            ro.out_dir = "out";
        }
        ro.threads = resolve_threads(opt ? opt->threads : 0);
        if (opt && opt->format && *opt->format) ro.format_override = std::string(opt->format);
        bool quiet = opt && opt->quiet;
        if (!quiet) ro.progress = &std::cerr;

        sbm::RunOutcome outcome = runner(e->cfg, ro);
        if (!quiet) {
            std::cout << outcome.summary << "\n";
            for (const std::string& f : outcome.files) std::cout << "wrote " << f << "\n";
            std::cout.flush();
        }
        if (outcome.exit_code == 1) {
            set_error("one or more validation criteria failed");
            return SBM_CRITERION_FAILED;
        }
        return SBM_OK;
    });
}

}  // namespace

extern "C" {

const char* sbm_status_name(sbm_status s) {
    switch (s) {
        case SBM_OK: return "ok";
        case SBM_CRITERION_FAILED: return "criterion_failed";
        case SBM_CONFIG_ERROR: return "config_error";
        case SBM_NO_CONVERGENCE: return "no_convergence";
        case SBM_DOMAIN_ERROR: return "domain_error";
        case SBM_IO_ERROR: return "io_error";
        case SBM_INTERNAL_ERROR: return "internal_error";
    }
    return "unknown";
}

const char* sbm_last_error(void) { return g_last_error.c_str(); }

const char* sbm_version(void) { return "1.0.0"; }

sbm_status sbm_heat_kernel(double t, const double* x, const double* y, int dim,
                           double* out) {
    if (!out || !x || !y) return fail(SBM_DOMAIN_ERROR, "null pointer argument");
    if (dim != 1 && dim != 2) return fail(SBM_DOMAIN_ERROR, "dim must be 1 or 2");
    if (!(t > 0.0)) return fail(SBM_DOMAIN_ERROR, "t must be positive");
    double r2 = 0.0;
    for (int i = 0; i < dim; ++i) r2 += (x[i] - y[i]) * (x[i] - y[i]);
    *out = std::pow(2.0 * M_PI * t, -0.5 * dim) * std::exp(-r2 / (2.0 * t));
    set_error("");
    return SBM_OK;
}

sbm_status sbm_constant_solution(double a, double t, double gamma_, double* out) {
    if (!out) return fail(SBM_DOMAIN_ERROR, "null output pointer");
    if (sbm_status s = check_gamma(gamma_); s != SBM_OK) return s;
    if (!(a >= 0.0)) return fail(SBM_DOMAIN_ERROR, "a must be nonnegative");
    if (!(t >= 0.0)) return fail(SBM_DOMAIN_ERROR, "t must be nonnegative");
    return guarded([&]() -> sbm_status {
        *out = sbm::exact_constant_solution(a, t, sbm::GammaParams{gamma_});
        return SBM_OK;
    });
}

sbm_status sbm_explosion_cdf(double mass, double gamma_, double t, double* out) {
    if (!out) return fail(SBM_DOMAIN_ERROR, "null output pointer");
    if (sbm_status s = check_gamma(gamma_); s != SBM_OK) return s;
    if (!(mass > 0.0)) return fail(SBM_DOMAIN_ERROR, "mass must be positive");
    return guarded([&]() -> sbm_status {
        sbm::ExplosionLaw law{sbm::GammaParams{gamma_}, mass};
        law.validate();
        *out = law.cdf(t);
        return SBM_OK;
    });
}

sbm_status sbm_explosion_sample(double mass, double gamma_, double u, double* out) {
    if (!out) return fail(SBM_DOMAIN_ERROR, "null output pointer");
    if (sbm_status s = check_gamma(gamma_); s != SBM_OK) return s;
    if (!(mass > 0.0)) return fail(SBM_DOMAIN_ERROR, "mass must be positive");
    if (!(u > 0.0) || !(u < 1.0)) return fail(SBM_DOMAIN_ERROR, "u must lie in (0,1)");
    return guarded([&]() -> sbm_status {
        sbm::ExplosionLaw law{sbm::GammaParams{gamma_}, mass};
        law.validate();
        *out = law.sample(u);
        return SBM_OK;
    });
}

sbm_status sbm_survival_laplace(double a, double mass, double gamma_, double t,
                                double* out) {
    if (!out) return fail(SBM_DOMAIN_ERROR, "null output pointer");
    if (sbm_status s = check_gamma(gamma_); s != SBM_OK) return s;
    if (!(mass > 0.0)) return fail(SBM_DOMAIN_ERROR, "mass must be positive");
    if (!(a >= 0.0)) return fail(SBM_DOMAIN_ERROR, "a must be nonnegative");
    if (!(t >= 0.0)) return fail(SBM_DOMAIN_ERROR, "t must be nonnegative");
    return guarded([&]() -> sbm_status {
        sbm::ExplosionLaw law{sbm::GammaParams{gamma_}, mass};
        law.validate();
        *out = law.survival_laplace(a, t);
        return SBM_OK;
    });
}

sbm_status sbm_experiment_load(const char* path, sbm_experiment** out) {
    if (!out) return fail(SBM_CONFIG_ERROR, "null output pointer");
    *out = nullptr;
    if (!path) return fail(SBM_CONFIG_ERROR, "null path");
    return guarded([&]() -> sbm_status {
        auto* e = new sbm_experiment{sbm::ExperimentConfig::from_file(path)};
        *out = e;
        return SBM_OK;
    });
}

sbm_status sbm_experiment_parse(const char* text, const char* origin,
                                sbm_experiment** out) {
    if (!out) return fail(SBM_CONFIG_ERROR, "null output pointer");
    *out = nullptr;
    if (!text) return fail(SBM_CONFIG_ERROR, "null text");
    return guarded([&]() -> sbm_status {
        auto* e = new sbm_experiment{
            sbm::ExperimentConfig::from_string(text, origin ? origin : "<memory>")};
        *out = e;
        return SBM_OK;
    });
}

void sbm_experiment_free(sbm_experiment* e) { delete e; }

sbm_status sbm_experiment_set_seed(sbm_experiment* e, uint64_t seed) {
    if (!e) return fail(SBM_CONFIG_ERROR, "experiment handle is null");
    e->cfg.sim.seed = seed;
    set_error("");
    return SBM_OK;
}

sbm_status sbm_experiment_describe(const sbm_experiment* e, char* buf, size_t cap,
                                   size_t* needed) {
    if (!e) return fail(SBM_CONFIG_ERROR, "experiment handle is null");
    return guarded([&]() -> sbm_status {
        std::string text = e->cfg.canonical();
        if (needed) *needed = text.size();
        if (buf && cap > 0) {
            size_t n = std::min(cap - 1, text.size());
            std::memcpy(buf, text.data(), n);
            buf[n] = '\0';
        }
        return SBM_OK;
    });
}

sbm_status sbm_run_solve(sbm_experiment* e, const sbm_run_options* opt) {
    return run_with(&sbm::run_solve, e, opt);
}
sbm_status sbm_run_simulate(sbm_experiment* e, const sbm_run_options* opt) {
    return run_with(&sbm::run_simulate, e, opt);
}
sbm_status sbm_run_explosion(sbm_experiment* e, const sbm_run_options* opt) {
    return run_with(&sbm::run_explosion, e, opt);
}
sbm_status sbm_run_density(sbm_experiment* e, const sbm_run_options* opt) {
    return run_with(&sbm::run_density, e, opt);
}
sbm_status sbm_run_validate(sbm_experiment* e, const sbm_run_options* opt) {
    return run_with(&sbm::run_validate, e, opt);
}

}  // extern "C"
