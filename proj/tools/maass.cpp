// Command-line driver for the Maass-form pipeline: resumable stages over an
// on-disk cache plus statistics exports.

#include <cstdio>
#include <cstdlib>

#include "CLI11.hpp"
#include "maass/pipeline.hpp"

using namespace maass;

int main(int argc, char** argv) {
    CLI::App app{"rigorous computation of Maass cusp forms of squarefree level"};
    app.set_config("--config", "", "read options from an INI/TOML file");
    app.fallthrough();

    RunConfig cfg;
    if (const char* env = std::getenv("MAASS_CACHE")) cfg.cache_dir = env;
    app.add_option("--level,-N", cfg.level, "squarefree level N >= 2")->capture_default_str();
    app.add_option("--dim,-M", cfg.M, "matrix dimension bound M")->capture_default_str();
    app.add_option("--nmax", cfg.n_max, "Hecke coefficient range (0 = M)")->capture_default_str();
    app.add_option("--dmax", cfg.D_max, "largest hyperbolic discriminant budget")->capture_default_str();
    app.add_option("--prec", cfg.prec, "working precision in bits (0 = auto)")->capture_default_str();
    std::string parity = "even";
    app.add_option("--parity", parity, "even or odd")->capture_default_str();
    app.add_option("--table-eps", cfg.table_eps, "elliptic table tolerance (0 = auto)");
    app.add_option("--trunc", cfg.signs_trunc, "sign-detection truncation (0 = nmax)");
    app.add_option("--bins", cfg.bins, "histogram bins")->capture_default_str();
    app.add_option("--threads", cfg.threads, "worker threads for the trace stage")->capture_default_str();
    app.add_option("--cache-dir", cfg.cache_dir, "artifact cache directory (env MAASS_CACHE)")
        ->capture_default_str();
    app.add_flag("--force", cfg.force, "recompute stages even when cached");
    app.add_flag("-v,--verbose", cfg.verbose, "progress output on stderr");

    app.require_subcommand(1);
    for (const char* name : kStageNames) app.add_subcommand(name, std::string("run the ") + name + " stage");
    auto* sub_all = app.add_subcommand("pipeline", "run every stage in order");
    auto* sub_params = app.add_subcommand("params", "print the optimized test-function parameters");

    CLI11_PARSE(app, argc, argv);
    cfg.parity = (parity == "odd") ? -1 : +1;

    try {
        Pipeline pipe(cfg);
        if (sub_params->parsed()) {
            OptimizedParams p = pipe.params();
            std::printf("R_max = %.6f\nX = %.6f\nd = %d\n2B = %.3f\nprec = %ld bits\n", p.R_max, p.X, p.d, p.twoB,
                        pipe.working_prec());
            return 0;
        }
        if (sub_all->parsed()) {
            pipe.run_all();
            return 0;
        }
        for (const char* name : kStageNames)
            if (app.get_subcommand(name)->parsed()) pipe.run(name);
        return 0;
    } catch (const MissingDataError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
