#pragma once

#include <functional>
#include <string>

#include "maass/fricke.hpp"
#include "maass/io.hpp"
#include "maass/stats.hpp"

namespace maass {

struct RunConfig {
    long level = 5;
    long M = 40;          // matrix dimension bound
    long n_max = 0;       // Hecke range (>= M); 0 = M
    double D_max = 1e6;   // discriminant budget; sets X through the optimizer
    long prec = 0;        // working bits; 0 = max(128, 2B + 64)
    int parity = +1;      // +1 even, -1 odd
    double table_eps = 0; // elliptic table tolerance; 0 = 2^-2B
    long signs_trunc = 0; // truncation for sign detection; 0 = n_max
    int bins = 40;
    int threads = 1;
    bool force = false;   // recompute even if artifacts exist
    bool verbose = false;
    std::string cache_dir = "cache";

    void validate() const;
    std::string path(const std::string& name) const { return cache_dir + "/" + name; }
};

// Stage names in pipeline order.
extern const char* const kStageNames[9];

class Pipeline {
  public:
    explicit Pipeline(RunConfig cfg);

    const RunConfig& config() const { return cfg_; }
    OptimizedParams params() const { return params_; }
    long working_prec() const { return prec_; }
    i64 n_top() const;         // largest trace argument needed
    ArtifactMeta meta() const;

    void stage_classdata();
    void stage_testfunc();
    void stage_trace();
    void stage_spectrum();
    void stage_verify();
    void stage_hecke();
    void stage_signs();
    void stage_stats();
    void stage_export();
    void run(const std::string& stage);  // one stage, validating its inputs
    void run_all();

    // loaded-state accessors (tests and bindings)
    const ClassDataStore& classdata();
    const TestFunctionPackage& package();            // base H
    TraceTable& traces(int which);                   // 0: H, 1: lambda H, 2: lambda^2 H
    std::vector<VerifiedForm> load_forms();          // current forms artifact

  private:
    RunConfig cfg_;
    OptimizedParams params_;
    long prec_;

    // lazily loaded state
    bool classdata_loaded_ = false;
    ClassDataStore store_;
    bool pkg_loaded_ = false;
    TestFunctionPackage pkg_, pkg_lam_, pkg_lam2_;
    bool traces_loaded_ = false;
    TraceTable tables_[3];

    std::string parity_tag() const { return cfg_.parity > 0 ? "even" : "odd"; }
    void require_classdata();
    void require_package();
    void require_traces();
    Ball parity_trace(int which, i64 n) const;  // from tables_
    std::function<Ball(i64)> parity_fn(int which) const;
    void save_traces();
};

}  // namespace maass
