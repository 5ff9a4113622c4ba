#include "maass/pipeline.hpp"

#include <sys/stat.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <atomic>
#include <thread>

namespace maass {

const char* const kStageNames[9] = {"classdata", "testfunc", "trace", "spectrum", "verify",
                                    "hecke",     "signs",    "stats", "export"};

void RunConfig::validate() const {
    LevelContext check(level);
    if (level < 2) throw std::invalid_argument("config: level must be a squarefree integer >= 2");
    if (M < 2) throw std::invalid_argument("config: M >= 2 required");
    if (n_max < M) throw std::invalid_argument("config: n_max >= M required");
    if (!(D_max > 4.0 * M * M)) throw std::invalid_argument("config: D_max must exceed (2M)^2");
    if (parity != 1 && parity != -1) throw std::invalid_argument("config: parity must be +1 or -1");
}

Pipeline::Pipeline(RunConfig cfg) : cfg_(std::move(cfg)) {
    if (cfg_.n_max <= 0) cfg_.n_max = cfg_.M;
    cfg_.validate();
    params_ = optimize_params(cfg_.level, cfg_.M, cfg_.D_max);
    if (params_.d < 5) {
        // verification needs fourth derivatives of g piecewise: enforce d >= 5
        params_.d = 5;
        params_.twoB = -std::log2(h1_double(params_.X * params_.R_max / 5)) * 5;
    }
    prec_ = cfg_.prec > 0 ? cfg_.prec : std::max<long>(128, (long)std::ceil(params_.twoB) + 64);
    if (prec_ < (long)std::ceil(params_.twoB))
        throw std::invalid_argument("config: precision below 2B bits from the optimizer");
    precision::set_default_bits(prec_);
    if (cfg_.table_eps <= 0) {
        // the table's eval-time remainder at a band edge scales like
        // ((c-1)/(2-c+... )) ~ 0.5535^{K+1} x^{-3/2}: choose K so it sits well
        // below the precision window, then convert back to a tolerance
        double target = std::ldexp(1.0, -(int)std::min<long>((long)std::ceil(params_.twoB) + 40, prec_ - 24));
        double x_min = 3.0 / (4.0 * (double)n_top());
        int K = (int)std::ceil(std::log(16.0 * std::pow(x_min, -1.5) / target) / 0.5919);
        cfg_.table_eps = std::pow(1.0 + std::sqrt(2.0), -(double)K);
    }
    if (cfg_.signs_trunc <= 0) cfg_.signs_trunc = cfg_.n_max;
    ::mkdir(cfg_.cache_dir.c_str(), 0755);
}

i64 Pipeline::n_top() const {
    i64 top = std::max<i64>(cfg_.M, cfg_.n_max);
    return top * top;
}

ArtifactMeta Pipeline::meta() const {
    ArtifactMeta m;
    m.level = cfg_.level;
    m.X = params_.X;
    m.d = params_.d;
    m.bits2 = params_.twoB;
    m.prec = prec_;
    m.M = cfg_.M;
    m.n_max = cfg_.n_max;
    return m;
}

void Pipeline::stage_classdata() {
    std::string path = cfg_.path("classdata.csv");
    i64 need_pos = TraceComputer::required_discriminant_bound(params_.X, n_top());
    i64 need_neg = 4 * n_top() + 8;
    if (!cfg_.force && file_exists(path)) {
        store_ = ClassDataStore();
        store_.load_csv(path);
        classdata_loaded_ = true;
        // top up if the cached table is too small, then rewrite
        store_.ensure_range(need_pos, need_neg, cfg_.verbose);
    } else {
        store_ = ClassDataStore();
        store_.ensure_range(need_pos, need_neg, cfg_.verbose);
        classdata_loaded_ = true;
    }
    store_.save_csv(path + ".tmp");
    std::rename((path + ".tmp").c_str(), path.c_str());
    if (cfg_.verbose) std::fprintf(stderr, "classdata: %zu records (|D| <= %lld pos, %lld neg)\n", store_.size(), (long long)need_pos, (long long)need_neg);
}

void Pipeline::require_classdata() {
    if (classdata_loaded_) return;
    std::string path = cfg_.path("classdata.csv");
    if (!file_exists(path)) throw MissingDataError("class data table missing; run the classdata stage first");
    store_.load_csv(path);
    classdata_loaded_ = true;
}

void Pipeline::stage_testfunc() {
    std::string path = cfg_.path("testfunc.json");
    if (!cfg_.force && file_exists(path)) {
        ArtifactMeta m;
        package_from_json(read_file(path), &m);
        if (m.compatible_with(meta())) return;  // idempotent reuse
    }
    TestFunctionPackage pkg = make_package(params_.X, params_.d, params_.twoB);
    atomic_write(path, package_to_json(pkg, meta()));
    if (cfg_.verbose)
        std::fprintf(stderr, "testfunc: X = %.6f, d = %d, 2B = %.2f, prec = %ld\n", params_.X, params_.d,
                     params_.twoB, prec_);
}

void Pipeline::require_package() {
    if (pkg_loaded_) return;
    std::string path = cfg_.path("testfunc.json");
    if (!file_exists(path)) throw MissingDataError("test function missing; run the testfunc stage first");
    ArtifactMeta m;
    pkg_ = package_from_json(read_file(path), &m);
    if (!m.compatible_with(meta()))
        throw MissingDataError("test function artifact does not match this configuration; re-run testfunc");
    pkg_lam_ = apply_lambda_poly(pkg_, {0, 1, 0});
    pkg_lam2_ = apply_lambda_poly(pkg_, {0, 0, 1});
    pkg_loaded_ = true;
}

void Pipeline::save_traces() {
    const char* names[3] = {"traces_h.json", "traces_lam.json", "traces_lam2.json"};
    for (int w = 0; w < 3; ++w) atomic_write(cfg_.path(names[w]), traces_to_json(tables_[w], meta()));
}

void Pipeline::stage_trace() {
    require_classdata();
    require_package();
    const char* names[3] = {"traces_h.json", "traces_lam.json", "traces_lam2.json"};
    const TestFunctionPackage* pkgs[3] = {&pkg_, &pkg_lam_, &pkg_lam2_};
    std::vector<i64> support = trace_support(cfg_.M, cfg_.n_max, cfg_.level);

    for (int w = 0; w < 3; ++w) {
        TraceTable& tab = tables_[w];
        tab = TraceTable();
        tab.level = cfg_.level;
        tab.X = params_.X;
        tab.d = params_.d;
        tab.package_id = pkgs[w]->id;
        tab.prec = prec_;
        std::string path = cfg_.path(names[w]);
        if (!cfg_.force && file_exists(path)) {
            ArtifactMeta m;
            TraceTable old = traces_from_json(read_file(path), &m);
            if (m.compatible_with(meta()) && old.package_id == pkgs[w]->id) tab.entries = std::move(old.entries);
        }
        std::vector<i64> todo;
        for (i64 n : support) {
            if (!tab.has(n)) todo.push_back(n);
            if (!tab.has(-n)) todo.push_back(-n);
        }
        if (todo.empty()) continue;
        LevelContext lvl(cfg_.level);
        TraceComputer tc(*pkgs[w], lvl, store_, cfg_.table_eps, n_top());
        tc.identity_term(1);  // warm the cache before any threading
        if (cfg_.verbose) std::fprintf(stderr, "trace[%s]: %zu values to compute\n", pkgs[w]->id.c_str(), todo.size());
        int nthreads = std::max(1, cfg_.threads);
        std::vector<std::pair<i64, Ball>> results(todo.size());
        std::atomic<size_t> cursor{0};
        auto worker = [&]() {
            for (;;) {
                size_t i = cursor.fetch_add(1);
                if (i >= todo.size()) break;
                results[i] = {todo[i], tc.trace(todo[i])};
            }
        };
        if (nthreads == 1) {
            worker();
        } else {
            std::vector<std::thread> pool;
            for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
            for (auto& th : pool) th.join();
        }
        for (auto& [n, v] : results) tab.entries[n] = std::move(v);
        atomic_write(path, traces_to_json(tab, meta()));
    }
    traces_loaded_ = true;
}

void Pipeline::require_traces() {
    if (traces_loaded_) return;
    require_package();
    const char* names[3] = {"traces_h.json", "traces_lam.json", "traces_lam2.json"};
    for (int w = 0; w < 3; ++w) {
        std::string path = cfg_.path(names[w]);
        if (!file_exists(path)) throw MissingDataError("trace tables missing; run the trace stage first");
        ArtifactMeta m;
        tables_[w] = traces_from_json(read_file(path), &m);
        if (!m.compatible_with(meta()))
            throw MissingDataError("trace tables do not match this configuration; re-run trace");
    }
    traces_loaded_ = true;
}

Ball Pipeline::parity_trace(int which, i64 n) const {
    const TraceTable& t = tables_[which];
    Ball plus = t.get(n), minus = t.get(-n);
    Ball v = (cfg_.parity > 0) ? plus + minus : plus - minus;
    return v.mul_2exp(-1);
}

std::function<Ball(i64)> Pipeline::parity_fn(int which) const {
    return [this, which](i64 n) { return parity_trace(which, n); };
}

void Pipeline::stage_spectrum() {
    require_traces();
    double lambda_max = 0.25 + params_.R_max * params_.R_max;
    long M = cfg_.M;
    CandidateSet set;
    set.parity = cfg_.parity;
    set.lambda_max = lambda_max;
    for (;;) {
        QuadraticForm Q0 = assemble_quadratic_form(M, cfg_.level, parity_fn(0), pkg_.id);
        QuadraticForm Q1 = assemble_quadratic_form(M, cfg_.level, parity_fn(1), pkg_lam_.id);
        try {
            set.candidates = solve_pencil(Q0, Q1, lambda_max, cfg_.parity);
            set.M_effective = M;
            break;
        } catch (const PencilNotPositive& e) {
            if (e.suggested_M >= M || e.suggested_M < 2)
                throw RigorError("spectrum: Q not positive definite even after reduction");
            if (cfg_.verbose)
                std::fprintf(stderr, "spectrum: reducing M from %ld to %lld\n", M, (long long)e.suggested_M);
            M = e.suggested_M;
        }
    }
    atomic_write(cfg_.path("spectrum_" + parity_tag() + ".json"), candidates_to_json(set, meta()));
    if (cfg_.verbose)
        std::fprintf(stderr, "spectrum[%s]: %zu candidates below lambda = %.3f (M = %ld)\n", parity_tag().c_str(),
                     set.candidates.size(), lambda_max, set.M_effective);
}

void Pipeline::stage_verify() {
    require_traces();
    std::string spath = cfg_.path("spectrum_" + parity_tag() + ".json");
    if (!file_exists(spath)) throw MissingDataError("spectrum candidates missing; run the spectrum stage first");
    ArtifactMeta m;
    CandidateSet set = candidates_from_json(read_file(spath), &m);
    if (!m.compatible_with(meta())) throw MissingDataError("spectrum artifact stale; re-run spectrum");

    QuadraticForm Q0 = assemble_quadratic_form(set.M_effective, cfg_.level, parity_fn(0), pkg_.id);
    QuadraticForm Q1 = assemble_quadratic_form(set.M_effective, cfg_.level, parity_fn(1), pkg_lam_.id);
    QuadraticForm Q2 = assemble_quadratic_form(set.M_effective, cfg_.level, parity_fn(2), pkg_lam2_.id);

    std::vector<VerifiedForm> forms;
    for (const auto& cand : set.candidates) {
        VerifiedForm f;
        f.level = cfg_.level;
        f.parity = cfg_.parity;
        f.lambda_tilde = cand.lambda_tilde;
        f.c = cand.c;
        try {
            f.epsilon = rayleigh_epsilon(cand.c, cand.lambda_tilde, Q0, Q1, Q2);
        } catch (const RigorError&) {
            continue;  // verification inconclusive for this candidate
        }
        f.lambda = Ball::exact(cand.lambda_tilde) + Ball::from_midrad(0.0, f.epsilon.upper_d());
        forms.push_back(std::move(f));
    }
    CompletenessResult comp = completeness(forms, parity_trace(0, 1), pkg_);
    atomic_write(cfg_.path("forms_" + parity_tag() + ".json"), forms_to_json(forms, meta()));
    if (cfg_.verbose)
        std::fprintf(stderr, "verify[%s]: %zu intervals, %d complete, B_rem = %s, lambda* = %.4f\n",
                     parity_tag().c_str(), forms.size(), comp.certified, comp.B_rem.str(6).c_str(),
                     comp.lambda_star);
}

void Pipeline::stage_hecke() {
    require_traces();
    std::string fpath = cfg_.path("forms_" + parity_tag() + ".json");
    if (!file_exists(fpath)) throw MissingDataError("forms missing; run the verify stage first");
    ArtifactMeta m;
    std::vector<VerifiedForm> forms = forms_from_json(read_file(fpath), &m);
    if (!m.compatible_with(meta())) throw MissingDataError("forms artifact stale; re-run verify");
    long M_eff = cfg_.M;
    {
        std::string spath = cfg_.path("spectrum_" + parity_tag() + ".json");
        if (file_exists(spath)) M_eff = candidates_from_json(read_file(spath)).M_effective;
    }
    QuadraticForm Q0 = assemble_quadratic_form(M_eff, cfg_.level, parity_fn(0), pkg_.id);
    int done = 0;
    for (auto& f : forms) {
        if (!f.complete) continue;
        extract_hecke(f, Q0, cfg_.n_max, parity_fn(0));
        ++done;
    }
    atomic_write(fpath, forms_to_json(forms, meta()));
    if (cfg_.verbose) std::fprintf(stderr, "hecke[%s]: coefficients for %d complete forms\n", parity_tag().c_str(), done);
}

void Pipeline::stage_signs() {
    std::string fpath = cfg_.path("forms_" + parity_tag() + ".json");
    if (!file_exists(fpath)) throw MissingDataError("forms missing; run verify and hecke first");
    ArtifactMeta m;
    std::vector<VerifiedForm> forms = forms_from_json(read_file(fpath), &m);
    if (!m.compatible_with(meta())) throw MissingDataError("forms artifact stale; re-run verify");
    int rigorous = 0;
    for (auto& f : forms) {
        if (!f.complete || f.a.empty()) continue;
        long trunc = std::min<long>(cfg_.signs_trunc, cfg_.n_max);
        SignDetection det = detect_signs(f, trunc);
        if (det.result) {
            f.signs = det.result->signs;
            f.fricke_w = det.result->w;
            f.signs_rigorous = true;
            extend_hecke(f, cfg_.n_max);
            ++rigorous;
        } else {
            f.signs_rigorous = false;
        }
    }
    atomic_write(fpath, forms_to_json(forms, meta()));
    if (cfg_.verbose) std::fprintf(stderr, "signs[%s]: %d rigorous\n", parity_tag().c_str(), rigorous);
}

void Pipeline::stage_stats() {
    std::vector<VerifiedForm> forms = load_forms();
    atomic_write(cfg_.path("ramanujan.csv"), ramanujan_report_csv(forms, cfg_.n_max));
    atomic_write(cfg_.path("spacings.csv"), spacing_report_csv(forms));
    Histogram all = make_histogram(collect_ap(forms, 0, cfg_.n_max), cfg_.bins);
    atomic_write(cfg_.path("hist_ap.csv"), histogram_csv(all));
    Histogram h2 = make_histogram(collect_ap(forms, 2, cfg_.n_max), cfg_.bins);
    atomic_write(cfg_.path("hist_a2.csv"), histogram_csv(h2));
    for (long p : {0L, 2L, 3L, 5L}) {
        if (p != 0 && cfg_.level % p == 0) continue;
        std::string name = p == 0 ? "density_inf.csv" : "density_p" + std::to_string(p) + ".csv";
        atomic_write(cfg_.path(name), density_curve_csv(p, 400));
    }
}

void Pipeline::stage_export() {
    std::string fpath = cfg_.path("forms_" + parity_tag() + ".json");
    std::vector<VerifiedForm> forms;
    if (file_exists(fpath)) forms = forms_from_json(read_file(fpath));
    atomic_write(cfg_.path("export_" + parity_tag() + ".json"), forms_to_json(forms, meta()));
}

void Pipeline::run(const std::string& stage) {
    if (stage == "classdata") return stage_classdata();
    if (stage == "testfunc") return stage_testfunc();
    if (stage == "trace") return stage_trace();
    if (stage == "spectrum") return stage_spectrum();
    if (stage == "verify") return stage_verify();
    if (stage == "hecke") return stage_hecke();
    if (stage == "signs") return stage_signs();
    if (stage == "stats") return stage_stats();
    if (stage == "export") return stage_export();
    throw std::invalid_argument("unknown stage: " + stage);
}

void Pipeline::run_all() {
    for (const char* s : kStageNames) run(s);
}

const ClassDataStore& Pipeline::classdata() {
    require_classdata();
    return store_;
}

const TestFunctionPackage& Pipeline::package() {
    require_package();
    return pkg_;
}

TraceTable& Pipeline::traces(int which) {
    require_traces();
    return tables_[which];
}

std::vector<VerifiedForm> Pipeline::load_forms() {
    std::string fpath = cfg_.path("forms_" + parity_tag() + ".json");
    if (!file_exists(fpath)) throw MissingDataError("forms missing; run the verify stage first");
    return forms_from_json(read_file(fpath));
}

}  // namespace maass
