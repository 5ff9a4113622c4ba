#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdio>
#include <fstream>

#include "doctest.h"
#include "maass/pipeline.hpp"

using namespace maass;

namespace {

double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    double h = (b - a) / n, s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4 : 2);
    return s * h / 3;
}

}  // namespace

TEST_CASE("sato-tate densities") {
    // mu_2 closed form from the p = 2 specialization
    for (int i = 0; i <= 50; ++i) {
        double x = -2.0 + 4.0 * i / 50;
        double want = 3.0 * std::sqrt(4 - x * x) / ((9 - 2 * x * x) * M_PI);
        CHECK(std::fabs(sato_tate_density(2, x) - want) < 1e-12);
    }
    CHECK(std::fabs(sato_tate_density(0, 0.0) - 1.0 / M_PI) < 1e-15);
    CHECK_THROWS_AS(sato_tate_density(2, 2.5), std::domain_error);

    // normalization: substitute x = 2 sin(phi) to avoid endpoint sqrt
    for (long p : {0L, 2L, 3L, 5L}) {
        auto f = [&](double phi) { return sato_tate_density(p, 2 * std::sin(phi)) * 2 * std::cos(phi); };
        double I = simpson(f, -M_PI / 2, M_PI / 2, 20000);
        CHECK(std::fabs(I - 1.0) < 1e-9);
    }
}

TEST_CASE("histogram conservation and symmetry of densities") {
    std::vector<double> vals{-1.9, -0.5, 0.0, 0.2, 0.2, 1.4, 2.5};
    Histogram h = make_histogram(vals, 8);
    long total = 0;
    for (long c : h.counts) total += c;
    CHECK(total == h.total);
    CHECK(h.total == 6);  // 2.5 is outside [-2, 2)
    for (int i = 0; i <= 20; ++i) {
        double x = -2.0 + 4.0 * i / 20;
        CHECK(std::fabs(sato_tate_density(3, x) - sato_tate_density(3, -x)) < 1e-15);
        CHECK(sato_tate_density(3, x) >= 0);
    }
}

TEST_CASE("artifact round trips") {
    precision::Scoped guard(128);
    TestFunctionPackage pkg = make_package(2.25, 5, 30.0);
    ArtifactMeta meta;
    meta.level = 5;
    meta.X = 2.25;
    meta.d = 5;
    meta.bits2 = 30;
    meta.prec = 128;
    std::string js = package_to_json(pkg, meta);
    ArtifactMeta m2;
    TestFunctionPackage back = package_from_json(js, &m2);
    CHECK(m2.compatible_with(meta));
    for (double u : {0.0, 0.4, 1.3, 2.2}) {
        Ball a = pkg.g_value(Ball::exact(u));
        Ball b = back.g_value(Ball::exact(u));
        CHECK(mpfr_cmp(a.mid(), b.mid()) == 0);  // byte-identical midpoints
    }
    // serialization is deterministic
    CHECK(package_to_json(back, meta) == js);

    TraceTable t;
    t.level = 5;
    t.X = 2.25;
    t.d = 5;
    t.package_id = "base";
    t.prec = 128;
    t.entries[3] = Ball::pi() / Ball::exact(7L);
    t.entries[-4] = Ball::from_midrad(-1.25, 1e-20);
    std::string tj = traces_to_json(t, meta);
    TraceTable t2 = traces_from_json(tj);
    CHECK(mpfr_cmp(t2.get(3).mid(), t.get(3).mid()) == 0);
    CHECK(t2.get(-4).contains(t.get(-4)));
    CHECK_THROWS_AS(t2.get(99), MissingDataError);

    VerifiedForm f;
    f.level = 5;
    f.parity = 1;
    f.lambda_tilde = 17.25;
    f.lambda = Ball::from_midrad(17.25, 1e-4);
    f.epsilon = Ball::exact(1e-4);
    f.delta = Ball::exact(0.5);
    f.complete = true;
    f.a[1] = Ball::exact(1L);
    f.a[2] = Ball::from_midrad(0.78, 1e-6);
    f.signs[5] = -1;
    f.fricke_w = 1;
    f.signs_rigorous = true;
    f.c = {0.5, -0.25};
    std::string fj = forms_to_json({f}, meta);
    auto forms = forms_from_json(fj);
    REQUIRE(forms.size() == 1);
    CHECK(forms[0].complete);
    CHECK(forms[0].signs.at(5) == -1);
    CHECK(forms[0].c == f.c);
    CHECK(mpfr_cmp(forms[0].a.at(2).mid(), f.a.at(2).mid()) == 0);
}

TEST_CASE("config validation") {
    RunConfig cfg;
    cfg.level = 12;  // not squarefree
    CHECK_THROWS(Pipeline{cfg});
    cfg.level = 5;
    cfg.M = 10;
    cfg.D_max = 100;  // acosh domain
    CHECK_THROWS(Pipeline{cfg});
}

TEST_CASE("tiny end-to-end pipeline with cache reuse") {
    RunConfig cfg;
    cfg.level = 5;
    cfg.M = 8;
    cfg.D_max = 12000;
    cfg.cache_dir = "/tmp/maass_test_pipeline";
    cfg.threads = 2;
    std::system("rm -rf /tmp/maass_test_pipeline");
    Pipeline pipe(cfg);
    pipe.run_all();
    auto forms = pipe.load_forms();
    CHECK(forms.size() >= 1);
    // stage determinism / idempotence: rerunning reuses caches and keeps outputs
    std::string before = read_file(cfg.path("forms_even.json"));
    Pipeline pipe2(cfg);
    pipe2.run_all();
    CHECK(read_file(cfg.path("forms_even.json")) == before);
    // stats artifacts exist and are parseable
    CHECK(file_exists(cfg.path("ramanujan.csv")));
    CHECK(file_exists(cfg.path("density_p2.csv")));
    CHECK(file_exists(cfg.path("export_even.json")));
    // export of an empty spectrum still yields a valid document
    std::system("rm -f /tmp/maass_test_pipeline/forms_even.json");
    Pipeline pipe3(cfg);
    pipe3.stage_export();
    auto exported = forms_from_json(read_file(cfg.path("export_even.json")));
    CHECK(exported.empty());
}

TEST_CASE("stale upstream artifacts are rejected with a stage name") {
    RunConfig cfg;
    cfg.level = 5;
    cfg.M = 8;
    cfg.D_max = 12000;
    cfg.cache_dir = "/tmp/maass_test_pipeline2";
    std::system("rm -rf /tmp/maass_test_pipeline2");
    Pipeline pipe(cfg);
    CHECK_THROWS_AS(pipe.stage_spectrum(), MissingDataError);  // no traces yet
    pipe.stage_classdata();
    pipe.stage_testfunc();
    pipe.stage_trace();
    // different config must reject the cached test function
    RunConfig cfg2 = cfg;
    cfg2.M = 10;
    Pipeline other(cfg2);
    try {
        other.stage_spectrum();
        CHECK(false);
    } catch (const MissingDataError& e) {
        std::string msg = e.what();
        CHECK(msg.find("re-run") != std::string::npos);
    }
}
