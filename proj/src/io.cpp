#include "maass/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace maass {

using nlohmann::json;

namespace {

std::string dstr(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json ball_to_json(const Ball& b) { return json::array({b.mid_string(), b.rad_string()}); }

Ball ball_from_json(const json& j) { return Ball::from_strings(j.at(0).get<std::string>(), j.at(1).get<std::string>()); }

json meta_to_json(const ArtifactMeta& m) {
    return json{{"level", m.level}, {"X", dstr(m.X)}, {"d", m.d},      {"B2", dstr(m.bits2)},
                {"prec", m.prec},   {"M", m.M},       {"n_max", m.n_max}};
}

ArtifactMeta meta_from_json(const json& j) {
    ArtifactMeta m;
    m.level = j.at("level").get<long>();
    m.X = std::stod(j.at("X").get<std::string>());
    m.d = j.at("d").get<int>();
    m.bits2 = std::stod(j.at("B2").get<std::string>());
    m.prec = j.at("prec").get<long>();
    m.M = j.value("M", 0L);
    m.n_max = j.value("n_max", 0L);
    return m;
}

}  // namespace

bool ArtifactMeta::compatible_with(const ArtifactMeta& o) const {
    return level == o.level && X == o.X && d == o.d && prec == o.prec;
}

void atomic_write(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp);
        out << content;
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) throw std::runtime_error("cannot move " + tmp + " into place");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MissingDataError("missing artifact: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool file_exists(const std::string& path) {
    std::ifstream in(path);
    return in.good();
}

std::string package_to_json(const TestFunctionPackage& pkg, const ArtifactMeta& meta) {
    json pieces = json::array();
    for (int j = -pkg.g.d; j < pkg.g.d; ++j) {
        for (int m = -1; m <= 1; ++m) {
            const PolyC& p = pkg.g.piece(m, j);
            if (p.empty()) continue;
            json re = json::array(), im = json::array();
            for (const BallC& c : p.c) {
                re.push_back(ball_to_json(c.re));
                im.push_back(ball_to_json(c.im));
            }
            pieces.push_back(json{{"m", m}, {"j", j}, {"coeffs_re", re}, {"coeffs_im", im}});
        }
    }
    json out{{"X", dstr(pkg.X)},
             {"d", pkg.d},
             {"B", dstr(pkg.bits2 / 2)},
             {"lambda_poly", json::array({dstr(pkg.lambda_poly[0]), dstr(pkg.lambda_poly[1]), dstr(pkg.lambda_poly[2])})},
             {"id", pkg.id},
             {"pieces", pieces},
             {"meta", meta_to_json(meta)}};
    return out.dump(1);
}

TestFunctionPackage package_from_json(const std::string& text, ArtifactMeta* meta) {
    json j = json::parse(text);
    TestFunctionPackage pkg;
    pkg.X = std::stod(j.at("X").get<std::string>());
    pkg.d = j.at("d").get<int>();
    pkg.bits2 = 2.0 * std::stod(j.at("B").get<std::string>());
    auto lp = j.at("lambda_poly");
    for (int i = 0; i < 3; ++i) pkg.lambda_poly[i] = std::stod(lp.at(i).get<std::string>());
    pkg.id = j.value("id", std::string("base"));
    pkg.g = PiecewiseExpPoly::zero(pkg.d);
    for (const auto& pj : j.at("pieces")) {
        int m = pj.at("m").get<int>();
        int jj = pj.at("j").get<int>();
        const auto& re = pj.at("coeffs_re");
        const auto& im = pj.at("coeffs_im");
        PolyC p((int)re.size() - 1);
        for (size_t k = 0; k < re.size(); ++k) p.c[k] = BallC(ball_from_json(re.at(k)), ball_from_json(im.at(k)));
        pkg.g.piece(m, jj) = std::move(p);
    }
    pkg.eval = pkg.g.compile();
    pkg.deriv_eval = pkg.g.lattice_derivative().compile();
    if (meta) *meta = meta_from_json(j.at("meta"));
    return pkg;
}

std::string traces_to_json(const TraceTable& table, const ArtifactMeta& meta) {
    json entries = json::array();
    for (const auto& [n, v] : table.entries)
        entries.push_back(json{{"n", n}, {"mid", v.mid_string()}, {"rad", v.rad_string()}});
    json out{{"level", table.level}, {"X", dstr(table.X)},   {"d", table.d},
             {"package_id", table.package_id}, {"prec", table.prec}, {"entries", entries},
             {"meta", meta_to_json(meta)}};
    return out.dump(1);
}

TraceTable traces_from_json(const std::string& text, ArtifactMeta* meta) {
    json j = json::parse(text);
    TraceTable t;
    t.level = j.at("level").get<long>();
    t.X = std::stod(j.at("X").get<std::string>());
    t.d = j.at("d").get<int>();
    t.package_id = j.at("package_id").get<std::string>();
    t.prec = j.at("prec").get<long>();
    for (const auto& e : j.at("entries"))
        t.entries[e.at("n").get<i64>()] =
            Ball::from_strings(e.at("mid").get<std::string>(), e.at("rad").get<std::string>());
    if (meta) *meta = meta_from_json(j.at("meta"));
    return t;
}

std::string candidates_to_json(const CandidateSet& set, const ArtifactMeta& meta) {
    json cands = json::array();
    for (const auto& c : set.candidates) {
        json cv = json::array();
        for (double v : c.c) cv.push_back(dstr(v));
        cands.push_back(json{{"lambda_tilde", dstr(c.lambda_tilde)}, {"c", cv}});
    }
    json out{{"parity", set.parity},
             {"M_effective", set.M_effective},
             {"lambda_max", dstr(set.lambda_max)},
             {"candidates", cands},
             {"meta", meta_to_json(meta)}};
    return out.dump(1);
}

CandidateSet candidates_from_json(const std::string& text, ArtifactMeta* meta) {
    json j = json::parse(text);
    CandidateSet s;
    s.parity = j.at("parity").get<int>();
    s.M_effective = j.at("M_effective").get<long>();
    s.lambda_max = std::stod(j.at("lambda_max").get<std::string>());
    for (const auto& cj : j.at("candidates")) {
        CandidateForm c;
        c.parity = s.parity;
        c.lambda_tilde = std::stod(cj.at("lambda_tilde").get<std::string>());
        for (const auto& v : cj.at("c")) c.c.push_back(std::stod(v.get<std::string>()));
        s.candidates.push_back(std::move(c));
    }
    if (meta) *meta = meta_from_json(j.at("meta"));
    return s;
}

std::string forms_to_json(const std::vector<VerifiedForm>& forms, const ArtifactMeta& meta) {
    json arr = json::array();
    for (const auto& f : forms) {
        json coeffs = json::array();
        for (const auto& [n, v] : f.a)
            coeffs.push_back(json{{"n", n}, {"mid", v.mid_string()}, {"rad", v.rad_string()}});
        json signs = json::object();
        for (const auto& [p, s] : f.signs) signs[std::to_string(p)] = s;
        json jf{{"level", f.level},
                {"parity", f.parity},
                {"lambda_tilde", dstr(f.lambda_tilde)},
                {"lambda", json{{"mid", f.lambda.mid_string()}, {"rad", f.lambda.rad_string()}}},
                {"R", json{{"mid", f.R().mid_string()}, {"rad", f.R().rad_string()}}},
                {"epsilon", json{{"mid", f.epsilon.mid_string()}, {"rad", f.epsilon.rad_string()}}},
                {"delta", json{{"mid", f.delta.mid_string()}, {"rad", f.delta.rad_string()}}},
                {"complete", f.complete},
                {"coeffs", coeffs},
                {"signs", signs},
                {"fricke_w", f.fricke_w},
                {"signs_rigorous", f.signs_rigorous}};
        json cv = json::array();
        for (double v : f.c) cv.push_back(dstr(v));
        jf["c"] = cv;
        arr.push_back(std::move(jf));
    }
    json out{{"forms", arr}, {"meta", meta_to_json(meta)}};
    return out.dump(1);
}

std::vector<VerifiedForm> forms_from_json(const std::string& text, ArtifactMeta* meta) {
    json j = json::parse(text);
    std::vector<VerifiedForm> out;
    for (const auto& jf : j.at("forms")) {
        VerifiedForm f;
        f.level = jf.at("level").get<long>();
        f.parity = jf.at("parity").get<int>();
        f.lambda_tilde = std::stod(jf.at("lambda_tilde").get<std::string>());
        auto rd = [&](const json& b) {
            return Ball::from_strings(b.at("mid").get<std::string>(), b.at("rad").get<std::string>());
        };
        f.lambda = rd(jf.at("lambda"));
        f.epsilon = rd(jf.at("epsilon"));
        f.delta = rd(jf.at("delta"));
        f.complete = jf.at("complete").get<bool>();
        for (const auto& e : jf.at("coeffs"))
            f.a[e.at("n").get<i64>()] =
                Ball::from_strings(e.at("mid").get<std::string>(), e.at("rad").get<std::string>());
        for (auto it = jf.at("signs").begin(); it != jf.at("signs").end(); ++it)
            f.signs[std::stol(it.key())] = it.value().get<int>();
        f.fricke_w = jf.at("fricke_w").get<int>();
        f.signs_rigorous = jf.at("signs_rigorous").get<bool>();
        for (const auto& v : jf.at("c")) f.c.push_back(std::stod(v.get<std::string>()));
        out.push_back(std::move(f));
    }
    if (meta && j.contains("meta")) *meta = meta_from_json(j.at("meta"));
    return out;
}

}  // namespace maass
