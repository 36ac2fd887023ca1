#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "opcut/cutoff.hpp"
#include <json.hpp>

#include "opcut/harness.hpp"
#include "opcut/matfun.hpp"

#include "oracles/oracles.hpp"

using namespace opcut;

TEST_CASE("rate fit: synthetic power law and edge cases") {
    std::vector<std::pair<double, double>> pts;
    for (int i = 0; i < 10; ++i) {
        const double L = 2.0 + 1.5 * i;
        pts.emplace_back(L, 3.0 * std::pow(L, -2.0));
    }
    const FitResult fr = fit_rate(pts);
    CHECK(fr.rho == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(fr.c == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(fr.r2 > 0.999999);
    CHECK(fr.points_used == 10);

    // constant series: slope zero, perfectly explained
    std::vector<std::pair<double, double>> flat;
    for (int i = 0; i < 6; ++i) flat.emplace_back(2.0 + i, 0.7);
    const FitResult fc = fit_rate(flat);
    CHECK(std::abs(fc.rho) <= 1e-12);
    CHECK(fc.r2 == doctest::Approx(1.0));

    // floor filtering drops tiny values
    std::vector<std::pair<double, double>> mixed = pts;
    mixed.emplace_back(50.0, 1e-15);
    const FitResult fm = fit_rate(mixed);
    CHECK(fm.points_used == 10);

    CHECK_THROWS_AS(fit_rate({{1.0, 1.0}, {2.0, 0.5}, {3.0, 0.2}}),
                    InsufficientPoints);
}

TEST_CASE("rate fit on the spectral tail beats its guaranteed exponent") {
    // tail of an integer spectrum, ell = 3: the guaranteed envelope is
    // L^{-3}; the fitted rate must be at least that
    std::vector<double> spectrum(64);
    for (int i = 0; i < 64; ++i) spectrum[i] = i + 1.0;
    const auto s = hermitian_eig(OperatorMatrix::diagonal(spectrum));
    std::vector<std::pair<double, double>> pts;
    for (double L = 2.5; L <= 30.5; L += 4.0)
        pts.emplace_back(L, tail_norm(s, L, 3));
    const FitResult fr = fit_rate(pts);
    // midpoint sampling sees the staircase (L + 1/2)^{-3}, whose log-log
    // slope is 3L/(L + 1/2): slightly below the envelope exponent
    CHECK(fr.rho > 2.5);
    CHECK(fr.rho <= 3.0 + 1e-9);
    CHECK(fr.r2 > 0.99);

    // the fit of the implementation series equals the fit of the closed form
    std::vector<std::pair<double, double>> exact;
    for (double L = 2.5; L <= 30.5; L += 4.0)
        exact.emplace_back(L, oracle::tail_max(spectrum, L, 3));
    const FitResult fe = fit_rate(exact);
    CHECK(fr.rho == doctest::Approx(fe.rho).epsilon(1e-12));
}

TEST_CASE("config parsing") {
    const std::string text = R"(
# study configuration
kind = lemma59
model = commuting
model.c = 0.5
dims = 16, 32
L.count = 8
L.rule = midpoints-log
k_max = 3
fset = exp:1; gauss:2
times = 0.5, 1
seed = 99
s = 2
threads = 2
tol.verdict_final = 1e-4
)";
    const StudyConfig cfg = parse_config_text(text);
    CHECK(cfg.kind == "lemma59");
    CHECK(cfg.model == "commuting");
    CHECK(cfg.params.coupling == doctest::Approx(0.5));
    CHECK(cfg.dims == std::vector<std::size_t>{16, 32});
    CHECK(cfg.L_count == 8);
    CHECK(cfg.L_rule == "midpoints-log");
    CHECK(cfg.k_max == 3);
    CHECK(cfg.f_set.size() == 2);
    CHECK(cfg.f_set[1].kind == TestFunction::Kind::gaussian);
    CHECK(cfg.f_set[1].alpha == doctest::Approx(2.0));
    CHECK(cfg.times == std::vector<double>{0.5, 1.0});
    CHECK(cfg.seed == 99);
    CHECK(cfg.threads == 2);
    CHECK(cfg.tol.verdict_final == doctest::Approx(1e-4));
    CHECK_FALSE(cfg.L_allow_upper);
    CHECK(parse_config_text("kind = lemma59\nL.allow_upper = true\n").L_allow_upper);

    CHECK_THROWS_AS(parse_config_text("kind = lemma59\nbogus = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("kind = lemma59\ndims = 32, 16\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("kind = nope\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("kind = lemma59\nL.count = x\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("kind lemma59\n"), ConfigError);
}

TEST_CASE("study kinds list") {
    const auto& kinds = study_kinds();
    CHECK(kinds.size() == 11);
    for (const auto& k : kinds) {
        StudyConfig cfg;
        cfg.kind = k;
        cfg.validate(); // every published kind validates
    }
}

TEST_CASE("study runs are deterministic byte for byte") {
    StudyConfig cfg;
    cfg.kind = "lemma59";
    cfg.model = "commuting";
    cfg.dims = {12, 24};
    cfg.L_count = 6;
    cfg.k_max = 2;

    const ConvergenceReport r1 = run_study(cfg);
    const ConvergenceReport r2 = run_study(cfg);
    std::ostringstream c1, c2, j1, j2;
    write_csv(r1, c1);
    write_csv(r2, c2);
    write_json_summary(r1, j1);
    write_json_summary(r2, j2);
    CHECK(c1.str() == c2.str());
    CHECK(j1.str() == j2.str());
}

TEST_CASE("lemma59 existence: the strongest weight decays at adequate scale") {
    StudyConfig cfg;
    cfg.kind = "lemma59";
    cfg.model = "commuting";
    cfg.dims = {32, 64};
    cfg.L_count = 8;
    cfg.k_max = 0;
    const ConvergenceReport rep = run_study(cfg);
    bool found = false;
    for (const auto& s : rep.series)
        if (s.dim == 64 && s.k == 0 && s.f_params == "s=4" &&
            s.verdict == "converged")
            found = true;
    CHECK(found);
}

TEST_CASE("json summary round trip reproduces the verdicts") {
    StudyConfig cfg;
    cfg.kind = "lemma2_2";
    cfg.model = "commuting";
    cfg.dims = {12, 24};
    cfg.L_count = 6;
    cfg.k_max = 1;
    const ConvergenceReport rep = run_study(cfg);

    std::ostringstream os;
    write_json_summary(rep, os);
    const auto j = nlohmann::json::parse(os.str());
    CHECK(j.at("study") == "lemma2_2");
    CHECK(j.at("overall") == rep.overall);
    CHECK(j.at("series").size() == rep.series.size());
    for (std::size_t i = 0; i < rep.series.size(); ++i)
        CHECK(j.at("series")[i].at("verdict") == rep.series[i].verdict);
}

TEST_CASE("empty report emits a header-only csv") {
    ConvergenceReport rep;
    rep.kind = "lemma59";
    rep.model = "commuting";
    std::ostringstream os;
    write_csv(rep, os);
    CHECK(os.str() == "study,model,dim,f_kind,f_params,k,L,value\n");

    std::ostringstream js;
    write_json_summary(rep, js);
    const auto j = nlohmann::json::parse(js.str());
    CHECK(j.at("series").empty());
}

TEST_CASE("commuting-model study values match the scalar oracle") {
    StudyConfig cfg;
    cfg.kind = "lemma59";
    cfg.model = "commuting";
    cfg.dims = {16};
    cfg.L_count = 5;
    cfg.k_max = 2;
    const ConvergenceReport rep = run_study(cfg);
    const auto cm = oracle::CommutingModel::make(16, 1.0);
    for (const auto& series : rep.series) {
        REQUIRE(series.f_kind == "spow");
        const unsigned s = std::stoul(series.f_params.substr(2));
        for (const auto& pt : series.points) {
            const double expected = oracle::lemma59_value(cm, s, series.k, pt.L);
            CHECK(pt.value == expected); // same floats by construction
        }
    }
}

TEST_CASE("lemma2_2 with the generator itself reduces to the tail formula") {
    StudyConfig cfg;
    cfg.kind = "lemma2_2";
    cfg.model = "commuting";
    cfg.x_source = "H0";
    cfg.dims = {16};
    cfg.L_count = 5;
    cfg.k_max = 2;
    const ConvergenceReport rep = run_study(cfg);
    const auto cm = oracle::CommutingModel::make(16, 1.0);
    for (const auto& series : rep.series) {
        TestFunction f;
        if (series.f_kind == "exp") f = TestFunction::exponential(1.0);
        else if (series.f_kind == "gauss") f = TestFunction::gaussian(1.0);
        else f = TestFunction::poly_exp(2, 1.0);
        for (const auto& pt : series.points) {
            // X = H0: surviving entries are lambda on the tail diagonal
            double expected = 0.0;
            for (std::size_t j = 0; j < 16; ++j) {
                if (cm.inside(j, pt.L)) continue;
                expected = std::max(expected,
                                    f(cm.lam[j]) * cm.lam[j] *
                                        std::pow(cm.lam[j], double(series.k)));
            }
            CHECK(pt.value == doctest::Approx(expected).epsilon(1e-12));
        }
    }
}

TEST_CASE("study and oracle emit the committed golden fixture byte for byte") {
    StudyConfig cfg;
    cfg.kind = "lemma59";
    cfg.model = "commuting";
    cfg.dims = {24, 48};
    cfg.L_count = 12;
    cfg.k_max = 4;

    std::ostringstream via_study, via_oracle;
    write_csv(run_study(cfg), via_study);
    write_csv(oracle::lemma59_report(cfg), via_oracle);
    CHECK(via_study.str() == via_oracle.str());

    const char* golden_env = std::getenv("OPCUT_GOLDEN_DIR");
    const std::string dir = golden_env ? golden_env : "tests/golden";
    std::ifstream in(dir + "/lemma59_commuting.csv", std::ios::binary);
    REQUIRE(in.good());
    std::stringstream frozen;
    frozen << in.rdbuf();
    CHECK(via_study.str() == frozen.str());
}

TEST_CASE("every study kind runs end to end and emits both formats") {
    const auto small = [](const std::string& kind, const std::string& model,
                          std::vector<std::size_t> dims) {
        StudyConfig cfg;
        cfg.kind = kind;
        cfg.model = model;
        cfg.dims = std::move(dims);
        cfg.L_count = 4;
        cfg.k_max = 1;
        cfg.tau_count = 3;
        cfg.tau_max = 2.0;
        return cfg;
    };
    const std::vector<StudyConfig> configs = {
        small("lemma2_2", "commuting", {12, 24}),
        small("c1c2c3", "commuting", {12, 24}),
        small("corollary2_3", "commuting", {12, 24}),
        small("lemma59", "commuting", {12, 24}),
        small("prop60", "commuting", {12, 24}),
        small("example_aN", "number-aN", {16}),
        small("lemma61", "commuting", {12, 24}),
        small("prop62", "number-aN", {16}),
        small("prop49", "oscillator-linear", {16, 32}),
        small("section4_defect", "commuting", {12, 24}),
        small("diagnostics", "oscillator-linear", {8, 16, 32}),
    };
    for (const auto& cfg : configs) {
        CAPTURE(cfg.kind);
        const ConvergenceReport rep = run_study(cfg);
        REQUIRE_FALSE(rep.series.empty());
        for (const auto& s : rep.series) {
            CHECK_FALSE(s.verdict.empty());
            for (const auto& p : s.points)
                CHECK((std::isfinite(p.value) || !p.error.empty()));
        }
        std::ostringstream csv_out, json_out;
        write_csv(rep, csv_out);
        write_json_summary(rep, json_out);
        CHECK(csv_out.str().rfind("study,model,dim", 0) == 0);
        const auto parsed = nlohmann::json::parse(json_out.str());
        CHECK(parsed.is_object());
    }
}

TEST_CASE("free-generator convergence reaches 1e-6 at adequate scale") {
    // with B = 0 the cutoff generator converges in every tested seminorm;
    // the polynomial weights need the larger truncation to cross 1e-6
    StudyConfig cfg;
    cfg.kind = "c1c2c3";
    cfg.model = "commuting";
    cfg.dims = {128};
    cfg.L_count = 8;
    const ConvergenceReport rep = run_study(cfg);
    for (const auto& s : rep.series) {
        if (s.f_params.find("part=c1") == std::string::npos) continue;
        double final_v = 0.0;
        for (auto it = s.points.rbegin(); it != s.points.rend(); ++it)
            if (std::isfinite(it->value)) {
                final_v = it->value;
                break;
            }
        CAPTURE(s.f_kind);
        CAPTURE(s.k);
        CHECK(final_v < 1e-6);
        // nonincreasing over the grid
        for (std::size_t i = 1; i < s.points.size(); ++i)
            CHECK(s.points[i].value <= s.points[i - 1].value + 1e-12);
    }
    // the propagator and evolution gaps decrease as well
    for (const auto& s : rep.series) {
        if (s.f_params.find("part=c1") != std::string::npos) continue;
        CHECK(s.points.back().value < s.points.front().value + 1e-12);
    }
}

TEST_CASE("reports do not depend on the worker count") {
    StudyConfig cfg;
    cfg.kind = "corollary2_3";
    cfg.model = "oscillator-linear";
    cfg.dims = {16, 32};
    cfg.L_count = 5;
    cfg.k_max = 2;
    cfg.threads = 1;
    std::ostringstream one;
    write_csv(run_study(cfg), one);
    cfg.threads = 2;
    std::ostringstream two;
    write_csv(run_study(cfg), two);
    CHECK(one.str() == two.str());
}

TEST_CASE("diagnostics verdicts separate comparable from broken domains") {
    StudyConfig cfg;
    cfg.kind = "diagnostics";
    cfg.dims = {16, 32, 64};
    cfg.model = "oscillator-linear";
    CHECK(run_study(cfg).overall == "converged");
    cfg.model = "rank-one";
    const ConvergenceReport rep = run_study(cfg);
    CHECK(rep.overall == "not-converged");
    bool growing_crossbound = false;
    for (const auto& s : rep.series)
        if (s.f_kind == "crossbound" && s.verdict == "not-converged")
            growing_crossbound = true;
    CHECK(growing_crossbound);
}

TEST_CASE("study-model mismatches are rejected") {
    StudyConfig cfg;
    cfg.dims = {8, 16};
    cfg.L_count = 4;
    cfg.kind = "example_aN";
    cfg.model = "commuting";
    CHECK_THROWS_AS(run_study(cfg), ConfigError);
    cfg.kind = "prop62";
    CHECK_THROWS_AS(run_study(cfg), ConfigError);
    cfg.kind = "prop49";
    cfg.model = "number-aN";
    CHECK_THROWS_AS(run_study(cfg), ConfigError);
    cfg.kind = "lemma61";
    CHECK_THROWS_AS(run_study(cfg), ConfigError);
}

TEST_CASE("negative control: flat random observables do not converge") {
    StudyConfig cfg;
    cfg.kind = "lemma2_2";
    cfg.model = "commuting";
    cfg.x_source = "random-flat";
    cfg.dims = {16, 32};
    cfg.L_count = 6;
    cfg.k_max = 2;
    const ConvergenceReport rep = run_study(cfg);
    CHECK(rep.overall == "not-converged");
    CHECK(rep.exit_code() == 2);
}

TEST_CASE("emit_report writes both formats to disk") {
    StudyConfig cfg;
    cfg.kind = "lemma59";
    cfg.model = "commuting";
    cfg.dims = {8, 16};
    cfg.L_count = 4;
    cfg.k_max = 1;
    const ConvergenceReport rep = run_study(cfg);

    const std::string dir =
        (std::filesystem::temp_directory_path() / "opcut_harness_out").string();
    const auto csv = emit_report(rep, "csv", dir, "t_");
    const auto jsonimg = emit_report(rep, "json", dir, "t_");
    REQUIRE(csv.size() == 1);
    REQUIRE(jsonimg.size() == 1);
    std::ifstream fcsv(csv[0]);
    CHECK(fcsv.good());
    std::string header;
    std::getline(fcsv, header);
    CHECK(header == "study,model,dim,f_kind,f_params,k,L,value");
    CHECK_THROWS_AS(emit_report(rep, "xml", dir, ""), ConfigError);
}
