// Command-line surface: catalog listing, study runs, and oracle spot checks.

#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "opcut/harness.hpp"
#include "opcut/json_io.hpp"
#include "oracles/oracles.hpp"

namespace {

using namespace opcut;

int cmd_models_list() {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& e : model_catalog()) {
        nlohmann::ordered_json entry;
        entry["name"] = e.name;
        entry["params"] = e.params_schema;
        entry["description"] = e.description;
        arr.push_back(std::move(entry));
    }
    std::cout << arr.dump(2) << "\n";
    return 0;
}

std::string default_out_dir() {
    if (const char* env = std::getenv("OPCUT_OUT_DIR")) return env;
    return "";
}

int run_and_emit(StudyConfig cfg, bool quiet) {
    if (cfg.out_dir.empty()) cfg.out_dir = default_out_dir();
    const ConvergenceReport rep = run_study(cfg);
    if (!cfg.out_dir.empty()) {
        for (const auto& p : emit_report(rep, "csv", cfg.out_dir, cfg.out_prefix))
            if (!quiet) std::cerr << "wrote " << p << "\n";
        for (const auto& p : emit_report(rep, "json", cfg.out_dir, cfg.out_prefix))
            if (!quiet) std::cerr << "wrote " << p << "\n";
    } else {
        write_json_summary(rep, std::cout);
    }
    return rep.exit_code();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"cutoff-regularized operator dynamics laboratory"};
    app.require_subcommand(1);

    // models list / dump
    auto* models = app.add_subcommand("models", "model catalog");
    models->require_subcommand(1);
    models->add_subcommand("list", "print the catalog as JSON");
    auto* dump = models->add_subcommand("dump", "emit one instance as JSON");
    std::string dump_name = "commuting";
    std::size_t dump_dim = 16;
    int dump_n = 2;
    double dump_alpha = 1.0, dump_c = 1.0;
    dump->add_option("--name", dump_name, "catalog model name");
    dump->add_option("--dim", dump_dim, "truncation dimension");
    dump->add_option("--model-n", dump_n, "ladder power n");
    dump->add_option("--model-alpha", dump_alpha, "oscillator coupling");
    dump->add_option("--model-c", dump_c, "commuting bound");

    // study run
    auto* study = app.add_subcommand("study", "convergence studies");
    study->require_subcommand(1);
    auto* run = study->add_subcommand("run", "run one study");
    std::string config_path, kind, model, L_rule, x_source, out_dir, fset;
    std::vector<std::size_t> dims;
    int L_count = -1, k_max = -1, threads = -1, tau_count = -1;
    long seed = -1;
    double horizon = -1.0, alpha = std::nan(""), coupling = std::nan("");
    int model_n = -1;
    bool quiet = false;
    run->add_option("--config", config_path, "config file (key = value lines)");
    run->add_option("--kind", kind, "study kind");
    run->add_option("--model", model, "catalog model name");
    run->add_option("--dim", dims, "truncation dimension (repeatable)");
    run->add_option("--L-count", L_count, "number of cutoff grid points");
    run->add_option("--L-rule", L_rule, "midpoints | midpoints-log");
    bool L_allow_upper = false;
    run->add_flag("--L-allow-upper", L_allow_upper,
                  "let the cutoff grid reach past the lower half");
    run->add_option("--k-max", k_max, "largest seminorm order");
    run->add_option("--fset", fset, "e.g. 'exp:1;gauss:1;polyexp:2:1'");
    run->add_option("--seed", seed, "rng seed for seeded observables");
    run->add_option("--threads", threads, "worker threads (0 = default)");
    run->add_option("--out", out_dir, "output directory (default $OPCUT_OUT_DIR)");
    run->add_option("--x-source", x_source, "lemma2_2 observable source");
    run->add_option("--horizon", horizon, "prop60 integration horizon");
    run->add_option("--tau-count", tau_count, "example_aN grid points per axis");
    run->add_option("--model-n", model_n, "ladder power n");
    run->add_option("--model-alpha", alpha, "oscillator coupling alpha");
    run->add_option("--model-c", coupling, "commuting model bound c");
    run->add_flag("--quiet", quiet, "suppress progress notes");

    // oracle spot checks
    auto* oracle_cmd = app.add_subcommand("oracle", "brute-force reference values");
    oracle_cmd->require_subcommand(1);

    auto* tail = oracle_cmd->add_subcommand("tail", "spectrum tail maximum");
    std::size_t tdim = 16;
    double tL = 4.0;
    unsigned tell = 2;
    tail->add_option("--dim", tdim, "dimension");
    tail->add_option("--L", tL, "cutoff");
    tail->add_option("--ell", tell, "inverse power");

    auto* olemma = oracle_cmd->add_subcommand(
        "lemma59", "closed-form lemma59 study on the commuting model");
    std::size_t odim = 24;
    int ok_max = 4, oL_count = 12;
    double ocoupling = 1.0;
    std::string oout;
    olemma->add_option("--dim", odim, "base dimension (doubled for stability)");
    olemma->add_option("--k-max", ok_max, "largest weight order");
    olemma->add_option("--L-count", oL_count, "cutoff grid size");
    olemma->add_option("--c", ocoupling, "coupling bound");
    olemma->add_option("--out", oout, "output directory");

    auto* ofit = oracle_cmd->add_subcommand("fit", "rate fit on a synthetic power law");
    double orho = 2.0;
    int ocount = 8;
    ofit->add_option("--rho", orho, "decay exponent");
    ofit->add_option("--count", ocount, "points");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (dump->parsed()) {
            ModelParams p;
            p.n = dump_n;
            p.alpha = dump_alpha;
            p.coupling = dump_c;
            const ModelInstance m = build_model(dump_name, dump_dim, p);
            nlohmann::ordered_json j;
            j["name"] = m.name;
            j["dim"] = m.dim;
            j["shift"] = m.shift;
            j["b_hermitian"] = m.b_hermitian;
            j["description"] = m.description;
            j["H0"] = to_json(m.H0);
            j["B"] = to_json(m.B);
            std::cout << j.dump(2) << "\n";
            return 0;
        }
        if (models->parsed()) return cmd_models_list();

        if (run->parsed()) {
            StudyConfig cfg;
            if (!config_path.empty()) cfg = parse_config_file(config_path);
            if (!kind.empty()) cfg.kind = kind;
            if (!model.empty()) cfg.model = model;
            if (!dims.empty()) {
                cfg.dims = dims;
                // a single dimension cannot feed the doubling check
                if (cfg.dims.size() == 1) cfg.dims.push_back(cfg.dims[0] * 2);
            }
            if (L_count > 0) cfg.L_count = L_count;
            if (!L_rule.empty()) cfg.L_rule = L_rule;
            if (L_allow_upper) cfg.L_allow_upper = true;
            if (k_max >= 0) cfg.k_max = k_max;
            if (!fset.empty()) {
                cfg.f_set.clear();
                std::stringstream ss(fset);
                std::string item;
                while (std::getline(ss, item, ';'))
                    if (!item.empty()) cfg.f_set.push_back(TestFunction::parse(item));
            }
            if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
            if (threads >= 0) cfg.threads = threads;
            if (!out_dir.empty()) cfg.out_dir = out_dir;
            if (!x_source.empty()) cfg.x_source = x_source;
            if (horizon > 0.0) cfg.horizon = horizon;
            if (tau_count > 1) cfg.tau_count = tau_count;
            if (model_n > 0) cfg.params.n = model_n;
            if (!std::isnan(alpha)) cfg.params.alpha = alpha;
            if (!std::isnan(coupling)) cfg.params.coupling = coupling;
            return run_and_emit(std::move(cfg), quiet);
        }

        if (tail->parsed()) {
            std::vector<double> spectrum(tdim);
            for (std::size_t i = 0; i < tdim; ++i)
                spectrum[i] = static_cast<double>(i + 1);
            std::cout.precision(17);
            std::cout << oracle::tail_max(spectrum, tL, tell) << "\n";
            return 0;
        }

        if (olemma->parsed()) {
            StudyConfig cfg;
            cfg.kind = "lemma59";
            cfg.model = "commuting";
            cfg.params.coupling = ocoupling;
            cfg.dims = {odim, odim * 2};
            cfg.k_max = ok_max;
            cfg.L_count = oL_count;
            const ConvergenceReport rep = oracle::lemma59_report(cfg);
            if (!oout.empty()) {
                for (const auto& p : emit_report(rep, "csv", oout, "oracle_"))
                    std::cerr << "wrote " << p << "\n";
            } else {
                write_csv(rep, std::cout);
            }
            return 0;
        }

        if (ofit->parsed()) {
            std::vector<std::pair<double, double>> pts;
            for (int i = 0; i < ocount; ++i) {
                const double L = 2.0 + i;
                pts.emplace_back(L, std::pow(L, -orho));
            }
            const FitResult fr = fit_rate(pts);
            std::cout.precision(17);
            std::cout << "rho " << fr.rho << " C " << fr.c << " r2 " << fr.r2 << "\n";
            return 0;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
