#include <cstdio>
#include <exception>
#include <fstream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "muskat/cli_io.hpp"

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw muskat::IoFailure("cannot open config: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_experiment(const std::string& name, const std::string& config_path,
                   const std::string& out_override, const std::string& self_exe) {
    muskat::RunConfig cfg = muskat::parse_config(slurp(config_path));
    cfg.experiment = name;
    if (!out_override.empty()) cfg.out_dir = out_override;
    muskat::DriverResult res;
    if (name == "simulate") {
        res = muskat::driver_simulate(cfg);
    } else if (name == "reverse") {
        res = muskat::driver_reverse(cfg);
    } else if (name == "decay") {
        res = muskat::driver_decay(cfg);
    } else if (name == "contraction") {
        res = muskat::driver_contraction(cfg);
    } else if (name == "mollifier") {
        res = muskat::driver_mollifier(cfg);
    } else if (name == "staircase") {
        res = muskat::driver_staircase(cfg);
    } else {
        res = muskat::driver_sweep(cfg, self_exe);
    }
    for (const auto& v : res.verdicts)
        std::printf("%-36s %s  measured=%.6g bound=%.6g%s%s\n", v.name.c_str(),
                    v.pass ? "PASS" : "FAIL", v.measured, v.bound,
                    v.note.empty() ? "" : "  ", v.note.c_str());
    return res.exit_code;
}

int run_constants(const std::string& model_name, int samples, const std::string& out_path) {
    const muskat::Model model =
        model_name == "3d" ? muskat::Model::three_d : muskat::Model::two_d;
    const auto curve = muskat::threshold_curve(samples, model);
    std::ostringstream out;
    out << "a_mu,threshold,sigma_at_half_threshold\n";
    for (const auto& p : curve) {
        out << muskat::iodetail::g17(p.a_mu) << ',' << muskat::iodetail::g17(p.x_star)
            << ',' << muskat::iodetail::g17(p.sigma_at_half) << "\n";
    }
    muskat::write_text(out_path, out.str());
    std::printf("wrote %d samples to %s\n", samples, out_path.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Muskat interface laboratory"};
    app.require_subcommand(1);

    std::string model_name = "3d";
    int samples = 101;
    std::string curve_out = "curve.csv";
    auto* sc_constants = app.add_subcommand("constants", "threshold curve table");
    sc_constants->add_option("--model", model_name)->check(CLI::IsMember({"2d", "3d"}));
    sc_constants->add_option("--samples", samples)->check(CLI::PositiveNumber);
    sc_constants->add_option("--out", curve_out);

    struct Sub {
        CLI::App* app;
        std::string config;
        std::string out;
    };
    std::vector<Sub> subs;
    subs.reserve(7);
    for (const char* name :
         {"simulate", "reverse", "decay", "contraction", "mollifier", "staircase", "sweep"}) {
        auto* sc = app.add_subcommand(name, std::string("run the ") + name + " experiment");
        subs.push_back({sc, "", ""});
        sc->add_option("--config", subs.back().config)->required();
        sc->add_option("--out", subs.back().out);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 3;
    }

    try {
        if (sc_constants->parsed()) return run_constants(model_name, samples, curve_out);
        for (const auto& s : subs)
            if (s.app->parsed())
                return run_experiment(s.app->get_name(), s.config, s.out, argv[0]);
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
