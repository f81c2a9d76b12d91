#pragma once

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "muskat/constants.hpp"
#include "muskat/dynamics.hpp"
#include "muskat/errors.hpp"
#include "muskat/experiments.hpp"
#include "muskat/spectral.hpp"

namespace muskat {

// ---------------------------------------------------------------------------
// Run configuration (flat key=value text, '#' comments)
// ---------------------------------------------------------------------------

struct RunConfig {
    Model model = Model::two_d;  // key "model" (required): 2d | 3d
    int n = 256;
    double period = 2.0 * std::numbers::pi;
    double a_mu = 0.0;
    double a_rho = 1.0;
    double nu_fraction = 0.1;
    double dt_max = 0.05;
    double cfl_c = 0.25;
    double t_end = 1.0;
    double mollifier_eps = 0.0;
    int window_periods = 1;
    int snapshot_stride = 1;
    std::string out_dir = "out";
    std::string experiment = "simulate";
    // initial data selection
    std::string init_profile = "two_cosine";  // cosine | two_cosine | band_bump | powerlaw
    int init_wavenumber = 1;
    double init_norm_frac = 0.8;   // scale to this fraction of threshold(|a_mu|); 0 = off
    double init_amplitude = 0.0;   // scale to this sup amplitude instead; takes precedence
    // extras
    bool snapshot_spectra = false;
    bool mollified_full_arho = false;
    double blowup_threshold = 1e6;
    double fit_t1 = 5.0;  // decay fit window (fit_t2 = 0 means t_end)
    double fit_t2 = 0.0;
    // staircase exponents
    double staircase_sigma = 2.0;
    double staircase_delta = 1.0;
    double staircase_gamma = 4.5;
    double staircase_s = 0.25;
    double staircase_shells = 1e6;
    // sweep control
    std::string sweep_key = "a_mu";
    std::string sweep_values = "0,0.5,1";
};

namespace iodetail {

inline std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string trim(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

inline double want_double(const std::string& key, const std::string& v) {
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0')
        throw BadValue(key + ": not a number: '" + v + "'", key);
    return x;
}

inline int want_int(const std::string& key, const std::string& v) {
    char* end = nullptr;
    const long x = std::strtol(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0')
        throw BadValue(key + ": not an integer: '" + v + "'", key);
    return static_cast<int>(x);
}

inline bool want_bool(const std::string& key, const std::string& v) {
    if (v == "0" || v == "false") return false;
    if (v == "1" || v == "true") return true;
    throw BadValue(key + ": not a boolean (use 0/1): '" + v + "'", key);
}

}  // namespace iodetail

inline RunConfig parse_config(const std::string& text) {
    static const std::set<std::string> known = {
        "model", "n", "period", "a_mu", "a_rho", "nu_fraction", "dt_max", "cfl_c", "t_end",
        "mollifier_eps", "window_periods", "snapshot_stride", "out_dir", "experiment",
        "init_profile", "init_wavenumber", "init_norm_frac", "init_amplitude",
        "snapshot_spectra", "mollified_full_arho", "blowup_threshold", "fit_t1", "fit_t2",
        "staircase_sigma", "staircase_delta", "staircase_gamma", "staircase_s",
        "staircase_shells", "sweep_key", "sweep_values"};
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = iodetail::trim(line);
        if (line.empty()) continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw BadValue("config line missing '=': '" + line + "'", line);
        const std::string key = iodetail::trim(line.substr(0, eq));
        const std::string val = iodetail::trim(line.substr(eq + 1));
        if (!known.count(key)) throw UnknownKey("unknown config key: " + key, key);
        if (kv.count(key)) throw BadValue("duplicate config key: " + key, key);
        kv[key] = val;
    }
    if (!kv.count("model")) throw MissingRequired("missing required key: model", "model");

    RunConfig c;
    auto take = [&](const char* key) -> const std::string* {
        auto it = kv.find(key);
        return it == kv.end() ? nullptr : &it->second;
    };
    {
        const std::string& m = kv["model"];
        if (m == "2d") {
            c.model = Model::two_d;
        } else if (m == "3d") {
            c.model = Model::three_d;
        } else {
            throw BadValue("model must be 2d or 3d, got '" + m + "'", "model");
        }
    }
    if (const auto* v = take("n")) c.n = iodetail::want_int("n", *v);
    if (const auto* v = take("period")) c.period = iodetail::want_double("period", *v);
    if (const auto* v = take("a_mu")) c.a_mu = iodetail::want_double("a_mu", *v);
    if (const auto* v = take("a_rho")) c.a_rho = iodetail::want_double("a_rho", *v);
    if (const auto* v = take("nu_fraction"))
        c.nu_fraction = iodetail::want_double("nu_fraction", *v);
    if (const auto* v = take("dt_max")) c.dt_max = iodetail::want_double("dt_max", *v);
    if (const auto* v = take("cfl_c")) c.cfl_c = iodetail::want_double("cfl_c", *v);
    if (const auto* v = take("t_end")) c.t_end = iodetail::want_double("t_end", *v);
    if (const auto* v = take("mollifier_eps"))
        c.mollifier_eps = iodetail::want_double("mollifier_eps", *v);
    if (const auto* v = take("window_periods"))
        c.window_periods = iodetail::want_int("window_periods", *v);
    if (const auto* v = take("snapshot_stride"))
        c.snapshot_stride = iodetail::want_int("snapshot_stride", *v);
    if (const auto* v = take("out_dir")) c.out_dir = *v;
    if (const auto* v = take("experiment")) c.experiment = *v;
    if (const auto* v = take("init_profile")) c.init_profile = *v;
    if (const auto* v = take("init_wavenumber"))
        c.init_wavenumber = iodetail::want_int("init_wavenumber", *v);
    if (const auto* v = take("init_norm_frac"))
        c.init_norm_frac = iodetail::want_double("init_norm_frac", *v);
    if (const auto* v = take("init_amplitude"))
        c.init_amplitude = iodetail::want_double("init_amplitude", *v);
    if (const auto* v = take("snapshot_spectra"))
        c.snapshot_spectra = iodetail::want_bool("snapshot_spectra", *v);
    if (const auto* v = take("mollified_full_arho"))
        c.mollified_full_arho = iodetail::want_bool("mollified_full_arho", *v);
    if (const auto* v = take("blowup_threshold"))
        c.blowup_threshold = iodetail::want_double("blowup_threshold", *v);
    if (const auto* v = take("fit_t1")) c.fit_t1 = iodetail::want_double("fit_t1", *v);
    if (const auto* v = take("fit_t2")) c.fit_t2 = iodetail::want_double("fit_t2", *v);
    if (const auto* v = take("staircase_sigma"))
        c.staircase_sigma = iodetail::want_double("staircase_sigma", *v);
    if (const auto* v = take("staircase_delta"))
        c.staircase_delta = iodetail::want_double("staircase_delta", *v);
    if (const auto* v = take("staircase_gamma"))
        c.staircase_gamma = iodetail::want_double("staircase_gamma", *v);
    if (const auto* v = take("staircase_s"))
        c.staircase_s = iodetail::want_double("staircase_s", *v);
    if (const auto* v = take("staircase_shells"))
        c.staircase_shells = iodetail::want_double("staircase_shells", *v);
    if (const auto* v = take("sweep_key")) c.sweep_key = *v;
    if (const auto* v = take("sweep_values")) c.sweep_values = *v;

    if (c.a_mu < -1.0 || c.a_mu > 1.0) throw BadValue("a_mu outside [-1,1]", "a_mu");
    if (c.n < 4 || (c.n & (c.n - 1)) != 0)
        throw BadValue("n must be a power of two >= 4", "n");
    if (!(c.period > 0.0)) throw BadValue("period must be positive", "period");
    if (!(c.dt_max > 0.0)) throw BadValue("dt_max must be positive", "dt_max");
    if (!(c.cfl_c > 0.0)) throw BadValue("cfl_c must be positive", "cfl_c");
    if (!(c.t_end > 0.0)) throw BadValue("t_end must be positive", "t_end");
    if (c.mollifier_eps < 0.0)
        throw BadValue("mollifier_eps must be nonnegative", "mollifier_eps");
    if (c.nu_fraction < 0.0) throw BadValue("nu_fraction must be nonnegative", "nu_fraction");
    if (c.window_periods < 1) throw BadValue("window_periods must be >= 1", "window_periods");
    if (c.snapshot_stride < 1)
        throw BadValue("snapshot_stride must be >= 1", "snapshot_stride");
    if (!(c.blowup_threshold > 0.0))
        throw BadValue("blowup_threshold must be positive", "blowup_threshold");
    static const std::set<std::string> experiments = {
        "simulate", "reverse", "decay", "contraction", "mollifier", "staircase", "sweep",
        "constants"};
    if (!experiments.count(c.experiment))
        throw BadValue("unknown experiment: " + c.experiment, "experiment");
    static const std::set<std::string> profiles_known = {"cosine", "two_cosine", "band_bump",
                                                         "powerlaw"};
    if (!profiles_known.count(c.init_profile))
        throw BadValue("unknown init_profile: " + c.init_profile, "init_profile");
    return c;
}

inline std::string serialize_config(const RunConfig& c) {
    std::ostringstream out;
    out << "model=" << (c.model == Model::two_d ? "2d" : "3d") << "\n";
    out << "n=" << c.n << "\n";
    out << "period=" << iodetail::g17(c.period) << "\n";
    out << "a_mu=" << iodetail::g17(c.a_mu) << "\n";
    out << "a_rho=" << iodetail::g17(c.a_rho) << "\n";
    out << "nu_fraction=" << iodetail::g17(c.nu_fraction) << "\n";
    out << "dt_max=" << iodetail::g17(c.dt_max) << "\n";
    out << "cfl_c=" << iodetail::g17(c.cfl_c) << "\n";
    out << "t_end=" << iodetail::g17(c.t_end) << "\n";
    out << "mollifier_eps=" << iodetail::g17(c.mollifier_eps) << "\n";
    out << "window_periods=" << c.window_periods << "\n";
    out << "snapshot_stride=" << c.snapshot_stride << "\n";
    out << "out_dir=" << c.out_dir << "\n";
    out << "experiment=" << c.experiment << "\n";
    out << "init_profile=" << c.init_profile << "\n";
    out << "init_wavenumber=" << c.init_wavenumber << "\n";
    out << "init_norm_frac=" << iodetail::g17(c.init_norm_frac) << "\n";
    out << "init_amplitude=" << iodetail::g17(c.init_amplitude) << "\n";
    out << "snapshot_spectra=" << (c.snapshot_spectra ? 1 : 0) << "\n";
    out << "mollified_full_arho=" << (c.mollified_full_arho ? 1 : 0) << "\n";
    out << "blowup_threshold=" << iodetail::g17(c.blowup_threshold) << "\n";
    out << "fit_t1=" << iodetail::g17(c.fit_t1) << "\n";
    out << "fit_t2=" << iodetail::g17(c.fit_t2) << "\n";
    out << "staircase_sigma=" << iodetail::g17(c.staircase_sigma) << "\n";
    out << "staircase_delta=" << iodetail::g17(c.staircase_delta) << "\n";
    out << "staircase_gamma=" << iodetail::g17(c.staircase_gamma) << "\n";
    out << "staircase_s=" << iodetail::g17(c.staircase_s) << "\n";
    out << "staircase_shells=" << iodetail::g17(c.staircase_shells) << "\n";
    out << "sweep_key=" << c.sweep_key << "\n";
    out << "sweep_values=" << c.sweep_values << "\n";
    return out.str();
}

// ---------------------------------------------------------------------------
// Checkpoints: {format, dims, period, modes, time, re, im}, coefficients in
// row-major wavenumber order k = -N/2+1 .. N/2. Written by hand with %.17g
// so that write-then-read is bit exact.
// ---------------------------------------------------------------------------

struct Checkpoint {
    SpectralInterface state;
    double time = 0.0;
};

inline void checkpoint_write(const std::string& path, const SpectralInterface& f,
                             double time) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoFailure("cannot open for writing: " + path);
    std::vector<double> re, im;
    re.reserve(f.size());
    im.reserve(f.size());
    auto push = [&](int k1, int k2) {
        const auto& c = f.at(k1, k2);
        re.push_back(c.real());
        im.push_back(c.imag());
    };
    if (f.dims == 1) {
        for (int k = -f.modes / 2 + 1; k <= f.modes / 2; ++k) push(k, 0);
    } else {
        for (int k1 = -f.modes / 2 + 1; k1 <= f.modes / 2; ++k1)
            for (int k2 = -f.modes / 2 + 1; k2 <= f.modes / 2; ++k2) push(k1, k2);
    }
    auto arr = [&](const std::vector<double>& v) {
        std::string s = "[";
        for (size_t i = 0; i < v.size(); ++i) {
            if (i) s += ",";
            s += iodetail::g17(v[i]);
        }
        s += "]";
        return s;
    };
    out << "{\"format\":1,\"dims\":" << f.dims << ",\"period\":" << iodetail::g17(f.period)
        << ",\"modes\":" << f.modes << ",\"time\":" << iodetail::g17(time)
        << ",\"re\":" << arr(re) << ",\"im\":" << arr(im) << "}\n";
    if (!out) throw IoFailure("write failed: " + path);
}

inline Checkpoint checkpoint_read(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoFailure("cannot open for reading: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw CorruptSnapshot("unparseable snapshot " + path + ": " + e.what());
    }
    try {
        if (!j.contains("format")) throw CorruptSnapshot("snapshot missing format field");
        if (j["format"].get<int>() != 1)
            throw FormatVersionMismatch("snapshot format " + j["format"].dump() +
                                        " unsupported (expected 1)");
        Checkpoint cp;
        const int dims = j.at("dims").get<int>();
        const int modes = j.at("modes").get<int>();
        const double period = j.at("period").get<double>();
        cp.time = j.at("time").get<double>();
        cp.state = SpectralInterface(dims, modes, period);
        const auto& re = j.at("re");
        const auto& im = j.at("im");
        if (re.size() != cp.state.size() || im.size() != cp.state.size())
            throw CorruptSnapshot("snapshot coefficient count mismatch");
        size_t idx = 0;
        auto pull = [&](int k1, int k2) {
            cp.state.at(k1, k2) = {re[idx].get<double>(), im[idx].get<double>()};
            ++idx;
        };
        if (dims == 1) {
            for (int k = -modes / 2 + 1; k <= modes / 2; ++k) pull(k, 0);
        } else {
            for (int k1 = -modes / 2 + 1; k1 <= modes / 2; ++k1)
                for (int k2 = -modes / 2 + 1; k2 <= modes / 2; ++k2) pull(k1, k2);
        }
        return cp;
    } catch (const FormatVersionMismatch&) {
        throw;
    } catch (const CorruptSnapshot&) {
        throw;
    } catch (const std::exception& e) {
        throw CorruptSnapshot("malformed snapshot " + path + ": " + e.what());
    }
}

// ---------------------------------------------------------------------------
// Trajectory CSV
// ---------------------------------------------------------------------------

inline const char* trajectory_csv_header() {
    return "t,f11,f21,f11_nu,f21_nu,l2,h_half,energy_E,strip_nu_hat,omega1_f01,omega3_f01,"
           "flags";
}

inline void emit_csv(const TrajectoryRecord& rec, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoFailure("cannot open for writing: " + path);
    out << trajectory_csv_header() << "\n";
    for (const auto& r : rec.rows) {
        out << iodetail::g17(r.t) << ',' << iodetail::g17(r.f11) << ','
            << iodetail::g17(r.f21) << ',' << iodetail::g17(r.f11_nu) << ','
            << iodetail::g17(r.f21_nu) << ',' << iodetail::g17(r.l2) << ','
            << iodetail::g17(r.h_half) << ',' << iodetail::g17(r.energy_E) << ','
            << iodetail::g17(r.strip_nu_hat) << ',' << iodetail::g17(r.omega1_f01) << ','
            << iodetail::g17(r.omega3_f01) << ',' << r.flags << "\n";
    }
    if (!out) throw IoFailure("write failed: " + path);
}

inline TrajectoryRecord read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoFailure("cannot open for reading: " + path);
    std::string line;
    if (!std::getline(in, line) || line != trajectory_csv_header())
        throw IoFailure("unexpected trajectory CSV header in " + path);
    TrajectoryRecord rec;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (cells.size() != 12) throw IoFailure("malformed trajectory CSV row: " + line);
        TrajectoryRow r;
        auto num = [&](int i) { return iodetail::want_double("csv", cells[static_cast<size_t>(i)]); };
        r.t = num(0);
        r.f11 = num(1);
        r.f21 = num(2);
        r.f11_nu = num(3);
        r.f21_nu = num(4);
        r.l2 = num(5);
        r.h_half = num(6);
        r.energy_E = num(7);
        r.strip_nu_hat = num(8);
        r.omega1_f01 = num(9);
        r.omega3_f01 = num(10);
        r.flags = cells[11];
        rec.rows.push_back(std::move(r));
    }
    return rec;
}

// ---------------------------------------------------------------------------
// Verdict JSON: array of {name, pass, measured, bound, tolerance}
// ---------------------------------------------------------------------------

inline std::string verdicts_to_json(const std::vector<Verdict>& vs) {
    auto esc = [](const std::string& s) {
        std::string o;
        for (char ch : s) {
            if (ch == '"' || ch == '\\') o += '\\';
            o += ch;
        }
        return o;
    };
    std::string s = "[\n";
    for (size_t i = 0; i < vs.size(); ++i) {
        const auto& v = vs[i];
        s += "  {\"name\":\"" + esc(v.name) + "\",\"pass\":" + (v.pass ? "true" : "false") +
             ",\"measured\":" + iodetail::g17(v.measured) +
             ",\"bound\":" + iodetail::g17(v.bound) +
             ",\"tolerance\":" + iodetail::g17(v.tolerance);
        if (!v.note.empty()) s += ",\"note\":\"" + esc(v.note) + "\"";
        s += "}";
        if (i + 1 < vs.size()) s += ",";
        s += "\n";
    }
    s += "]\n";
    return s;
}

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoFailure("cannot open for writing: " + path);
    out << text;
    if (!out) throw IoFailure("write failed: " + path);
}

// ---------------------------------------------------------------------------
// Experiment drivers
// ---------------------------------------------------------------------------

struct DriverResult {
    int exit_code = 0;  // 0 pass, 2 verdict fail
    std::vector<Verdict> verdicts;
};

namespace iodetail {

struct Setup {
    FluidParams params;
    StepperConfig stepper;
    QuadratureScheme quad;
    RecordOptions opts;
    SpectralInterface f0;
    double x0 = 0.0;
    double thr = 0.0;
    bool in_hypothesis = true;
};

inline Setup make_setup(const RunConfig& c) {
    Setup s;
    s.params.a_mu = c.a_mu;
    s.params.a_rho = c.a_rho;
    s.stepper.dt_max = c.dt_max;
    s.stepper.cfl_c = c.cfl_c;
    s.stepper.t_end = c.t_end;
    s.stepper.mollifier_eps = c.mollifier_eps;
    s.stepper.blowup_threshold = c.blowup_threshold;
    s.stepper.mollified_full_arho = c.mollified_full_arho;
    s.quad.window_periods = c.window_periods;

    const int dims = c.model == Model::two_d ? 1 : 2;
    if (c.init_profile == "cosine") {
        s.f0 = profiles::cosine(dims, c.n, c.period, 1.0, c.init_wavenumber);
    } else if (c.init_profile == "two_cosine") {
        s.f0 = profiles::two_cosine(dims, c.n, c.period);
    } else if (c.init_profile == "band_bump") {
        if (dims != 1) throw BadValue("band_bump is a 2d profile", "init_profile");
        s.f0 = profiles::band_with_bump(c.n, c.period);
    } else {
        if (dims != 1) throw BadValue("powerlaw is a 2d profile", "init_profile");
        s.f0 = profiles::powerlaw(c.n, c.period);
    }
    s.thr = threshold(std::abs(c.a_mu), c.model);
    if (c.init_amplitude > 0.0) {
        s.f0 = profiles::scaled_to_sup(s.f0, c.init_amplitude);
    } else if (c.init_norm_frac > 0.0) {
        s.f0 = profiles::scaled_to_f11(s.f0, c.init_norm_frac * s.thr);
    }
    s.x0 = wiener_norm(s.f0, NormSpec{1.0});
    s.in_hypothesis = c.a_rho > 0.0 && s.x0 <= s.thr;
    s.opts.nu = choose_nu(c.model, s.x0, c.a_mu, c.a_rho, c.nu_fraction);
    try {
        const double sg = sigma(c.model, s.x0, std::abs(c.a_mu), std::abs(c.a_rho), s.opts.nu);
        s.opts.sigma = sg > 0.0 ? sg : 0.0;
    } catch (const InvalidDomain&) {
        s.opts.sigma = 0.0;
    }
    s.opts.snapshot_stride = c.snapshot_stride;
    s.opts.keep_spectra = c.snapshot_spectra;
    s.opts.hs_list = {1.0};
    s.opts.strip_fn = [](const SpectralInterface& f, double) {
        return strip_estimate_or_nan(f);
    };
    return s;
}

inline void prepare_out_dir(const RunConfig& c) {
    std::filesystem::create_directories(c.out_dir);
    write_text(c.out_dir + "/config.txt", serialize_config(c));
}

inline int aggregate(const std::vector<Verdict>& vs) {
    for (const auto& v : vs)
        if (!v.pass && v.note != "outside-hypothesis") return 2;
    return 0;
}

inline void annotate_outside(std::vector<Verdict>& vs, bool in_hypothesis) {
    if (in_hypothesis) return;
    for (auto& v : vs)
        if (!v.pass) v.note = "outside-hypothesis";
}

}  // namespace iodetail

inline DriverResult driver_simulate(const RunConfig& c) {
    iodetail::prepare_out_dir(c);
    iodetail::Setup s = iodetail::make_setup(c);
    const TrajectoryRecord rec = run(s.f0, s.params, s.stepper, s.quad, s.opts);
    emit_csv(rec, c.out_dir + "/trajectory.csv");
    if (!rec.snapshots.empty()) {
        for (size_t i = 0; i < rec.snapshots.size(); ++i) {
            char name[64];
            std::snprintf(name, sizeof(name), "/snapshot_%05zu.json", i);
            checkpoint_write(c.out_dir + name, rec.snapshots[i], rec.snapshot_times[i]);
        }
    }
    // final state checkpoint for resume and determinism checks
    checkpoint_write(c.out_dir + "/final.json", rec.final_state, rec.final_time);
    DriverResult res;
    res.verdicts.push_back(energy_monitor(rec, s.opts.sigma, s.opts.nu).verdict);
    res.verdicts.push_back(l2_monitor(rec));
    res.verdicts.push_back(hs_nu_monitor(rec, 0.5));
    res.verdicts.push_back(hs_nu_monitor(rec, 1.0));
    {
        // proven-inequality spot checks on the initial and final states
        double worst = 0.0;
        bool pass = true;
        const SpectralInterface* const endpoints[2] = {&s.f0, &rec.final_state};
        for (const SpectralInterface* st : endpoints) {
            try {
                for (const auto& b : proven_bounds(*st, s.params, s.quad)) {
                    worst = std::max(worst, b.ratio);
                    pass = pass && b.pass;
                }
            } catch (const InvalidDomain&) {
                pass = false;
                worst = std::numeric_limits<double>::infinity();
            }
        }
        res.verdicts.push_back({"proven_bounds", pass, worst, 1.0, 0.0, ""});
    }
    iodetail::annotate_outside(res.verdicts, s.in_hypothesis);
    write_text(c.out_dir + "/verdicts.json", verdicts_to_json(res.verdicts));
    res.exit_code = iodetail::aggregate(res.verdicts);
    return res;
}

inline DriverResult driver_reverse(const RunConfig& c) {
    iodetail::prepare_out_dir(c);
    iodetail::Setup s = iodetail::make_setup(c);
    const ReversalReport rep =
        time_reversal_illposedness(s.f0, s.params, s.stepper, s.quad, c.t_end);
    emit_csv(rep.forward, c.out_dir + "/trajectory_forward.csv");
    emit_csv(rep.reversed, c.out_dir + "/trajectory_reversed.csv");
    DriverResult res;
    if (rep.blew_up) {
        res.verdicts.push_back(
            {"reversal_completed", false, 0.0, 1.0, 0.0, "blow-up during reversal"});
    } else {
        res.verdicts.push_back({"reversal_recovery_f01", rep.recovery_f01 <= 1e-5,
                                rep.recovery_f01, 1e-5, 0.0, ""});
        res.verdicts.push_back({"reversal_mode_rates_rel_err",
                                rep.max_rate_rel_err <= 0.05 && rep.modes_checked > 0,
                                rep.max_rate_rel_err, 0.05, 0.0, ""});
        res.verdicts.push_back(
            {"reversal_h2_growth", rep.growth_h2 >= 10.0, rep.growth_h2, 10.0, 0.0, ""});
    }
    write_text(c.out_dir + "/verdicts.json", verdicts_to_json(res.verdicts));
    res.exit_code = iodetail::aggregate(res.verdicts);
    return res;
}

inline DriverResult driver_decay(const RunConfig& c) {
    iodetail::prepare_out_dir(c);
    iodetail::Setup s = iodetail::make_setup(c);
    const TrajectoryRecord rec = run(s.f0, s.params, s.stepper, s.quad, s.opts);
    emit_csv(rec, c.out_dir + "/trajectory.csv");
    std::vector<double> ts, f11s, h1s;
    for (const auto& r : rec.rows) {
        if (r.flags != "ok") continue;
        ts.push_back(r.t);
        f11s.push_back(r.f11);
        auto it = r.extras.find("hs_nu_1");
        h1s.push_back(it != r.extras.end() ? it->second
                                           : std::numeric_limits<double>::quiet_NaN());
    }
    const double t2 = c.fit_t2 > 0.0 ? c.fit_t2 : c.t_end;
    const DecayFit ff = fit_decay(ts, f11s, c.fit_t1, t2);
    const DecayFit fh = fit_decay(ts, h1s, c.fit_t1, t2);
    DriverResult res;
    res.verdicts.push_back({"decay_f11_exponent", std::abs(ff.exponent - (-1.5)) <= 0.3,
                            ff.exponent, -1.5, 0.3, ""});
    res.verdicts.push_back({"decay_h1_exponent", std::abs(fh.exponent - (-1.0)) <= 0.3,
                            fh.exponent, -1.0, 0.3, ""});
    write_text(c.out_dir + "/verdicts.json", verdicts_to_json(res.verdicts));
    res.exit_code = iodetail::aggregate(res.verdicts);
    return res;
}

inline DriverResult driver_contraction(const RunConfig& c) {
    iodetail::prepare_out_dir(c);
    iodetail::Setup s = iodetail::make_setup(c);
    const int dims = c.model == Model::two_d ? 1 : 2;
    const SpectralInterface g0 =
        s.f0 + profiles::cosine(dims, c.n, c.period, 1e-4, 3);
    const ContractionResult cr = contraction_monitor(s.f0, g0, s.params, s.stepper, s.quad);
    {
        std::ostringstream out;
        out << "t,dist\n";
        for (size_t i = 0; i < cr.t.size(); ++i)
            out << iodetail::g17(cr.t[i]) << ',' << iodetail::g17(cr.dist[i]) << "\n";
        write_text(c.out_dir + "/contraction.csv", out.str());
    }
    DriverResult res;
    res.verdicts.push_back(cr.verdict);
    iodetail::annotate_outside(res.verdicts, s.in_hypothesis);
    write_text(c.out_dir + "/verdicts.json", verdicts_to_json(res.verdicts));
    res.exit_code = iodetail::aggregate(res.verdicts);
    return res;
}

inline DriverResult driver_mollifier(const RunConfig& c) {
    iodetail::prepare_out_dir(c);
    iodetail::Setup s = iodetail::make_setup(c);
    const double e0 = c.mollifier_eps > 0.0 ? c.mollifier_eps : 1e-2;
    const std::vector<double> eps_list = {e0, e0 / 2.0, e0 / 4.0, e0 / 8.0};
    StepperConfig st = s.stepper;
    st.mollifier_eps = 0.0;  // per-run eps set by the experiment
    const MollifierReport rep =
        mollifier_cauchy_rate(s.f0, s.params, st, s.quad, eps_list);
    {
        std::ostringstream out;
        out << "eps,dist\n";
        for (size_t i = 0; i < rep.eps.size(); ++i)
            out << iodetail::g17(rep.eps[i]) << ',' << iodetail::g17(rep.dist[i]) << "\n";
        write_text(c.out_dir + "/mollifier.csv", out.str());
    }
    DriverResult res;
    res.verdicts.push_back(
        {"mollifier_cauchy_slope", rep.slope >= 0.3, rep.slope, 0.3, 0.0, ""});
    write_text(c.out_dir + "/verdicts.json", verdicts_to_json(res.verdicts));
    res.exit_code = iodetail::aggregate(res.verdicts);
    return res;
}

inline DriverResult driver_staircase(const RunConfig& c) {
    iodetail::prepare_out_dir(c);
    const StaircaseSpec spec(c.staircase_sigma, c.staircase_delta, c.staircase_gamma,
                             c.staircase_s, static_cast<long long>(c.staircase_shells));
    const StaircaseReport rep = staircase(spec);
    {
        std::ostringstream out;
        out << "n,f11_partial,hs_partial,l2_partial\n";
        out << "1000," << iodetail::g17(rep.f11_at_1e3) << ',' << iodetail::g17(rep.hs_at_1e3)
            << ',' << iodetail::g17(rep.l2_at_1e3) << "\n";
        out << spec.n_shells << ',' << iodetail::g17(rep.f11_at_end) << ','
            << iodetail::g17(rep.hs_at_end) << ',' << iodetail::g17(rep.l2_at_end) << "\n";
        write_text(c.out_dir + "/staircase.csv", out.str());
    }
    DriverResult res;
    res.verdicts.push_back({"staircase_f11_tail_fraction", rep.f11_tail_small,
                            rep.f11_tail_fraction, 1e-6, 0.0, ""});
    res.verdicts.push_back({"staircase_hs_divergence", rep.hs_divergent, rep.hs_growth,
                            rep.hs_growth_floor, 0.0, ""});
    write_text(c.out_dir + "/verdicts.json", verdicts_to_json(res.verdicts));
    res.exit_code = iodetail::aggregate(res.verdicts);
    return res;
}

// Fans out one simulate run per value of sweep_key, each as a separate
// process in its own subdirectory.
inline DriverResult driver_sweep(const RunConfig& c, const std::string& self_exe) {
    iodetail::prepare_out_dir(c);
    std::vector<std::string> values;
    {
        std::istringstream in(c.sweep_values);
        std::string v;
        while (std::getline(in, v, ',')) {
            v = iodetail::trim(v);
            if (!v.empty()) values.push_back(v);
        }
    }
    if (values.empty()) throw BadValue("sweep_values is empty", "sweep_values");
    DriverResult res;
    for (size_t i = 0; i < values.size(); ++i) {
        RunConfig sub = c;
        sub.experiment = "simulate";
        sub.out_dir = c.out_dir + "/sweep_" + std::to_string(i);
        std::string text = serialize_config(sub);
        // override the swept key by reparsing amended text
        std::string amended;
        std::istringstream in(text);
        std::string line;
        while (std::getline(in, line)) {
            if (line.rfind(c.sweep_key + "=", 0) == 0)
                line = c.sweep_key + "=" + values[i];
            amended += line + "\n";
        }
        const RunConfig subc = parse_config(amended);  // validates the override
        std::filesystem::create_directories(subc.out_dir);
        const std::string cfg_path = subc.out_dir + "/config_in.txt";
        write_text(cfg_path, amended);
        const std::string cmd = "\"" + self_exe + "\" simulate --config \"" + cfg_path + "\"";
        const int rc = std::system(cmd.c_str());
        const int code = rc == -1 ? 3 : ((rc >> 8) & 0xff);
        res.verdicts.push_back({"sweep_" + c.sweep_key + "=" + values[i], code == 0,
                                static_cast<double>(code), 0.0, 0.0, ""});
        res.exit_code = std::max(res.exit_code, code == 0 ? 0 : 2);
    }
    write_text(c.out_dir + "/verdicts.json", verdicts_to_json(res.verdicts));
    return res;
}

} // namespace muskat
