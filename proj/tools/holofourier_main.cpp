// Batch front end: every subcommand reads one JSON job config (flags
// override individual keys), produces deterministic JSON/CSV reports, and
// embeds the tool version and the config hash in every output file.

#include "holofourier/jsonio.hpp"
#include "holofourier/version.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

namespace {

using hf::json;

struct Overrides {
    std::string config_path;
    std::optional<int> cutoff;
    std::optional<int> resolution;
    std::optional<double> radial_cut;
    std::optional<int> radial_nodes;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> f;
    std::optional<std::string> out;
    std::optional<std::string> fourier_in;
    std::optional<double> tol;
    std::optional<int> horizon;
};

void add_common_flags(CLI::App* cmd, Overrides& ov) {
    cmd->add_option("--config", ov.config_path, "job config JSON file");
    cmd->add_option("--cutoff", ov.cutoff, "weight cutoff");
    cmd->add_option("--resolution", ov.resolution, "angular/Euler resolution");
    cmd->add_option("--radial-cut", ov.radial_cut, "radial truncation");
    cmd->add_option("--radial-nodes", ov.radial_nodes, "radial quadrature nodes");
    cmd->add_option("--seed", ov.seed, "sampling seed");
    cmd->add_option("--f", ov.f, "function expression");
    cmd->add_option("--out", ov.out, "output file");
    cmd->add_option("--fourier-in", ov.fourier_in, "FourierData JSON input");
    cmd->add_option("--tol", ov.tol, "tolerance");
    cmd->add_option("--horizon", ov.horizon, "staircase horizon");
}

json load_config(const Overrides& ov) {
    json cfg = json::object();
    if (!ov.config_path.empty()) {
        std::ifstream in(ov.config_path);
        if (!in) throw hf::input_error("cannot open config file: " + ov.config_path);
        try {
            in >> cfg;
        } catch (const std::exception& e) {
            throw hf::input_error(std::string("config parse error: ") + e.what());
        }
    }
    if (ov.cutoff) cfg["cutoff"] = *ov.cutoff;
    if (ov.resolution) cfg["resolution"] = *ov.resolution;
    if (ov.radial_cut) cfg["radial_cut"] = *ov.radial_cut;
    if (ov.radial_nodes) cfg["radial_nodes"] = *ov.radial_nodes;
    if (ov.seed) cfg["seed"] = *ov.seed;
    if (ov.f) cfg["f"] = *ov.f;
    if (ov.out) cfg["out"] = *ov.out;
    if (ov.fourier_in) cfg["fourier_in"] = *ov.fourier_in;
    if (ov.tol) cfg["tol"] = *ov.tol;
    if (ov.horizon) cfg["horizon"] = *ov.horizon;
    return cfg;
}

struct Job {
    json cfg;
    std::string hash;
    hf::GroupSpec spec;
    hf::MeasureSpec measure;
    int cutoff = 0;
    int resolution = 0;
    double radial_cut = 0;
    int radial_nodes = 0;
    std::uint64_t seed = 1;
    std::string out;
};

Job make_job(const json& cfg, const char* default_out, bool needs_measure = true) {
    Job job;
    job.cfg = cfg;
    job.hash = hf::config_hash(cfg);
    if (!cfg.contains("group")) throw hf::input_error("config: missing 'group'");
    job.spec = hf::spec_from_json(cfg.at("group"));
    if (needs_measure) {
        if (cfg.contains("measure")) {
            job.measure = hf::measure_from_json(cfg.at("measure"));
        } else if (cfg.contains("measure_file")) {
            std::ifstream in(cfg.at("measure_file").get<std::string>());
            if (!in) throw hf::input_error("cannot open measure file");
            json mj;
            in >> mj;
            job.measure = hf::measure_from_json(mj.contains("measure") ? mj.at("measure") : mj);
        } else {
            throw hf::input_error("config: missing 'measure'");
        }
    }
    job.cutoff = cfg.value("cutoff", 4);
    if (job.cutoff < 0) throw hf::input_error("config: cutoff must be >= 0");
    job.resolution = cfg.value("resolution", std::max(8, 2 * job.cutoff + 2));
    if (job.resolution < 2) throw hf::input_error("config: resolution must be >= 2");
    job.radial_cut = cfg.value(
        "radial_cut",
        needs_measure ? hf::default_radial_cut(job.spec, job.measure, job.cutoff) : 4.0);
    job.radial_nodes = cfg.value("radial_nodes", 0);
    job.seed = cfg.value("seed", 1u);
    job.out = cfg.value("out", std::string(default_out));
    return job;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw hf::input_error("cannot write output file: " + path);
    out << text;
}

void write_json(const std::string& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

std::string csv_header(const Job& job) {
    return "# tool_version=" + std::string(hf::kVersion) + " config_hash=" + job.hash + "\n";
}

hf::HoloFn job_function(const Job& job, const char* key = "f") {
    if (!job.cfg.contains(key)) throw hf::input_error(std::string("config: missing '") + key + "'");
    return hf::holo_from_ast(hf::parse(job.cfg.at(key).get<std::string>(), job.spec));
}

hf::QuadratureGrid job_grid(const Job& job) {
    return hf::g_grid(job.spec, job.measure, job.radial_cut, job.resolution, job.radial_nodes);
}

std::vector<hf::GroupElement> eval_points(const Job& job) {
    std::vector<hf::GroupElement> pts;
    int n = job.cfg.value("eval_points", 5);
    double radius = job.cfg.value("eval_radius", 0.5);
    if (job.cfg.contains("points")) {
        for (const auto& p : job.cfg.at("points"))
            pts.push_back(hf::element_from_json(job.spec, p));
        return pts;
    }
    for (int i = 0; i < n; ++i)
        pts.push_back(hf::sample_element(job.spec, job.seed + static_cast<std::uint64_t>(i), radius));
    return pts;
}

// ---- subcommands -----------------------------------------------------------

void cmd_transform(const json& cfg) {
    Job job = make_job(cfg, "fourier.json");
    hf::HoloFn f = job_function(job);
    hf::QuadratureGrid grid = job_grid(job);
    hf::FourierData F = hf::fourier(f, job.measure, job.cutoff, grid);
    write_json(job.out, hf::fourier_to_json(F, job.hash));
    std::string decay_path = job.cfg.value("decay_csv", job.out + ".decay.csv");
    std::ostringstream os;
    os << csv_header(job);
    hf::decay_csv(os, F);
    write_text(decay_path, os.str());
    std::cout << "wrote " << job.out << " and " << decay_path << "\n";
}

void cmd_invert(const json& cfg) {
    Job job = make_job(cfg, "invert.json", false);
    std::string in_path = job.cfg.value("fourier_in", std::string());
    if (in_path.empty()) throw hf::input_error("invert: missing 'fourier_in'");
    std::ifstream in(in_path);
    if (!in) throw hf::input_error("cannot open FourierData file: " + in_path);
    json fj;
    in >> fj;
    hf::FourierData F = hf::fourier_from_json(fj);
    job.spec = F.spec;
    json rows = json::array();
    for (const auto& g : eval_points(job)) {
        hf::cplx v = hf::invert(F, g);
        rows.push_back(json{{"point", hf::to_json(g)}, {"value", {v.real(), v.imag()}}});
    }
    write_json(job.out, json{{"tool_version", hf::kVersion},
                             {"config_hash", job.hash},
                             {"series_tail_estimate", F.series_tail_estimate},
                             {"values", rows}});
    std::cout << "wrote " << job.out << "\n";
}

void cmd_plancherel(const json& cfg) {
    Job job = make_job(cfg, "plancherel.json");
    hf::HoloFn f = job_function(job);
    hf::QuadratureGrid grid = job_grid(job);
    hf::FourierData F = hf::fourier(f, job.measure, job.cutoff, grid);
    hf::cplx sum = hf::plancherel_eval(F);
    hf::cplx direct = f(hf::identity(job.spec));
    write_json(job.out,
               json{{"tool_version", hf::kVersion},
                    {"config_hash", job.hash},
                    {"plancherel_sum", {sum.real(), sum.imag()}},
                    {"f_at_identity", {direct.real(), direct.imag()}},
                    {"abs_error", std::abs(sum - direct)}});
    std::cout << "wrote " << job.out << "\n";
}

void cmd_ortho_check(const json& cfg) {
    Job job = make_job(cfg, "ortho.json");
    hf::QuadratureGrid grid = job_grid(job);
    hf::GramReport rep = hf::ortho_check(job.measure, job.cutoff, grid);
    json out{{"tool_version", hf::kVersion},
             {"config_hash", job.hash},
             {"n_functions", rep.functions.size()},
             {"max_offdiag_rel", rep.max_offdiag_rel},
             {"max_diag_rel_err", rep.max_diag_rel_err}};
    write_json(job.out, out);
    if (job.cfg.contains("gram_csv")) {
        std::ostringstream os;
        os << csv_header(job) << "i,j,re,im\n";
        os.precision(17);
        for (Eigen::Index i = 0; i < rep.gram.rows(); ++i)
            for (Eigen::Index j = 0; j < rep.gram.cols(); ++j)
                os << i << "," << j << "," << rep.gram(i, j).real() << ","
                   << rep.gram(i, j).imag() << "\n";
        write_text(job.cfg.at("gram_csv").get<std::string>(), os.str());
    }
    std::cout << "wrote " << job.out << "\n";
}

void cmd_class_expand(const json& cfg) {
    Job job = make_job(cfg, "class.json");
    hf::HoloFn f = job_function(job);
    hf::QuadratureGrid grid = job_grid(job);
    double tol = job.cfg.value("tol", 1e-6);
    hf::ClassExpansion ce = hf::class_expand(f, job.measure, job.cutoff, grid, tol);
    write_json(job.out, hf::class_expansion_to_json(ce, job.hash));
    std::cout << "wrote " << job.out << "\n";
}

void cmd_evolve(const json& cfg) {
    Job job = make_job(cfg, "evolve.json");
    hf::HoloFn f0 = job_function(job);
    if (!job.cfg.contains("operator")) throw hf::input_error("evolve: missing 'operator'");
    hf::InvariantOperator D = hf::operator_from_json(job.cfg.at("operator"));
    std::vector<double> times = job.cfg.value("times", std::vector<double>{1.0});
    hf::QuadratureGrid grid = job_grid(job);
    hf::EvolutionState st = hf::evolve(f0, D, times, job.measure, job.cutoff, grid);
    std::vector<hf::GroupElement> pts = eval_points(job);

    std::ostringstream os;
    os << csv_header(job) << "t,point,re,im,residual\n";
    os.precision(17);
    for (std::size_t ti = 0; ti < times.size(); ++ti) {
        for (std::size_t pi = 0; pi < pts.size(); ++pi) {
            hf::cplx v = st.eval(ti, pts[pi]);
            double res = hf::evolve_check(st, times[ti], pts[pi]);
            os << times[ti] << "," << pi << "," << v.real() << "," << v.imag() << "," << res
               << "\n";
        }
    }
    std::string csv_path = job.cfg.value("series_csv", job.out + ".csv");
    write_text(csv_path, os.str());
    write_json(job.out, json{{"tool_version", hf::kVersion},
                             {"config_hash", job.hash},
                             {"times", times},
                             {"points", static_cast<int>(pts.size())},
                             {"series_csv", csv_path}});
    std::cout << "wrote " << job.out << " and " << csv_path << "\n";
}

void cmd_measure_build(const json& cfg) {
    Job job = make_job(cfg, "measure.json", false);
    if (!cfg.contains("family")) throw hf::input_error("measure build: missing 'family'");
    std::vector<hf::HoloFn> family;
    for (const auto& src : cfg.at("family"))
        family.push_back(hf::holo_from_ast(hf::parse(src.get<std::string>(), job.spec)));
    int horizon = cfg.value("horizon", 6);
    hf::ShellBuildCfg bcfg;
    bcfg.shell_width = cfg.value("shell_width", 1.0);
    hf::ShellBuildInfo info;
    hf::MeasureSpec m = hf::build_tame_measure(job.spec, family, horizon, bcfg, &info);
    write_json(job.out, json{{"tool_version", hf::kVersion},
                             {"config_hash", job.hash},
                             {"measure", hf::to_json(m)},
                             {"build",
                              json{{"horizon", info.horizon},
                                   {"log_m", info.log_m},
                                   {"log_vol", info.log_vol},
                                   {"log_a", info.log_a},
                                   {"ext_decay", info.ext_decay},
                                   {"grid", info.grid_note}}}});
    std::cout << "wrote " << job.out << "\n";
}

void cmd_measure_verify(const json& cfg) {
    Job job = make_job(cfg, "admissibility.json");
    double tol = job.cfg.value("tol", 1e-6);
    hf::AdmissibilityReport rep =
        hf::verify_admissible(job.spec, job.measure, job.cutoff, tol);
    write_json(job.out, hf::admissibility_to_json(rep, job.hash));
    std::cout << "wrote " << job.out << (rep.pass ? " (pass)" : " (fail)") << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"holomorphic Fourier analysis on products of C* and SL(2,C)"};
    app.require_subcommand(1);

    Overrides ov;
    std::string pending;

    auto* t = app.add_subcommand("transform", "holomorphic Fourier transform of an expression");
    auto* iv = app.add_subcommand("invert", "evaluate the inversion series of stored data");
    auto* pl = app.add_subcommand("plancherel", "compare sum d^2 tr fhat against f(e)");
    auto* oc = app.add_subcommand("ortho-check", "Gram matrix of matrix elements");
    auto* ce = app.add_subcommand("class-expand", "character expansion of a class function");
    auto* ev = app.add_subcommand("evolve", "spectral solution of d/dt f = D f");
    auto* me = app.add_subcommand("measure", "measure construction and verification");
    auto* mb = me->add_subcommand("build", "staircase measure from a function family");
    auto* mv = me->add_subcommand("verify", "K-admissibility report");
    me->require_subcommand(1);
    for (CLI::App* cmd : {t, iv, pl, oc, ce, ev, mb, mv}) add_common_flags(cmd, ov);

    CLI11_PARSE(app, argc, argv);

    try {
        json cfg = load_config(ov);
        if (t->parsed()) cmd_transform(cfg);
        else if (iv->parsed()) cmd_invert(cfg);
        else if (pl->parsed()) cmd_plancherel(cfg);
        else if (oc->parsed()) cmd_ortho_check(cfg);
        else if (ce->parsed()) cmd_class_expand(cfg);
        else if (ev->parsed()) cmd_evolve(cfg);
        else if (me->parsed() && mb->parsed()) cmd_measure_build(cfg);
        else if (me->parsed() && mv->parsed()) cmd_measure_verify(cfg);
        return 0;
    } catch (const hf::Error& e) {
        std::cout << hf::error_json(e).dump(2) << std::endl;
        return e.kind() == hf::Error::Kind::Input ? 2 : 1;
    } catch (const std::exception& e) {
        std::cout << hf::error_json(hf::numeric_error(e.what())).dump(2) << std::endl;
        return 1;
    }
}
