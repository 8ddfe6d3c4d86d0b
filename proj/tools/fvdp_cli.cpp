// Experiment front end: run presets or config files, grid-refinement
// studies, equilibrium construction, and flux-scheme comparisons, emitting
// CSV artifacts.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fvdp/fvdp.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;

struct CommonFlags {
    std::string preset_name;
    std::string config_path;
    std::string flux;
    std::string out_dir = ".";
    double dt = 0.0;
    double t_final = -1.0;
    bool full = false;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool with_config = true) {
    cmd->add_option("--preset", f.preset_name, "experiment preset (example1..example8)");
    if (with_config) cmd->add_option("--config", f.config_path, "config file (key = value)");
    cmd->add_option("--flux", f.flux, "flux scheme: fu1, fu2, cu, sgext");
    cmd->add_option("--out", f.out_dir, "output directory");
    cmd->add_option("--dt", f.dt, "time step override");
    cmd->add_option("--tfinal", f.t_final, "final time override");
    cmd->add_flag("--full", f.full, "full-scale variant of scaled presets");
}

fvdp::RunConfig resolve_config(const CommonFlags& f) {
    fvdp::RunConfig c;
    if (!f.config_path.empty())
        c = fvdp::load_config(f.config_path);
    else if (!f.preset_name.empty())
        c = fvdp::preset(f.preset_name);
    else
        throw std::invalid_argument("either --preset or --config is required");
    if (!f.flux.empty()) c.flux = f.flux;
    if (f.dt > 0.0) c.dt = f.dt;
    if (f.t_final >= 0.0) c.t_final = f.t_final;
    c.out_dir = f.out_dir;
    if (f.full) fvdp::apply_full_scale(c);

    const auto errs = fvdp::validate_config(c);
    if (!errs.empty()) {
        std::string msg;
        for (const auto& e : errs) msg += (msg.empty() ? "" : "; ") + e;
        throw std::invalid_argument(msg);
    }
    std::filesystem::create_directories(c.out_dir);
    return c;
}

fvdp::FluxScheme parse_flux(const std::string& name) {
    if (name == "fu1") return fvdp::FluxScheme::fu1();
    if (name == "fu2") return fvdp::FluxScheme::fu2();
    if (name == "cu") return fvdp::FluxScheme::cu();
    if (name == "sgext") return fvdp::FluxScheme::sgext();
    throw std::invalid_argument("flux: unknown scheme '" + name + "'");
}

std::string time_tag(double t) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", t);
    return buf;
}

void run_scalar_once(const fvdp::RunConfig& c, const std::string& suffix) {
    const auto model = fvdp::make_model(c);
    const auto mesh = fvdp::make_mesh(c);
    const auto bc = fvdp::make_bc(c);
    fvdp::State init = fvdp::project_initial(fvdp::preset_initial(c), mesh);
    const double mass = fvdp::total_mass(init.values, mesh);
    const auto eq = fvdp::make_equilibrium(c, model, mesh, mass);

    fvdp::SolverConfig sc;
    sc.flux = parse_flux(c.flux);
    sc.dt = c.dt;
    sc.dt_mode = c.dt_mode == "fixed" ? fvdp::DtMode::fixed : fvdp::DtMode::cfl_auto;
    sc.t_final = c.t_final;
    sc.record_every = c.record_every;
    sc.snapshot_times = c.snapshot_times;

    const auto res = fvdp::run(sc, model, mesh, bc, std::move(init),
                               eq ? &eq->values : nullptr);

    const std::string base = c.out_dir + "/";
    fvdp::write_diagnostics_csv(base + "diagnostics" + suffix + ".csv", res.records);
    fvdp::write_snapshot_csv(base + "snapshot_final" + suffix + ".csv",
                             res.final_state.values, mesh);
    for (const auto& [t, values] : res.snapshots)
        fvdp::write_snapshot_csv(base + "snapshot_t" + time_tag(t) + suffix + ".csv", values,
                                 mesh);
    if (eq)
        fvdp::write_snapshot_csv(base + "equilibrium" + suffix + ".csv", eq->values, mesh);
}

void run_dd(const fvdp::RunConfig& c, const fvdp::FluxScheme& scheme, const std::string& suffix) {
    const auto mesh = fvdp::make_mesh(c);
    const auto bmap = fvdp::build_dd_boundary(fvdp::preset_dd_boundary(c), mesh, c.gamma);
    const auto doping = fvdp::preset_doping(c, mesh);

    fvdp::DDState init;
    fvdp::preset_dd_initial(c, mesh, init.N, init.P);

    std::optional<fvdp::ThermalEquilibrium> eq;
    if (c.equilibrium == "thermal")
        eq = fvdp::thermal_equilibrium(doping, bmap, mesh, c.gamma);

    const auto res = fvdp::dd_run(std::move(init), c.gamma, bmap, mesh, doping, scheme, c.dt,
                                  c.t_final, c.record_every, eq ? &*eq : nullptr);

    std::vector<fvdp::DiagnosticsRecord> records;
    for (const auto& r : res.records)
        records.push_back({r.time, r.mass_N + r.mass_P, r.energy, r.dissipation,
                           r.l1_to_equilibrium});
    const std::string base = c.out_dir + "/";
    fvdp::write_diagnostics_csv(base + "diagnostics" + suffix + ".csv", records);
    fvdp::write_dd_snapshot_csv(base + "snapshot_final" + suffix + ".csv", res.final_state, mesh);
    if (eq) {
        fvdp::DDState eqs{eq->N, eq->P, eq->V, 0.0};
        fvdp::write_dd_snapshot_csv(base + "equilibrium" + suffix + ".csv", eqs, mesh);
    }
}

int cmd_run(const CommonFlags& f) {
    const auto c = resolve_config(f);
    if (c.kind == "dd") {
        run_dd(c, parse_flux(c.flux), "");
        return kExitOk;
    }
    if (c.epsilon_list.size() > 1) {  // example8 sweep
        for (double eps : c.epsilon_list) {
            fvdp::RunConfig ci = c;
            ci.epsilon = eps;
            run_scalar_once(ci, "_eps" + time_tag(eps));
        }
        return kExitOk;
    }
    run_scalar_once(c, "");
    return kExitOk;
}

int cmd_converge(const CommonFlags& f, const std::string& levels_arg) {
    auto c = resolve_config(f);
    if (c.kind != "scalar")
        throw std::invalid_argument("converge: only scalar presets are supported");
    std::vector<int> levels;
    {
        std::stringstream ss(levels_arg);
        std::string tok;
        while (std::getline(ss, tok, ',')) levels.push_back(std::stoi(tok));
    }
    if (levels.size() < 2) throw std::invalid_argument("--levels: need at least two counts");

    fvdp::StudySetup setup;
    setup.model = fvdp::make_model(c);
    setup.bc = fvdp::make_bc(c);
    setup.initial = fvdp::preset_initial(c);
    setup.a = c.a[0];
    setup.b = c.b[0];
    setup.t_final = c.t_final;

    const auto table = fvdp::convergence_study(setup, parse_flux(c.flux), levels);
    fvdp::write_convergence_csv(c.out_dir + "/convergence.csv", table);
    return kExitOk;
}

int cmd_equilibrium(const CommonFlags& f) {
    const auto c = resolve_config(f);
    const auto mesh = fvdp::make_mesh(c);
    if (c.kind == "dd") {
        const auto bmap = fvdp::build_dd_boundary(fvdp::preset_dd_boundary(c), mesh, c.gamma);
        const auto doping = fvdp::preset_doping(c, mesh);
        const auto eq = fvdp::thermal_equilibrium(doping, bmap, mesh, c.gamma);
        fvdp::DDState eqs{eq.N, eq.P, eq.V, 0.0};
        fvdp::write_dd_snapshot_csv(c.out_dir + "/equilibrium.csv", eqs, mesh);
        return kExitOk;
    }
    const auto model = fvdp::make_model(c);
    const auto init = fvdp::project_initial(fvdp::preset_initial(c), mesh);
    const double mass = fvdp::total_mass(init.values, mesh);
    const auto eq = fvdp::make_equilibrium(c, model, mesh, mass);
    if (!eq)
        throw std::invalid_argument("equilibrium: preset '" + c.preset +
                                    "' configures no equilibrium");
    fvdp::write_snapshot_csv(c.out_dir + "/equilibrium.csv", eq->values, mesh);
    return kExitOk;
}

int cmd_compare(const CommonFlags& f) {
    const auto c = resolve_config(f);
    std::vector<std::string> schemes;
    if (c.kind == "dd" || fvdp::make_model(c).linear_convection)
        schemes = {"fu1", "fu2", "cu", "sgext"};
    else
        schemes = {"fu1", "fu2"};
    for (const auto& name : schemes) {
        if (c.kind == "dd") {
            run_dd(c, parse_flux(name), "_" + name);
        } else {
            fvdp::RunConfig ci = c;
            ci.flux = name;
            run_scalar_once(ci, "_" + name);
        }
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite-volume experiments for drift-diffusion-type equations"};
    app.require_subcommand(1);

    CommonFlags run_f, conv_f, eq_f, cmp_f;
    std::string levels_arg = "100,200,400";

    auto* run_cmd = app.add_subcommand("run", "advance one experiment, write diagnostics");
    add_common(run_cmd, run_f);
    auto* conv_cmd = app.add_subcommand("converge", "grid refinement study");
    add_common(conv_cmd, conv_f);
    conv_cmd->add_option("--levels", levels_arg, "comma-separated cell counts (doublings)");
    auto* eq_cmd = app.add_subcommand("equilibrium", "construct the steady state");
    add_common(eq_cmd, eq_f);
    auto* cmp_cmd = app.add_subcommand("compare", "run several flux schemes");
    add_common(cmp_cmd, cmp_f);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }

    try {
        if (run_cmd->parsed()) return cmd_run(run_f);
        if (conv_cmd->parsed()) return cmd_converge(conv_f, levels_arg);
        if (eq_cmd->parsed()) return cmd_equilibrium(eq_f);
        if (cmp_cmd->parsed()) return cmd_compare(cmp_f);
        std::cerr << "error: no subcommand\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
}
