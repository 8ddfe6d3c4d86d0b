#pragma once

#include <array>
#include <cstddef>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fvdp {

/// Full description of one experiment, expressible as a flat key = value
/// text file. Initial data, doping profiles and contact layouts are bound to
/// the preset name (they are functions, not serializable scalars).
struct RunConfig {
    std::string preset = "custom";  // example1..example8 or custom
    std::string kind = "scalar";    // scalar | dd

    // model
    std::string model = "linear_drift_power_diffusion";
    double m = 2.0;          // porous media exponent
    double gamma = 2.0;      // dd pressure exponent
    int k = -1;              // quantum statistics sign
    double epsilon = 0.0;    // capillary scale (single-run value)
    std::vector<double> epsilon_list;  // example 8 sweep
    double dv = 1.0;         // constant potential slope models

    // mesh
    int dim = 1;
    std::array<double, 3> a{0.0, 0.0, 0.0};
    std::array<double, 3> b{1.0, 1.0, 1.0};
    std::array<int, 3> n{100, 1, 1};

    // boundary per axis/side: periodic | neumann | zero_gradient | dirichlet
    struct SideSpec {
        std::string kind = "neumann";
        double value = 0.0;
        friend bool operator==(const SideSpec&, const SideSpec&) = default;
    };
    std::array<std::array<SideSpec, 2>, 3> bc{};

    // flux & time
    std::string flux = "fu2";
    double dt = 1e-4;
    std::string dt_mode = "fixed";  // fixed | cfl_auto
    double t_final = 1.0;
    long record_every = 1;
    std::vector<double> snapshot_times;

    std::string out_dir = ".";
    std::string equilibrium = "none";  // none | barenblatt | fermi_bose | thermal
    bool full_scale = false;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

inline std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ';')) {
        tok = trim(tok);
        if (!tok.empty()) out.push_back(std::stod(tok));
    }
    return out;
}

inline std::string join_double_list(const std::vector<double>& v) {
    std::string s;
    char buf[40];
    for (std::size_t i = 0; i < v.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", v[i]);
        if (i) s += ';';
        s += buf;
    }
    return s;
}

}  // namespace detail

/// Parse the flat key = value format ('#' starts a comment line).
/// Unknown keys are rejected with their name.
inline RunConfig parse_config(std::istream& in) {
    RunConfig c;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = detail::trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key = value");
        const std::string key = detail::trim(t.substr(0, eq));
        const std::string val = detail::trim(t.substr(eq + 1));
        try {
            if (key == "preset") c.preset = val;
            else if (key == "kind") c.kind = val;
            else if (key == "model.name") c.model = val;
            else if (key == "model.m") c.m = std::stod(val);
            else if (key == "model.gamma") c.gamma = std::stod(val);
            else if (key == "model.k") c.k = std::stoi(val);
            else if (key == "model.epsilon") c.epsilon = std::stod(val);
            else if (key == "model.epsilon_list") c.epsilon_list = detail::parse_double_list(val);
            else if (key == "model.dv") c.dv = std::stod(val);
            else if (key == "mesh.dim") c.dim = std::stoi(val);
            else if (key == "mesh.a0") c.a[0] = std::stod(val);
            else if (key == "mesh.b0") c.b[0] = std::stod(val);
            else if (key == "mesh.n0") c.n[0] = std::stoi(val);
            else if (key == "mesh.a1") c.a[1] = std::stod(val);
            else if (key == "mesh.b1") c.b[1] = std::stod(val);
            else if (key == "mesh.n1") c.n[1] = std::stoi(val);
            else if (key == "mesh.a2") c.a[2] = std::stod(val);
            else if (key == "mesh.b2") c.b[2] = std::stod(val);
            else if (key == "mesh.n2") c.n[2] = std::stoi(val);
            else if (key == "bc0.left") c.bc[0][0].kind = val;
            else if (key == "bc0.left_value") c.bc[0][0].value = std::stod(val);
            else if (key == "bc0.right") c.bc[0][1].kind = val;
            else if (key == "bc0.right_value") c.bc[0][1].value = std::stod(val);
            else if (key == "bc1.left") c.bc[1][0].kind = val;
            else if (key == "bc1.left_value") c.bc[1][0].value = std::stod(val);
            else if (key == "bc1.right") c.bc[1][1].kind = val;
            else if (key == "bc1.right_value") c.bc[1][1].value = std::stod(val);
            else if (key == "bc2.left") c.bc[2][0].kind = val;
            else if (key == "bc2.left_value") c.bc[2][0].value = std::stod(val);
            else if (key == "bc2.right") c.bc[2][1].kind = val;
            else if (key == "bc2.right_value") c.bc[2][1].value = std::stod(val);
            else if (key == "flux") c.flux = val;
            else if (key == "time.dt") c.dt = std::stod(val);
            else if (key == "time.dt_mode") c.dt_mode = val;
            else if (key == "time.t_final") c.t_final = std::stod(val);
            else if (key == "time.record_every") c.record_every = std::stol(val);
            else if (key == "time.snapshots") c.snapshot_times = detail::parse_double_list(val);
            else if (key == "output.dir") c.out_dir = val;
            else if (key == "equilibrium") c.equilibrium = val;
            else if (key == "full") c.full_scale = (val == "true" || val == "1");
            else
                throw std::invalid_argument("config: unknown key '" + key + "'");
        } catch (const std::invalid_argument&) {
            throw;
        } catch (const std::exception&) {
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": bad value for '" + key + "'");
        }
    }
    return c;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot read '" + path + "'");
    return parse_config(in);
}

inline void serialize_config(const RunConfig& c, std::ostream& out) {
    char buf[40];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    out << "preset = " << c.preset << '\n';
    out << "kind = " << c.kind << '\n';
    out << "model.name = " << c.model << '\n';
    out << "model.m = " << num(c.m) << '\n';
    out << "model.gamma = " << num(c.gamma) << '\n';
    out << "model.k = " << c.k << '\n';
    out << "model.epsilon = " << num(c.epsilon) << '\n';
    if (!c.epsilon_list.empty())
        out << "model.epsilon_list = " << detail::join_double_list(c.epsilon_list) << '\n';
    out << "model.dv = " << num(c.dv) << '\n';
    out << "mesh.dim = " << c.dim << '\n';
    for (int a = 0; a < c.dim; ++a) {
        out << "mesh.a" << a << " = " << num(c.a[a]) << '\n';
        out << "mesh.b" << a << " = " << num(c.b[a]) << '\n';
        out << "mesh.n" << a << " = " << c.n[a] << '\n';
        out << "bc" << a << ".left = " << c.bc[a][0].kind << '\n';
        out << "bc" << a << ".left_value = " << num(c.bc[a][0].value) << '\n';
        out << "bc" << a << ".right = " << c.bc[a][1].kind << '\n';
        out << "bc" << a << ".right_value = " << num(c.bc[a][1].value) << '\n';
    }
    out << "flux = " << c.flux << '\n';
    out << "time.dt = " << num(c.dt) << '\n';
    out << "time.dt_mode = " << c.dt_mode << '\n';
    out << "time.t_final = " << num(c.t_final) << '\n';
    out << "time.record_every = " << c.record_every << '\n';
    if (!c.snapshot_times.empty())
        out << "time.snapshots = " << detail::join_double_list(c.snapshot_times) << '\n';
    out << "output.dir = " << c.out_dir << '\n';
    out << "equilibrium = " << c.equilibrium << '\n';
    out << "full = " << (c.full_scale ? "true" : "false") << '\n';
}

/// Every problem with the config, each tagged with its field path.
inline std::vector<std::string> validate_config(const RunConfig& c) {
    std::vector<std::string> errs;
    auto require = [&](bool ok, const std::string& msg) {
        if (!ok) errs.push_back(msg);
    };
    require(c.kind == "scalar" || c.kind == "dd", "kind: must be 'scalar' or 'dd'");
    const bool known_model =
        c.model == "porous_media" || c.model == "fokker_planck" ||
        c.model == "linear_drift_power_diffusion" || c.model == "linear_drift_piecewise_cubic" ||
        c.model == "buckley_leverett" || c.model == "dd";
    require(known_model, "model.name: unknown model '" + c.model + "'");
    if (c.model == "porous_media") require(c.m > 1.0, "model.m: must be > 1");
    if (c.model == "fokker_planck") require(c.k == 1 || c.k == -1, "model.k: must be +1 or -1");
    if (c.model == "buckley_leverett")
        require(c.epsilon >= 0.0, "model.epsilon: must be >= 0");
    if (c.kind == "dd") require(c.gamma > 1.0, "model.gamma: must be > 1");
    require(c.dim >= 1 && c.dim <= 3, "mesh.dim: must be 1, 2 or 3");
    for (int a = 0; a < c.dim && a < 3; ++a) {
        const std::string ax = std::to_string(a);
        require(c.a[a] < c.b[a], "mesh.a" + ax + ": lower bound must be below mesh.b" + ax);
        require(c.n[a] >= 1, "mesh.n" + ax + ": must be >= 1");
        for (int s = 0; s < 2; ++s) {
            const auto& kind = c.bc[a][s].kind;
            require(kind == "periodic" || kind == "neumann" || kind == "zero_gradient" ||
                        kind == "dirichlet",
                    "bc" + ax + (s == 0 ? ".left" : ".right") + ": unknown kind '" + kind + "'");
        }
        require((c.bc[a][0].kind == "periodic") == (c.bc[a][1].kind == "periodic"),
                "bc" + ax + ": periodic must be set on both sides");
    }
    require(c.flux == "fu1" || c.flux == "fu2" || c.flux == "cu" || c.flux == "sgext",
            "flux: must be one of fu1, fu2, cu, sgext");
    require(c.dt_mode == "fixed" || c.dt_mode == "cfl_auto",
            "time.dt_mode: must be 'fixed' or 'cfl_auto'");
    if (c.dt_mode == "fixed") require(c.dt > 0.0, "time.dt: must be > 0");
    require(c.t_final >= 0.0, "time.t_final: must be >= 0");
    require(c.record_every >= 1, "time.record_every: must be >= 1");
    require(c.equilibrium == "none" || c.equilibrium == "barenblatt" ||
                c.equilibrium == "fermi_bose" || c.equilibrium == "thermal",
            "equilibrium: must be one of none, barenblatt, fermi_bose, thermal");
    require(!c.out_dir.empty(), "output.dir: must not be empty");
    return errs;
}

}  // namespace fvdp
