// SPDX-License-Identifier: Apache-2.0
#include "vasotherm/config.hpp"

#include "vasotherm/common.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace vasotherm {

namespace {

struct Entry {
    std::string value;
    int line = 0;
};

using KeyMap = std::map<std::string, Entry>;

[[noreturn]] void config_fail(const std::string& origin, int line, const std::string& msg)
{
    std::ostringstream os;
    os << origin << ":" << line << ": " << msg;
    throw Error(os.str());
}

double to_double(const std::string& origin, const Entry& e, const std::string& key)
{
    try {
        std::size_t used = 0;
        const double v = std::stod(e.value, &used);
        if (used != e.value.size())
            throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        config_fail(origin, e.line, "key '" + key + "': expected a number, got '" + e.value + "'");
    }
}

int to_int(const std::string& origin, const Entry& e, const std::string& key)
{
    try {
        std::size_t used = 0;
        const int v = std::stoi(e.value, &used);
        if (used != e.value.size())
            throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        config_fail(origin, e.line, "key '" + key + "': expected an integer, got '" + e.value + "'");
    }
}

bool to_bool(const std::string& origin, const Entry& e, const std::string& key)
{
    if (e.value == "true" || e.value == "1" || e.value == "on")
        return true;
    if (e.value == "false" || e.value == "0" || e.value == "off")
        return false;
    config_fail(origin, e.line, "key '" + key + "': expected true/false, got '" + e.value + "'");
}

Eigen::Matrix3d to_matrix(const std::string& origin, const Entry& e, const std::string& key)
{
    std::istringstream is(e.value);
    std::vector<double> vals;
    double v;
    while (is >> v)
        vals.push_back(v);
    Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
    if (vals.size() == 1) {
        m = vals[0] * Eigen::Matrix3d::Identity();
    } else if (vals.size() == 3) {
        m = Eigen::Vector3d(vals[0], vals[1], vals[2]).asDiagonal();
    } else if (vals.size() == 6) {
        // diagonal then off-diagonal xy xz yz
        m = Eigen::Vector3d(vals[0], vals[1], vals[2]).asDiagonal();
        m(0, 1) = m(1, 0) = vals[3];
        m(0, 2) = m(2, 0) = vals[4];
        m(1, 2) = m(2, 1) = vals[5];
    } else {
        config_fail(origin, e.line,
                    "key '" + key + "': expected 1, 3 or 6 numbers for a symmetric matrix");
    }
    return m;
}

} // namespace

std::string config_reference()
{
    return R"(# model geometry and physics (nondimensional units)
R1      = 0.15      minimal vessel radius, 0 < R1 < R2
R2      = 0.35      maximal vessel radius, R2 < 1/2
R0      = 0.25      reference interface radius, in [R1, R2]
delta   = 0.04      mollification half-width; R1-3 delta > 0, R2+3 delta < 1/2
L       = 1.0       vessel length
T_final = 0.5       final time
mu      = 1.0       dynamic viscosity
k       = 1.0       degradation rate of the wall chemical
alpha   = 1.0       interface heat-transfer coefficient
gamma   = 0.1       temporal averaging window (>= 2 dt)
Kf      = 1 1 1     fluid conductivity (scalar, diagonal, or 6-entry symmetric)
Ks      = 1 1 1     solid conductivity
G_mode  = tanh      production family: tanh | constant
G_g0    = 0.5       production scale
G_ystar = 0.5       half-activation temperature
G_s     = 0.25      activation width
G_axial = 0.0       axial modulation amplitude
G_const = 0.5       production value in constant mode
H_mode  = logistic  radius map family: logistic | constant
H_cstar = 0.5       midpoint concentration
H_w     = 0.2       transition width
H_const = 0.25      radius in constant mode
fb_pin  = 10.0      normal stress at the inlet face
fb_pout = 0.0       normal stress at the outlet face
fin     = 1.0       inflow temperature
c0      = 0.5       initial concentration
theta_f0 = 0.0      initial fluid temperature
theta_s0 = 0.0      initial solid temperature
# discretization
n_axial   = 8       axial cells
n_angular = 4       angular cells per quadrant
n_radial  = 2       radial cells in the fluid ring
n_outer   = 3       radial cells in the solid ring
dt        = 0.025   time step
mode      = staggered   staggered | picard
fixed_domain = false    identity deformation (fixed-domain solver)
n_subiter = 2       staggered sub-iterations per step
picard_tol = 1e-6   fixed-point tolerance (L2 in space-time)
picard_max_iter = 25
quad_degree = 5     volume quadrature degree
solver_tol  = 1e-10 linear residual gate
rho_mode    = table radial profile evaluation: table | direct
rho_table_n_radius = 33
rho_table_n_r = 801
ode_nodes   = 65    axial nodes of the concentration grid
# outputs
write_vtk  = true
vtk_stride = 4
write_csv  = true
write_checkpoint = true
deterministic = true
seed = 12345
)";
}

RunConfig parse_config_text(const std::string& text, const std::string& origin)
{
    KeyMap entries;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            if (a == std::string::npos)
                return std::string{};
            const auto b = s.find_last_not_of(" \t\r");
            return s.substr(a, b - a + 1);
        };
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            config_fail(origin, lineno, "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            config_fail(origin, lineno, "expected 'key = value'");
        if (entries.count(key))
            config_fail(origin, lineno,
                        "duplicate key '" + key + "' (first set on line " +
                            std::to_string(entries[key].line) + ")");
        entries[key] = {value, lineno};
    }

    RunConfig cfg;
    auto take = [&](const std::string& key, auto&& apply) {
        auto it = entries.find(key);
        if (it == entries.end())
            return;
        apply(it->second);
        entries.erase(it);
    };

    auto num = [&](const std::string& key, double& target) {
        take(key, [&](const Entry& e) { target = to_double(origin, e, key); });
    };
    auto integer = [&](const std::string& key, int& target) {
        take(key, [&](const Entry& e) { target = to_int(origin, e, key); });
    };
    auto boolean = [&](const std::string& key, bool& target) {
        take(key, [&](const Entry& e) { target = to_bool(origin, e, key); });
    };

    ModelParams& m = cfg.model;
    num("R1", m.r_min);
    num("R2", m.r_max);
    num("R0", m.r_ref);
    num("delta", m.delta);
    num("L", m.length);
    num("T_final", m.t_final);
    num("mu", m.viscosity);
    num("k", m.decay_rate);
    num("alpha", m.heat_transfer);
    num("gamma", m.window);
    take("Kf", [&](const Entry& e) { m.k_fluid = to_matrix(origin, e, "Kf"); });
    take("Ks", [&](const Entry& e) { m.k_solid = to_matrix(origin, e, "Ks"); });
    take("G_mode", [&](const Entry& e) {
        if (e.value == "tanh")
            m.production.mode = ProductionSpec::Mode::Saturating;
        else if (e.value == "constant")
            m.production.mode = ProductionSpec::Mode::Constant;
        else
            config_fail(origin, e.line, "G_mode: expected tanh|constant");
    });
    num("G_g0", m.production.g0);
    num("G_ystar", m.production.y_star);
    num("G_s", m.production.width);
    num("G_axial", m.production.axial_mod);
    num("G_const", m.production.const_value);
    take("H_mode", [&](const Entry& e) {
        if (e.value == "logistic")
            m.radius_map.mode = RadiusMapSpec::Mode::Logistic;
        else if (e.value == "constant")
            m.radius_map.mode = RadiusMapSpec::Mode::Constant;
        else
            config_fail(origin, e.line, "H_mode: expected logistic|constant");
    });
    num("H_cstar", m.radius_map.c_star);
    num("H_w", m.radius_map.width);
    num("H_const", m.radius_map.const_value);
    num("fb_pin", m.boundary_stress.p_in);
    num("fb_pout", m.boundary_stress.p_out);
    num("fin", m.inflow_temperature);
    num("c0", m.c0);
    num("theta_f0", m.theta_f0);
    num("theta_s0", m.theta_s0);

    integer("n_axial", cfg.resolution.n_axial);
    integer("n_angular", cfg.resolution.n_angular);
    integer("n_radial", cfg.resolution.n_radial);
    integer("n_outer", cfg.resolution.n_outer);
    num("dt", cfg.dt);
    take("mode", [&](const Entry& e) {
        if (e.value == "staggered")
            cfg.mode = CouplingMode::Staggered;
        else if (e.value == "picard")
            cfg.mode = CouplingMode::Picard;
        else
            config_fail(origin, e.line, "mode: expected staggered|picard");
    });
    boolean("fixed_domain", cfg.fixed_domain);
    integer("n_subiter", cfg.n_subiter);
    num("picard_tol", cfg.picard_tol);
    integer("picard_max_iter", cfg.picard_max_iter);
    integer("quad_degree", cfg.quad_degree);
    num("solver_tol", cfg.solver_tol);
    take("rho_mode", [&](const Entry& e) {
        if (e.value != "table" && e.value != "direct")
            config_fail(origin, e.line, "rho_mode: expected table|direct");
        cfg.rho_mode = e.value;
    });
    integer("rho_table_n_radius", cfg.rho_table_n_radius);
    integer("rho_table_n_r", cfg.rho_table_n_r);
    integer("ode_nodes", cfg.ode_nodes);
    boolean("write_vtk", cfg.write_vtk);
    integer("vtk_stride", cfg.vtk_stride);
    boolean("write_csv", cfg.write_csv);
    boolean("write_checkpoint", cfg.write_checkpoint);
    boolean("deterministic", cfg.deterministic);
    take("seed", [&](const Entry& e) { cfg.seed = unsigned(to_int(origin, e, "seed")); });

    if (!entries.empty()) {
        const auto& [key, e] = *entries.begin();
        config_fail(origin, e.line, "unknown key '" + key + "'");
    }

    // Eager validation: a config describing an inadmissible model is useless.
    const ValidationReport rep = validate(cfg.model);
    if (!rep.passed()) {
        std::string msg = "configuration violates model constraints:";
        for (const auto& f : rep.failures())
            msg += " [" + f + "]";
        throw Error(msg);
    }
    require(cfg.dt > 0.0, "configuration: dt must be positive");
    require(cfg.model.window >= 2.0 * cfg.dt - 1e-12,
            "configuration: gamma must be at least 2 dt");
    require(cfg.n_subiter >= 1, "configuration: n_subiter must be at least 1");
    require(cfg.ode_nodes >= 2, "configuration: ode_nodes must be at least 2");
    return cfg;
}

RunConfig parse_config(const std::string& path)
{
    std::ifstream in(path);
    require(in.good(), "configuration: cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return parse_config_text(os.str(), path);
}

} // namespace vasotherm
