// Command-line front end: model validation, kernel and saddle data, pole
// reports, Monte Carlo estimation, contour inversion, asymptotic evaluation
// and cross-oracle comparison.  Every run writes a CSV body (byte-identical
// for identical inputs and seed) plus a JSON manifest sidecar.

#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rbm/asymptotics.hpp"
#include "rbm/model_io.hpp"

using namespace rbm;

namespace {

constexpr const char* kVersion = "0.1.0";

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct Output {
    std::string path;  // empty: stdout
    std::vector<std::string> lines;

    void row(const std::string& line) { lines.push_back(line); }

    void write(const std::string& manifest) const {
        if (path.empty()) {
            for (const auto& l : lines) std::cout << l << "\n";
            return;
        }
        std::ofstream out(path);
        if (!out) throw NumericError("cannot open output file: " + path);
        for (const auto& l : lines) out << l << "\n";
        std::ofstream ms(path + ".manifest.json");
        ms << manifest << "\n";
    }
};

struct Common {
    std::string model_path;
    std::string out_path;
    std::uint64_t seed = 42;
    long n_paths = 100000;
    double dt = 1e-3;
    double horizon = 60.0;
    double max_time = 400.0;
    bool seed_from_flag = false;
};

std::uint64_t resolve_seed(const Common& c) {
    if (c.seed_from_flag) return c.seed;
    if (const char* env = std::getenv("SEED")) {
        return static_cast<std::uint64_t>(std::strtoull(env, nullptr, 10));
    }
    return 42;
}

std::string manifest_json(const Common& c, const QuadrantParams& p,
                          const std::string& subcommand, const std::string& args_echo) {
    std::time_t now = std::time(nullptr);
    char ts[32];
    std::strftime(ts, sizeof(ts), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    std::ostringstream os;
    os << "{\"model_hash\": \"" << model_hash(p) << "\", \"seed\": " << resolve_seed(c)
       << ", \"subcommand\": \"" << subcommand << "\", \"model\": " << quadrant_to_json(p)
       << ", \"args\": \"" << args_echo << "\", \"version\": \"" << kVersion
       << "\", \"timestamp\": \"" << ts << "\"}";
    return os.str();
}

SimConfig sim_config(const Common& c) {
    SimConfig cfg;
    cfg.seed = resolve_seed(c);
    cfg.n_paths = c.n_paths;
    cfg.dt = c.dt;
    cfg.horizon_radius = c.horizon;
    cfg.max_time = c.max_time;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Green's function asymptotics of reflected Brownian motion in a wedge"};
    app.require_subcommand(1);

    Common c;
    app.add_option("--model", c.model_path, "model JSON file")->required();
    app.add_option("--out", c.out_path, "output CSV path (stdout when omitted)");
    auto* seed_opt = app.add_option("--seed", c.seed, "master seed (falls back to SEED env, then 42)");
    app.add_option("--n-paths", c.n_paths, "Monte Carlo path count");
    app.add_option("--dt", c.dt, "Euler time step");
    app.add_option("--horizon", c.horizon, "stopping radius");
    app.add_option("--max-time", c.max_time, "hard time cap per path");

    auto* cmd_validate = app.add_subcommand("validate", "echo the validated model and its cone form");

    auto* cmd_kernel = app.add_subcommand("kernel", "branch points and branch values on a grid");
    int kernel_n = 81;
    cmd_kernel->add_option("--grid", kernel_n, "grid size");

    auto* cmd_saddle = app.add_subcommand("saddle", "saddle data at --alpha");
    double s_alpha = kPi / 4;
    int s_samples = 0;
    cmd_saddle->add_option("--alpha", s_alpha, "direction in [0, pi/2]")->required();
    cmd_saddle->add_option("--path-samples", s_samples, "emit a descent path with this many samples");

    auto* cmd_poles = app.add_subcommand("poles", "pole report");
    bool with_residues = false;
    cmd_poles->add_flag("--with-residues", with_residues, "estimate residues by Monte Carlo");

    auto* cmd_sim = app.add_subcommand("simulate", "Monte Carlo estimates: green|boundary|phi");
    std::string sim_what = "green";
    double sim_a = 2.0, sim_b = 2.0, sim_u = 1.0;
    int sim_axis = 2;
    double sim_xre = -0.5, sim_xim = 0.0, sim_yre = -0.5, sim_yim = 0.0;
    cmd_sim->add_option("what", sim_what, "green, boundary or phi")->required();
    cmd_sim->add_option("--a", sim_a, "first coordinate");
    cmd_sim->add_option("--b", sim_b, "second coordinate");
    cmd_sim->add_option("--u", sim_u, "boundary coordinate");
    cmd_sim->add_option("--axis", sim_axis, "boundary axis, 1 or 2");
    cmd_sim->add_option("--x-re", sim_xre, "Re x for phi");
    cmd_sim->add_option("--x-im", sim_xim, "Im x for phi");
    cmd_sim->add_option("--y-re", sim_yre, "Re y for phi");
    cmd_sim->add_option("--y-im", sim_yim, "Im y for phi");

    auto* cmd_invert = app.add_subcommand("invert", "contour inversion oracle at (--a, --b)");
    double inv_a = 2.0, inv_b = 2.0;
    bool inv_shifted = false;
    cmd_invert->add_option("--a", inv_a, "a")->required();
    cmd_invert->add_option("--b", inv_b, "b")->required();
    cmd_invert->add_flag("--shifted", inv_shifted, "steepest-descent contour");

    auto* cmd_asym = app.add_subcommand("asym", "asymptotic evaluation: eval|sweep|edge|transition|cone");
    std::string asym_what = "eval";
    double as_r = 10.0, as_alpha = kPi / 4, as_rho = 10.0, as_omega = kPi / 4;
    int sweep_n = 31;
    cmd_asym->add_option("what", asym_what)->required();
    cmd_asym->add_option("--r", as_r, "radius (quadrant)");
    cmd_asym->add_option("--alpha", as_alpha, "direction (quadrant)");
    cmd_asym->add_option("--rho", as_rho, "radius (cone)");
    cmd_asym->add_option("--omega", as_omega, "direction (cone)");
    cmd_asym->add_option("--sweep-n", sweep_n, "sweep sample count");

    auto* cmd_compare = app.add_subcommand("compare", "asymptotics vs oracle vs Monte Carlo at (--a, --b)");
    double cmp_a = 3.0, cmp_b = 2.0;
    cmd_compare->add_option("--a", cmp_a, "a")->required();
    cmd_compare->add_option("--b", cmp_b, "b")->required();

    auto* cmd_regimes = app.add_subcommand("regimes", "regime of each direction omega0 in [0, beta]");
    int reg_n = 201;
    cmd_regimes->add_option("--grid", reg_n, "grid size");

    CLI11_PARSE(app, argc, argv);
    c.seed_from_flag = seed_opt->count() > 0;

    try {
        const ModelFile mf = load_model(c.model_path);
        const QuadrantParams& p = mf.quadrant;
        Output out;
        out.path = c.out_path;
        std::string sub, echo;

        if (*cmd_validate) {
            sub = "validate";
            validate(p);
            const auto [cone, T] = quadrant_to_cone(p);
            out.row("s11,s12,s22,mu1,mu2,r11,r12,r21,r22,a0,b0,beta,delta,epsilon,theta,mu_norm,lambda");
            out.row(fmt(p.s11) + "," + fmt(p.s12) + "," + fmt(p.s22) + "," + fmt(p.mu.x) +
                    "," + fmt(p.mu.y) + "," + fmt(p.refl.a11) + "," + fmt(p.refl.a12) + "," +
                    fmt(p.refl.a21) + "," + fmt(p.refl.a22) + "," + fmt(p.z0.x) + "," +
                    fmt(p.z0.y) + "," + fmt(cone.beta) + "," + fmt(cone.delta) + "," +
                    fmt(cone.epsilon) + "," + fmt(cone.theta) + "," + fmt(cone.mu_norm) +
                    "," + fmt(lambda_exponent(cone)));
        } else if (*cmd_kernel) {
            sub = "kernel";
            const KernelGeometry g = branch_points(p);
            out.row("kind,x,value1,value2,value3,value4");
            out.row("branch_points," + fmt(g.x_min) + "," + fmt(g.x_max) + "," + fmt(g.y_min) +
                    "," + fmt(g.y_max) + ",");
            out.row("discriminants," + fmt(g.D1) + "," + fmt(g.D2) + ",,,");
            for (int i = 0; i < kernel_n; ++i) {
                const double x = g.x_min - 0.5 + (g.x_max - g.x_min + 1.0) * i / (kernel_n - 1);
                const cd yp = Y_branch(p, cd(x, 0.0), +1);
                const cd ym = Y_branch(p, cd(x, 0.0), -1);
                out.row("branch," + fmt(x) + "," + fmt(yp.real()) + "," + fmt(yp.imag()) +
                        "," + fmt(ym.real()) + "," + fmt(ym.imag()));
            }
        } else if (*cmd_saddle) {
            sub = "saddle";
            echo = "alpha=" + fmt(s_alpha);
            const SaddleData s = saddle_point(s_alpha, p);
            out.row("kind,alpha,x,y,Fxx,R,exponent_rate");
            out.row("saddle," + fmt(s.alpha) + "," + fmt(s.x) + "," + fmt(s.y) + "," +
                    fmt(s.Fxx) + "," + fmt(s.R) + "," + fmt(s.exponent_rate));
            if (s_samples > 0) {
                const DescentPath path =
                    s_alpha > 0.0 ? trace_descent(s_alpha, default_epsilon_cap(s_alpha, p),
                                                  s_samples, p)
                                  : descent_path_alpha0(0.1, s_samples, p);
                for (size_t i = 0; i < path.x.size(); ++i) {
                    out.row("path," + fmt(path.t[i]) + "," + fmt(path.x[i].real()) + "," +
                            fmt(path.x[i].imag()) + ",,,");
                }
            }
        } else if (*cmd_poles) {
            sub = "poles";
            const PoleReport rep = pole_locations(p);
            out.row("exists_x,exists_y,x_star,y_star,y_minus_at_xstar,y_2star,x_2star,"
                    "alpha_star,alpha_2star,omega_star,omega_2star,res_phi2,res_phi2_se,"
                    "res_phi1,res_phi1_se,c_star,c_star_se,c_2star,c_2star_se");
            std::string row = std::string(rep.exists_x ? "1" : "0") + "," +
                              (rep.exists_y ? "1" : "0") + "," + fmt(rep.x_star) + "," +
                              fmt(rep.y_star) + "," + fmt(rep.y_minus_at_xstar) + "," +
                              fmt(rep.y_2star) + "," + fmt(rep.x_2star) + "," +
                              fmt(rep.alpha_star) + "," + fmt(rep.alpha_2star) + "," +
                              fmt(rep.omega_star) + "," + fmt(rep.omega_2star);
            if (with_residues && (rep.exists_x || rep.exists_y)) {
                const SimArtifact art = simulate(p, sim_config(c));
                const Transforms tf(art);
                PhiValue r2{cd(kNaN, 0.0), 0.0}, r1{cd(kNaN, 0.0), 0.0};
                PhiValue cs{cd(kNaN, 0.0), 0.0}, cs2{cd(kNaN, 0.0), 0.0};
                if (rep.exists_x) {
                    r2 = residue_phi2(tf, rep);
                    cs = pole_constant_cstar(tf, rep);
                }
                if (rep.exists_y) {
                    r1 = residue_phi1(tf, rep);
                    cs2 = pole_constant_c2star(tf, rep);
                }
                row += "," + fmt(r2.value.real()) + "," + fmt(r2.se) + "," +
                       fmt(r1.value.real()) + "," + fmt(r1.se) + "," + fmt(cs.value.real()) +
                       "," + fmt(cs.se) + "," + fmt(cs2.value.real()) + "," + fmt(cs2.se);
            } else {
                row += ",,,,,,,,";
            }
            out.row(row);
        } else if (*cmd_sim) {
            sub = "simulate-" + sim_what;
            SimConfig cfg = sim_config(c);
            out.row("quantity,args,value_re,value_im,std_error,n_paths,seed");
            if (sim_what == "green") {
                cfg.green_probes = {{sim_a, sim_b}};
                const SimArtifact art = simulate(p, cfg);
                const OccupationEstimate e = estimate_green(art, {sim_a, sim_b});
                out.row("green,a=" + fmt(sim_a) + ";b=" + fmt(sim_b) + "," + fmt(e.value) +
                        ",0," + fmt(e.std_error) + "," + std::to_string(e.n_paths) + "," +
                        std::to_string(cfg.seed));
            } else if (sim_what == "boundary") {
                const SimArtifact art = simulate(p, cfg);
                const OccupationEstimate e = estimate_boundary(art, sim_u, sim_axis);
                out.row("boundary,u=" + fmt(sim_u) + ";axis=" + std::to_string(sim_axis) +
                        "," + fmt(e.value) + ",0," + fmt(e.std_error) + "," +
                        std::to_string(e.n_paths) + "," + std::to_string(cfg.seed));
            } else if (sim_what == "phi") {
                const cd x(sim_xre, sim_xim), y(sim_yre, sim_yim);
                cfg.phi_probes = {{x, y}};
                const SimArtifact art = simulate(p, cfg);
                const ComplexEstimate e = estimate_phi(art, x, y);
                out.row("phi,x=" + fmt(sim_xre) + "+" + fmt(sim_xim) + "i;y=" +
                        fmt(sim_yre) + "+" + fmt(sim_yim) + "i," + fmt(e.value.real()) + "," +
                        fmt(e.value.imag()) + "," + fmt(e.std_error) + "," +
                        std::to_string(e.n_paths) + "," + std::to_string(cfg.seed));
            } else {
                throw NumericError("simulate expects green, boundary or phi");
            }
        } else if (*cmd_invert) {
            sub = "invert";
            SimConfig cfg = sim_config(c);
            const SimArtifact art = simulate(p, cfg);
            const Transforms tf(art);
            const PoleReport rep = pole_locations(p);
            out.row("a,b,I1,I2,I3,total,err_quad,err_mc,contour");
            QuadratureResult i1, i2, i3;
            if (inv_shifted) {
                i1 = eval_shifted_I(1, inv_a, inv_b, tf, rep);
                i2 = eval_shifted_I(2, inv_a, inv_b, tf, rep);
                i3 = eval_shifted_I(3, inv_a, inv_b, tf, rep);
            } else {
                i1 = eval_I_vertical(1, inv_a, inv_b, tf);
                i2 = eval_I_vertical(2, inv_a, inv_b, tf);
                i3 = eval_I_vertical(3, inv_a, inv_b, tf);
            }
            const cd total = i1.value + i2.value + i3.value;
            const double eq = i1.abs_error_est + i2.abs_error_est + i3.abs_error_est;
            const double em = std::sqrt(i1.se_propagated * i1.se_propagated +
                                        i2.se_propagated * i2.se_propagated +
                                        i3.se_propagated * i3.se_propagated);
            out.row(fmt(inv_a) + "," + fmt(inv_b) + "," + fmt(i1.value.real()) + "," +
                    fmt(i2.value.real()) + "," + fmt(i3.value.real()) + "," +
                    fmt(total.real()) + "," + fmt(eq) + "," + fmt(em) + "," +
                    (inv_shifted ? "shifted" : "vertical"));
        } else if (*cmd_asym) {
            sub = "asym-" + asym_what;
            SimConfig cfg = sim_config(c);
            const SimArtifact art = simulate(p, cfg);
            const Transforms tf(art);
            const PoleReport rep = pole_locations(p);
            out.row("rho_or_r,angle,regime,decay_rate,prefactor_power,c0,c_star,"
                    "transition_factor,value,se");
            auto emit_eval = [&](double r, double alpha) {
                const LeadingTerm lt = leading_term(r, alpha, tf, rep);
                const PhiValue c0v = c0(alpha, tf);
                std::string cstar = "";
                if (lt.regime == Regime::pole_x) {
                    cstar = fmt(pole_constant_cstar(tf, rep).value.real());
                } else if (lt.regime == Regime::pole_y) {
                    cstar = fmt(pole_constant_c2star(tf, rep).value.real());
                }
                out.row(fmt(r) + "," + fmt(alpha) + "," + regime_name(lt.regime) + "," +
                        fmt(lt.decay_rate) + "," + fmt(lt.prefactor_power) + "," +
                        fmt(c0v.value.real()) + "," + cstar + ",," + fmt(lt.value) + "," +
                        fmt(lt.se));
            };
            if (asym_what == "eval") {
                emit_eval(as_r, as_alpha);
            } else if (asym_what == "sweep") {
                for (int i = 0; i < sweep_n; ++i) {
                    const double alpha = 0.03 + (kPi / 2 - 0.06) * i / (sweep_n - 1);
                    emit_eval(as_r, alpha);
                }
            } else if (asym_what == "edge") {
                const EdgeExpansion e = edge_expansion(as_r, as_alpha, tf, rep);
                out.row(fmt(as_r) + "," + fmt(as_alpha) + ",edge_0,,,"
                        + fmt(e.c_prime) + ",,," + fmt(e.value) + "," + fmt(e.se));
            } else if (asym_what == "transition") {
                const TransitionTerm t = transition_term(as_r, as_alpha, tf, rep);
                out.row(fmt(as_r) + "," + fmt(as_alpha) + ",transition_x,,,,," +
                        fmt(t.factor) + "," + fmt(t.with_saddle) + "," + fmt(t.with_saddle_se));
            } else if (asym_what == "cone") {
                const AsymptoticResult ar = cone_asymptotics(as_rho, as_omega, tf, rep);
                out.row(fmt(as_rho) + "," + fmt(as_omega) + "," + regime_name(ar.regime) +
                        "," + fmt(ar.decay_rate) + "," + fmt(ar.prefactor_power) + "," +
                        fmt(ar.c0_value) + "," + fmt(ar.pole_constant) + "," +
                        fmt(ar.transition_factor) + "," + fmt(ar.value) + "," + fmt(ar.se));
            } else {
                throw NumericError("asym expects eval, sweep, edge, transition or cone");
            }
        } else if (*cmd_compare) {
            sub = "compare";
            SimConfig cfg = sim_config(c);
            cfg.green_probes = {{cmp_a, cmp_b}};
            const SimArtifact art = simulate(p, cfg);
            const Transforms tf(art);
            const PoleReport rep = pole_locations(p);
            const OccupationEstimate mc = estimate_green(art, {cmp_a, cmp_b});
            const QuadratureResult orc = green_oracle(cmp_a, cmp_b, tf, rep, false);
            const double r = std::hypot(cmp_a, cmp_b);
            const double alpha = std::atan2(cmp_b, cmp_a);
            const LeadingTerm lt = leading_term(r, alpha, tf, rep);
            const double comb_mo = 3.0 * std::sqrt(mc.std_error * mc.std_error +
                                                   orc.se_propagated * orc.se_propagated) +
                                   orc.abs_error_est;
            const bool pass_mo = std::abs(mc.value - orc.value.real()) <= comb_mo;
            // The truncated asymptotic expansion carries an O(1/r) model
            // error on top of its Monte Carlo error.
            const double comb_ao =
                3.0 * std::sqrt(lt.se * lt.se + orc.se_propagated * orc.se_propagated) +
                orc.abs_error_est + std::abs(lt.value) * (1.0 / r);
            const bool pass_ao = std::abs(lt.value - orc.value.real()) <= comb_ao;
            out.row("a,b,mc,mc_se,oracle,oracle_err,asym,asym_se,verdict");
            out.row(fmt(cmp_a) + "," + fmt(cmp_b) + "," + fmt(mc.value) + "," +
                    fmt(mc.std_error) + "," + fmt(orc.value.real()) + "," +
                    fmt(orc.abs_error_est + orc.se_propagated) + "," + fmt(lt.value) + "," +
                    fmt(lt.se) + "," + (pass_mo && pass_ao ? "PASS" : "FAIL"));
        } else if (*cmd_regimes) {
            sub = "regimes";
            const PoleReport rep = pole_locations(p);
            const auto [cone, T] = quadrant_to_cone(p);
            out.row("omega0,regime");
            for (int i = 0; i < reg_n; ++i) {
                const double omega = cone.beta * i / (reg_n - 1);
                const double alpha = alpha_of_omega(omega, p);
                out.row(fmt(omega) + "," + regime_name(classify(alpha, rep, 1e-12)));
            }
        }

        out.write(manifest_json(c, p, sub, echo));
        return 0;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(e.error_class());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
