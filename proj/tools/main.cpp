// Command-line front end: controller design reports, scenario simulation with
// CSV output, the verification suite, and invariant-region rasterization.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "homsafe/scenario_io.hpp"
#include "homsafe/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitParse = 2;
constexpr int kExitVerify = 3;
constexpr int kExitDivergence = 4;

std::ostream& open_out(std::ofstream& file, const std::string& out_dir, const std::string& name) {
    if (out_dir.empty()) return std::cout;
    fs::create_directories(out_dir);
    file.open(fs::path(out_dir) / name);
    if (!file) throw std::runtime_error("cannot open output file in '" + out_dir + "'");
    return file;
}

homsafe::Vec parse_vec(const std::string& s) {
    homsafe::Vec out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    return out;
}

int cmd_design(int n, const std::string& x0_str, double t_settle, double radius, double alpha,
               double lambda_opt, bool as_json, const std::string& out_dir) {
    using namespace homsafe;
    const Vec x0 = x0_str.empty() ? Vec{} : parse_vec(x0_str);

    double lambda = lambda_opt;
    std::string provenance = "user override";
    if (lambda <= 0.0) {
        if (x0.empty()) {
            std::cerr << "design: either --lambda or --x0 is required\n";
            return kExitUsage;
        }
        const double bound = lambda_lower_bound(x0);
        lambda = std::max(1.0, std::ceil(bound));
        provenance = "ceil of the conservative bound " + std::to_string(bound);
    }

    const LinearDesign lin = build_linear_design(n, lambda);
    std::optional<double> alpha_ov;
    if (alpha > 0.0) alpha_ov = alpha;
    const HomDesign d = build_hom_design(lin, t_settle, radius, alpha_ov);

    const double zmax = sym_eig(d.z_cert).values.back();
    const double qmin = sym_eig(d.q_form).values.front();
    const double pmin = sym_eig(d.shape).values.front();

    std::ofstream file;
    std::ostream& os = open_out(file, out_dir, "design.txt");
    if (as_json) {
        json j;
        j["n"] = n;
        j["lambda"] = lambda;
        j["lambda_provenance"] = provenance;
        j["K"] = d.base.k;
        j["ptilde"] = d.ptilde;
        j["rho"] = d.rho;
        j["s_boost"] = d.s_boost;
        j["T"] = d.settling_time;
        j["r"] = d.radius;
        j["control_bound"] = control_bound(d, d.radius);
        j["margins"] = {{"z_max", zmax}, {"q_min", qmin}, {"p_min", pmin}};
        if (!x0.empty()) {
            j["x0"] = x0;
            j["x0_in_cone"] = in_cone_omega(lin, x0);
        }
        os << j.dump(2) << "\n";
        return kExitOk;
    }

    os << "nonovershooting design, order " << n << "\n";
    os << "  lambda        = " << lambda << "   (" << provenance << ")\n";
    os << "  K             = [";
    for (int i = 0; i < n; ++i) os << (i ? ", " : " ") << d.base.k[i];
    os << " ]\n";
    os << "  ptilde        = [";
    for (int i = 0; i < n; ++i) os << (i ? ", " : " ") << d.ptilde[i];
    os << " ]\n";
    os << "  rho           = " << d.rho << "\n";
    os << "  s_boost       = " << d.s_boost << "\n";
    os << "  T             = " << d.settling_time << "\n";
    os << "  r             = " << d.radius << "\n";
    os << "  |u| bound     = " << control_bound(d, d.radius) << "\n";
    os << "  lmi margins   : max eig Z = " << zmax << ", min eig Q = " << qmin << ", min eig P = " << pmin
       << "\n";
    if (!x0.empty()) os << "  x0 in cone    = " << (in_cone_omega(lin, x0) ? "yes" : "no") << "\n";
    return kExitOk;
}

int cmd_simulate(const std::string& path, const std::string& out_dir, bool as_json) {
    using namespace homsafe;
    Scenario s;
    try {
        s = load_scenario_file(path);
    } catch (const ParseError& e) {
        std::cerr << "parse error in '" << path << "': " << e.what() << "\n";
        return kExitParse;
    }

    std::optional<Trajectory> maybe_tr;
    try {
        maybe_tr = integrate(s);
    } catch (const Error& e) {
        if (e.code() == Err::DivergenceDetected) {
            std::cerr << "simulation diverged: " << e.what() << "\n";
            return kExitDivergence;
        }
        throw;
    }
    const Trajectory& tr = *maybe_tr;

    {
        std::ofstream file;
        std::ostream& os = open_out(file, out_dir, "trajectory.csv");
        write_trajectory_csv(tr, os);
    }

    const auto settled = detect_settling(tr, s.eps_origin);
    const double overshoot = max_overshoot(tr);
    const auto intervals = override_intervals(tr);

    std::ofstream file;
    std::ostream& os = out_dir.empty() ? std::cerr : open_out(file, out_dir, "summary.txt");
    if (as_json) {
        json j;
        j["scenario"] = json::parse(scenario_to_json(s));
        j["settling_time"] = settled ? json(*settled) : json(nullptr);
        j["max_overshoot"] = overshoot;
        j["rho"] = tr.hom.rho;
        j["override_intervals"] = json::array();
        for (const auto& iv : intervals) {
            json ji = {{"start", iv.start}, {"end", iv.end}};
            ji["boundary_time"] = iv.boundary_time ? json(*iv.boundary_time) : json(nullptr);
            ji["within_restraint_bound"] =
                iv.boundary_time ? (*iv.boundary_time - iv.start <= s.settling_time + 10 * s.dt)
                                 : (iv.end - iv.start < s.settling_time);
            j["override_intervals"].push_back(ji);
        }
        os << j.dump(2) << "\n";
    } else {
        os << "simulation summary (" << path << ")\n";
        os << "  samples        = " << tr.samples.size() << "\n";
        os << "  rho            = " << tr.hom.rho << "\n";
        os << "  max overshoot  = " << overshoot << "\n";
        os << "  settling time  = " << (settled ? std::to_string(*settled) : std::string("none")) << "\n";
        os << "  overrides      = " << intervals.size() << "\n";
        for (const auto& iv : intervals) {
            os << "    [" << iv.start << ", " << iv.end << "]";
            if (iv.boundary_time)
                os << " boundary at " << *iv.boundary_time << " (dt " << *iv.boundary_time - iv.start
                   << ", restraint bound " << s.settling_time + 10 * s.dt << ")";
            os << "\n";
        }
    }
    return kExitOk;
}

int cmd_verify(double tol_scale, unsigned seed, const std::string& out_dir) {
    using namespace homsafe;
    VerifyOptions opts;
    opts.tol_scale = tol_scale;
    opts.seed = seed;
    const auto results = run_verification(opts);

    std::ofstream file;
    std::ostream& os = open_out(file, out_dir, "verify.txt");
    bool all = true;
    for (const auto& r : results) {
        all = all && r.pass;
        os << (r.pass ? "PASS" : "FAIL") << "  [" << r.id << "/12] " << r.name << " — " << r.detail << " ("
           << r.seconds << "s)\n";
    }
    os << (all ? "verification passed" : "verification FAILED") << "\n";
    return all ? kExitOk : kExitVerify;
}

int cmd_region(int n, double lambda, double t_settle, double radius, double alpha, double xmin,
               double xmax, double ymin, double ymax, int nx, int ny, const std::string& out_dir) {
    using namespace homsafe;
    const LinearDesign lin = build_linear_design(n, lambda);
    std::optional<double> alpha_ov;
    if (alpha > 0.0) alpha_ov = alpha;
    const HomDesign d = build_hom_design(lin, t_settle, radius, alpha_ov);

    std::ofstream file;
    std::ostream& os = open_out(file, out_dir, "region.csv");
    os << "x1,x2,in_omega,in_omega_r,in_ball\n";
    long containment_fail = 0, checked = 0;
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < ny; ++j) {
            Vec x(n, 0.0);
            x[0] = nx > 1 ? xmin + (xmax - xmin) * i / (nx - 1) : xmin;
            if (n > 1) x[1] = ny > 1 ? ymin + (ymax - ymin) * j / (ny - 1) : ymin;
            const bool om = in_cone_omega(lin, x);
            const bool omr = in_cone_omega_r(d, x);
            const bool ball = in_ball_br(d, x);
            os << x[0] << ',' << (n > 1 ? x[1] : 0.0) << ',' << int(om) << ',' << int(omr) << ',' << int(ball)
               << '\n';
            if (om && ball) {
                ++checked;
                if (!omr) ++containment_fail;
            }
        }
    }
    std::cerr << "containment check (cone&ball inside homogeneous cone&ball): " << checked - containment_fail
              << "/" << checked << " sampled members contained\n";
    return containment_fail == 0 ? kExitOk : kExitVerify;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite-/fixed-time nonovershooting controller design and safety-filter simulator"};
    app.require_subcommand(1);

    // design
    int n = 2;
    std::string x0_str;
    double t_settle = 1.0, radius = 1.0, alpha = 0.0, lambda = 0.0, tol_scale = 1.0;
    std::string out_dir;
    bool as_json = false;

    auto* design = app.add_subcommand("design", "print a controller design report");
    design->add_option("--n", n, "chain order")->check(CLI::Range(1, 16));
    design->add_option("--x0", x0_str, "initial state, comma separated");
    design->add_option("--T", t_settle, "settling-time bound");
    design->add_option("--r", radius, "homogeneous radius");
    design->add_option("--alpha", alpha, "certificate weight override (order 2)");
    design->add_option("--lambda", lambda, "rate parameter override");
    design->add_option("--out", out_dir, "output directory");
    design->add_flag("--json", as_json, "machine-readable output");

    // simulate
    std::string scenario_path;
    auto* simulate = app.add_subcommand("simulate", "run a scenario file and emit CSV + summary");
    simulate->add_option("scenario", scenario_path, "scenario file")->required();
    simulate->add_option("--out", out_dir, "output directory");
    simulate->add_flag("--json", as_json, "machine-readable summary");

    // verify
    unsigned seed = 20240817;
    auto* verify = app.add_subcommand("verify", "run the verification suite");
    verify->add_option("--tol", tol_scale, "tolerance scale (<1 tightens)");
    verify->add_option("--seed", seed, "random seed");
    verify->add_option("--out", out_dir, "output directory");

    // region
    double xmin = -8, xmax = 2, ymin = -6, ymax = 6;
    int nx = 201, ny = 201;
    auto* region = app.add_subcommand("region", "rasterize invariant-set membership over a grid");
    region->add_option("--n", n, "chain order")->check(CLI::Range(1, 16));
    region->add_option("--lambda", lambda, "rate parameter")->required();
    region->add_option("--T", t_settle, "settling-time bound");
    region->add_option("--r", radius, "homogeneous radius");
    region->add_option("--alpha", alpha, "certificate weight override (order 2)");
    region->add_option("--xmin", xmin);
    region->add_option("--xmax", xmax);
    region->add_option("--ymin", ymin);
    region->add_option("--ymax", ymax);
    region->add_option("--nx", nx);
    region->add_option("--ny", ny);
    region->add_option("--out", out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (design->parsed()) return cmd_design(n, x0_str, t_settle, radius, alpha, lambda, as_json, out_dir);
        if (simulate->parsed()) return cmd_simulate(scenario_path, out_dir, as_json);
        if (verify->parsed()) return cmd_verify(tol_scale, seed, out_dir);
        if (region->parsed())
            return cmd_region(n, lambda, t_settle, radius, alpha, xmin, xmax, ymin, ymax, nx, ny, out_dir);
    } catch (const homsafe::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code() == homsafe::Err::DivergenceDetected ? kExitDivergence : kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
