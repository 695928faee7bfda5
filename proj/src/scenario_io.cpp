#include "homsafe/scenario_io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace homsafe {

namespace {

std::string trim(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt_list(const Vec& v) {
    std::string out = "[";
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += fmt(v[i]);
    }
    return out + "]";
}

double parse_number(const std::string& s, int line) {
    try {
        size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ParseError(line, "expected a number, got '" + s + "'");
    }
}

Vec parse_list(const std::string& s, int line) {
    if (s.size() < 2 || s.front() != '[' || s.back() != ']')
        throw ParseError(line, "expected a [..] list, got '" + s + "'");
    Vec out;
    std::string body = s.substr(1, s.size() - 2);
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        out.push_back(parse_number(item, line));
    }
    return out;
}

std::map<std::string, std::string> parse_inline_table(const std::string& s, int line) {
    if (s.size() < 2 || s.front() != '{' || s.back() != '}')
        throw ParseError(line, "expected a {..} table, got '" + s + "'");
    std::map<std::string, std::string> out;
    std::stringstream ss(s.substr(1, s.size() - 2));
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        const size_t eq = item.find('=');
        if (eq == std::string::npos) throw ParseError(line, "table entry without '=': '" + item + "'");
        out[trim(item.substr(0, eq))] = trim(item.substr(eq + 1));
    }
    return out;
}

}  // namespace

std::string controller_name(ControllerKind c) {
    switch (c) {
        case ControllerKind::Linear: return "linear";
        case ControllerKind::Homogeneous: return "homogeneous";
        case ControllerKind::Mixed: return "mixed";
        case ControllerKind::Filtered: return "filtered";
    }
    return "homogeneous";
}

ControllerKind controller_from_name(const std::string& name) {
    if (name == "linear") return ControllerKind::Linear;
    if (name == "homogeneous") return ControllerKind::Homogeneous;
    if (name == "mixed") return ControllerKind::Mixed;
    if (name == "filtered") return ControllerKind::Filtered;
    throw Error(Err::InvalidInput, "unknown controller '" + name + "'");
}

std::string filter_mode_name(FilterMode m) {
    switch (m) {
        case FilterMode::Off: return "Off";
        case FilterMode::MinLinear: return "MinLinear";
        case FilterMode::MinHom: return "MinHom";
        case FilterMode::FnTSf: return "FnTSf";
        case FilterMode::FxTSf: return "FxTSf";
        case FilterMode::Mixed: return "Mixed";
    }
    return "FnTSf";
}

FilterMode filter_mode_from_name(const std::string& name) {
    if (name == "Off") return FilterMode::Off;
    if (name == "MinLinear") return FilterMode::MinLinear;
    if (name == "MinHom") return FilterMode::MinHom;
    if (name == "FnTSf") return FilterMode::FnTSf;
    if (name == "FxTSf") return FilterMode::FxTSf;
    if (name == "Mixed") return FilterMode::Mixed;
    throw Error(Err::InvalidInput, "unknown filter mode '" + name + "'");
}

Scenario parse_scenario(const std::string& text) {
    Scenario s;
    bool have_x0 = false;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(lineno, "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty()) throw ParseError(lineno, "empty key or value");

        try {
            if (key == "n") {
                s.n = static_cast<int>(parse_number(val, lineno));
            } else if (key == "x0") {
                s.x0 = parse_list(val, lineno);
                have_x0 = true;
            } else if (key == "controller") {
                s.controller = controller_from_name(val);
            } else if (key == "filter.mode") {
                s.filter.mode = filter_mode_from_name(val);
            } else if (key == "filter.c") {
                s.filter.c = parse_list(val, lineno);
            } else if (key == "filter.r_min") {
                s.filter.r_min = parse_number(val, lineno);
            } else if (key == "T") {
                s.settling_time = parse_number(val, lineno);
            } else if (key == "r") {
                s.radius = parse_number(val, lineno);
            } else if (key == "alpha") {
                s.alpha = parse_number(val, lineno);
            } else if (key == "lambda") {
                s.lambda = parse_number(val, lineno);
            } else if (key == "nominal.preset") {
                if (val == "paperV") {
                    s.nominal.kind = Nominal::Kind::PaperV;
                } else if (val == "zero") {
                    s.nominal.kind = Nominal::Kind::Zero;
                } else {
                    throw ParseError(lineno, "unknown nominal preset '" + val + "'");
                }
            } else if (key == "nominal.constant") {
                s.nominal.kind = Nominal::Kind::Constant;
                s.nominal.value = parse_number(val, lineno);
            } else if (key == "nominal.sinusoid") {
                auto tbl = parse_inline_table(val, lineno);
                s.nominal.kind = Nominal::Kind::Sinusoid;
                for (const auto& [k, v] : tbl) {
                    if (k == "amp")
                        s.nominal.amp = parse_number(v, lineno);
                    else if (k == "freq")
                        s.nominal.freq = parse_number(v, lineno);
                    else if (k == "offset")
                        s.nominal.offset = parse_number(v, lineno);
                    else
                        throw ParseError(lineno, "unknown sinusoid field '" + k + "'");
                }
            } else if (key == "t_end") {
                s.t_end = parse_number(val, lineno);
            } else if (key == "dt") {
                s.dt = parse_number(val, lineno);
            } else if (key == "eps_origin") {
                s.eps_origin = parse_number(val, lineno);
            } else if (key == "invariance_slack") {
                s.invariance_slack = parse_number(val, lineno);
            } else {
                throw ParseError(lineno, "unknown key '" + key + "'");
            }
        } catch (const Error& e) {
            throw ParseError(lineno, e.what());
        }
    }
    if (s.n < 1) throw ParseError(lineno, "missing or invalid 'n'");
    if (!have_x0) throw ParseError(lineno, "missing 'x0'");
    if (static_cast<int>(s.x0.size()) != s.n) throw ParseError(lineno, "'x0' length does not match 'n'");
    return s;
}

Scenario load_scenario_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error(Err::InvalidInput, "cannot open scenario file '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_scenario(ss.str());
}

std::string serialize_scenario(const Scenario& s) {
    std::string out;
    out += "n = " + std::to_string(s.n) + "\n";
    out += "x0 = " + fmt_list(s.x0) + "\n";
    out += "controller = " + controller_name(s.controller) + "\n";
    out += "filter.mode = " + filter_mode_name(s.filter.mode) + "\n";
    if (!s.filter.c.empty()) out += "filter.c = " + fmt_list(s.filter.c) + "\n";
    out += "filter.r_min = " + fmt(s.filter.r_min) + "\n";
    out += "T = " + fmt(s.settling_time) + "\n";
    out += "r = " + fmt(s.radius) + "\n";
    if (s.alpha) out += "alpha = " + fmt(*s.alpha) + "\n";
    if (s.lambda) out += "lambda = " + fmt(*s.lambda) + "\n";
    switch (s.nominal.kind) {
        case Nominal::Kind::Zero:
            out += "nominal.preset = zero\n";
            break;
        case Nominal::Kind::PaperV:
            out += "nominal.preset = paperV\n";
            break;
        case Nominal::Kind::Constant:
            out += "nominal.constant = " + fmt(s.nominal.value) + "\n";
            break;
        case Nominal::Kind::Sinusoid:
            out += "nominal.sinusoid = { amp = " + fmt(s.nominal.amp) + ", freq = " + fmt(s.nominal.freq) +
                   ", offset = " + fmt(s.nominal.offset) + " }\n";
            break;
    }
    out += "t_end = " + fmt(s.t_end) + "\n";
    out += "dt = " + fmt(s.dt) + "\n";
    out += "eps_origin = " + fmt(s.eps_origin) + "\n";
    if (s.invariance_slack != 1e-6) out += "invariance_slack = " + fmt(s.invariance_slack) + "\n";
    return out;
}

std::string scenario_to_json(const Scenario& s) {
    nlohmann::json j;
    j["n"] = s.n;
    j["x0"] = s.x0;
    j["controller"] = controller_name(s.controller);
    j["filter"]["mode"] = filter_mode_name(s.filter.mode);
    if (!s.filter.c.empty()) j["filter"]["c"] = s.filter.c;
    j["filter"]["r_min"] = s.filter.r_min;
    j["T"] = s.settling_time;
    j["r"] = s.radius;
    if (s.alpha) j["alpha"] = *s.alpha;
    if (s.lambda) j["lambda"] = *s.lambda;
    switch (s.nominal.kind) {
        case Nominal::Kind::Zero:
            j["nominal"]["preset"] = "zero";
            break;
        case Nominal::Kind::PaperV:
            j["nominal"]["preset"] = "paperV";
            break;
        case Nominal::Kind::Constant:
            j["nominal"]["constant"] = s.nominal.value;
            break;
        case Nominal::Kind::Sinusoid:
            j["nominal"]["sinusoid"] = {{"amp", s.nominal.amp}, {"freq", s.nominal.freq}, {"offset", s.nominal.offset}};
            break;
    }
    j["t_end"] = s.t_end;
    j["dt"] = s.dt;
    j["eps_origin"] = s.eps_origin;
    j["invariance_slack"] = s.invariance_slack;
    return j.dump(2);
}

void write_trajectory_csv(const Trajectory& tr, std::ostream& os) {
    const int n = tr.scenario.n;
    os << "t";
    for (int i = 1; i <= n; ++i) os << ",x" << i;
    os << ",u,u_nom,homnorm,r_t";
    for (int i = 1; i <= n; ++i) os << ",phi" << i;
    os << ",in_omega,in_omega_r,in_theta,override,at_origin\n";
    for (const auto& s : tr.samples) {
        os << fmt(s.t);
        for (int i = 0; i < n; ++i) os << ',' << fmt(s.x[i]);
        os << ',' << fmt(s.u) << ',' << fmt(s.u_nom) << ',' << fmt(s.homnorm) << ',' << fmt(s.r_t);
        for (int i = 0; i < n; ++i) os << ',' << fmt(s.phi[i]);
        os << ',' << int(s.in_omega) << ',' << int(s.in_omega_r) << ',' << int(s.in_theta) << ','
           << int(s.override_active) << ',' << int(s.at_origin) << '\n';
    }
}

}  // namespace homsafe
