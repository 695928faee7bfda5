#pragma once

// Scenario file parsing and serialization, trajectory CSV emission, and JSON
// export. The scenario format is a flat plain-text document of dotted
// `key = value` lines with `[a, b]` lists and `{ k = v, ... }` inline tables;
// serialization is canonical so serialize(parse(serialize(s))) is
// byte-identical.

#include <iosfwd>
#include <string>

#include "homsafe/sim.hpp"

namespace homsafe {

class ParseError : public std::runtime_error {
  public:
    ParseError(int line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    [[nodiscard]] int line() const noexcept { return line_; }

  private:
    int line_;
};

Scenario parse_scenario(const std::string& text);
Scenario load_scenario_file(const std::string& path);

std::string serialize_scenario(const Scenario& s);

/// JSON rendering of the scenario for machine pipelines.
std::string scenario_to_json(const Scenario& s);

/// Fixed-order CSV: t,x1..xn,u,u_nom,homnorm,r_t,phi1..phin,in_omega,
/// in_omega_r,in_theta,override,at_origin. Floats printed with 17 significant
/// digits, flags as 0/1.
void write_trajectory_csv(const Trajectory& tr, std::ostream& os);

std::string controller_name(ControllerKind c);
std::string filter_mode_name(FilterMode m);
ControllerKind controller_from_name(const std::string& name);
FilterMode filter_mode_from_name(const std::string& name);

}  // namespace homsafe
