#pragma once

#include "crnet/bath.hpp"
#include "crnet/states.hpp"
#include "crnet/topology.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace crnet {

struct NetworkSpec {
    std::string family;  // path | hypercube | engineered_chain | custom
    int length = 2;      // path
    int theta = 1;       // hypercube
    int g = 1;           // hypercube
    int n = 2;           // engineered_chain
    double kappa = 1.0;  // path, hypercube, custom
    double lambda = 1.0; // engineered_chain
    double omega = 0.0;  // resonator frequency
    Eigen::MatrixXd adjacency;  // custom
    int max_nodes = default_max_nodes;
};

struct RunSpec {
    std::optional<double> time;
    std::optional<double> time_factor;
    std::optional<double> tolerance;
    std::optional<std::uint64_t> seed;
    std::optional<long> samples;
    std::optional<std::string> out;
    std::optional<std::vector<double>> lambda_grid;
    std::optional<std::vector<double>> temperature_grid;
    std::optional<int> m;
    std::optional<double> tau;
    std::optional<double> temperature;
    std::optional<int> chain_n;
    std::optional<double> t_max;
};

struct Scenario {
    std::optional<NetworkSpec> network;
    std::optional<BathSpec> bath;
    std::vector<NodeState> state;
    RunSpec run;
};

/// Parses a scenario document. Relative bath CSV paths resolve against
/// `base_dir`. Throws InputError on any schema violation.
Scenario parse_scenario(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
Scenario load_scenario(const std::filesystem::path& path);
nlohmann::json to_json(const Scenario& s);

NodeState parse_node_state(const nlohmann::json& j);
nlohmann::json to_json(const NodeState& s);

/// Coupling matrix for the network block.
CouplingMatrix build_coupling(const NetworkSpec& net);
/// kappa for graph networks, lambda for engineered chains.
double coupling_parameter(const NetworkSpec& net);

/// "%.12g"
std::string format_real(double x);
/// x rounded to 12 significant digits.
double round12(double x);
nlohmann::json complex_json(cplx z);

}  // namespace crnet
