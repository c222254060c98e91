#include "crnet/scenario.hpp"

#include "crnet/errors.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>

namespace crnet {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    if (!obj.is_object())
        throw InputError(where + " must be a JSON object");
    for (const auto& [key, _] : obj.items())
        if (!allowed.count(key))
            throw InputError("unknown key '" + key + "' in " + where);
}

template <class T>
T get_or(const json& obj, const char* key, T fallback) {
    if (!obj.contains(key))
        return fallback;
    return obj.at(key).get<T>();
}

template <class T>
std::optional<T> get_opt(const json& obj, const char* key) {
    if (!obj.contains(key) || obj.at(key).is_null())
        return std::nullopt;
    return obj.at(key).get<T>();
}

cplx parse_complex(const json& j) {
    if (j.is_number())
        return {j.get<double>(), 0.0};
    if (!j.is_array() || j.size() != 2)
        throw InputError("complex numbers are written as [re, im]");
    return {j.at(0).get<double>(), j.at(1).get<double>()};
}

NetworkSpec parse_network(const json& j) {
    reject_unknown(j, {"family", "length", "theta", "g", "n", "kappa", "lambda", "omega",
                       "adjacency", "max_nodes"},
                   "network");
    NetworkSpec net;
    if (!j.contains("family"))
        throw InputError("network.family is required");
    net.family = j.at("family").get<std::string>();
    net.omega = get_or(j, "omega", 0.0);
    net.max_nodes = get_or(j, "max_nodes", default_max_nodes);

    auto forbid = [&](std::initializer_list<const char*> keys) {
        for (const char* k : keys)
            if (j.contains(k))
                throw InputError(std::string("network.") + k + " is not valid for family '" +
                                 net.family + "'");
    };

    if (net.family == "path") {
        forbid({"theta", "g", "n", "lambda", "adjacency"});
        net.length = get_or(j, "length", 2);
        net.kappa = get_or(j, "kappa", 1.0);
    } else if (net.family == "hypercube") {
        forbid({"length", "n", "lambda", "adjacency"});
        net.theta = get_or(j, "theta", 1);
        net.g = get_or(j, "g", 1);
        net.kappa = get_or(j, "kappa", 1.0);
        if (net.theta != 1 && net.theta != 2)
            throw InputError("hypercube theta must be 1 or 2");
    } else if (net.family == "engineered_chain") {
        forbid({"length", "theta", "g", "kappa", "adjacency"});
        net.n = get_or(j, "n", 2);
        net.lambda = get_or(j, "lambda", 1.0);
    } else if (net.family == "custom") {
        forbid({"length", "theta", "g", "n", "lambda"});
        net.kappa = get_or(j, "kappa", 1.0);
        if (!j.contains("adjacency") || !j.at("adjacency").is_array())
            throw InputError("custom network needs an adjacency matrix");
        const auto& rows = j.at("adjacency");
        const auto n = static_cast<Eigen::Index>(rows.size());
        net.adjacency.resize(n, n);
        for (Eigen::Index u = 0; u < n; ++u) {
            if (rows.at(u).size() != rows.size())
                throw InputError("custom adjacency must be square");
            for (Eigen::Index v = 0; v < n; ++v)
                net.adjacency(u, v) = rows.at(u).at(v).get<double>();
        }
    } else {
        throw InputError("unknown network family '" + net.family + "'");
    }
    build_coupling(net);  // validates parameters
    return net;
}

BathSpec parse_bath(const json& j, const std::filesystem::path& base_dir) {
    reject_unknown(j, {"kind", "gamma", "Gamma", "r", "modes", "csv"}, "bath");
    BathSpec spec;
    spec.r = get_or(j, "r", 1.0);
    const std::string kind = get_or<std::string>(j, "kind", "ohmic");
    if (kind == "ohmic") {
        if (j.contains("modes") || j.contains("csv"))
            throw InputError("Ohmic bath takes gamma and Gamma, not modes");
        spec.kind = OhmicBath{get_or(j, "gamma", 1.0), get_or(j, "Gamma", 1.0)};
    } else if (kind == "discrete") {
        if (j.contains("gamma") || j.contains("Gamma"))
            throw InputError("discrete bath takes modes or csv, not gamma/Gamma");
        if (j.contains("modes") == j.contains("csv"))
            throw InputError("discrete bath needs exactly one of 'modes' or 'csv'");
        DiscreteBath d;
        if (j.contains("modes")) {
            for (const auto& m : j.at("modes")) {
                if (!m.is_array() || m.size() != 2)
                    throw InputError("bath modes are written as [omega, xi_sq]");
                d.modes.push_back({m.at(0).get<double>(), m.at(1).get<double>()});
            }
        } else {
            std::filesystem::path p = j.at("csv").get<std::string>();
            if (p.is_relative() && !base_dir.empty())
                p = base_dir / p;
            d = load_discrete_modes_csv(p);
        }
        spec.kind = std::move(d);
    } else {
        throw InputError("unknown bath kind '" + kind + "'");
    }
    spec.validate();
    return spec;
}

RunSpec parse_run(const json& j) {
    reject_unknown(j, {"time", "time_factor", "tolerance", "seed", "samples", "out", "lambda_grid",
                       "temperature_grid", "m", "tau", "temperature", "chain_n", "t_max"},
                   "run");
    RunSpec r;
    r.time = get_opt<double>(j, "time");
    r.time_factor = get_opt<double>(j, "time_factor");
    r.tolerance = get_opt<double>(j, "tolerance");
    r.seed = get_opt<std::uint64_t>(j, "seed");
    r.samples = get_opt<long>(j, "samples");
    r.out = get_opt<std::string>(j, "out");
    r.lambda_grid = get_opt<std::vector<double>>(j, "lambda_grid");
    r.temperature_grid = get_opt<std::vector<double>>(j, "temperature_grid");
    r.m = get_opt<int>(j, "m");
    r.tau = get_opt<double>(j, "tau");
    r.temperature = get_opt<double>(j, "temperature");
    r.chain_n = get_opt<int>(j, "chain_n");
    r.t_max = get_opt<double>(j, "t_max");
    if (r.time && r.time_factor)
        throw InputError("run.time and run.time_factor are mutually exclusive");
    if (r.m && *r.m < 1)
        throw InputError("run.m must be >= 1");
    if (r.samples && *r.samples < 0)
        throw InputError("run.samples must be >= 0");
    return r;
}

template <class T>
void put_opt(json& j, const char* key, const std::optional<T>& v) {
    if (v)
        j[key] = *v;
}

}  // namespace

NodeState parse_node_state(const json& j) {
    if (!j.is_object() || !j.contains("kind"))
        throw InputError("state descriptors need a 'kind'");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "vacuum") {
        reject_unknown(j, {"kind"}, "vacuum state");
        return Vacuum{};
    }
    if (kind == "fock") {
        reject_unknown(j, {"kind", "coeffs"}, "fock state");
        if (!j.contains("coeffs") || !j.at("coeffs").is_array())
            throw InputError("fock state needs a coeffs array");
        Eigen::VectorXcd c(j.at("coeffs").size());
        for (std::size_t i = 0; i < j.at("coeffs").size(); ++i)
            c(static_cast<Eigen::Index>(i)) = parse_complex(j.at("coeffs").at(i));
        // Scenario files carry 12-digit values; accept and renormalize.
        if (std::abs(c.squaredNorm() - 1.0) > 1e-9)
            throw InputError("fock coefficients are not normalized");
        return FockVector::normalized(std::move(c));
    }
    if (kind == "coherent") {
        reject_unknown(j, {"kind", "alpha"}, "coherent state");
        if (!j.contains("alpha"))
            throw InputError("coherent state needs alpha");
        return CoherentAmplitude{parse_complex(j.at("alpha"))};
    }
    if (kind == "ghz") {
        reject_unknown(j, {"kind", "m"}, "ghz state");
        const int m = get_or(j, "m", 1);
        if (m < 1)
            throw InputError("ghz state needs m >= 1");
        return EntangledTag{m};
    }
    throw InputError("unknown state kind '" + kind + "'");
}

json to_json(const NodeState& s) {
    return std::visit(
        [](const auto& v) -> json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Vacuum>) {
                return {{"kind", "vacuum"}};
            } else if constexpr (std::is_same_v<T, FockVector>) {
                json coeffs = json::array();
                for (Eigen::Index i = 0; i < v.coeffs().size(); ++i)
                    coeffs.push_back(complex_json(v.coeffs()(i)));
                return {{"kind", "fock"}, {"coeffs", coeffs}};
            } else if constexpr (std::is_same_v<T, CoherentAmplitude>) {
                return {{"kind", "coherent"}, {"alpha", complex_json(v.alpha)}};
            } else {
                return {{"kind", "ghz"}, {"m", v.m_photons}};
            }
        },
        s);
}

Scenario parse_scenario(const json& doc, const std::filesystem::path& base_dir) {
    try {
        reject_unknown(doc, {"network", "bath", "state", "run"}, "scenario");
        Scenario s;
        if (doc.contains("network"))
            s.network = parse_network(doc.at("network"));
        if (doc.contains("bath"))
            s.bath = parse_bath(doc.at("bath"), base_dir);
        if (doc.contains("state")) {
            if (!doc.at("state").is_array())
                throw InputError("state must be an array of node descriptors");
            for (const auto& node : doc.at("state"))
                s.state.push_back(parse_node_state(node));
        }
        if (doc.contains("run"))
            s.run = parse_run(doc.at("run"));
        if (s.network && !s.state.empty() &&
            static_cast<int>(s.state.size()) != build_coupling(*s.network).n_nodes)
            throw InputError("state has " + std::to_string(s.state.size()) +
                             " nodes but the network has " +
                             std::to_string(build_coupling(*s.network).n_nodes));
        return s;
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed scenario: ") + e.what());
    }
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open scenario '" + path.string() + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw InputError(path.string() + ": " + e.what());
    }
    return parse_scenario(doc, path.parent_path());
}

json to_json(const Scenario& s) {
    json doc = json::object();
    if (s.network) {
        const auto& n = *s.network;
        json j = {{"family", n.family}, {"omega", n.omega}};
        if (n.max_nodes != default_max_nodes)
            j["max_nodes"] = n.max_nodes;
        if (n.family == "path") {
            j["length"] = n.length;
            j["kappa"] = n.kappa;
        } else if (n.family == "hypercube") {
            j["theta"] = n.theta;
            j["g"] = n.g;
            j["kappa"] = n.kappa;
        } else if (n.family == "engineered_chain") {
            j["n"] = n.n;
            j["lambda"] = n.lambda;
        } else {
            j["kappa"] = n.kappa;
            json rows = json::array();
            for (Eigen::Index u = 0; u < n.adjacency.rows(); ++u) {
                json row = json::array();
                for (Eigen::Index v = 0; v < n.adjacency.cols(); ++v)
                    row.push_back(static_cast<int>(n.adjacency(u, v)));
                rows.push_back(row);
            }
            j["adjacency"] = rows;
        }
        doc["network"] = j;
    }
    if (s.bath) {
        json j = {{"r", s.bath->r}};
        if (const auto* o = std::get_if<OhmicBath>(&s.bath->kind)) {
            j["kind"] = "ohmic";
            j["gamma"] = o->gamma;
            j["Gamma"] = o->cutoff_freq;
        } else {
            j["kind"] = "discrete";
            json modes = json::array();
            for (const auto& m : std::get<DiscreteBath>(s.bath->kind).modes)
                modes.push_back({m.omega, m.xi_sq});
            j["modes"] = modes;
        }
        doc["bath"] = j;
    }
    if (!s.state.empty()) {
        json nodes = json::array();
        for (const auto& node : s.state)
            nodes.push_back(to_json(node));
        doc["state"] = nodes;
    }
    json run = json::object();
    put_opt(run, "time", s.run.time);
    put_opt(run, "time_factor", s.run.time_factor);
    put_opt(run, "tolerance", s.run.tolerance);
    put_opt(run, "seed", s.run.seed);
    put_opt(run, "samples", s.run.samples);
    put_opt(run, "out", s.run.out);
    put_opt(run, "lambda_grid", s.run.lambda_grid);
    put_opt(run, "temperature_grid", s.run.temperature_grid);
    put_opt(run, "m", s.run.m);
    put_opt(run, "tau", s.run.tau);
    put_opt(run, "temperature", s.run.temperature);
    put_opt(run, "chain_n", s.run.chain_n);
    put_opt(run, "t_max", s.run.t_max);
    if (!run.empty())
        doc["run"] = run;
    return doc;
}

CouplingMatrix build_coupling(const NetworkSpec& net) {
    if (net.family == "path")
        return coupling_from_graph(path_graph(net.length), net.kappa);
    if (net.family == "hypercube")
        return coupling_from_graph(
            cartesian_power(path_graph(net.theta + 1), net.g, net.max_nodes), net.kappa);
    if (net.family == "engineered_chain")
        return engineered_chain(net.n, net.lambda, net.max_nodes);
    if (net.family == "custom")
        return coupling_from_graph(custom_graph(net.adjacency, net.max_nodes), net.kappa);
    throw InputError("unknown network family '" + net.family + "'");
}

double coupling_parameter(const NetworkSpec& net) {
    return net.family == "engineered_chain" ? net.lambda : net.kappa;
}

std::string format_real(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

double round12(double x) {
    return std::strtod(format_real(x).c_str(), nullptr);
}

json complex_json(cplx z) {
    return json::array({round12(z.real()), round12(z.imag())});
}

}  // namespace crnet
