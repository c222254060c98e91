#include "crnet/topology.hpp"

#include "crnet/errors.hpp"

#include <cmath>

namespace crnet {

namespace {

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

void check_adjacency(const Eigen::MatrixXd& a) {
    if (a.rows() != a.cols() || a.rows() == 0)
        throw InputError("adjacency must be a non-empty square matrix");
    for (Eigen::Index u = 0; u < a.rows(); ++u) {
        if (a(u, u) != 0.0)
            throw InputError("adjacency must have a zero diagonal");
        for (Eigen::Index v = 0; v < a.cols(); ++v) {
            if (a(u, v) != 0.0 && a(u, v) != 1.0)
                throw InputError("adjacency entries must be 0 or 1");
            if (a(u, v) != a(v, u))
                throw InputError("adjacency must be symmetric");
        }
    }
}

}  // namespace

std::string FamilyTag::name() const {
    switch (kind) {
        case Family::path2: return "path2";
        case Family::path3: return "path3";
        case Family::hypercube:
            return "hypercube(theta=" + std::to_string(theta) + ",g=" + std::to_string(g) + ")";
        case Family::engineered_chain: return "engineered_chain(N=" + std::to_string(n) + ")";
        case Family::custom: return "custom";
    }
    return "custom";
}

int Graph::degree(int node) const {
    return static_cast<int>(adjacency.row(node).sum());
}

int Graph::edge_count() const {
    return static_cast<int>(adjacency.sum() / 2.0);
}

Graph path_graph(int length) {
    if (length != 2 && length != 3)
        throw InputError("uniform path building blocks have 2 or 3 nodes, got " +
                         std::to_string(length));
    Graph g;
    g.n_nodes = length;
    g.adjacency = Eigen::MatrixXd::Zero(length, length);
    for (int u = 0; u + 1 < length; ++u) {
        g.adjacency(u, u + 1) = 1.0;
        g.adjacency(u + 1, u) = 1.0;
    }
    g.family.kind = length == 2 ? Family::path2 : Family::path3;
    g.family.theta = length - 1;
    g.family.g = 1;
    return g;
}

Graph cartesian_power(const Graph& base, int g, int max_nodes) {
    if (base.family.kind != Family::path2 && base.family.kind != Family::path3)
        throw InputError("cartesian_power expects a P2 or P3 base graph");
    if (g < 1)
        throw InputError("cartesian power must be >= 1");

    const int b = base.n_nodes;
    long long n = 1;
    for (int j = 0; j < g; ++j) {
        n *= b;
        if (n > max_nodes)
            throw InputError("network of " + std::to_string(b) + "^" + std::to_string(g) +
                             " nodes exceeds the limit of " + std::to_string(max_nodes));
    }

    // A(G) = sum_j I^(x)j (x) A_base (x) I^(x)(g-j-1)
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(n, n);
    for (int j = 0; j < g; ++j) {
        Eigen::MatrixXd term = Eigen::MatrixXd::Identity(1, 1);
        for (int f = 0; f < g; ++f)
            term = kron(term, f == j ? base.adjacency : Eigen::MatrixXd::Identity(b, b).eval());
        sum += term;
    }

    Graph out;
    out.n_nodes = static_cast<int>(n);
    out.adjacency = std::move(sum);
    out.family = FamilyTag{Family::hypercube, b - 1, g, static_cast<int>(n)};
    return out;
}

Graph custom_graph(const Eigen::MatrixXd& adjacency, int max_nodes) {
    check_adjacency(adjacency);
    if (adjacency.rows() > max_nodes)
        throw InputError("network exceeds the limit of " + std::to_string(max_nodes) + " nodes");
    Graph g;
    g.n_nodes = static_cast<int>(adjacency.rows());
    g.adjacency = adjacency;
    g.family = FamilyTag{Family::custom, 0, 0, g.n_nodes};
    return g;
}

CouplingMatrix engineered_chain(int n_nodes, double lambda, int max_nodes) {
    if (n_nodes < 2)
        throw InputError("engineered chain needs at least 2 nodes");
    if (n_nodes > max_nodes)
        throw InputError("network exceeds the limit of " + std::to_string(max_nodes) + " nodes");
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw InputError("engineered chain lambda must be positive");

    CouplingMatrix c;
    c.n_nodes = n_nodes;
    c.k = Eigen::MatrixXd::Zero(n_nodes, n_nodes);
    for (int u = 1; u < n_nodes; ++u) {
        const double kappa_u = lambda * std::sqrt(static_cast<double>(u) * (n_nodes - u)) / 2.0;
        c.k(u - 1, u) = kappa_u;
        c.k(u, u - 1) = kappa_u;
    }
    c.family = FamilyTag{Family::engineered_chain, 0, 0, n_nodes};
    c.lambda = lambda;
    return c;
}

CouplingMatrix coupling_from_graph(const Graph& graph, double kappa) {
    if (!(kappa > 0.0) || !std::isfinite(kappa))
        throw InputError("kappa must be positive");
    CouplingMatrix c;
    c.n_nodes = graph.n_nodes;
    c.k = kappa * graph.adjacency;
    c.family = graph.family;
    c.uniform_kappa = kappa;
    return c;
}

int antipode(int n_nodes, int node) {
    if (node < 0 || node >= n_nodes)
        throw InputError("node index out of range");
    return n_nodes - 1 - node;
}

}  // namespace crnet
