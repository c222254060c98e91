#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>

namespace crnet {

enum class Family { path2, path3, hypercube, engineered_chain, custom };

/// Which construction produced a network. `theta` and `g` are meaningful for
/// hypercubes (base path P_{theta+1}, g-fold power); `n` for engineered chains.
struct FamilyTag {
    Family kind = Family::custom;
    int theta = 0;
    int g = 0;
    int n = 0;

    std::string name() const;
    bool operator==(const FamilyTag&) const = default;
};

/// Undirected simple graph stored as a dense 0/1 adjacency matrix.
struct Graph {
    int n_nodes = 0;
    Eigen::MatrixXd adjacency;
    FamilyTag family;

    int degree(int node) const;
    int edge_count() const;
};

/// Real symmetric hopping matrix K of a resonator network.
struct CouplingMatrix {
    int n_nodes = 0;
    Eigen::MatrixXd k;
    FamilyTag family;
    std::optional<double> uniform_kappa;  // graph-based networks
    std::optional<double> lambda;         // engineered chains
};

inline constexpr int default_max_nodes = 4096;

/// P2 or P3 with unit edges. Longer uniform paths are rejected; use
/// engineered_chain for arbitrary lengths.
Graph path_graph(int length);

/// g-fold Cartesian power of P2 or P3. Node m corresponds to the tuple
/// (u_1..u_g) with m = sum_j u_j * base^(g-1-j), so the antipode of m is
/// n_nodes-1-m.
Graph cartesian_power(const Graph& base, int g, int max_nodes = default_max_nodes);

/// Arbitrary symmetric 0/1 adjacency with empty diagonal.
Graph custom_graph(const Eigen::MatrixXd& adjacency, int max_nodes = default_max_nodes);

/// Tridiagonal chain with kappa_u = lambda*sqrt(u(N-u))/2 (1-based u), the
/// matrix of lambda*J_x for spin J=(N-1)/2.
CouplingMatrix engineered_chain(int n_nodes, double lambda, int max_nodes = default_max_nodes);

CouplingMatrix coupling_from_graph(const Graph& graph, double kappa);

/// 0-based mirror partner of `node`.
int antipode(int n_nodes, int node);

}  // namespace crnet
