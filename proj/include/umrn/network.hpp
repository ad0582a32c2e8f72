#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "umrn/mark.hpp"

namespace umrn {

/// Errors thrown by graph operations carry a short machine-readable code.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(code + ": " + what), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

/// Undirected edge with one mark at each endpoint. (u,v,mu,mv) and
/// (v,u,mv,mu) denote the same edge; loops (u == v) are allowed and
/// contribute 2 to the degree.
struct Edge {
    std::uint32_t u = 0, v = 0;
    Mark mu, mv;
};

/// Finite marked multigraph.
struct Network {
    std::vector<Mark> vertex_marks;
    std::vector<Edge> edges;

    std::uint32_t vertex_count() const { return static_cast<std::uint32_t>(vertex_marks.size()); }

    void add_vertex(Mark m = {}) { vertex_marks.push_back(std::move(m)); }
    void add_edge(std::uint32_t u, std::uint32_t v, Mark mu = {}, Mark mv = {}) {
        edges.push_back(Edge{u, v, std::move(mu), std::move(mv)});
    }
};

/// A half-edge as seen from one endpoint.
struct HalfEdge {
    std::uint32_t edge = 0;    // index into Network::edges
    std::uint32_t other = 0;   // the opposite endpoint
    bool from_u = true;        // this end is the edge's u end
};

/// Incidence lists; a loop appears twice in its vertex's list, so
/// incidence[v].size() is the degree of v with the loop-counts-2 rule.
std::vector<std::vector<HalfEdge>> make_incidence(const Network& g);

inline const Mark& mark_here(const Network& g, const HalfEdge& h) {
    const Edge& e = g.edges[h.edge];
    return h.from_u ? e.mu : e.mv;
}
inline const Mark& mark_there(const Network& g, const HalfEdge& h) {
    const Edge& e = g.edges[h.edge];
    return h.from_u ? e.mv : e.mu;
}

std::vector<std::uint32_t> degrees(const Network& g);

/// BFS distances from `start`; unreachable = UINT32_MAX.
std::vector<std::uint32_t> bfs_distances(const Network& g, std::uint32_t start);

bool is_connected(const Network& g);

constexpr std::uint32_t kUnboundedRadius = std::numeric_limits<std::uint32_t>::max();

/// A connected network with a distinguished root. validity_radius = R means
/// the object is the radius-R ball of something possibly larger; operations
/// touching vertices at distance >= R must fail loudly rather than pretend
/// the truncation is the whole graph.
struct RootedNetwork {
    Network net;
    std::uint32_t root = 0;
    std::uint32_t validity_radius = kUnboundedRadius;

    bool truncated() const { return validity_radius != kUnboundedRadius; }
};

/// Induced subnetwork on the vertices within distance r of the root,
/// rooted at the (relabeled) root, validity_radius = r.
RootedNetwork ball(const RootedNetwork& g, std::uint32_t r);

/// Component of `root` in a possibly disconnected network, as a RootedNetwork.
RootedNetwork component_of(const Network& g, std::uint32_t root,
                           std::uint32_t validity = kUnboundedRadius);

/// JSON round-trip in the documented schema:
/// {"vertices":[{"mark":[...]}...],"edges":[{"u":..,"v":..,"mu":[..],"mv":[..]}...],
///  "root":i,"radius":R|null}
std::string to_json_string(const RootedNetwork& g);
RootedNetwork rooted_network_from_json(const std::string& text);

// small builders used all over the tests and generators
Network path_network(std::uint32_t n);
Network cycle_network(std::uint32_t n);
Network star_network(std::uint32_t leaves);
Network complete_network(std::uint32_t n);

}  // namespace umrn
