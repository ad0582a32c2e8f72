#include "umrn/network.hpp"

#include <algorithm>
#include <deque>

#include <nlohmann/json.hpp>

namespace umrn {

std::vector<std::vector<HalfEdge>> make_incidence(const Network& g) {
    std::vector<std::vector<HalfEdge>> inc(g.vertex_count());
    for (std::uint32_t i = 0; i < g.edges.size(); ++i) {
        const Edge& e = g.edges[i];
        if (e.u >= g.vertex_count() || e.v >= g.vertex_count())
            throw Error("invalid-endpoint", "edge endpoint out of range");
        inc[e.u].push_back(HalfEdge{i, e.v, true});
        inc[e.v].push_back(HalfEdge{i, e.u, false});
    }
    return inc;
}

std::vector<std::uint32_t> degrees(const Network& g) {
    std::vector<std::uint32_t> deg(g.vertex_count(), 0);
    for (const Edge& e : g.edges) {
        deg[e.u] += 1;
        deg[e.v] += 1;  // a loop hits both branches, contributing 2
    }
    return deg;
}

std::vector<std::uint32_t> bfs_distances(const Network& g, std::uint32_t start) {
    auto inc = make_incidence(g);
    std::vector<std::uint32_t> dist(g.vertex_count(), kUnboundedRadius);
    std::deque<std::uint32_t> queue;
    dist[start] = 0;
    queue.push_back(start);
    while (!queue.empty()) {
        std::uint32_t v = queue.front();
        queue.pop_front();
        for (const HalfEdge& h : inc[v]) {
            if (dist[h.other] == kUnboundedRadius) {
                dist[h.other] = dist[v] + 1;
                queue.push_back(h.other);
            }
        }
    }
    return dist;
}

bool is_connected(const Network& g) {
    if (g.vertex_count() == 0) return false;
    auto dist = bfs_distances(g, 0);
    return std::find(dist.begin(), dist.end(), kUnboundedRadius) == dist.end();
}

namespace {

RootedNetwork induced_on(const Network& g, const std::vector<std::uint32_t>& keep,
                         std::uint32_t root_old, std::uint32_t validity) {
    std::vector<std::uint32_t> newid(g.vertex_count(), kUnboundedRadius);
    RootedNetwork out;
    out.validity_radius = validity;
    for (std::uint32_t i = 0; i < keep.size(); ++i) {
        newid[keep[i]] = i;
        out.net.add_vertex(g.vertex_marks[keep[i]]);
    }
    for (const Edge& e : g.edges) {
        if (newid[e.u] != kUnboundedRadius && newid[e.v] != kUnboundedRadius)
            out.net.add_edge(newid[e.u], newid[e.v], e.mu, e.mv);
    }
    out.root = newid[root_old];
    return out;
}

}  // namespace

RootedNetwork ball(const RootedNetwork& g, std::uint32_t r) {
    if (g.truncated() && r > g.validity_radius)
        throw Error("radius-exceeds-validity",
                    "requested radius " + std::to_string(r) + " > validity " +
                        std::to_string(g.validity_radius));
    auto dist = bfs_distances(g.net, g.root);
    std::vector<std::uint32_t> keep;
    for (std::uint32_t v = 0; v < g.net.vertex_count(); ++v)
        if (dist[v] <= r) keep.push_back(v);
    return induced_on(g.net, keep, g.root, r);
}

RootedNetwork component_of(const Network& g, std::uint32_t root, std::uint32_t validity) {
    if (root >= g.vertex_count()) throw Error("invalid-root", "root index out of range");
    auto dist = bfs_distances(g, root);
    std::vector<std::uint32_t> keep;
    for (std::uint32_t v = 0; v < g.vertex_count(); ++v)
        if (dist[v] != kUnboundedRadius) keep.push_back(v);
    return induced_on(g, keep, root, validity);
}

std::string to_json_string(const RootedNetwork& g) {
    nlohmann::json j;
    j["vertices"] = nlohmann::json::array();
    for (const Mark& m : g.net.vertex_marks) j["vertices"].push_back({{"mark", m}});
    j["edges"] = nlohmann::json::array();
    for (const Edge& e : g.net.edges)
        j["edges"].push_back({{"u", e.u}, {"v", e.v}, {"mu", e.mu}, {"mv", e.mv}});
    j["root"] = g.root;
    if (g.truncated())
        j["radius"] = g.validity_radius;
    else
        j["radius"] = nullptr;
    return j.dump();
}

RootedNetwork rooted_network_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    RootedNetwork g;
    for (const auto& v : j.at("vertices")) g.net.add_vertex(v.at("mark").get<Mark>());
    for (const auto& e : j.at("edges"))
        g.net.add_edge(e.at("u").get<std::uint32_t>(), e.at("v").get<std::uint32_t>(),
                       e.at("mu").get<Mark>(), e.at("mv").get<Mark>());
    g.root = j.at("root").get<std::uint32_t>();
    g.validity_radius = j.at("radius").is_null() ? kUnboundedRadius
                                                 : j.at("radius").get<std::uint32_t>();
    if (g.root >= g.net.vertex_count())
        throw Error("invalid-root", "root index out of range");
    return g;
}

Network path_network(std::uint32_t n) {
    Network g;
    for (std::uint32_t i = 0; i < n; ++i) g.add_vertex();
    for (std::uint32_t i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
    return g;
}

Network cycle_network(std::uint32_t n) {
    Network g = path_network(n);
    if (n >= 2) g.add_edge(n - 1, 0);
    return g;
}

Network star_network(std::uint32_t leaves) {
    Network g;
    g.add_vertex();
    for (std::uint32_t i = 0; i < leaves; ++i) {
        g.add_vertex();
        g.add_edge(0, i + 1);
    }
    return g;
}

Network complete_network(std::uint32_t n) {
    Network g;
    for (std::uint32_t i = 0; i < n; ++i) g.add_vertex();
    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t j = i + 1; j < n; ++j) g.add_edge(i, j);
    return g;
}

}  // namespace umrn
