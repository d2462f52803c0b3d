#pragma once

// Core lattice geometry: vertices, edges, rectangular regions and lattice
// paths on the square lattice Z^2.

#include <cstdint>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fpp {

struct Vertex {
    int x = 0;
    int y = 0;

    friend bool operator==(const Vertex&, const Vertex&) = default;
    friend auto operator<=>(const Vertex&, const Vertex&) = default;
};

inline int l1_dist(Vertex a, Vertex b) {
    return std::abs(a.x - b.x) + std::abs(a.y - b.y);
}

enum class Orientation : uint8_t { horizontal = 0, vertical = 1 };

// Canonical edge id: the edge from (x,y) to (x+1,y) when horizontal, or to
// (x,y+1) when vertical. Every lattice edge has exactly one EdgeId.
struct EdgeId {
    int x = 0;
    int y = 0;
    Orientation orient = Orientation::horizontal;

    friend bool operator==(const EdgeId&, const EdgeId&) = default;

    Vertex a() const { return {x, y}; }
    Vertex b() const {
        return orient == Orientation::horizontal ? Vertex{x + 1, y} : Vertex{x, y + 1};
    }
};

// Canonical edge between two adjacent vertices.
inline EdgeId edge_between(Vertex u, Vertex v) {
    if (l1_dist(u, v) != 1) throw std::invalid_argument("edge_between: vertices not adjacent");
    if (u.x + 1 == v.x) return {u.x, u.y, Orientation::horizontal};
    if (v.x + 1 == u.x) return {v.x, v.y, Orientation::horizontal};
    if (u.y + 1 == v.y) return {u.x, u.y, Orientation::vertical};
    return {v.x, v.y, Orientation::vertical};
}

struct VertexHash {
    size_t operator()(const Vertex& v) const {
        uint64_t k = (uint64_t(uint32_t(v.x)) << 32) | uint32_t(v.y);
        k *= 0x9e3779b97f4a7c15ull;
        k ^= k >> 29;
        return size_t(k);
    }
};

struct EdgeIdHash {
    size_t operator()(const EdgeId& e) const {
        uint64_t k = (uint64_t(uint32_t(e.x)) << 32) | uint32_t(e.y);
        k = (k ^ (uint64_t(e.orient) << 1)) * 0xbf58476d1ce4e5b9ull;
        k ^= k >> 31;
        return size_t(k);
    }
};

// Axis-aligned rectangle of lattice vertices, bounds inclusive.
struct Region {
    int x_min = 0;
    int x_max = 0;
    int y_min = 0;
    int y_max = 0;

    friend bool operator==(const Region&, const Region&) = default;

    bool contains(Vertex v) const {
        return v.x >= x_min && v.x <= x_max && v.y >= y_min && v.y <= y_max;
    }
    int64_t width() const { return int64_t(x_max) - x_min + 1; }
    int64_t height() const { return int64_t(y_max) - y_min + 1; }
    int64_t vertex_count() const { return width() * height(); }
    // Distance from v to the nearest side of the region boundary.
    int margin_of(Vertex v) const {
        int m = v.x - x_min;
        m = std::min(m, x_max - v.x);
        m = std::min(m, v.y - y_min);
        m = std::min(m, y_max - v.y);
        return m;
    }
};

// Bounding box of two vertices inflated by `margin` on every side.
inline Region box_around(Vertex u, Vertex v, int margin) {
    return {std::min(u.x, v.x) - margin, std::max(u.x, v.x) + margin,
            std::min(u.y, v.y) - margin, std::max(u.y, v.y) + margin};
}

// A lattice path: ordered vertex sequence, edges implied between consecutive
// vertices. Consecutive vertices must be at Euclidean distance 1 and the
// sequence must be self-avoiding; validate() checks both.
struct LatticePath {
    std::vector<Vertex> vertices;

    size_t vertex_count() const { return vertices.size(); }
    size_t edge_count() const { return vertices.empty() ? 0 : vertices.size() - 1; }
    Vertex front() const { return vertices.front(); }
    Vertex back() const { return vertices.back(); }

    EdgeId edge(size_t i) const { return edge_between(vertices[i], vertices[i + 1]); }

    bool adjacent_steps() const {
        for (size_t i = 0; i + 1 < vertices.size(); ++i)
            if (l1_dist(vertices[i], vertices[i + 1]) != 1) return false;
        return true;
    }
    bool self_avoiding() const;
    void validate() const {
        if (vertices.empty()) throw std::invalid_argument("path: empty vertex sequence");
        if (!adjacent_steps()) throw std::invalid_argument("path: non-adjacent consecutive vertices");
        if (!self_avoiding()) throw std::invalid_argument("path: repeated vertex");
    }

    // Total time of the path under an edge-weight function, summed in path
    // order from front() to back().
    double time(const std::function<double(EdgeId)>& weight) const {
        double t = 0.0;
        for (size_t i = 0; i + 1 < vertices.size(); ++i) t += weight(edge(i));
        return t;
    }
};

std::string to_json(const Vertex& v);
std::string to_json(const Region& r);
std::string to_json(const LatticePath& p);
std::string path_to_csv(const LatticePath& p);

}  // namespace fpp
