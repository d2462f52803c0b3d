#include "fpp/bridges.hpp"

#include <algorithm>
#include <optional>
#include <unordered_map>

#include "json.hpp"

namespace fpp {

PathClass classify_ne_se(const LatticePath& path) {
    bool px = false, mx = false, py = false, my = false;
    for (size_t i = 0; i + 1 < path.vertices.size(); ++i) {
        Vertex a = path.vertices[i], b = path.vertices[i + 1];
        if (b.x > a.x) px = true;
        else if (b.x < a.x) mx = true;
        else if (b.y > a.y) py = true;
        else my = true;
    }
    if ((!mx && !my) || (!px && !py)) return PathClass::northeast;
    if ((!mx && !py) || (!px && !my)) return PathClass::southeast;
    return PathClass::neither;
}

std::vector<Vertex> BridgeSegment::segment_vertices() const {
    std::vector<Vertex> out;
    int steps = l1_dist(u, v);
    int sx = (v.x > u.x) - (v.x < u.x);
    int sy = (v.y > u.y) - (v.y < u.y);
    for (int t = 0; t <= steps; ++t) out.push_back({u.x + t * sx, u.y + t * sy});
    return out;
}

std::vector<EdgeId> BridgeSegment::segment_edges() const {
    auto verts = segment_vertices();
    std::vector<EdgeId> out;
    for (size_t i = 0; i + 1 < verts.size(); ++i) out.push_back(edge_between(verts[i], verts[i + 1]));
    return out;
}

namespace {

struct SuffixView {
    const std::vector<Vertex>* vertices = nullptr;
    size_t base = 0;  // global index of the suffix start
    std::unordered_map<Vertex, size_t, VertexHash> position;  // global indices
    std::unordered_set<EdgeId, EdgeIdHash> edges;

    SuffixView(const LatticePath& path, size_t from) : vertices(&path.vertices), base(from) {
        position.reserve((path.vertices.size() - from) * 2);
        for (size_t i = from; i < path.vertices.size(); ++i) position.emplace(path.vertices[i], i);
        for (size_t i = from; i + 1 < path.vertices.size(); ++i)
            edges.insert(edge_between(path.vertices[i], path.vertices[i + 1]));
    }
    size_t size() const { return vertices->size() - base; }
    Vertex at(size_t local) const { return (*vertices)[base + local]; }
};

struct Candidate {
    size_t u_global = 0;
    size_t v_global = 0;
};

// First vertex of the suffix admitting an M-broken bridge for the suffix,
// with the partner met first along the path. Walks the four axis rays from
// each vertex; the nearest suffix vertex on a ray is the only possible
// partner there, and an adjacent partner needs the connecting edge to be
// absent from the suffix.
std::optional<Candidate> first_bridge(const SuffixView& s, int M) {
    const int maxdist = 2 * M - 2;
    if (maxdist < 1) return std::nullopt;
    const int dx[4] = {1, -1, 0, 0};
    const int dy[4] = {0, 0, 1, -1};
    for (size_t i = 0; i < s.size(); ++i) {
        Vertex u = s.at(i);
        size_t best_v = SIZE_MAX;
        for (int k = 0; k < 4; ++k) {
            for (int t = 1; t <= maxdist; ++t) {
                Vertex w{u.x + t * dx[k], u.y + t * dy[k]};
                auto it = s.position.find(w);
                if (it == s.position.end()) continue;
                // w is the nearest suffix vertex on this ray: farther vertices
                // are blocked by it, so the ray contributes at most this pair.
                if (t > 1 || !s.edges.count(edge_between(u, w))) best_v = std::min(best_v, it->second);
                break;
            }
        }
        if (best_v != SIZE_MAX) {
            size_t u_global = s.base + i;
            // At the first admitting vertex every partner lies further along
            // the path; an earlier partner would itself have admitted the
            // (symmetric) bridge.
            if (best_v <= u_global) throw std::logic_error("bridge scan: partner precedes scan vertex");
            return Candidate{u_global, best_v};
        }
    }
    return std::nullopt;
}

BridgeSegment make_segment(Vertex u, Vertex v) {
    BridgeSegment seg;
    seg.u = u;
    seg.v = v;
    seg.orient = (u.y == v.y) ? Orientation::horizontal : Orientation::vertical;
    seg.vertex_count = l1_dist(u, v) + 1;
    return seg;
}

}  // namespace

BrokenBridgeList find_broken_bridges(const LatticePath& path, int M) {
    if (M < 1) throw std::invalid_argument("find_broken_bridges: M must be >= 1");
    path.validate();
    BrokenBridgeList list;
    size_t from = 0;
    while (from < path.vertices.size()) {
        SuffixView suffix(path, from);
        auto found = first_bridge(suffix, M);
        if (!found) break;
        BrokenBridge bb;
        bb.u_index = found->u_global;
        bb.v_index = found->v_global;
        bb.bridge = make_segment(path.vertices[bb.u_index], path.vertices[bb.v_index]);
        bb.loop.vertices.assign(path.vertices.begin() + long(bb.u_index),
                                path.vertices.begin() + long(bb.v_index) + 1);
        list.items.push_back(std::move(bb));
        from = found->v_global;
    }
    return list;
}

std::string to_json(const BrokenBridgeList& list) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& bb : list.items) {
        nlohmann::json loop = nlohmann::json::array();
        for (const auto& v : bb.loop.vertices) loop.push_back({v.x, v.y});
        arr.push_back({{"u", {bb.bridge.u.x, bb.bridge.u.y}},
                       {"v", {bb.bridge.v.x, bb.bridge.v.y}},
                       {"orientation",
                        bb.bridge.orient == Orientation::horizontal ? "horizontal" : "vertical"},
                       {"loop", std::move(loop)}});
    }
    return arr.dump();
}

namespace {

std::vector<Vertex> sorted_unique(std::unordered_set<Vertex, VertexHash>& set) {
    std::vector<Vertex> out(set.begin(), set.end());
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

PathMarks mark_vertices(const LatticePath& path, const std::function<double(EdgeId)>& weight,
                        int M, double z) {
    return mark_vertices(path, weight, M, z, find_broken_bridges(path, M));
}

PathMarks mark_vertices(const LatticePath& path, const std::function<double(EdgeId)>& weight,
                        int M, double z, const BrokenBridgeList& bridges) {
    (void)M;
    if (!(z > 1.0)) throw std::invalid_argument("mark_vertices: z must be > 1");
    std::unordered_set<Vertex, VertexHash> d, dz, sm, smz;
    for (size_t i = 0; i + 1 < path.vertices.size(); ++i) {
        double t = weight(path.edge(i));
        if (t > 1.0) {
            d.insert(path.vertices[i]);
            d.insert(path.vertices[i + 1]);
        }
        if (t > z) {
            dz.insert(path.vertices[i]);
            dz.insert(path.vertices[i + 1]);
        }
    }
    for (const auto& bb : bridges.items) {
        sm.insert(bb.bridge.u);
        sm.insert(bb.bridge.v);
        bool heavy = false;
        for (const auto& e : bb.bridge.segment_edges())
            if (weight(e) > z) heavy = true;
        if (heavy) {
            smz.insert(bb.bridge.u);
            smz.insert(bb.bridge.v);
        }
    }
    PathMarks marks;
    marks.d = sorted_unique(d);
    marks.d_z = sorted_unique(dz);
    marks.s_m = sorted_unique(sm);
    marks.s_m_z = sorted_unique(smz);
    return marks;
}

std::string to_json(const PathMarks& marks) {
    auto arr = [](const std::vector<Vertex>& vs) {
        nlohmann::json a = nlohmann::json::array();
        for (const auto& v : vs) a.push_back({v.x, v.y});
        return a;
    };
    nlohmann::json j{{"d", arr(marks.d)},
                     {"s_m", arr(marks.s_m)},
                     {"d_z", arr(marks.d_z)},
                     {"s_m_z", arr(marks.s_m_z)}};
    return j.dump();
}

CensusCounts census(const PathMarks& marks, int m) {
    if (m < 1) throw std::invalid_argument("census: m must be >= 1");
    auto in_box = [m](Vertex v) { return std::abs(v.x) <= m && std::abs(v.y) <= m; };
    auto count_union = [&](const std::vector<Vertex>& a, const std::vector<Vertex>& b) {
        std::unordered_set<Vertex, VertexHash> u;
        for (const auto& v : a)
            if (in_box(v)) u.insert(v);
        for (const auto& v : b)
            if (in_box(v)) u.insert(v);
        return int64_t(u.size());
    };
    return {count_union(marks.s_m, marks.d), count_union(marks.s_m_z, marks.d_z)};
}

// --- verification ---------------------------------------------------------

namespace {

std::string vertex_str(Vertex v) {
    return "(" + std::to_string(v.x) + "," + std::to_string(v.y) + ")";
}

// Does (u, w) form an M-broken bridge of the path piece described by
// `vertices`/`edges`? Direct definition, used by the independent recheck.
bool is_bridge_pair(Vertex u, Vertex w, int M,
                    const std::unordered_map<Vertex, size_t, VertexHash>& vertices,
                    const std::unordered_set<EdgeId, EdgeIdHash>& edges) {
    if (u == w) return false;
    if (u.x != w.x && u.y != w.y) return false;
    int dist = l1_dist(u, w);
    if (dist + 1 >= 2 * M) return false;
    int sx = (w.x > u.x) - (w.x < u.x);
    int sy = (w.y > u.y) - (w.y < u.y);
    for (int t = 1; t < dist; ++t)
        if (vertices.count(Vertex{u.x + t * sx, u.y + t * sy})) return false;
    if (dist == 1 && edges.count(edge_between(u, w))) return false;
    return true;
}

}  // namespace

std::string check_bridge_definition(const LatticePath& path, const BrokenBridgeList& list, int M) {
    size_t from = 0;
    for (size_t i = 0; i < list.items.size(); ++i) {
        const auto& bb = list.items[i];
        const auto& seg = bb.bridge;
        if (seg.u.x != seg.v.x && seg.u.y != seg.v.y)
            return "bridge " + std::to_string(i) + ": endpoints not axis-aligned";
        if (seg.vertex_count != l1_dist(seg.u, seg.v) + 1 || seg.vertex_count >= 2 * M ||
            seg.vertex_count < 2)
            return "bridge " + std::to_string(i) + ": vertex count out of range";
        if (bb.u_index < from || bb.v_index <= bb.u_index)
            return "bridge " + std::to_string(i) + ": indices out of scan order";
        if (!(path.vertices[bb.u_index] == seg.u) || !(path.vertices[bb.v_index] == seg.v))
            return "bridge " + std::to_string(i) + ": endpoints disagree with path indices";
        if (bb.loop.vertices.size() != bb.v_index - bb.u_index + 1 ||
            !(bb.loop.front() == seg.u) || !(bb.loop.back() == seg.v))
            return "bridge " + std::to_string(i) + ": loop is not the path piece u..v";

        SuffixView suffix(path, from);
        auto segv = seg.segment_vertices();
        for (size_t t = 1; t + 1 < segv.size(); ++t)
            if (suffix.position.count(segv[t]))
                return "bridge " + std::to_string(i) + ": interior vertex " + vertex_str(segv[t]) +
                       " lies on the remaining path";
        for (const auto& e : seg.segment_edges())
            if (suffix.edges.count(e))
                return "bridge " + std::to_string(i) + ": segment edge used by the remaining path";
        from = bb.v_index;
    }
    return "";
}

std::string check_no_skipped_bridges(const LatticePath& path, const BrokenBridgeList& list, int M) {
    size_t from = 0;
    for (size_t i = 0; i <= list.items.size(); ++i) {
        size_t stop = i < list.items.size() ? list.items[i].u_index : path.vertices.size();
        // Direct quadratic recheck of the remaining part from `from`.
        std::unordered_map<Vertex, size_t, VertexHash> pos;
        std::unordered_set<EdgeId, EdgeIdHash> edges;
        for (size_t k = from; k < path.vertices.size(); ++k) pos.emplace(path.vertices[k], k);
        for (size_t k = from; k + 1 < path.vertices.size(); ++k)
            edges.insert(edge_between(path.vertices[k], path.vertices[k + 1]));

        for (size_t a = from; a < stop; ++a) {
            for (const auto& [w, wi] : pos) {
                if (is_bridge_pair(path.vertices[a], w, M, pos, edges))
                    return "scan skipped an admissible bridge at " + vertex_str(path.vertices[a]) +
                           " before selection " + std::to_string(i);
            }
        }
        if (i < list.items.size()) {
            // At u_i the first-met admissible partner must be v_i.
            Vertex u = path.vertices[stop];
            size_t best = SIZE_MAX;
            for (const auto& [w, wi] : pos)
                if (is_bridge_pair(u, w, M, pos, edges)) best = std::min(best, wi);
            if (best != list.items[i].v_index)
                return "selection " + std::to_string(i) + ": partner is not the first met";
            from = list.items[i].v_index;
        }
    }
    return "";
}

std::string check_pairwise_disjoint(const BrokenBridgeList& list) {
    std::unordered_set<EdgeId, EdgeIdHash> loop_edges, bridge_edges;
    for (size_t i = 0; i < list.items.size(); ++i) {
        const auto& bb = list.items[i];
        for (size_t k = 0; k + 1 < bb.loop.vertices.size(); ++k)
            if (!loop_edges.insert(bb.loop.edge(k)).second)
                return "loops share an edge (bridge " + std::to_string(i) + ")";
        for (const auto& e : bb.bridge.segment_edges())
            if (!bridge_edges.insert(e).second)
                return "bridges share an edge (bridge " + std::to_string(i) + ")";
    }
    return "";
}

std::string check_loop_interiors_empty(const LatticePath& path, const BrokenBridgeList& list) {
    for (size_t i = 0; i < list.items.size(); ++i) {
        const auto& bb = list.items[i];
        // Closed lattice polygon: the loop from u to v, then the bridge
        // segment back from v to u.
        std::vector<Vertex> poly = bb.loop.vertices;
        BridgeSegment back = bb.bridge;
        std::swap(back.u, back.v);
        auto ret = back.segment_vertices();
        poly.insert(poly.end(), ret.begin() + 1, ret.end() - 1);

        std::unordered_set<Vertex, VertexHash> on_poly(poly.begin(), poly.end());
        // Vertical polygon edges keyed by lower endpoint.
        std::vector<Vertex> vertical;
        for (size_t k = 0; k < poly.size(); ++k) {
            Vertex a = poly[k], b = poly[(k + 1) % poly.size()];
            if (a.x == b.x) vertical.push_back({a.x, std::min(a.y, b.y)});
        }
        for (const auto& w : path.vertices) {
            if (on_poly.count(w)) continue;
            // Ray from (w.x, w.y + eps) in +x: hits vertical edges with
            // lower endpoint exactly at w.y and x beyond w.x. Exact in
            // integer arithmetic.
            int crossings = 0;
            for (const auto& e : vertical)
                if (e.y == w.y && e.x > w.x) ++crossings;
            if (crossings % 2 == 1)
                return "path vertex " + vertex_str(w) + " lies strictly inside loop " +
                       std::to_string(i);
        }
    }
    return "";
}

std::string check_bridges_have_heavy_edge(const BrokenBridgeList& list,
                                          const std::function<double(EdgeId)>& weight) {
    for (size_t i = 0; i < list.items.size(); ++i) {
        bool heavy = false;
        for (const auto& e : list.items[i].bridge.segment_edges())
            if (weight(e) > 1.0) heavy = true;
        if (!heavy) return "bridge " + std::to_string(i) + " consists of 1-edges only";
    }
    return "";
}

std::string verify_bridge_structure(const LatticePath& path, const BrokenBridgeList& list, int M,
                                    const std::function<double(EdgeId)>& weight, bool geodesic) {
    if (auto err = check_bridge_definition(path, list, M); !err.empty()) return err;
    if (auto err = check_no_skipped_bridges(path, list, M); !err.empty()) return err;
    if (auto err = check_pairwise_disjoint(list); !err.empty()) return err;
    if (auto err = check_loop_interiors_empty(path, list); !err.empty()) return err;
    if (geodesic)
        if (auto err = check_bridges_have_heavy_edge(list, weight); !err.empty()) return err;
    return "";
}

}  // namespace fpp
