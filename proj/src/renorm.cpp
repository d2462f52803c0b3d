#include "fpp/renorm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>

#include "json.hpp"

namespace fpp {

const char* strip_class_name(StripClass c) {
    switch (c) {
        case StripClass::bad: return "bad";
        case StripClass::good_long: return "good-long";
        case StripClass::good_short_flat: return "good-short-flat";
        case StripClass::good_short_nonflat: return "good-short-nonflat";
    }
    return "?";
}

std::pair<LatticePath, LatticePath> split_at_line(const LatticePath& path, int m) {
    size_t hit = SIZE_MAX;
    for (size_t i = 0; i < path.vertices.size(); ++i) {
        if (path.vertices[i].x == m) {
            hit = i;
            break;
        }
    }
    if (hit == SIZE_MAX) throw std::invalid_argument("split_at_line: path never reaches the line");
    LatticePath prefix, suffix;
    prefix.vertices.assign(path.vertices.begin(), path.vertices.begin() + long(hit) + 1);
    suffix.vertices.assign(path.vertices.begin() + long(hit), path.vertices.end());
    return {prefix, suffix};
}

std::set<SquareIndex> fatten(const LatticePath& prefix, int M) {
    if (M < 1) throw std::invalid_argument("fatten: M must be >= 1");
    std::set<SquareIndex> out;
    for (const auto& v : prefix.vertices) out.insert(square_of(v, M));
    return out;
}

bool eight_connected(const std::set<SquareIndex>& squares) {
    if (squares.empty()) return true;
    std::set<SquareIndex> seen;
    std::vector<SquareIndex> stack{*squares.begin()};
    seen.insert(*squares.begin());
    while (!stack.empty()) {
        SquareIndex s = stack.back();
        stack.pop_back();
        for (int dx = -1; dx <= 1; ++dx)
            for (int dy = -1; dy <= 1; ++dy) {
                if (dx == 0 && dy == 0) continue;
                SquareIndex nb{s.wx + dx, s.wy + dy};
                if (squares.count(nb) && !seen.count(nb)) {
                    seen.insert(nb);
                    stack.push_back(nb);
                }
            }
    }
    return seen.size() == squares.size();
}

LatticePath gamma_m(const LatticePath& path, const BrokenBridgeList& bridges, int m) {
    size_t prefix_end = SIZE_MAX;
    for (size_t i = 0; i < path.vertices.size(); ++i)
        if (path.vertices[i].x == m) {
            prefix_end = i;
            break;
        }
    if (prefix_end == SIZE_MAX) throw std::invalid_argument("gamma_m: path never reaches the line");

    LatticePath out;
    out.vertices.push_back(path.vertices.front());
    if (out.vertices.back().x == m) return out;

    size_t i = 0, bi = 0;
    while (true) {
        if (bi < bridges.items.size() && bridges.items[bi].u_index == i) {
            const auto& bb = bridges.items[bi];
            const auto seg = bb.bridge.segment_vertices();
            bool contacts = false;
            for (const auto& sv : seg)
                if (sv.x == m) contacts = true;
            if (contacts) {
                for (size_t t = 1; t < seg.size(); ++t) {
                    out.vertices.push_back(seg[t]);
                    if (seg[t].x == m) return out;
                }
                throw std::logic_error("gamma_m: contact vertex not reached on segment");
            }
            if (bb.v_index > prefix_end) {
                // Loop spans the prefix end and its bridge stays off the
                // line: keep the raw walk, which reaches the line inside
                // this loop.
                ++bi;
                continue;
            }
            for (size_t t = 1; t < seg.size(); ++t) out.vertices.push_back(seg[t]);
            i = bb.v_index;
            ++bi;
            if (path.vertices[i].x == m) return out;
            continue;
        }
        ++i;
        out.vertices.push_back(path.vertices[i]);
        if (path.vertices[i].x == m) return out;
    }
}

namespace {

bool exits_top_bottom(const LatticePath& prefix, int m) {
    for (const auto& v : prefix.vertices) {
        if (std::abs(v.x) >= m) return false;  // side contact first
        if (std::abs(v.y) >= m) return true;
    }
    return false;
}

}  // namespace

std::vector<StripInfo> classify_strips(const LatticePath& surgery, const PathMarks& marks, int M,
                                       int m, double tan_theta1, double delta1) {
    if (M < 1 || m < 1) throw std::invalid_argument("classify_strips: M, m must be >= 1");
    if (!(delta1 > 0.0)) throw std::invalid_argument("classify_strips: delta1 must be > 0");

    // Directly bad strip indices from marked vertices inside B(m), then the
    // two neighbors on each side.
    std::set<int> bad;
    auto mark_bad = [&](const std::vector<Vertex>& vs) {
        for (const auto& v : vs) {
            if (std::abs(v.x) > m || std::abs(v.y) > m) continue;
            int w1 = floor_div(v.x, M);
            for (int d = -2; d <= 2; ++d) bad.insert(w1 + d);
        }
    };
    mark_bad(marks.s_m);
    mark_bad(marks.d);

    // First complete left-to-right crossing of each strip, in walk order.
    struct Crossing {
        size_t begin, end;  // vertex index range [begin, end] in the surgery walk
    };
    std::map<int, Crossing> first_crossing;
    const auto& verts = surgery.vertices;
    size_t run_start = 0;
    auto strip_of = [M](Vertex v) { return floor_div(v.x, M); };
    for (size_t k = 1; k <= verts.size(); ++k) {
        if (k < verts.size() && strip_of(verts[k]) == strip_of(verts[run_start])) continue;
        // run [run_start, k-1] in one strip
        int w1 = strip_of(verts[run_start]);
        if (run_start > 0 && k < verts.size()) {
            bool from_left = verts[run_start - 1].x == M * w1 - 1;
            bool to_right = verts[k].x == M * w1 + M;
            if (from_left && to_right && !first_crossing.count(w1))
                first_crossing[w1] = {run_start, k - 1};
        }
        run_start = k;
    }

    std::vector<StripInfo> out;
    for (int w1 = 1; M * (w1 + 1) <= m; ++w1) {
        StripInfo info;
        info.w1 = w1;
        if (bad.count(w1)) {
            info.cls = StripClass::bad;
            out.push_back(info);
            continue;
        }
        auto it = first_crossing.find(w1);
        if (it == first_crossing.end())
            throw std::logic_error("classify_strips: good strip without a complete crossing");
        info.has_crossing = true;
        info.crossing_begin = it->second.begin;
        info.v1 = verts[it->second.begin];
        info.v2 = verts[it->second.end];
        info.crossing_vertices = int(it->second.end - it->second.begin + 1);
        if (info.crossing_vertices >= 2 * M) {
            info.cls = StripClass::good_long;
        } else {
            long dx = info.v2.x - info.v1.x;
            long dy = info.v2.y - info.v1.y;
            bool flat;
            if (dx == 0)
                flat = dy == 0;  // single-column crossing (M = 1)
            else
                flat = std::abs(double(dy)) <= (tan_theta1 - delta1) * double(dx);
            info.cls = flat ? StripClass::good_short_flat : StripClass::good_short_nonflat;
        }
        out.push_back(info);
    }
    return out;
}

SquareIndex family_shift(int s) {
    if (s < 0 || s >= 49) throw std::invalid_argument("family_shift: s must be 0..48");
    return {s % 7 - 3, s / 7 - 3};
}

namespace {

// Family containing square w: the shift q in {-3..3}^2 congruent to w mod 7.
int family_of(SquareIndex w) {
    int rx = ((w.wx % 7) + 7) % 7;
    int ry = ((w.wy % 7) + 7) % 7;
    int ox = rx > 3 ? rx - 7 : rx;
    int oy = ry > 3 ? ry - 7 : ry;
    return (ox + 3) + 7 * (oy + 3);
}

}  // namespace

std::array<int64_t, 49> census_49(const PathMarks& marks, int M, int m) {
    if (M < 1 || m < 1) throw std::invalid_argument("census_49: M, m must be >= 1");
    std::set<SquareIndex> occupied;
    auto add = [&](const std::vector<Vertex>& vs) {
        for (const auto& v : vs)
            if (std::abs(v.x) <= m && std::abs(v.y) <= m) occupied.insert(square_of(v, M));
    };
    add(marks.s_m_z);
    add(marks.d_z);
    std::array<int64_t, 49> counts{};
    for (const auto& w : occupied) ++counts[size_t(family_of(w))];
    return counts;
}

RenormReport build_renorm_report(const LatticePath& path, const BrokenBridgeList& bridges,
                                 const PathMarks& marks, int M, int m, int n, double z,
                                 double tan_theta1, double delta1) {
    RenormReport rep;
    rep.M = M;
    rep.m = m;
    rep.n = n;
    rep.z = z;
    rep.tan_theta1 = tan_theta1;
    rep.delta1 = delta1;

    auto [prefix, suffix] = split_at_line(path, m);
    rep.prefix_vertices = int64_t(prefix.vertices.size());
    rep.exits_top_bottom_first = exits_top_bottom(prefix, m);
    rep.fattened_count = int64_t(fatten(prefix, M).size());

    LatticePath surgery = gamma_m(path, bridges, m);
    rep.strips = classify_strips(surgery, marks, M, m, tan_theta1, delta1);
    for (const auto& s : rep.strips)
        if (s.cls == StripClass::good_short_flat) ++rep.flat_count;

    auto counts = census(marks, m);
    rep.census_box = counts.marked;
    rep.census_box_z = counts.marked_z;
    rep.family_counts = census_49(marks, M, m);
    return rep;
}

std::string verify_renorm_invariants(const RenormReport& rep, const LatticePath& prefix,
                                     const BrokenBridgeList& bridges) {
    int64_t total = 0;
    for (int64_t c : rep.family_counts) total += c;
    if (total * int64_t(rep.M) * rep.M < rep.census_box_z)
        return "family census below marked-vertex count / M^2";
    if (rep.fattened_count * int64_t(rep.M) * rep.M < rep.prefix_vertices)
        return "fattened square count below prefix size / M^2";
    if (rep.fattened_count < (rep.m + rep.M - 1) / rep.M)
        return "fattened square count below m/M";
    if (!eight_connected(fatten(prefix, rep.M))) return "fattened set not 8-connected";
    for (size_t i = 0; i < bridges.items.size(); ++i) {
        const auto& bb = bridges.items[i];
        SquareIndex wu = square_of(bb.bridge.u, rep.M);
        for (const auto& sv : bb.bridge.segment_vertices()) {
            SquareIndex ws = square_of(sv, rep.M);
            if (std::abs(ws.wx - wu.wx) > 3 || std::abs(ws.wy - wu.wy) > 3)
                return "bridge " + std::to_string(i) + " leaves the 7M-square of its u-endpoint";
        }
    }
    return "";
}

std::string check_good_crossings_are_one_paths(const RenormReport& rep, const LatticePath& surgery,
                                               const std::function<double(EdgeId)>& weight) {
    if (rep.exits_top_bottom_first) return "";
    for (const auto& s : rep.strips) {
        if (s.cls == StripClass::bad) continue;
        for (int k = 0; k + 1 < s.crossing_vertices; ++k) {
            size_t idx = s.crossing_begin + size_t(k);
            double t = weight(edge_between(surgery.vertices[idx], surgery.vertices[idx + 1]));
            if (t != 1.0)
                return "good strip " + std::to_string(s.w1) + " crossing uses an edge of weight " +
                       std::to_string(t);
        }
    }
    return "";
}

std::string check_family_tiling(const Region& window, int M) {
    for (int x = window.x_min; x <= window.x_max; ++x)
        for (int y = window.y_min; y <= window.y_max; ++y) {
            SquareIndex w = square_of({x, y}, M);
            for (int s = 0; s < 49; ++s) {
                // 7M-squares of family s containing (x,y): shifts q = q_s + 7k
                // with q in w + {-3..3}^2. Exactly one k must qualify.
                SquareIndex q = family_shift(s);
                int hits = 0;
                for (int ox = -3; ox <= 3; ++ox)
                    for (int oy = -3; oy <= 3; ++oy) {
                        int cx = w.wx + ox, cy = w.wy + oy;
                        if (((cx - q.wx) % 7 + 7) % 7 == 0 && ((cy - q.wy) % 7 + 7) % 7 == 0) ++hits;
                    }
                if (hits != 1)
                    return "vertex (" + std::to_string(x) + "," + std::to_string(y) +
                           ") covered " + std::to_string(hits) + " times by family " +
                           std::to_string(s);
            }
        }
    return "";
}

std::string to_json(const RenormReport& rep) {
    nlohmann::json strips = nlohmann::json::array();
    for (const auto& s : rep.strips) {
        nlohmann::json j{{"w1", s.w1}, {"class", strip_class_name(s.cls)}};
        if (s.has_crossing) {
            j["v1"] = {s.v1.x, s.v1.y};
            j["v2"] = {s.v2.x, s.v2.y};
            j["crossing_vertices"] = s.crossing_vertices;
        }
        strips.push_back(std::move(j));
    }
    nlohmann::json fam = nlohmann::json::array();
    for (int s = 0; s < 49; ++s) {
        SquareIndex q = family_shift(s);
        fam.push_back({{"s", s + 1}, {"qx", q.wx}, {"qy", q.wy}, {"count", rep.family_counts[size_t(s)]}});
    }
    nlohmann::json j{{"M", rep.M},
                     {"m", rep.m},
                     {"n", rep.n},
                     {"z", rep.z},
                     {"tan_theta1", rep.tan_theta1},
                     {"delta1", rep.delta1},
                     {"exits_top_bottom_first", rep.exits_top_bottom_first},
                     {"flat_count", rep.flat_count},
                     {"fattened_count", rep.fattened_count},
                     {"prefix_vertices", rep.prefix_vertices},
                     {"census_box", rep.census_box},
                     {"census_box_z", rep.census_box_z},
                     {"strips", std::move(strips)},
                     {"families", std::move(fam)}};
    return j.dump();
}

std::string strips_to_csv(const RenormReport& rep) {
    std::string out = "w1,class,v1_x,v1_y,v2_x,v2_y,crossing_vertices\n";
    char buf[160];
    for (const auto& s : rep.strips) {
        if (s.has_crossing)
            std::snprintf(buf, sizeof buf, "%d,%s,%d,%d,%d,%d,%d\n", s.w1, strip_class_name(s.cls),
                          s.v1.x, s.v1.y, s.v2.x, s.v2.y, s.crossing_vertices);
        else
            std::snprintf(buf, sizeof buf, "%d,%s,,,,,\n", s.w1, strip_class_name(s.cls));
        out += buf;
    }
    return out;
}

std::string census_to_csv(const RenormReport& rep) {
    std::string out = "s,qx,qy,count\n";
    char buf[96];
    for (int s = 0; s < 49; ++s) {
        SquareIndex q = family_shift(s);
        std::snprintf(buf, sizeof buf, "%d,%d,%d,%lld\n", s + 1, q.wx, q.wy,
                      (long long)rep.family_counts[size_t(s)]);
        out += buf;
    }
    return out;
}

}  // namespace fpp
