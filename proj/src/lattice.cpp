#include "fpp/lattice.hpp"

#include <unordered_set>

#include "json.hpp"

namespace fpp {

bool LatticePath::self_avoiding() const {
    std::unordered_set<Vertex, VertexHash> seen;
    seen.reserve(vertices.size() * 2);
    for (const auto& v : vertices)
        if (!seen.insert(v).second) return false;
    return true;
}

std::string to_json(const Vertex& v) {
    return nlohmann::json::array({v.x, v.y}).dump();
}

std::string to_json(const Region& r) {
    nlohmann::json j{{"x_min", r.x_min}, {"x_max", r.x_max}, {"y_min", r.y_min}, {"y_max", r.y_max}};
    return j.dump();
}

std::string to_json(const LatticePath& p) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& v : p.vertices) arr.push_back({v.x, v.y});
    return arr.dump();
}

std::string path_to_csv(const LatticePath& p) {
    std::string out = "x,y\n";
    for (const auto& v : p.vertices) {
        out += std::to_string(v.x);
        out += ',';
        out += std::to_string(v.y);
        out += '\n';
    }
    return out;
}

}  // namespace fpp
