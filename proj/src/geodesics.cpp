#include "fpp/geodesics.hpp"

#include "json.hpp"

namespace fpp {

std::string to_json(const PassageResult& r) {
    nlohmann::json path = nlohmann::json::array();
    for (const auto& v : r.path.vertices) path.push_back({v.x, v.y});
    nlohmann::json j{
        {"time", r.time},
        {"path", std::move(path)},
        {"region",
         {{"x_min", r.region_used.x_min},
          {"x_max", r.region_used.x_max},
          {"y_min", r.region_used.y_min},
          {"y_max", r.region_used.y_max}}},
        {"boundary_margin", r.boundary_margin},
    };
    return j.dump();
}

}  // namespace fpp
