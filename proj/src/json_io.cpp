#include "opcut/json_io.hpp"

namespace opcut {

nlohmann::ordered_json to_json(const OperatorMatrix& m) {
    nlohmann::ordered_json j;
    j["dim"] = m.dim();
    auto entries = nlohmann::ordered_json::array();
    for (const cxd& z : m.entries())
        entries.push_back({z.real(), z.imag()});
    j["entries"] = std::move(entries);
    return j;
}

OperatorMatrix matrix_from_json(const nlohmann::json& j) {
    const std::size_t dim = j.at("dim").get<std::size_t>();
    const auto& entries = j.at("entries");
    if (entries.size() != dim * dim)
        throw IoError("entry count does not match dim^2");
    std::vector<cxd> data;
    data.reserve(dim * dim);
    for (const auto& e : entries)
        data.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
    return OperatorMatrix(dim, std::move(data));
}

} // namespace opcut
