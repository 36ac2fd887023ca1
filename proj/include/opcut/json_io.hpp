#ifndef OPCUT_JSON_IO_HPP
#define OPCUT_JSON_IO_HPP

#include <json.hpp>

#include "opcut/matrix.hpp"

namespace opcut {

// Wire format: {"dim": d, "entries": [[re, im], ...]} row-major.
nlohmann::ordered_json to_json(const OperatorMatrix& m);
OperatorMatrix matrix_from_json(const nlohmann::json& j);

} // namespace opcut

#endif
