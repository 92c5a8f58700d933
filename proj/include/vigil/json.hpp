#pragma once

#include <json.hpp>

namespace vigil {
using json = nlohmann::json;
}
