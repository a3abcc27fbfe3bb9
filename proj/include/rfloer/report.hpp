#pragma once

#include <string>

#include "json.hpp"

#include "rfloer/exactlin.hpp"

namespace rfloer {

// Integers that fit in a signed long are JSON numbers, larger ones are decimal strings.
nlohmann::json int_to_json(const Int& x);
nlohmann::json matrix_to_json(const IntMatrix& m);
nlohmann::json presentation_to_json(const ZModulePresentation& p);

}  // namespace rfloer
