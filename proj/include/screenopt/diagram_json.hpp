#pragma once

#include "screenopt/influence_diagram.hpp"

#include <string>
#include <string_view>

namespace screenopt {

/// Canonical JSON: keys in fixed order, floats with 17 significant digits,
/// missing table rows omitted. parse(emit(d)) re-emits byte-identically.
std::string diagramToJson(const InfluenceDiagram& d);

/// Throws ValidationError on malformed JSON or schema violations. Semantic
/// problems (bad rows, cycles, row sums) are left for validateDiagram.
InfluenceDiagram diagramFromJson(std::string_view text);

/// printf("%.17g") with "-0" normalised to "0".
std::string formatDouble(double value);

}  // namespace screenopt
