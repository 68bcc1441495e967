// version.hpp

#pragma once

namespace reegeom {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace reegeom
