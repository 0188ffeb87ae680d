#pragma once

#include <string_view>

namespace gsfluct {

inline constexpr std::string_view kArtifactName = "gsfluct";
inline constexpr std::string_view kArtifactVersion = "0.1.0";

}  // namespace gsfluct
