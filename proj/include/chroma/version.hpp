#pragma once

namespace chroma {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace chroma
