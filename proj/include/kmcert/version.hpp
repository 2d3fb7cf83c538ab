#pragma once

namespace kmcert {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace kmcert
