#pragma once

namespace lidforge {

inline constexpr char kVersion[] = "0.1.0";

}  // namespace lidforge
