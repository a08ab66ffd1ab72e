#pragma once

namespace bethe {

inline constexpr char kToolName[] = "bethe-gibbs";
inline constexpr char kToolVersion[] = "0.1.0";

}  // namespace bethe
