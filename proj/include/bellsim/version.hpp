#pragma once

namespace bellsim {

/// Embedded in every result envelope so archived outputs identify the
/// producing build.
inline constexpr const char* kVersion = "1.0.0";

}  // namespace bellsim
