#pragma once

#include <string>
#include <string_view>

namespace testforge::util {

/// SHA-256 digest as 64 lowercase hex characters. Self-contained (FIPS 180-4)
/// so fixture keys do not depend on the TLS library being present.
std::string sha256_hex(std::string_view data);

} // namespace testforge::util
