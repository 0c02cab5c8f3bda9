#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace wisard::service {

std::string base64_encode(std::string_view bytes);
/// nullopt on malformed input. ASCII whitespace is ignored.
std::optional<std::string> base64_decode(std::string_view text);

}  // namespace wisard::service
