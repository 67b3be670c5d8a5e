#pragma once

#include <memory>
#include <string_view>

#include "branchsat/ast.hpp"

namespace branchsat {

/// Parses FPC source text. Conditionals are labeled in source order from 0
/// across the whole program. Throws FrontendError with line/column on
/// syntax errors, duplicate function names, or duplicate parameter names.
std::shared_ptr<const Program> parse(std::string_view source);

}  // namespace branchsat
