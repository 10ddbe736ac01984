#pragma once

#include <string>

namespace lmlp {

// Resolves a bundled data file. The LMLP_DATA_DIR environment variable
// overrides the directory baked in at build time.
std::string data_path(const std::string& name);

}  // namespace lmlp
