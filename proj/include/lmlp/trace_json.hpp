#pragma once

#include "lmlp/prover.hpp"

#include <json.hpp>

namespace lmlp {

// {query:{s,p,o}, prompt, steps:[{s,p,o,score}], status, reach, verified}
nlohmann::json trace_to_json(const ProofTrace& trace);
nlohmann::json triple_json(const Triple& t);

}  // namespace lmlp
