#include "lipreach/lipopt/config.hpp"

#include <cmath>

#include "lipreach/error.hpp"

namespace lipreach::lipopt {

void SolverConfig::validate() const {
    if (!(epsilon > 0.0 && std::isfinite(epsilon))) throw ContractError("epsilon must be > 0");
    if (!(eta > 1.0 && std::isfinite(eta))) throw ContractError("eta must be > 1");
    if (!(k_init > 0.0 && std::isfinite(k_init))) throw ContractError("k_init must be > 0");
    if (max_evals < 3) throw ContractError("max_evals must be >= 3");
    if (inner.rule == InnerTolerance::Rule::Fixed && !(inner.value > 0.0 && std::isfinite(inner.value))) {
        throw ContractError("fixed inner tolerance must be > 0");
    }
}

}  // namespace lipreach::lipopt
