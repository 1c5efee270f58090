#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

namespace egt {

/// A computed expectation together with how it was obtained. No bare numbers:
/// every estimate carries its method tag and an error estimate.
struct EstimateReport {
    double value = 0.0;
    double err_estimate = 0.0;
    std::string method;  // "closed-form" | "quadrature" | "monte-carlo"
    bool converged = true;
    long evals = 0;
    int nodes_per_dim = 0;         // cubature only
    int verify_nodes_per_dim = 0;  // cubature only
    std::uint64_t seed = 0;        // monte-carlo only
    std::string detail;

    nlohmann::json to_json() const {
        nlohmann::json j{{"value", value},
                         {"err_estimate", err_estimate},
                         {"method", method},
                         {"converged", converged},
                         {"evals", evals}};
        if (nodes_per_dim > 0) {
            j["nodes_per_dim"] = nodes_per_dim;
            j["verify_nodes_per_dim"] = verify_nodes_per_dim;
        }
        if (method == "monte-carlo") j["seed"] = seed;
        if (!detail.empty()) j["detail"] = detail;
        return j;
    }
};

}  // namespace egt
