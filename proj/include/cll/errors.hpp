#pragma once

#include <stdexcept>
#include <string>

namespace cll {

struct stability_violation : std::runtime_error {
    explicit stability_violation(const std::string& m) : std::runtime_error(m) {}
};
struct blow_up : std::runtime_error {
    explicit blow_up(const std::string& m) : std::runtime_error(m) {}
};
struct corner_mismatch : std::runtime_error {
    explicit corner_mismatch(const std::string& m) : std::runtime_error(m) {}
};
struct out_of_domain : std::runtime_error {
    explicit out_of_domain(const std::string& m) : std::runtime_error(m) {}
};
struct region_violation : std::runtime_error {
    explicit region_violation(const std::string& m) : std::runtime_error(m) {}
};
struct integrator_failure : std::runtime_error {
    explicit integrator_failure(const std::string& m) : std::runtime_error(m) {}
};
struct ill_conditioned_fit : std::runtime_error {
    explicit ill_conditioned_fit(const std::string& m) : std::runtime_error(m) {}
};
struct division_floor : std::runtime_error {
    explicit division_floor(const std::string& m) : std::runtime_error(m) {}
};
struct winding_ambiguous : std::runtime_error {
    explicit winding_ambiguous(const std::string& m) : std::runtime_error(m) {}
};
struct newton_divergence : std::runtime_error {
    explicit newton_divergence(const std::string& m) : std::runtime_error(m) {}
};
struct non_simple_zero : std::runtime_error {
    explicit non_simple_zero(const std::string& m) : std::runtime_error(m) {}
};
struct ladder_inadmissible : std::runtime_error {
    explicit ladder_inadmissible(const std::string& m) : std::runtime_error(m) {}
};
struct config_error : std::runtime_error {
    explicit config_error(const std::string& m) : std::runtime_error(m) {}
};
struct hash_mismatch : std::runtime_error {
    explicit hash_mismatch(const std::string& m) : std::runtime_error(m) {}
};

}  // namespace cll
