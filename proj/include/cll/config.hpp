#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "cll/field.hpp"

namespace cll {

/// Flat run configuration, JSON on disk (schema in docs/config.md).
struct RunConfig {
    // data
    std::string preset = "gaussian";  // zero|uniform|gaussian|box|sech|tabulated
    double amp = 0.3;
    double width = 1.0;
    double edge = 2.0;    // box half-width
    double steep = 0.5;   // box edge steepness
    std::string data_path;  // tabulated CSV

    // grid
    double Z = 12.0;
    double T = 1.0;
    int Nz = 768;
    int Nt = 0;  // 0: from the stability bound
    int Nt_store = 256;

    // spectral grids and ladders
    int sigma_grid_n = 256;
    double sigma_m_max = 15.5;
    double ladder_scale = 1.0;
    bool richardson = true;
    int t_stride = 8;
    int beta_sign = 1;

    // tolerances
    double tol_det_h = 1e-8;
    double tol_parity = 1e-10;
    double tol_det_rel = 1e-6;
    double tol_jump = 1e-6;
    double tol_global_rel = 1e-4;
    double tol_recon = 1e-3;
    double tol_boundary = 1e-3;
    double interior_z = 0.8;
    double t_min = 0.02;

    // run
    std::string out = "out";
    std::uint64_t seed = 20260808ull;
    int threads = 0;  // 0: hardware concurrency capped at 8

    void validate() const;
    GridSpec grid() const;
    IBData make_ibdata() const;
    std::string inputs_hash() const;  // over the serialized data block
    int effective_threads() const;
};

RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::filesystem::path& p);
std::string serialize_config(const RunConfig& c);

}  // namespace cll
