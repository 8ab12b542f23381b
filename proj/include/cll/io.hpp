#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "cll/field.hpp"
#include "cll/inverse.hpp"
#include "cll/spectral.hpp"
#include "cll/volterra.hpp"
#include "cll/zeros.hpp"

namespace cll {

/// FNV-1a over a byte range / file, hex encoded.
std::uint64_t fnv1a64(const void* data, std::size_t n);
std::string fnv1a64_hex_file(const std::filesystem::path& p);

/// %.17g: exact double round trip, deterministic across runs.
std::string fmt17(double v);

/// Field persistence: <dir>/manifest.json + <dir>/field.csv with header
/// z,t,re_r,im_r,re_rz,im_rz,theta_cum (t outer, z inner, LF endings).
void write_field(const std::filesystem::path& dir, const PotentialField& f,
                 const std::string& inputs_hash);
PotentialField load_field(const std::filesystem::path& dir, bool verify_hash = true);

void write_spectral_csv(const std::filesystem::path& p, std::span<const SpectralSample> samples,
                        int beta_sign);
void write_zeros_json(const std::filesystem::path& p, std::span<const ZeroHit> u_zeros,
                      std::span<const ZeroHit> beta_zeros,
                      std::span<const ResidueEntry> residues, double winding_defect);
void write_eigen_csv(const std::filesystem::path& p, std::span<const EigenEval> evals);
void write_reconstruction_csv(const std::filesystem::path& p, const PotentialField& f,
                              const Reconstruction& rec);
void write_boundary_csv(const std::filesystem::path& p, const BoundaryRecovery& br);

}  // namespace cll
