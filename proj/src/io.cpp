#include "cll/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace cll {

using nlohmann::ordered_json;

std::uint64_t fnv1a64(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string fnv1a64_hex_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw config_error("cannot open " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    std::string bytes = ss.str();
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx",
                  (unsigned long long)fnv1a64(bytes.data(), bytes.size()));
    return buf;
}

std::string fmt17(double v) {
    if (v == 0.0) return "0";  // normalize negative zero
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_field(const std::filesystem::path& dir, const PotentialField& f,
                 const std::string& inputs_hash) {
    std::filesystem::create_directories(dir);
    {
        std::ofstream csv(dir / "field.csv", std::ios::binary);
        csv << "z,t,re_r,im_r,re_rz,im_rz,theta_cum\n";
        const double dz = f.grid.dz(), dts = f.dts();
        for (int j = 0; j < f.nsl(); ++j) {
            for (int i = 0; i < f.nzp(); ++i) {
                cx r = f.r_at(j, i), rz = f.rz_at(j, i);
                csv << fmt17(i * dz) << ',' << fmt17(j * dts) << ',' << fmt17(r.real()) << ','
                    << fmt17(r.imag()) << ',' << fmt17(rz.real()) << ',' << fmt17(rz.imag())
                    << ',' << fmt17(f.theta_at(j, i)) << '\n';
            }
        }
    }
    ordered_json man;
    man["schema_version"] = f.schema_version;
    man["grid"] = {{"Z", f.grid.Z}, {"T", f.grid.T}, {"Nz", f.grid.Nz},
                   {"Nt", f.grid.Nt}, {"Nt_store", f.grid.Nt_store},
                   {"nominal_Z", f.reported_Z()}};
    man["scheme"] = {{"name", f.scheme}, {"space_order", 4}, {"time_order", 4},
                     {"sponge_fraction", f.sponge_fraction}};
    man["preset"] = f.preset_name;
    man["inputs_hash"] = inputs_hash;
    man["hashes"] = {{"field_csv", fnv1a64_hex_file(dir / "field.csv")}};
    std::ofstream mj(dir / "manifest.json", std::ios::binary);
    mj << man.dump(2) << '\n';
}

PotentialField load_field(const std::filesystem::path& dir, bool verify_hash) {
    std::ifstream mj(dir / "manifest.json");
    if (!mj) throw config_error("missing manifest.json in " + dir.string());
    ordered_json man = ordered_json::parse(mj);
    if (verify_hash) {
        std::string want = man["hashes"]["field_csv"];
        std::string got = fnv1a64_hex_file(dir / "field.csv");
        if (want != got) throw hash_mismatch("field.csv hash mismatch in " + dir.string());
    }
    PotentialField f;
    f.grid.Z = man["grid"]["Z"];
    f.grid.T = man["grid"]["T"];
    f.grid.Nz = man["grid"]["Nz"];
    f.grid.Nt = man["grid"]["Nt"];
    f.grid.Nt_store = man["grid"]["Nt_store"];
    f.nominal_Z = man["grid"].contains("nominal_Z") ? double(man["grid"]["nominal_Z"]) : f.grid.Z;
    f.preset_name = man["preset"];
    f.scheme = man["scheme"]["name"];
    f.sponge_fraction = man["scheme"]["sponge_fraction"];
    f.schema_version = man["schema_version"];

    const int nz = f.nzp(), ns = f.nsl();
    f.r.resize(std::size_t(nz) * ns);
    f.rz.resize(f.r.size());
    f.theta_z.resize(f.r.size());
    f.theta_boundary.assign(ns, 0.0);

    std::ifstream csv(dir / "field.csv");
    std::string line;
    std::getline(csv, line);  // header
    for (int j = 0; j < ns; ++j) {
        for (int i = 0; i < nz; ++i) {
            if (!std::getline(csv, line)) throw config_error("field.csv truncated");
            double vals[7];
            const char* s = line.c_str();
            char* end = nullptr;
            for (int c = 0; c < 7; ++c) {
                vals[c] = std::strtod(s, &end);
                s = (end && *end == ',') ? end + 1 : end;
            }
            std::size_t ix = std::size_t(j) * nz + i;
            f.r[ix] = {vals[2], vals[3]};
            f.rz[ix] = {vals[4], vals[5]};
            if (i == 0) f.theta_boundary[j] = vals[6];
            f.theta_z[ix] = vals[6] - f.theta_boundary[j];
        }
    }
    return f;
}

void write_spectral_csv(const std::filesystem::path& p, std::span<const SpectralSample> samples,
                        int beta_sign) {
    std::ofstream csv(p, std::ios::binary);
    csv << "re_k,im_k,re_u,im_u,re_v,im_v,re_U,im_U,re_V,im_V,re_beta,im_beta,gr_resid_abs\n";
    for (const auto& s : samples) {
        cx beta = s.u * s.Us + double(beta_sign) * s.v * s.Vs;
        csv << fmt17(s.k.real()) << ',' << fmt17(s.k.imag()) << ',' << fmt17(s.u.real()) << ','
            << fmt17(s.u.imag()) << ',' << fmt17(s.v.real()) << ',' << fmt17(s.v.imag()) << ','
            << fmt17(s.U.real()) << ',' << fmt17(s.U.imag()) << ',' << fmt17(s.V.real()) << ','
            << fmt17(s.V.imag()) << ',' << fmt17(beta.real()) << ',' << fmt17(beta.imag()) << ','
            << fmt17(s.gr_abs) << '\n';
    }
}

void write_zeros_json(const std::filesystem::path& p, std::span<const ZeroHit> u_zeros,
                      std::span<const ZeroHit> beta_zeros,
                      std::span<const ResidueEntry> residues, double winding_defect) {
    ordered_json j;
    j["winding_defect"] = winding_defect;
    j["u_zeros"] = ordered_json::array();
    for (const auto& z : u_zeros)
        j["u_zeros"].push_back({{"re", z.location.real()},
                                {"im", z.location.imag()},
                                {"newton_resid", z.newton_resid}});
    j["beta_zeros"] = ordered_json::array();
    for (const auto& z : beta_zeros)
        j["beta_zeros"].push_back({{"re", z.location.real()},
                                   {"im", z.location.imag()},
                                   {"newton_resid", z.newton_resid}});
    j["residues"] = ordered_json::array();
    for (const auto& r : residues)
        j["residues"].push_back({{"family", r.family},
                                 {"re", r.location.real()},
                                 {"im", r.location.imag()},
                                 {"column", r.column},
                                 {"re_coeff", r.coefficient.real()},
                                 {"im_coeff", r.coefficient.imag()},
                                 {"eta_sign", r.eta_sign}});
    std::ofstream out(p, std::ios::binary);
    out << j.dump(2) << '\n';
}

void write_eigen_csv(const std::filesystem::path& p, std::span<const EigenEval> evals) {
    std::ofstream csv(p, std::ios::binary);
    csv << "which,z,t,re_k,im_k,re_h11,im_h11,re_h12,im_h12,re_h21,im_h21,re_h22,im_h22,det_err\n";
    auto name = [](EigenKind w) {
        return w == EigenKind::H1 ? "H1" : (w == EigenKind::H2 ? "H2" : "H3");
    };
    for (const auto& e : evals) {
        csv << name(e.which) << ',' << fmt17(e.z) << ',' << fmt17(e.t) << ','
            << fmt17(e.k.real()) << ',' << fmt17(e.k.imag()) << ',' << fmt17(e.H.a11.real())
            << ',' << fmt17(e.H.a11.imag()) << ',' << fmt17(e.H.a12.real()) << ','
            << fmt17(e.H.a12.imag()) << ',' << fmt17(e.H.a21.real()) << ','
            << fmt17(e.H.a21.imag()) << ',' << fmt17(e.H.a22.real()) << ','
            << fmt17(e.H.a22.imag()) << ',' << fmt17(e.det_err) << '\n';
    }
}

void write_reconstruction_csv(const std::filesystem::path& p, const PotentialField& f,
                              const Reconstruction& rec) {
    std::ofstream csv(p, std::ios::binary);
    csv << "z,t,re_r_rec,im_r_rec,abs_err\n";
    const double dz = f.grid.dz();
    for (int q = 0; q < rec.nt; ++q) {
        for (int i = 0; i < rec.nz; ++i) {
            std::size_t ix = std::size_t(q) * rec.nz + i;
            csv << fmt17(i * dz) << ',' << fmt17(rec.t_samples[q]) << ','
                << fmt17(rec.r_rec[ix].real()) << ',' << fmt17(rec.r_rec[ix].imag()) << ','
                << fmt17(rec.abs_err[ix]) << '\n';
        }
    }
}

void write_boundary_csv(const std::filesystem::path& p, const BoundaryRecovery& br) {
    std::ofstream csv(p, std::ios::binary);
    csv << "t,re_s0,im_s0,re_s1,im_s1\n";
    for (std::size_t q = 0; q < br.t.size(); ++q) {
        csv << fmt17(br.t[q]) << ',' << fmt17(br.s0_rec[q].real()) << ','
            << fmt17(br.s0_rec[q].imag()) << ',' << fmt17(br.s1_rec[q].real()) << ','
            << fmt17(br.s1_rec[q].imag()) << '\n';
    }
}

}  // namespace cll
