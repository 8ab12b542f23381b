#include "cll/config.hpp"

#include <fstream>
#include <thread>

#include <json.hpp>

#include "cll/io.hpp"

namespace cll {

using nlohmann::ordered_json;

void RunConfig::validate() const {
    const char* presets[] = {"zero", "uniform", "gaussian", "box", "sech", "tabulated"};
    bool ok = false;
    for (auto* p : presets) ok = ok || preset == p;
    if (!ok) throw config_error("unknown preset: " + preset);
    if (preset == "tabulated" && data_path.empty())
        throw config_error("tabulated preset requires data_path");
    grid().validate();
    for (double tol : {tol_det_h, tol_parity, tol_det_rel, tol_jump, tol_global_rel, tol_recon,
                       tol_boundary})
        if (!(tol > 0)) throw config_error("tolerances must be positive");
    if (beta_sign != 1 && beta_sign != -1) throw config_error("beta_sign must be +-1");
    if (sigma_grid_n < 4) throw config_error("sigma_grid_n too small");
    if (!(sigma_m_max > 0) || !(ladder_scale > 0)) throw config_error("grid scales must be positive");
    if (t_stride < 1) throw config_error("t_stride must be >= 1");
    if (!(interior_z > 0 && interior_z <= 1)) throw config_error("interior_z in (0,1]");
    if (out.empty()) throw config_error("output directory must be set");
}

GridSpec RunConfig::grid() const {
    GridSpec g;
    g.Z = Z;
    g.T = T;
    g.Nz = Nz;
    g.Nt = Nt;
    g.Nt_store = Nt_store;
    return g;
}

IBData RunConfig::make_ibdata() const {
    if (preset == "zero") return preset_zero();
    if (preset == "uniform") return preset_uniform(amp);
    if (preset == "gaussian") return preset_gaussian(amp, width);
    if (preset == "box") return preset_box(amp, edge, steep);
    if (preset == "sech") return preset_sech(amp, width);
    return preset_tabulated_csv(data_path);
}

std::string RunConfig::inputs_hash() const {
    ordered_json j;
    j["preset"] = preset;
    j["amp"] = amp;
    j["width"] = width;
    j["edge"] = edge;
    j["steep"] = steep;
    j["Z"] = Z;
    j["T"] = T;
    j["Nz"] = Nz;
    j["Nt"] = Nt;
    j["Nt_store"] = Nt_store;
    if (preset == "tabulated") j["data"] = fnv1a64_hex_file(data_path);
    std::string s = j.dump();
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)fnv1a64(s.data(), s.size()));
    return buf;
}

int RunConfig::effective_threads() const {
    if (threads > 0) return threads;
    unsigned hc = std::thread::hardware_concurrency();
    return (int)std::min(8u, hc ? hc : 1u);
}

namespace {

template <typename T>
void get_if(const ordered_json& j, const char* key, T& into) {
    if (j.contains(key)) into = j.at(key).get<T>();
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
    ordered_json j;
    try {
        j = ordered_json::parse(json_text);
    } catch (const std::exception& e) {
        throw config_error(std::string("config parse error: ") + e.what());
    }
    RunConfig c;
    get_if(j, "preset", c.preset);
    get_if(j, "amp", c.amp);
    get_if(j, "width", c.width);
    get_if(j, "edge", c.edge);
    get_if(j, "steep", c.steep);
    get_if(j, "data_path", c.data_path);
    get_if(j, "Z", c.Z);
    get_if(j, "T", c.T);
    get_if(j, "Nz", c.Nz);
    get_if(j, "Nt", c.Nt);
    get_if(j, "Nt_store", c.Nt_store);
    get_if(j, "sigma_grid_n", c.sigma_grid_n);
    get_if(j, "sigma_m_max", c.sigma_m_max);
    get_if(j, "ladder_scale", c.ladder_scale);
    get_if(j, "richardson", c.richardson);
    get_if(j, "t_stride", c.t_stride);
    get_if(j, "beta_sign", c.beta_sign);
    get_if(j, "tol_det_h", c.tol_det_h);
    get_if(j, "tol_parity", c.tol_parity);
    get_if(j, "tol_det_rel", c.tol_det_rel);
    get_if(j, "tol_jump", c.tol_jump);
    get_if(j, "tol_global_rel", c.tol_global_rel);
    get_if(j, "tol_recon", c.tol_recon);
    get_if(j, "tol_boundary", c.tol_boundary);
    get_if(j, "interior_z", c.interior_z);
    get_if(j, "t_min", c.t_min);
    get_if(j, "out", c.out);
    get_if(j, "seed", c.seed);
    get_if(j, "threads", c.threads);
    return c;
}

RunConfig load_config(const std::filesystem::path& p) {
    std::ifstream in(p);
    if (!in) throw config_error("cannot open config: " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& c) {
    ordered_json j;
    j["preset"] = c.preset;
    j["amp"] = c.amp;
    j["width"] = c.width;
    j["edge"] = c.edge;
    j["steep"] = c.steep;
    j["data_path"] = c.data_path;
    j["Z"] = c.Z;
    j["T"] = c.T;
    j["Nz"] = c.Nz;
    j["Nt"] = c.Nt;
    j["Nt_store"] = c.Nt_store;
    j["sigma_grid_n"] = c.sigma_grid_n;
    j["sigma_m_max"] = c.sigma_m_max;
    j["ladder_scale"] = c.ladder_scale;
    j["richardson"] = c.richardson;
    j["t_stride"] = c.t_stride;
    j["beta_sign"] = c.beta_sign;
    j["tol_det_h"] = c.tol_det_h;
    j["tol_parity"] = c.tol_parity;
    j["tol_det_rel"] = c.tol_det_rel;
    j["tol_jump"] = c.tol_jump;
    j["tol_global_rel"] = c.tol_global_rel;
    j["tol_recon"] = c.tol_recon;
    j["tol_boundary"] = c.tol_boundary;
    j["interior_z"] = c.interior_z;
    j["t_min"] = c.t_min;
    j["out"] = c.out;
    j["seed"] = c.seed;
    j["threads"] = c.threads;
    return j.dump(2) + "\n";
}

}  // namespace cll
