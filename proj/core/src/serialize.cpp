#include "fba/serialize.hpp"

#include <string>

namespace fba {

using nlohmann::json;

json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

json to_json(const LaurentPoly& p) {
    json j = json::object();
    for (const auto& [k, c] : p.coeff_map()) j[std::to_string(k)] = to_json(c);
    return j;
}

namespace {

json scaled(const tropical::ScaledPoly& s) {
    return {{"coeffs", to_json(s.poly)}, {"q_half_power", s.q_half}, {"z_half_power", s.z_half}};
}

json cvec(const std::vector<cplx>& v) {
    json a = json::array();
    for (cplx z : v) a.push_back(to_json(z));
    return a;
}

}  // namespace

json to_json(const baxterflow::BetheSolution& sol) {
    json j;
    j["schema"] = kSchemaVersion;
    j["n"] = sol.T.n;
    j["q"] = to_json(sol.p.q);
    j["s"] = to_json(sol.p.s);
    j["m"] = sol.T.m_charge;
    j["v"] = to_json(sol.T.v_total);
    j["t"] = cvec(sol.T.coeffs);
    j["w"] = cvec(sol.w);
    j["C"] = to_json(sol.C);
    j["residuals"] = sol.residuals;
    j["wronskian_const"] = to_json(sol.wronskian_const);
    j["certificates"] = {{"baxter_grid_residual", sol.certificates.baxter_grid_residual},
                         {"pole_residuals", sol.certificates.pole_residuals},
                         {"wronskian_scatter", sol.certificates.wronskian_scatter}};
    return j;
}

json to_json(const tropical::SeedState& st) {
    json j;
    j["schema"] = kSchemaVersion;
    j["n"] = st.n;
    j["m"] = st.m;
    j["sector"] = st.sector == tropical::Sector::UnitaryV ? "unitary-v" : "dual-q";
    j["H0"] = scaled(st.H0);
    j["H0_down"] = scaled(st.H0_down);
    j["H0_up"] = scaled(st.H0_up);
    j["K"] = to_json(st.K);
    j["Kprime"] = to_json(st.Kprime);
    j["k_branch"] = to_json(st.k_branch);
    j["subset"] = st.subset;
    j["T0"] = scaled(st.T0);
    if (st.has_W0)
        j["W0"] = {{"value", to_json(st.W0)}, {"q_half_power", st.W0_q_half}};
    else
        j["W0"] = nullptr;
    if (st.sector == tropical::Sector::DualQ) {
        j["C"] = to_json(st.C);
        j["roots"] = cvec(st.roots);
    }
    return j;
}

json to_json(const tropical::SeedReport& rep) {
    json j;
    j["baxter_dev"] = rep.baxter_dev;
    j["wronskian_dev"] = rep.wronskian_dev ? json(*rep.wronskian_dev) : json(nullptr);
    j["gluing_dev"] = rep.gluing_dev;
    j["transfer_shape_dev"] = rep.transfer_shape_dev;
    j["chain_dev"] = rep.chain_dev;
    j["pass"] = rep.pass;
    if (!rep.note.empty()) j["note"] = rep.note;
    return j;
}

}  // namespace fba
