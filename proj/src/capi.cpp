// SPDX-License-Identifier: Apache-2.0
#include "vasotherm/capi.h"

#include "vasotherm/common.hpp"
#include "vasotherm/config.hpp"
#include "vasotherm/driver.hpp"
#include "vasotherm/verify.hpp"

#include <json.hpp>

#include <cstring>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>

using namespace vasotherm;

extern "C" {

struct vth_config {
    std::string base_text;                      // file contents (possibly empty)
    std::map<std::string, std::string> overrides;

    std::string materialize() const
    {
        // Base text with overridden keys removed, then the override lines.
        std::ostringstream out;
        std::istringstream is(base_text);
        std::string line;
        while (std::getline(is, line)) {
            std::string probe = line.substr(0, line.find('#'));
            const auto eq = probe.find('=');
            bool keep = true;
            if (eq != std::string::npos) {
                std::string key = probe.substr(0, eq);
                key.erase(0, key.find_first_not_of(" \t"));
                key.erase(key.find_last_not_of(" \t") + 1);
                if (overrides.count(key))
                    keep = false;
            }
            if (keep)
                out << line << "\n";
        }
        for (const auto& [k, v] : overrides)
            out << k << " = " << v << "\n";
        return out.str();
    }

    RunConfig parse() const { return parse_config_text(materialize(), "<config>"); }
};

struct vth_report {
    std::string json;
    std::string text;
    int status = VTH_OK;
};

} // extern "C"

namespace {

void fill_err(char* errbuf, size_t errlen, const std::string& msg)
{
    if (!errbuf || errlen == 0)
        return;
    std::strncpy(errbuf, msg.c_str(), errlen - 1);
    errbuf[errlen - 1] = '\0';
}

int classify_exception(const std::exception& e)
{
    if (dynamic_cast<const NotConverged*>(&e))
        return VTH_NOT_CONVERGED;
    if (dynamic_cast<const InvariantViolation*>(&e))
        return VTH_INVARIANT_FAILED;
    return VTH_ERROR;
}

vth_report* make_report(std::string json, std::string text, int status)
{
    auto* r = new vth_report;
    r->json = std::move(json);
    r->text = std::move(text);
    r->status = status;
    return r;
}

nlohmann::json study_json(const ConvergenceStudy& s, double lo, double hi)
{
    const bool ok = s.order_primary >= lo && s.order_primary <= hi;
    return {{"name", s.name},
            {"scales", s.scales},
            {"errors", s.errors_primary},
            {"errors_secondary", s.errors_secondary},
            {"order", s.order_primary},
            {"order_secondary", s.order_secondary},
            {"band", {lo, hi}},
            {"pass", ok}};
}

} // namespace

extern "C" {

const char* vth_version(void) { return "vasotherm 1.0.0"; }

vth_config* vth_config_create(void) { return new vth_config; }

vth_config* vth_config_load(const char* path, char* errbuf, size_t errlen)
{
    try {
        auto cfg = std::make_unique<vth_config>();
        // Validate eagerly; keep the raw text for later overrides.
        RunConfig parsed = parse_config(path);
        (void)parsed;
        std::ifstream in(path);
        std::ostringstream os;
        os << in.rdbuf();
        cfg->base_text = os.str();
        return cfg.release();
    } catch (const std::exception& e) {
        fill_err(errbuf, errlen, e.what());
        return nullptr;
    }
}

int vth_config_set(vth_config* cfg, const char* key, const char* value, char* errbuf,
                   size_t errlen)
{
    if (!cfg || !key || !value) {
        fill_err(errbuf, errlen, "null argument");
        return VTH_ERROR;
    }
    const auto saved = cfg->overrides;
    cfg->overrides[key] = value;
    try {
        cfg->parse();
        return VTH_OK;
    } catch (const std::exception& e) {
        cfg->overrides = saved;
        fill_err(errbuf, errlen, e.what());
        return VTH_ERROR;
    }
}

const char* vth_config_reference(void)
{
    static const std::string ref = config_reference();
    return ref.c_str();
}

void vth_config_free(vth_config* cfg) { delete cfg; }

int vth_run(const vth_config* cfg, const char* out_dir, const char* restart_checkpoint,
            vth_report** out_report, char* errbuf, size_t errlen)
{
    if (!cfg || !out_dir) {
        fill_err(errbuf, errlen, "null argument");
        return VTH_ERROR;
    }
    try {
        const RunConfig rc = cfg->parse();
        std::string json;
        const int code = run_simulation(rc, out_dir,
                                        &json, restart_checkpoint ? restart_checkpoint : "");
        if (out_report) {
            std::ostringstream text;
            text << "run finished with status " << code << "; outputs in " << out_dir << "\n";
            *out_report = make_report(json, text.str(), code);
        }
        return code;
    } catch (const std::exception& e) {
        fill_err(errbuf, errlen, e.what());
        return classify_exception(e);
    }
}

int vth_verify(const vth_config* cfg, unsigned seed, vth_report** out_report, char* errbuf,
               size_t errlen)
{
    if (!cfg) {
        fill_err(errbuf, errlen, "null argument");
        return VTH_ERROR;
    }
    try {
        const RunConfig rc = cfg->parse();
        const CheckList list = run_verification(rc.model, seed);
        nlohmann::json j;
        j["checks"] = nlohmann::json::array();
        for (const auto& c : list.checks)
            j["checks"].push_back({{"name", c.name},
                                   {"pass", c.pass},
                                   {"measured", c.measured},
                                   {"detail", c.detail}});
        const int status = list.passed() ? VTH_OK : VTH_INVARIANT_FAILED;
        j["pass"] = list.passed();
        if (out_report)
            *out_report = make_report(j.dump(2), list.table(), status);
        return status;
    } catch (const std::exception& e) {
        fill_err(errbuf, errlen, e.what());
        return classify_exception(e);
    }
}

int vth_mms(const vth_config* cfg, int quick, vth_report** out_report, char* errbuf,
            size_t errlen)
{
    if (!cfg) {
        fill_err(errbuf, errlen, "null argument");
        return VTH_ERROR;
    }
    try {
        const RunConfig rc = cfg->parse();
        std::vector<MeshResolution> stokes_levels, transport_levels;
        if (quick) {
            stokes_levels = {{4, 2, 2, 1}, {6, 3, 3, 2}, {8, 4, 4, 2}};
            transport_levels = {{4, 2, 2, 1}, {6, 3, 3, 2}, {8, 4, 4, 2}};
        } else {
            stokes_levels = {{4, 2, 2, 1}, {8, 4, 4, 2}, {10, 5, 5, 3}};
            transport_levels = {{4, 2, 2, 1}, {8, 4, 4, 2}, {12, 6, 6, 3}};
        }

        nlohmann::json j;
        j["studies"] = nlohmann::json::array();
        bool ok = true;
        std::ostringstream text;

        for (bool deformed : {false, true}) {
            const auto st = stokes_mms_study(rc.model, deformed, stokes_levels, rc.quad_degree);
            auto sj = study_json(st, 1.7, 2.3);
            const bool p_ok = st.order_secondary >= 1.7 && st.order_secondary <= 2.3;
            sj["pass"] = sj["pass"].get<bool>() && p_ok;
            ok = ok && sj["pass"].get<bool>();
            j["studies"].push_back(sj);
            text << st.name << ": velocity order " << st.order_primary << ", pressure order "
                 << st.order_secondary << (sj["pass"].get<bool>() ? "  [PASS]" : "  [FAIL]")
                 << "\n";
        }
        {
            const auto sp = transport_mms_space_study(rc.model, transport_levels, 0.1, 8e-3,
                                                      rc.quad_degree);
            auto sj = study_json(sp, 1.7, 2.3);
            ok = ok && sj["pass"].get<bool>();
            j["studies"].push_back(sj);
            text << sp.name << ": order " << sp.order_primary
                 << (sj["pass"].get<bool>() ? "  [PASS]" : "  [FAIL]") << "\n";
        }
        {
            const auto tm = transport_mms_time_study(rc.model, quick ? MeshResolution{4, 2, 1, 2}
                                                                     : MeshResolution{6, 3, 2, 2},
                                                     0.4, {4e-2, 2e-2, 1e-2}, rc.quad_degree);
            auto sj = study_json(tm, 0.8, 1.2);
            ok = ok && sj["pass"].get<bool>();
            j["studies"].push_back(sj);
            text << tm.name << ": order " << tm.order_primary
                 << (sj["pass"].get<bool>() ? "  [PASS]" : "  [FAIL]") << "\n";
        }
        j["pass"] = ok;
        const int status = ok ? VTH_OK : VTH_INVARIANT_FAILED;
        if (out_report)
            *out_report = make_report(j.dump(2), text.str(), status);
        return status;
    } catch (const std::exception& e) {
        fill_err(errbuf, errlen, e.what());
        return classify_exception(e);
    }
}

int vth_picard(const vth_config* cfg, vth_report** out_report, char* errbuf, size_t errlen)
{
    if (!cfg) {
        fill_err(errbuf, errlen, "null argument");
        return VTH_ERROR;
    }
    try {
        const RunConfig rc = cfg->parse();
        nlohmann::json j;
        std::ostringstream text;

        Driver driver_a(rc);
        const auto pic_a = driver_a.run_picard(0.0);
        std::vector<Eigen::VectorXd> traj_a;
        for (const auto& th : driver_a.theta())
            traj_a.push_back(driver_a.solid_part(th));

        Driver driver_b(rc);
        const auto pic_b = driver_b.run_picard(1.0);
        std::vector<Eigen::VectorXd> traj_b;
        for (const auto& th : driver_b.theta())
            traj_b.push_back(driver_b.solid_part(th));

        const double distance = driver_a.trajectory_distance(traj_a, traj_b);
        const bool both_converged = pic_a.converged && pic_b.converged;
        const bool unique = distance <= 10.0 * rc.picard_tol;

        j["guess_zero"] = {{"residuals", pic_a.residuals},
                           {"iterations", pic_a.iterations},
                           {"converged", pic_a.converged}};
        j["guess_one"] = {{"residuals", pic_b.residuals},
                          {"iterations", pic_b.iterations},
                          {"converged", pic_b.converged}};
        j["trajectory_distance"] = distance;
        j["uniqueness_pass"] = unique;
        text << "fixed point from zero guess: " << pic_a.iterations << " iterations"
             << (pic_a.converged ? "" : " (not converged)") << "\n";
        text << "fixed point from unit guess: " << pic_b.iterations << " iterations"
             << (pic_b.converged ? "" : " (not converged)") << "\n";
        text << "trajectory distance " << distance << " (tolerance "
             << 10.0 * rc.picard_tol << ")\n";

        // Severed coupling: production independent of temperature makes the
        // solution operator constant, so the second sweep must confirm the
        // first exactly.
        RunConfig dec = rc;
        dec.model.production.mode = ProductionSpec::Mode::Constant;
        Driver driver_c(dec);
        const auto pic_c = driver_c.run_picard(0.0);
        j["decoupled"] = {{"iterations", pic_c.iterations}, {"converged", pic_c.converged}};
        const bool dec_ok = pic_c.converged && pic_c.iterations == 2;
        text << "decoupled production: " << pic_c.iterations << " iterations\n";

        int status = VTH_OK;
        if (!both_converged || !pic_c.converged)
            status = VTH_NOT_CONVERGED;
        else if (!unique || !dec_ok)
            status = VTH_INVARIANT_FAILED;
        j["pass"] = status == VTH_OK;
        if (out_report)
            *out_report = make_report(j.dump(2), text.str(), status);
        return status;
    } catch (const std::exception& e) {
        fill_err(errbuf, errlen, e.what());
        return classify_exception(e);
    }
}

const char* vth_report_json(const vth_report* report) { return report ? report->json.c_str() : ""; }
const char* vth_report_text(const vth_report* report) { return report ? report->text.c_str() : ""; }
int vth_report_status(const vth_report* report) { return report ? report->status : VTH_ERROR; }
void vth_report_free(vth_report* report) { delete report; }

} // extern "C"
