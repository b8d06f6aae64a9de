// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end. Talks to the solver library exclusively through
// the C interface.

#include "vasotherm/capi.h"

#include <CLI11.hpp>

#include <cstdio>
#include <memory>
#include <string>
#include <vector>

namespace {

struct ConfigDeleter {
    void operator()(vth_config* c) const { vth_config_free(c); }
};
using ConfigPtr = std::unique_ptr<vth_config, ConfigDeleter>;

struct ReportDeleter {
    void operator()(vth_report* r) const { vth_report_free(r); }
};
using ReportPtr = std::unique_ptr<vth_report, ReportDeleter>;

ConfigPtr build_config(const std::string& config_path,
                       const std::vector<std::string>& overrides, char* err, size_t errlen)
{
    ConfigPtr cfg;
    if (config_path.empty()) {
        cfg.reset(vth_config_create());
    } else {
        cfg.reset(vth_config_load(config_path.c_str(), err, errlen));
        if (!cfg)
            return nullptr;
    }
    for (const auto& kv : overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) {
            std::snprintf(err, errlen, "--set expects key=value, got '%s'", kv.c_str());
            return nullptr;
        }
        const std::string key = kv.substr(0, eq);
        const std::string value = kv.substr(eq + 1);
        if (vth_config_set(cfg.get(), key.c_str(), value.c_str(), err, errlen) != VTH_OK)
            return nullptr;
    }
    return cfg;
}

void maybe_write_report(const ReportPtr& report, const std::string& out_dir)
{
    if (!report || out_dir.empty())
        return;
    const std::string path = out_dir + "/report.json";
    if (FILE* f = std::fopen(path.c_str(), "w")) {
        std::fputs(vth_report_json(report.get()), f);
        std::fclose(f);
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Coupled vessel-flow / heat-transport simulator on a fixed reference domain"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    app.add_option("-c,--config", config_path, "configuration file (key = value)");
    app.add_option("--set", overrides, "override a configuration key (key=value)")
        ->take_all();

    bool show_keys = false;
    app.add_flag("--config-keys", show_keys, "print the documented configuration keys and exit");

    auto* run = app.add_subcommand("run", "execute the configured simulation");
    std::string out_dir = "out";
    std::string restart;
    run->add_option("-o,--out", out_dir, "output directory");
    run->add_option("--restart", restart, "continue from a checkpoint file");
    bool deterministic = true;
    run->add_flag("--deterministic,!--no-deterministic", deterministic,
                  "deterministic sequential execution (always on in this build)");

    auto* verify = app.add_subcommand("verify", "run the verification battery");
    unsigned seed = 12345;
    std::string verify_out;
    verify->add_option("--seed", seed, "seed for the randomized sweeps");
    verify->add_option("-o,--out", verify_out, "directory for report.json");

    auto* mms = app.add_subcommand("mms", "manufactured-solution convergence studies");
    bool quick = false;
    std::string mms_out;
    mms->add_flag("--quick", quick, "reduced refinement ladder");
    mms->add_option("-o,--out", mms_out, "directory for report.json");

    auto* picard = app.add_subcommand("picard", "global fixed-point verification run");
    std::string picard_out;
    picard->add_option("-o,--out", picard_out, "directory for report.json");

    CLI11_PARSE(app, argc, argv);

    if (show_keys) {
        std::fputs(vth_config_reference(), stdout);
        return 0;
    }

    char err[1024] = {0};
    ConfigPtr cfg = build_config(config_path, overrides, err, sizeof err);
    if (!cfg) {
        std::fprintf(stderr, "error: %s\n", err);
        return 1;
    }

    ReportPtr report;
    int status = VTH_ERROR;
    if (run->parsed()) {
        vth_report* raw = nullptr;
        status = vth_run(cfg.get(), out_dir.c_str(), restart.empty() ? nullptr : restart.c_str(),
                         &raw, err, sizeof err);
        report.reset(raw);
    } else if (verify->parsed()) {
        vth_report* raw = nullptr;
        status = vth_verify(cfg.get(), seed, &raw, err, sizeof err);
        report.reset(raw);
        maybe_write_report(report, verify_out);
    } else if (mms->parsed()) {
        vth_report* raw = nullptr;
        status = vth_mms(cfg.get(), quick ? 1 : 0, &raw, err, sizeof err);
        report.reset(raw);
        maybe_write_report(report, mms_out);
    } else if (picard->parsed()) {
        vth_report* raw = nullptr;
        status = vth_picard(cfg.get(), &raw, err, sizeof err);
        report.reset(raw);
        maybe_write_report(report, picard_out);
    }

    if (report)
        std::fputs(vth_report_text(report.get()), stdout);
    if (!report && status != VTH_OK)
        std::fprintf(stderr, "error: %s\n", err);
    return status;
}
