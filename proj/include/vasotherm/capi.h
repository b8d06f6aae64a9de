/* SPDX-License-Identifier: Apache-2.0 */
#ifndef VASOTHERM_CAPI_H
#define VASOTHERM_CAPI_H

/* C interface of the vasotherm shared library: opaque handles, integer
 * status codes, and UTF-8 strings owned by the handles. Every function is
 * safe to call from plain C. */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct vth_config vth_config;
typedef struct vth_report vth_report;

/* Status codes mirror the process exit codes of the CLI. */
enum {
    VTH_OK = 0,
    VTH_ERROR = 1,             /* configuration or I/O failure */
    VTH_INVARIANT_FAILED = 2,  /* a model invariant was violated at runtime */
    VTH_NOT_CONVERGED = 3      /* an iteration ended without reaching tolerance */
};

const char* vth_version(void);

/* --- configuration ------------------------------------------------------ */

/* Defaults; never fails. */
vth_config* vth_config_create(void);

/* Parse a config file. Returns NULL on failure and fills errbuf. */
vth_config* vth_config_load(const char* path, char* errbuf, size_t errlen);

/* Override one key with the textual grammar of the config file. */
int vth_config_set(vth_config* cfg, const char* key, const char* value, char* errbuf,
                   size_t errlen);

/* The documented key table (static string). */
const char* vth_config_reference(void);

void vth_config_free(vth_config* cfg);

/* --- runs ---------------------------------------------------------------- */

/* Execute the configured simulation, writing CSV/VTK/report/checkpoint into
 * out_dir. restart_checkpoint may be NULL. On success *out_report holds the
 * machine-readable report. */
int vth_run(const vth_config* cfg, const char* out_dir, const char* restart_checkpoint,
            vth_report** out_report, char* errbuf, size_t errlen);

/* Verification battery (pass/fail table over the module oracles). */
int vth_verify(const vth_config* cfg, unsigned seed, vth_report** out_report, char* errbuf,
               size_t errlen);

/* Manufactured-solution convergence studies. quick != 0 runs a reduced
 * ladder. */
int vth_mms(const vth_config* cfg, int quick, vth_report** out_report, char* errbuf,
            size_t errlen);

/* Global fixed-point study: convergence from two initial guesses plus the
 * decoupled-production control case. */
int vth_picard(const vth_config* cfg, vth_report** out_report, char* errbuf, size_t errlen);

/* --- reports -------------------------------------------------------------- */

/* JSON body (owned by the report handle). */
const char* vth_report_json(const vth_report* report);
/* Human-readable table/summary (owned by the report handle). */
const char* vth_report_text(const vth_report* report);
int vth_report_status(const vth_report* report);
void vth_report_free(vth_report* report);

#ifdef __cplusplus
}
#endif

#endif /* VASOTHERM_CAPI_H */
