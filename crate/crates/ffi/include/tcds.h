/* C interface to the tcds engine. Regenerated by the crate build; do not edit. */

#ifndef TCDS_H
#define TCDS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// All requested checks ran and passed.
#define TCDS_OK 0

// Checks ran and at least one failed; diagnostics were produced.
#define TCDS_FAIL 1

// The input was unusable: bad pointer, bad JSON, or an unknown name.
#define TCDS_INVALID 2

// An immutable twisted system together with its JSON description.
typedef struct TcdsSystem TcdsSystem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Version of the engine as a static NUL-terminated string. Never freed.
const char *tcds_version(void);

// Build a system from JSON: either a system description (builtin
// reference or explicit data) or a full run config whose system part
// is used. On success writes a handle and returns `TCDS_OK`. If the
// JSON parses but the description violates the twisted-system axioms,
// returns `TCDS_FAIL` and writes the witness list to `out_error`.
// Unusable JSON returns `TCDS_INVALID`.
int32_t tcds_system_new_from_json(const char *json,
                                  struct TcdsSystem **out_system,
                                  char **out_error);

// Release a handle produced by `tcds_system_new_from_json`. Null is a no-op.
void tcds_system_free(struct TcdsSystem *system);

// Name of the system. The caller frees the string.
int32_t tcds_system_name(const struct TcdsSystem *system, char **out_name);

// Order of the acting group, or 0 for a null handle.
uint64_t tcds_system_group_order(const struct TcdsSystem *system);

// Complex dimension of the coefficient algebra, or 0 for a null handle.
uint64_t tcds_system_algebra_dim(const struct TcdsSystem *system);

// Self-contained JSON description of the system, suitable for feeding
// back to `tcds_system_new_from_json`. The caller frees the string.
int32_t tcds_system_describe_json(const struct TcdsSystem *system, char **out_json);

// JSON array of the built-in gallery names. The caller frees the string.
int32_t tcds_builtin_names(char **out_json);

// JSON array of the task names understood by `tcds_run_task`.
// The caller frees the string.
int32_t tcds_task_names(char **out_json);

// Run one named task against the system and write the report JSON.
// Reports are deterministic for a fixed seed. Returns `TCDS_OK` when
// every check passed, `TCDS_FAIL` when the report contains failures
// (the report is still written), and `TCDS_INVALID` for an unknown
// task or bad pointers.
int32_t tcds_run_task(const struct TcdsSystem *system,
                      const char *task,
                      uint64_t seed,
                      double tolerance,
                      uint64_t samples,
                      char **out_report_json,
                      char **out_error);

// Run several tasks in one report. `tasks_csv` is a comma-separated
// list of task names; null or empty means every task. Status codes
// are as for `tcds_run_task`.
int32_t tcds_run_report(const struct TcdsSystem *system,
                        const char *tasks_csv,
                        uint64_t seed,
                        double tolerance,
                        uint64_t samples,
                        char **out_report_json,
                        char **out_error);

// Merge report JSON documents produced by this library or the CLI into
// one combined report, keyed by system, command, and task. Returns the
// merged report's own status code.
int32_t tcds_merge_reports(const char *const *reports,
                           size_t count,
                           char **out_json,
                           char **out_error);

// Release a string returned by this library. Null is a no-op.
void tcds_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TCDS_H */
