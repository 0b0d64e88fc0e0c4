//------------------------------------------------------------------------------
//
//   Copyright 2026 The usvcg Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------

#ifndef USVCG_USVCG_H
#define USVCG_USVCG_H

#ifdef __cplusplus
extern "C" {
#endif

#if defined(USVCG_BUILDING_LIBRARY)
#define USVCG_API __attribute__((visibility("default")))
#else
#define USVCG_API
#endif

/* Status codes. A result document is still produced for USVCG_PENDING and
 * USVCG_PROPERTY_FAILED. */
enum
{
  USVCG_OK              = 0,
  USVCG_USAGE           = 1, /* bad arguments, unreadable input */
  USVCG_SCHEMA          = 2, /* malformed documents or inconsistent data */
  USVCG_SOLVER          = 3, /* solver or mechanism failure */
  USVCG_PENDING         = 4, /* follow-up questions must be answered */
  USVCG_PROPERTY_FAILED = 5  /* a verified property does not hold */
};

typedef struct usvcg_instance usvcg_instance;

/* Library version, e.g. "0.1.0". */
USVCG_API char const *usvcg_version(void);

/* Message of the last failing call on this thread ("" when none). */
USVCG_API char const *usvcg_last_error(void);

/* Releases a string returned through an out parameter. */
USVCG_API void usvcg_string_free(char *text);

/* Parses an instance document. On success *out owns a new handle. */
USVCG_API int usvcg_instance_create(char const *instance_json, usvcg_instance **out);
USVCG_API void usvcg_instance_destroy(usvcg_instance *instance);

/* Every call below writes a JSON document to *result (free it with
 * usvcg_string_free) whenever the status is OK, PENDING or PROPERTY_FAILED.
 * `options_json` may be NULL for defaults. */

/* Options: {"type": {"alloc": [...], "money": x}} or {"mean": true}. */
USVCG_API int usvcg_solve(usvcg_instance const *instance, char const *options_json,
                          char **result);

/* Recovers types from the instance ballots. `answers_json` is
 * {"answers": [{"agent": i, "good": j, "tau": t}]} or NULL. Returns
 * USVCG_PENDING with a question document when follow-ups remain. */
USVCG_API int usvcg_elicit(usvcg_instance const *instance, char const *answers_json,
                           char **result);

/* Options: {"bias": {...}, "non_positive": bool, "hetero": bool,
 *           "gamma": g, "mu": m, "r": r, "fd_step": h}. */
USVCG_API int usvcg_mechanism(usvcg_instance const *instance, char const *options_json,
                              char **result);

/* Recomputes a mechanism result document and its identities. */
USVCG_API int usvcg_check(usvcg_instance const *instance, char const *result_json,
                          char **report);

/* Options: {"trials": k, "seed": s, "coalition": c, "rows": bool, "mu": m}. */
USVCG_API int usvcg_fuzz(usvcg_instance const *instance, char const *options_json,
                         char **result);

/* `sigma_json` describes the population family; options:
 * {"n_list": [...], "seed": s, "non_positive": bool, "gamma": g, "r": r}. */
USVCG_API int usvcg_converge(char const *sigma_json, char const *options_json, char **result);

/* Assumption report for an instance. */
USVCG_API int usvcg_validate(usvcg_instance const *instance, char **report);

/* Options: {"p": p, "q": q, "n_list": [...], "money_weight": a}. */
USVCG_API int usvcg_diverge(char const *options_json, char **result);

/* Options: {"type": {...}} (defaults to the mean type), "deltas": [...]. */
USVCG_API int usvcg_continuity(usvcg_instance const *instance, char const *options_json,
                               char **result);

#ifdef __cplusplus
}
#endif

#endif /* USVCG_USVCG_H */
