/* rulekit C API: rule induction with confidence-gated iterative learning.
 *
 * All functions are thread-compatible: distinct handles may be used from
 * distinct threads, one handle must not be shared without external locking.
 * Failing calls return a status code (or NULL for constructors) and leave a
 * message retrievable with rk_last_error() on the calling thread. Strings
 * returned through char** out-parameters are heap-allocated and must be
 * released with rk_string_free().
 */
#ifndef RULEKIT_RULEKIT_H
#define RULEKIT_RULEKIT_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct rk_config rk_config;   /* opaque experiment configuration */
typedef struct rk_ruleset rk_ruleset; /* opaque learned rule set */

/* Status codes double as CLI exit codes for the error classes a user can
 * trigger. */
typedef enum rk_status {
  RK_OK = 0,
  RK_ERROR_CONFIG = 2,  /* bad config/spec file, unknown keys, bad values */
  RK_ERROR_DATA = 3,    /* unreadable/malformed data or artifact files */
  RK_ERROR_LEARNER = 4, /* the learner could not produce a rule */
  RK_ERROR_INVALID_ARGUMENT = 64 /* API misuse (NULL handle, bad index) */
} rk_status;

const char* rk_version(void);

/* Message for the most recent failure on this thread; never NULL. */
const char* rk_last_error(void);

void rk_string_free(char* s);

/* --- configuration ------------------------------------------------- */

rk_config* rk_config_open(const char* path);
void rk_config_close(rk_config* config);

/* Command-line overrides: seed and output directory only. */
rk_status rk_config_set_seed(rk_config* config, uint64_t seed);
rk_status rk_config_set_output_dir(rk_config* config, const char* directory);

/* --- pipeline commands ---------------------------------------------- */
/* Each writes its artifacts under the config's output directory and hands
 * back a human-readable summary. */

rk_status rk_prep(const rk_config* config, char** summary);
rk_status rk_train(const rk_config* config, int iterative, char** summary);
rk_status rk_eval(const rk_config* config, const char* ruleset_path, char** summary);
rk_status rk_synth(const char* spec_path, const char* out_dir, char** summary);

/* --- rule sets ------------------------------------------------------ */

rk_ruleset* rk_ruleset_open(const char* path);
void rk_ruleset_close(rk_ruleset* ruleset);

size_t rk_ruleset_size(const rk_ruleset* ruleset);

/* Confidence of the rule at `index` in rule-set order. Returns -1.0 on a
 * bad index. */
double rk_ruleset_rule_voc(const rk_ruleset* ruleset, size_t index);

/* Renders the rules with confidence strictly above min_voc, one per line. */
rk_status rk_ruleset_render(const rk_ruleset* ruleset, double min_voc, char** text);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* RULEKIT_RULEKIT_H */
