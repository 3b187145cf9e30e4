/* C interface to the vespa extraction engine.
 *
 * Every fallible call returns a vespa_status; on failure the message is
 * available from vespa_last_error() on the calling thread until the next
 * call. Strings returned through char** out-parameters are owned by the
 * caller and released with vespa_free_string().
 */
#ifndef VESPA_VESPA_H
#define VESPA_VESPA_H

#include <stdint.h>

#if defined(_WIN32)
#  define VESPA_API __declspec(dllexport)
#elif defined(__GNUC__)
#  define VESPA_API __attribute__((visibility("default")))
#else
#  define VESPA_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values double as process exit codes. */
typedef enum vespa_status {
  VESPA_OK = 0,
  VESPA_E_USAGE = 1,
  VESPA_E_DATA = 2,
  VESPA_E_BACKEND_UNAVAILABLE = 3
} vespa_status;

typedef struct vespa_profile vespa_profile;
typedef struct vespa_weights vespa_weights;
typedef struct vespa_ensemble vespa_ensemble;
typedef struct vespa_document vespa_document;

VESPA_API const char* vespa_version(void);
VESPA_API const char* vespa_last_error(void);
VESPA_API void vespa_free_string(char* s);

VESPA_API vespa_status vespa_profile_load(const char* path, vespa_profile** out);
VESPA_API vespa_status vespa_profile_parse(const char* json, vespa_profile** out);
VESPA_API void vespa_profile_free(vespa_profile* p);

/* JSON or TSV, picked by content. */
VESPA_API vespa_status vespa_weights_load(const char* path, vespa_weights** out);
/* eval_path: JSON list of {id, question, gold_answers}; preds_dir holds one
 * <model>.json map per model. */
VESPA_API vespa_status vespa_weights_calibrate(const char* eval_path, const char* preds_dir, vespa_weights** out);
VESPA_API vespa_status vespa_weights_save(const vespa_weights* w, const char* path);
/* 14-row TSV with question counts. */
VESPA_API vespa_status vespa_weights_report(const vespa_weights* w, char** out_tsv);
VESPA_API void vespa_weights_free(vespa_weights* w);

/* has_seed != 0 replaces every mock seed with `seed`. */
VESPA_API vespa_status vespa_ensemble_load(const char* path, int has_seed, uint64_t seed, vespa_ensemble** out);
VESPA_API void vespa_ensemble_free(vespa_ensemble* e);

/* format: "plain" or "structured". */
VESPA_API vespa_status vespa_document_load(const char* path, const char* format, vespa_document** out);
VESPA_API vespa_status vespa_document_parse(const char* bytes, uint64_t len, const char* format, const char* doc_id,
                                            vespa_document** out);
VESPA_API void vespa_document_free(vespa_document* d);

/* embedder: NULL or "none", or "test-hash". With a store path the records
 * are appended there and the store's edit log feeds expert overrides.
 * out_json receives a JSON array of the records. */
VESPA_API vespa_status vespa_extract(const vespa_document* doc, const vespa_profile* profile,
                                     const vespa_ensemble* ensemble, const vespa_weights* weights,
                                     const char* embedder, const char* store_path, char** out_json);

VESPA_API vespa_status vespa_ensemble_search(const char* eval_path, const char* preds_dir, const vespa_weights* w,
                                             char** out_json);

/* Either out pointer may be NULL. */
VESPA_API vespa_status vespa_evaluate(const char* gold_path, const char* store_path, char** out_tsv, char** out_json);

/* Writes the class label as printed in weight reports, e.g. "When" or "How m-m". */
VESPA_API vespa_status vespa_classify_question(const char* text, char** out_class);

/* out_json (may be NULL) receives the appended edit. */
VESPA_API vespa_status vespa_record_edit(const char* store_path, const char* doc_id, const char* field,
                                         const char* value, const char* editor, char** out_json);

#ifdef __cplusplus
}
#endif

#endif
