/* Exercises the shared library through its C header only. */
#include <stdio.h>
#include <stdlib.h>
#include <string.h>
#include <unistd.h>

#include "vespa/vespa.h"

static int failures = 0;
static int checks = 0;

#define CHECK(cond)                                                         \
  do {                                                                      \
    ++checks;                                                               \
    if (!(cond)) {                                                          \
      ++failures;                                                           \
      fprintf(stderr, "%s:%d: CHECK(%s) failed; last error: %s\n", __FILE__, \
              __LINE__, #cond, vespa_last_error());                         \
    }                                                                       \
  } while (0)

static char dir[256];

static const char* path_of(const char* name) {
  static char buf[8][512];
  static int slot = 0;
  char* p = buf[slot++ % 8];
  snprintf(p, 512, "%s/%s", dir, name);
  return p;
}

static void write_file(const char* name, const char* content) {
  FILE* f = fopen(path_of(name), "w");
  if (!f) {
    perror(name);
    exit(2);
  }
  fputs(content, f);
  fclose(f);
}

static const char* kProfile =
    "{\"fields\": [{\"name\": \"Total Amount\", \"locale\": \"US\", \"passage_level\": \"PAGE\",\n"
    "  \"verbiage\": {\"amount due\": [0.7, 0.9], \"total inclusive of tax\": [0.85, 0.9], \"amount in dollars\": [0.8, 0.8]},\n"
    "  \"prefixes\": [\"what is the\", \"How much is the\"], \"response_type\": \"NUMERIC\",\n"
    "  \"policies\": [{\"type\": \"NER\", \"entity\": \"MONEY\"}, {\"type\": \"REGEX\", \"pattern\": \"[0-9.,]+s*USD\"}]}]}\n";

static const char* kBackends =
    "{\"backends\": [{\"name\": \"A\", \"kind\": \"MOCK\", \"mock\": {\"seed\": 3, \"default_accuracy\": 1.0,\n"
    "  \"gold\": [{\"field\": \"Total Amount\", \"answer\": \"$120.00\"}],\n"
    "  \"confidence_bands\": {\"correct\": [0.9, 1.0], \"wrong\": [0.0, 0.3]}}}]}\n";

int main(void) {
  snprintf(dir, sizeof dir, "/tmp/vespa-capi-%d", (int)getpid());
  char cmd[320];
  snprintf(cmd, sizeof cmd, "mkdir -p %s/preds", dir);
  if (system(cmd) != 0) return 2;

  write_file("profile.json", kProfile);
  write_file("backends.json", kBackends);
  write_file("eval.json", "[{\"id\": \"1\", \"question\": \"What is the total?\", \"gold_answers\": [\"$120.00\"]},\n"
                          " {\"id\": \"2\", \"question\": \"When is it due?\", \"gold_answers\": [\"Friday\"]}]\n");
  write_file("preds/A.json", "{\"1\": \"$120.00\", \"2\": \"Monday\"}\n");
  write_file("invoice.txt", "Acme Widgets Inc\n\nInvoice 7\n\nTotal Due: $120.00\n");
  write_file("gold.jsonl", "{\"doc_id\": \"inv-7\", \"field_name\": \"Total Amount\", \"gold_value\": \"120.00 USD\"}\n");

  CHECK(strcmp(vespa_version(), "0.3.0") == 0);

  vespa_profile* profile = NULL;
  CHECK(vespa_profile_load(path_of("profile.json"), &profile) == VESPA_OK);
  CHECK(profile != NULL);

  vespa_profile* bad = NULL;
  CHECK(vespa_profile_parse("{\"fields\": [], \"junk\": 1}", &bad) == VESPA_E_DATA);
  CHECK(bad == NULL);
  CHECK(strstr(vespa_last_error(), "junk") != NULL);
  CHECK(vespa_profile_load(NULL, &bad) == VESPA_E_USAGE);

  vespa_weights* weights = NULL;
  CHECK(vespa_weights_calibrate(path_of("eval.json"), path_of("preds"), &weights) == VESPA_OK);
  char* report = NULL;
  CHECK(vespa_weights_report(weights, &report) == VESPA_OK);
  CHECK(report && strstr(report, "What\t1\t100.00\n") != NULL);
  CHECK(report && strstr(report, "When\t1\t0.00\n") != NULL);
  vespa_free_string(report);
  CHECK(vespa_weights_save(weights, path_of("weights.json")) == VESPA_OK);
  vespa_weights* reloaded = NULL;
  CHECK(vespa_weights_load(path_of("weights.json"), &reloaded) == VESPA_OK);

  vespa_ensemble* ensemble = NULL;
  CHECK(vespa_ensemble_load(path_of("backends.json"), 1, 42, &ensemble) == VESPA_OK);

  const char* text = "Acme Widgets Inc\n\nInvoice 7\n\nTotal Due: $120.00\n";
  vespa_document* doc = NULL;
  CHECK(vespa_document_parse(text, strlen(text), "plain", "inv-7", &doc) == VESPA_OK);
  vespa_document* empty_doc = NULL;
  CHECK(vespa_document_parse("", 0, "plain", "e", &empty_doc) == VESPA_E_DATA);
  CHECK(vespa_document_load(path_of("invoice.txt"), "pdf", &empty_doc) == VESPA_E_USAGE);

  char* json = NULL;
  CHECK(vespa_extract(doc, profile, ensemble, reloaded, "test-hash", path_of("store.jsonl"), &json) == VESPA_OK);
  CHECK(json && strstr(json, "\"value\":\"120.00 USD\"") != NULL);
  vespa_free_string(json);

  char* tsv = NULL;
  char* ejson = NULL;
  CHECK(vespa_evaluate(path_of("gold.jsonl"), path_of("store.jsonl"), &tsv, &ejson) == VESPA_OK);
  CHECK(tsv && strstr(tsv, "Total Amount\t100.00\n") != NULL);
  CHECK(ejson && strstr(ejson, "avg_f1") != NULL);
  vespa_free_string(tsv);
  vespa_free_string(ejson);

  char* edit = NULL;
  CHECK(vespa_record_edit(path_of("store.jsonl"), "inv-7", "Total Amount", "$7.00", "ana", &edit) == VESPA_OK);
  CHECK(edit && strstr(edit, "120.00 USD") != NULL);
  vespa_free_string(edit);
  CHECK(vespa_record_edit(path_of("store.jsonl"), "inv-7", "Due", "x", "ana", NULL) == VESPA_E_DATA);

  /* The edit now overrides the ensemble on re-extraction. */
  CHECK(vespa_extract(doc, profile, ensemble, reloaded, NULL, path_of("store.jsonl"), &json) == VESPA_OK);
  CHECK(json && strstr(json, "\"value\":\"7.00 USD\"") != NULL);
  CHECK(json && strstr(json, "\"source\":\"eitl\"") != NULL);
  vespa_free_string(json);

  char* search = NULL;
  CHECK(vespa_ensemble_search(path_of("eval.json"), path_of("preds"), reloaded, &search) == VESPA_OK);
  CHECK(search && strstr(search, "\"best_score\": 0.5") != NULL);
  vespa_free_string(search);

  char* cls = NULL;
  CHECK(vespa_classify_question("How much is the invoice amount?", &cls) == VESPA_OK);
  CHECK(cls && strcmp(cls, "How m-m") == 0);
  vespa_free_string(cls);
  CHECK(vespa_classify_question(NULL, &cls) == VESPA_E_USAGE);

  vespa_ensemble* missing = NULL;
  CHECK(vespa_ensemble_load(path_of("nope.json"), 0, 0, &missing) == VESPA_E_DATA);

  vespa_document_free(doc);
  vespa_ensemble_free(ensemble);
  vespa_weights_free(weights);
  vespa_weights_free(reloaded);
  vespa_profile_free(profile);
  vespa_profile_free(NULL);
  vespa_free_string(NULL);

  snprintf(cmd, sizeof cmd, "rm -rf %s", dir);
  if (system(cmd) != 0) fprintf(stderr, "cleanup failed\n");
  printf("%d/%d checks passed\n", checks - failures, checks);
  return failures == 0 ? 0 : 1;
}
