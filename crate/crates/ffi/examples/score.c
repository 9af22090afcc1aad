/* Minimal consumer of the C API: score a scorecard CSV with the built-in
 * schema and print one line per document.
 *
 * Build (from the repository root, after `cargo build -p pmckit-ffi`):
 *   cc crates/ffi/examples/score.c -Icrates/ffi/include \
 *      -Ltarget/debug -lpmckit_ffi -lpthread -ldl -lm -o score
 *   LD_LIBRARY_PATH=target/debug ./score crates/core/fixtures/scorecards/table7.csv
 */
#include "pmckit.h"

#include <stdio.h>

static int die(const char *where) {
    char *msg = pmc_last_error_message();
    fprintf(stderr, "%s: %s\n", where, msg ? msg : "unknown error");
    pmc_string_free(msg);
    return 1;
}

int main(int argc, char **argv) {
    if (argc != 2) {
        fprintf(stderr, "usage: %s <scorecards.csv>\n", argv[0]);
        return 2;
    }

    PmcSchema *schema = NULL;
    if (pmc_schema_builtin(&schema) != PMC_STATUS_OK)
        return die("schema");

    PmcScorecards *cards = NULL;
    if (pmc_scorecards_load(argv[1], schema, &cards) != PMC_STATUS_OK) {
        pmc_schema_free(schema);
        return die("scorecards");
    }

    PmcResults *results = NULL;
    if (pmc_score(schema, cards, &results) != PMC_STATUS_OK) {
        pmc_scorecards_free(cards);
        pmc_schema_free(schema);
        return die("score");
    }

    size_t len = 0;
    pmc_results_len(results, &len);
    for (size_t i = 0; i < len; i++) {
        char *id = NULL;
        double pmc = 0.0, g = 0.0;
        PmcLevel level;
        pmc_results_doc_id(results, i, &id);
        pmc_results_pmc(results, i, &pmc);
        pmc_results_g(results, i, &g);
        pmc_results_level(results, i, &level);
        printf("doc %-4s PMC %.2f  G %.2f  level %d\n", id, pmc, g, (int)level);
        pmc_string_free(id);
    }

    pmc_results_free(results);
    pmc_scorecards_free(cards);
    pmc_schema_free(schema);
    return 0;
}
