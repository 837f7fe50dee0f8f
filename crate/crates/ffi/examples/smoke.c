/* Build: cargo build -p weihrauch-steps-ffi
 *        cc -Icrates/ffi/include crates/ffi/examples/smoke.c \
 *           target/debug/libweihrauch_steps_ffi.a -lpthread -ldl -lm -o smoke */
#include <stdio.h>
#include "weihrauch_steps.h"

int main(void) {
    WsTable *f = NULL, *g = NULL;
    WsWitness *w = NULL;
    uintptr_t l = 0;
    WsVerdict verdict;
    char msg[256];

    if (ws_table_parse("2:0111", &f) != WS_STATUS_OK || ws_table_parse("2:1001", &g) != WS_STATUS_OK)
        return 3;
    ws_table_alternation_length(g, &l);
    printf("l(G)=%lu\n", (unsigned long)l);
    if (ws_compile(g, f, "(01)", &w) != WS_STATUS_OK) {
        ws_last_error_message(msg, sizeof msg);
        printf("refused: %s\n", msg);
    }
    if (ws_compile(f, g, "(01)", &w) != WS_STATUS_OK)
        return 4;
    ws_witness_verify(w, 64, 0, &verdict);
    printf("verdict=%d\n", (int)verdict);
    ws_witness_free(w);
    ws_table_free(f);
    ws_table_free(g);
    return verdict == WS_VERDICT_PASS ? 0 : 1;
}
