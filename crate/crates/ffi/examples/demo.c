/* Reads an article on stdin and prints its weakly strict form. */
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "strictmiz.h"

static char *slurp(FILE *in) {
    size_t cap = 4096, len = 0;
    char *buf = malloc(cap);
    size_t n;
    while (buf && (n = fread(buf + len, 1, cap - len - 1, in)) > 0) {
        len += n;
        if (cap - len < 2) {
            cap *= 2;
            buf = realloc(buf, cap);
        }
    }
    if (buf) buf[len] = '\0';
    return buf;
}

int main(int argc, char **argv) {
    int msm = argc > 1 && strcmp(argv[1], "msm") == 0;
    char *text = slurp(stdin);
    if (!text) return 2;

    sm_table *table = sm_table_default();
    char *out = NULL;
    sm_status status = msm ? sm_msm(table, text, SM_FORMAT_TEXT, &out)
                           : sm_wsm(table, text, SM_FORMAT_TEXT, &out);
    if (status == SM_STATUS_OK) {
        fputs(out, stdout);
        sm_string_free(out);
    } else {
        fputs(sm_last_error(), stderr);
    }
    sm_table_free(table);
    free(text);
    return status == SM_STATUS_OK ? 0 : 1;
}
