#ifndef STREAMLAB_H
#define STREAMLAB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status code returned by every fallible call.
typedef enum SlStatus {
  // The call succeeded.
  SL_STATUS_OK = 0,
  // A required pointer argument was NULL.
  SL_STATUS_NULL_ARGUMENT = 1,
  // A string argument was not valid UTF-8.
  SL_STATUS_INVALID_UTF8 = 2,
  // An expression or rule file failed to parse.
  SL_STATUS_PARSE = 3,
  // Evaluation failed (alphabet mismatch, bad parameters, ...).
  SL_STATUS_EVAL = 4,
  // A resource limit was hit: stall, index ceiling, or a fixture end.
  SL_STATUS_LIMIT = 5,
} SlStatus;

// A sliding-window rule handle.
typedef struct SlRule SlRule;

// An infinite stream handle.
typedef struct SlStream SlStream;

// The outcome of a synthesis run.
typedef struct SlVerdict SlVerdict;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// The message of the last failing call on this thread, as a
// NUL-terminated UTF-8 string, or an empty string if nothing failed
// yet.
//
// # Safety
// The pointer stays valid on this thread until the next failing call;
// do not free it and do not share it across threads.
const char *sl_last_error(void);

// Builds a stream from an expression such as `"tm"`, `"periodic:011"`,
// or `"zip(tm, pd)"`, writing the handle to `out`.
//
// # Safety
// `expr` must point to a NUL-terminated string and `out` to a valid
// pointer slot. The handle must be released with [`sl_stream_free`].
enum SlStatus sl_stream_from_expr(const char *expr, struct SlStream **out);

// Writes the first `len` letters of a stream as a fresh NUL-terminated
// string to `out`.
//
// # Safety
// `s` must be a live stream handle and `out` a valid pointer slot. The
// string must be released with [`sl_string_free`].
enum SlStatus sl_stream_prefix(const struct SlStream *s, uint64_t len, char **out);

// Writes the Unicode scalar value of letter `i` to `out`.
//
// # Safety
// `s` must be a live stream handle and `out` a valid `uint32_t` slot.
enum SlStatus sl_stream_letter_at(const struct SlStream *s, uint64_t i, uint32_t *out);

// Releases a stream handle. NULL is ignored.
//
// # Safety
// `s` must be NULL or a handle not yet freed.
void sl_stream_free(struct SlStream *s);

// Parses a rule file (the `%ca` format) into a rule handle.
//
// # Safety
// `text` must point to a NUL-terminated string and `out` to a valid
// pointer slot. The handle must be released with [`sl_rule_free`].
enum SlStatus sl_rule_parse(const char *text, struct SlRule **out);

// Builds the elementary rule with the given Wolfram number.
//
// # Safety
// `out` must be a valid pointer slot; release with [`sl_rule_free`].
enum SlStatus sl_rule_eca(uint8_t number, struct SlRule **out);

// Applies a rule to a stream, producing a new stream handle.
//
// # Safety
// `rule` and `s` must be live handles and `out` a valid pointer slot.
enum SlStatus sl_rule_apply(const struct SlRule *rule,
                            const struct SlStream *s,
                            struct SlStream **out);

// Releases a rule handle. NULL is ignored.
//
// # Safety
// `r` must be NULL or a handle not yet freed.
void sl_rule_free(struct SlRule *r);

// Searches radii `0..=max_radius` for a rule mapping `src` to `dst` on
// the first `horizon` positions, writing a verdict handle to `out`.
//
// # Safety
// `src` and `dst` must be live stream handles and `out` a valid pointer
// slot. The handle must be released with [`sl_verdict_free`].
enum SlStatus sl_synthesize(const struct SlStream *src,
                            const struct SlStream *dst,
                            uint64_t max_radius,
                            uint64_t horizon,
                            struct SlVerdict **out);

// Whether the verdict found a rule. False for NULL.
//
// # Safety
// `v` must be NULL or a live verdict handle.
bool sl_verdict_answer(const struct SlVerdict *v);

// The last radius examined. Zero for NULL.
//
// # Safety
// `v` must be NULL or a live verdict handle.
uint64_t sl_verdict_radius(const struct SlVerdict *v);

// Number of per-radius conflict witnesses recorded. Zero for NULL.
//
// # Safety
// `v` must be NULL or a live verdict handle.
uint64_t sl_verdict_witness_count(const struct SlVerdict *v);

// Renders the verdict as the plain-text report, written as a fresh
// NUL-terminated string to `out`.
//
// # Safety
// `v` must be a live verdict handle and `out` a valid pointer slot. The
// string must be released with [`sl_string_free`].
enum SlStatus sl_verdict_report(const struct SlVerdict *v, char **out);

// Releases a verdict handle. NULL is ignored.
//
// # Safety
// `v` must be NULL or a handle not yet freed.
void sl_verdict_free(struct SlVerdict *v);

// Runs the budgeted reducibility check with slack `alpha_p / alpha_q`
// and at most `c_max` processed windows, writing the guess to `answer`.
//
// # Safety
// `src` and `dst` must be live stream handles and `answer` a valid
// `bool` slot.
enum SlStatus sl_check(const struct SlStream *src,
                       const struct SlStream *dst,
                       uint64_t alpha_p,
                       uint64_t alpha_q,
                       uint64_t c_max,
                       bool *answer);

// Releases a string produced by this library. NULL is ignored.
//
// # Safety
// `s` must be NULL or a string returned by this library, not yet freed.
void sl_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* STREAMLAB_H */
